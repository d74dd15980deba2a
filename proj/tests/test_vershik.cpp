#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bratteli/linalg.hpp"
#include "bratteli/vershik.hpp"

#include <set>

using namespace bratteli;

namespace {

DiagramPtr make(Family f, long k = 1)
{
    DiagramSpec s;
    s.family = f;
    s.k = k;
    return build_diagram(s);
}

// Increasing coordinate lists of the given size drawn from [lo, hi].
void subsets(long lo, long hi, std::size_t size, std::vector<long>& cur, std::vector<std::vector<long>>& out)
{
    if (cur.size() == size) {
        out.push_back(cur);
        return;
    }
    for (long c = cur.empty() ? lo : cur.back() + 1; c <= hi; ++c) {
        cur.push_back(c);
        subsets(lo, hi, size, cur, out);
        cur.pop_back();
    }
}

std::vector<PascalDescriptor> max_corpus(bool concentrating)
{
    std::vector<PascalDescriptor> out;
    for (std::size_t size : {2, 3}) {
        std::vector<std::vector<long>> sets;
        std::vector<long> cur;
        subsets(-2, 4, size, cur, sets);
        for (auto& s : sets)
            for (long t : {1, 2}) {
                PascalDescriptor d;
                d.positions = s;
                d.counts.assign(s.size(), t);
                d.concentrating = concentrating;
                if (concentrating) d.counts.back() = 0;
                d.stride = 1;
                d.count = t;
                out.push_back(d);
            }
    }
    return out;
}

} // namespace

TEST_CASE("left-to-right step on B_infinity")
{
    OrderedDiagram od(make(Family::Binfty), OrderSpec::parse("ltr"));
    PathRep x;
    x.start = 1;
    x.edges.push_back({VertexKey::at(2), VertexKey::at(3), 0});
    auto y = vershik_step(od, x);
    REQUIRE(y.edges.size() == 1);
    CHECK(y.edges[0].source == VertexKey::at(3));
    CHECK(y.edges[0].target == VertexKey::at(3));
    CHECK(vershik_inverse_step(od, y) == x);
}

TEST_CASE("order parsing")
{
    CHECK(OrderSpec::parse("natural").kind == OrderSpec::Kind::Natural);
    CHECK(OrderSpec::parse("rtl").kind == OrderSpec::Kind::RightToLeft);
    CHECK(OrderSpec::parse("cyclic-binfty").kind == OrderSpec::Kind::CyclicBinfty);
    CHECK_THROWS_AS(OrderSpec::parse("sideways"), DomainError);
    OrderedDiagram od(make(Family::Binfty), OrderSpec::parse("ltr"));
    auto in = od.in_edges(3, VertexKey::at(3));
    REQUIRE(in.size() == 3);
    CHECK(od.is_min(3, VertexKey::at(3), in.front()));
    CHECK(od.is_max(3, VertexKey::at(3), in.back()));
}

TEST_CASE("bijection on truncated diagrams")
{
    auto binf = make(Family::Binfty);
    OrderedDiagram bw2(build_subdiagram(binf, SubdiagramSpec::binfty_vertex(2)), OrderSpec::parse("ltr"));
    auto r = bijection_check(bw2, 4, 10);
    CHECK(r.ok());
    CHECK(r.paths == static_cast<long>(enumerate_prefixes(bw2, 4, 10).size()));
    CHECK(r.non_maximal == r.non_minimal);

    OrderedDiagram pk(make(Family::PascalK, 2), OrderSpec::parse("natural-pascal"));
    auto p = bijection_check(pk, 4, 10);
    CHECK(p.ok());
    CHECK(p.paths == 16);
    // one maximal and one minimal prefix per level-4 vertex
    CHECK(p.non_maximal == 16 - 5);
}

TEST_CASE("odometer step is binary increment with carry")
{
    for (int depth = 1; depth <= 6; ++depth) {
        auto r = odometer_check(depth);
        CHECK(r.mismatches == 0);
        CHECK(r.checked == (1L << depth) - 1);
    }
}

TEST_CASE("alternating order has a unique extremal path")
{
    OrderedDiagram od(make(Family::Binfty), OrderSpec::parse("alternating"));
    CHECK(extremal_prefixes(od, 4, 8, true).size() == 1);
    CHECK(extremal_prefixes(od, 4, 8, false).size() == 1);
    auto z = vertical_path(od, VertexKey::at(1));
    CHECK_THROWS_AS(vershik_inverse_step(od, z), ExtremalPathError);
    try {
        vershik_inverse_step(od, z);
    } catch (const ExtremalPathError& e) {
        CHECK(std::string(e.what()).find("minimal path") != std::string::npos);
    }
}

TEST_CASE("steps are mutually inverse on enumerated prefixes")
{
    OrderedDiagram od(make(Family::PascalK, 3), OrderSpec::parse("natural-pascal"));
    int moved = 0;
    for (auto& x : enumerate_prefixes(od, 3, 10)) {
        try {
            auto y = vershik_step(od, x);
            CHECK(y.end_vertex() == x.end_vertex());
            CHECK(vershik_inverse_step(od, y) == x);
            ++moved;
        } catch (const DeepenPrefix&) {
        }
    }
    CHECK(moved > 0);
}

TEST_CASE("classification of Pascal descriptors")
{
    OrderedDiagram op(make(Family::PascalZ), OrderSpec::parse("natural-pascal"));
    auto c = classify_extremal(op, descriptor_path({{2, 5}, {3, 0}, true, 1, 1}));
    CHECK(c.cls == ExtremalClass::MaxC);
    CHECK(c.maximal);
    for (long j = -3; j <= 3; ++j) {
        auto s = classify_extremal(op, pascal_concentrating_path(0, j));
        CHECK(s.cls == ExtremalClass::Special);
        CHECK(s.maximal);
        CHECK(s.minimal);
    }
    OrderedDiagram ob(make(Family::Binfty), OrderSpec::parse("ltr"));
    // every edge of a vertical path is the last in-edge under left-to-right
    for (long i = 1; i <= 4; ++i) CHECK(classify_extremal(ob, vertical_path(ob, VertexKey::at(i))).maximal);
}

TEST_CASE("Succ and Pred on the Z-Pascal diagram")
{
    OrderedDiagram op(make(Family::PascalZ), OrderSpec::parse("natural-pascal"));
    PascalDescriptor d1{{2, 5}, {3, 0}, true, 1, 1};
    auto sp = succ_pred(op, descriptor_path(d1));
    CHECK(sp.cls.cls == ExtremalClass::MaxC);
    REQUIRE(sp.succ.size() == 1);
    CHECK(sp.succ[0].tail.kind == PathTail::Kind::PascalConcentrating);
    CHECK(sp.succ[0].tail.coordinate == 5);

    PascalDescriptor d2{{1, 2}, {2, 1}, false, 1, 2};
    auto su = succ_pred(op, descriptor_path(d2));
    CHECK(su.cls.cls == ExtremalClass::MaxU);
    CHECK(su.succ.empty());

    auto mu = succ_pred(op, descriptor_path(reflect_descriptor(d2, Family::PascalZ).descriptor));
    CHECK(mu.cls.cls == ExtremalClass::MinU);
    CHECK(mu.pred.empty());

    auto mc = succ_pred(op, descriptor_path(reflect_descriptor(d1, Family::PascalZ).descriptor));
    CHECK(mc.cls.cls == ExtremalClass::MinC);
    REQUIRE(mc.pred.size() == 1);
    CHECK(mc.pred[0].tail.coordinate == -1);

    auto sx = succ_pred(op, pascal_concentrating_path(0, 3));
    CHECK(sx.cls.cls == ExtremalClass::Special);
    CHECK(sx.succ.size() == 1);
    CHECK(sx.pred.size() == 1);

    OrderedDiagram on(make(Family::PascalN), OrderSpec::parse("natural-pascal"));
    PathRep plain;
    plain.start = 0;
    plain.edges = enumerate_prefixes(on, 2, 3).front().edges;
    plain.tail.kind = PathTail::Kind::PascalSpreading;
    plain.tail.coordinate = 1;
    auto cls = classify_extremal(on, plain);
    if (cls.cls == ExtremalClass::NotExtremal) CHECK_THROWS_AS(succ_pred(on, plain), DomainError);
}

TEST_CASE("descriptor corpus")
{
    OrderedDiagram op(make(Family::PascalZ), OrderSpec::parse("natural-pascal"));
    auto conc = max_corpus(true);
    auto spread = max_corpus(false);
    REQUIRE(conc.size() >= 20);
    REQUIRE(spread.size() >= 20);
    for (auto& d : conc) {
        auto r = succ_pred(op, descriptor_path(d));
        CHECK(r.cls.cls == ExtremalClass::MaxC);
        REQUIRE(r.succ.size() == 1);
        CHECK(r.succ[0].tail.kind == PathTail::Kind::PascalConcentrating);
        CHECK(r.succ[0].tail.coordinate == d.positions.back());

        auto refl = reflect_descriptor(d, Family::PascalZ);
        CHECK_FALSE(refl.clipped);
        auto m = succ_pred(op, descriptor_path(refl.descriptor));
        CHECK(m.cls.cls == ExtremalClass::MinC);
        REQUIRE(m.pred.size() == 1);
        CHECK(m.pred[0].tail.coordinate == 2 * d.positions.front() - d.positions.back());
    }
    for (auto& d : spread) {
        auto r = succ_pred(op, descriptor_path(d));
        CHECK(r.cls.cls == ExtremalClass::MaxU);
        CHECK(r.succ.empty());
        auto m = succ_pred(op, descriptor_path(reflect_descriptor(d, Family::PascalZ).descriptor));
        CHECK(m.cls.cls == ExtremalClass::MinU);
        CHECK(m.pred.empty());
    }
    for (long j = -12; j <= 12; ++j) {
        auto s = classify_extremal(op, pascal_concentrating_path(0, j));
        CHECK(s.cls == ExtremalClass::Special);
        CHECK((s.maximal && s.minimal));
    }
}

TEST_CASE("reflection on the N-Pascal diagram clips at 1")
{
    PascalDescriptor d{{2, 5}, {1, 0}, true, 1, 1};
    auto r = reflect_descriptor(d, Family::PascalN);
    CHECK(r.clipped);
    for (long c : r.descriptor.positions) CHECK(c >= 1);
    CHECK_THROWS_AS(reflect_descriptor(d, Family::PascalK), Unsupported);
}

TEST_CASE("the cyclic order on B_infinity")
{
    auto binf = make(Family::Binfty);
    OrderedDiagram oc(binf, OrderSpec::parse("cyclic"));
    auto s1 = succ_pred(oc, vertical_path(oc, VertexKey::at(1)));
    CHECK(s1.cls.cls == ExtremalClass::Special);
    for (long i = 2; i <= 4; ++i) {
        auto s = succ_pred(oc, vertical_path(oc, VertexKey::at(i)));
        CHECK(s.cls.cls == ExtremalClass::MaxC);
        REQUIRE(s.succ.size() == 1);
        CHECK(s.succ[0].tail.kind == PathTail::Kind::VerticalAt);
        CHECK(s.succ[0].tail.vertex == VertexKey::at(1));
    }
    auto top = maximal_path_to(oc, 4, VertexKey::at(2));
    auto o = orbit(oc, top, 3, 2);
    CHECK(o.error);
    CHECK(o.paths.size() == 1);
}

TEST_CASE("orbit of the minimal path in B(W,1)")
{
    auto sub = build_subdiagram(make(Family::Binfty), SubdiagramSpec::binfty_vertex(1));
    OrderedDiagram ob(sub, OrderSpec::parse("ltr"));
    for (long v = 1; v <= 4; ++v) {
        int level = 5;
        auto start = minimal_path_to(ob, level, VertexKey::at(v));
        auto o = orbit(ob, start, 200, 2);
        Integer h = HeightCache(sub)(level, VertexKey::at(v));
        CHECK(Integer(static_cast<long>(o.paths.size())) == h);
        std::set<std::string> seen;
        for (auto& p : o.paths) seen.insert(p.str());
        CHECK(seen.size() == o.paths.size());
        CHECK(o.paths.back() == maximal_path_to(ob, level, VertexKey::at(v)));
        CHECK(o.error);
        long visits = 0;
        for (auto& [k, c] : o.visits) visits += c;
        CHECK(visits == static_cast<long>(o.paths.size()));
    }
    auto start = minimal_path_to(ob, 3, VertexKey::at(2));
    auto zero = orbit(ob, start, 0, 1);
    REQUIRE(zero.paths.size() == 1);
    CHECK(zero.paths[0] == start);
    CHECK_FALSE(zero.error);
}
