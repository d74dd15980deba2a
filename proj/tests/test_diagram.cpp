#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bratteli/diagram.hpp"

#include <algorithm>

using namespace bratteli;

namespace {

DiagramPtr make(Family f, long k = 1)
{
    DiagramSpec s;
    s.family = f;
    s.k = k;
    return build_diagram(s);
}

std::vector<VertexKey> sources(const std::vector<Edge>& es)
{
    std::vector<VertexKey> out;
    for (auto& e : es) {
        CHECK(e.mult == 1);
        out.push_back(e.source);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("B_infinity predecessors")
{
    auto d = make(Family::Binfty);
    auto p = sources(d->predecessors(4, VertexKey::at(3)));
    CHECK(p == std::vector<VertexKey>{VertexKey::at(1), VertexKey::at(2), VertexKey::at(3)});
    auto w = vertex_window(*d, 4, 10);
    REQUIRE(w.vertices.size() == 10);
    for (long i = 1; i <= 10; ++i) {
        CHECK(w.vertices[static_cast<std::size_t>(i - 1)] == VertexKey::at(i));
        CHECK(w.ranks[static_cast<std::size_t>(i - 1)] == i);
    }
}

TEST_CASE("N-Pascal predecessors remove one unit per occupied coordinate")
{
    auto d = make(Family::PascalN);
    VertexKey t = VertexKey::multiset({{1, 2}, {4, 1}});
    auto p = sources(d->predecessors(3, t));
    std::vector<VertexKey> want{VertexKey::multiset({{1, 1}, {4, 1}}), VertexKey::multiset({{1, 2}})};
    std::sort(want.begin(), want.end());
    CHECK(p == want);
    // |r^{-1}(t)| equals the number of occupied coordinates
    for (auto& v : d->window(4, 4)) CHECK(d->predecessors(4, v).size() == v.support.size());
}

TEST_CASE("N-Pascal window over two coordinates")
{
    auto d = make(Family::PascalN);
    auto w = d->window(2, 2);
    CHECK(w.size() == 3);
    CHECK(std::count(w.begin(), w.end(), VertexKey::multiset({{1, 2}})) == 1);
    CHECK(std::count(w.begin(), w.end(), VertexKey::multiset({{1, 1}, {2, 1}})) == 1);
    CHECK(std::count(w.begin(), w.end(), VertexKey::multiset({{2, 2}})) == 1);
}

TEST_CASE("bounded generalized diagram")
{
    auto d = make(Family::BoundedGeneralized, 1);
    auto p = sources(d->predecessors(1, VertexKey::at(0)));
    CHECK(p == std::vector<VertexKey>{VertexKey::at(-1), VertexKey::at(0), VertexKey::at(1)});
    auto f = make(Family::BoundedFinite, 1);
    auto w = vertex_window(*f, 2, 10);
    std::vector<VertexKey> want;
    for (long i = -2; i <= 2; ++i) want.push_back(VertexKey::at(i));
    auto got = w.vertices;
    std::sort(got.begin(), got.end());
    CHECK(got == want);
}

TEST_CASE("zig-zag enumeration of Z")
{
    CHECK(zigzag_rank(0) == 1);
    CHECK(zigzag_rank(1) == 2);
    CHECK(zigzag_rank(-1) == 3);
    CHECK(zigzag_rank(2) == 4);
    for (long r = 1; r <= 50; ++r) CHECK(zigzag_rank(zigzag_coord(r)) == r);
}

TEST_CASE("Pascal ranks are distinct and stable under window growth")
{
    auto d = make(Family::PascalN);
    auto small = vertex_window(*d, 3, 3);
    auto large = vertex_window(*d, 3, 5);
    std::vector<long> r = large.ranks;
    std::sort(r.begin(), r.end());
    CHECK(std::adjacent_find(r.begin(), r.end()) == r.end());
    for (std::size_t i = 0; i < small.vertices.size(); ++i) {
        auto it = std::find(large.vertices.begin(), large.vertices.end(), small.vertices[i]);
        REQUIRE(it != large.vertices.end());
        CHECK(large.ranks[static_cast<std::size_t>(it - large.vertices.begin())] == small.ranks[i]);
    }
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(make(Family::PascalK, 0), DomainError);
    DiagramSpec s;
    s.family = Family::OdometerIO;
    s.odometer = OdometerRule::parse("const:1");
    CHECK_THROWS_AS(build_diagram(s), DomainError);
    CHECK_THROWS_AS(parse_family("nope"), DomainError);
}

TEST_CASE("odometer rules")
{
    auto r = OdometerRule::parse("pow2");
    CHECK(r.at(0) == 2);
    CHECK(r.at(3) == 16);
    auto c = OdometerRule::parse("const:3");
    CHECK(c.at(10) == 3);
    auto q = OdometerRule::parse("poly:2");
    CHECK(q.at(0) == 4);
    auto l = OdometerRule::parse("list:2,5,7");
    CHECK(l.at(1) == 5);
    CHECK(l.at(9) == 7);
}

TEST_CASE("custom diagrams reject undeclared levels")
{
    DiagramSpec s;
    s.family = Family::Custom;
    s.custom.level0 = {1, 2};
    s.custom.rows.push_back({{1, {{1, 1}, {2, 2}}}});
    auto d = build_diagram(s);
    auto p = d->predecessors(1, VertexKey::at(1));
    REQUIRE(p.size() == 2);
    CHECK(d->multiplicity(1, VertexKey::at(1), VertexKey::at(2)) == 2);
    CHECK_THROWS_AS(d->predecessors(2, VertexKey::at(1)), TruncationIncomplete);
}

TEST_CASE("vertex subdiagram B(W,k)")
{
    auto sub = build_subdiagram(make(Family::Binfty), SubdiagramSpec::binfty_vertex(2));
    auto w = sub->members(3);
    CHECK(w == std::vector<VertexKey>{VertexKey::at(2), VertexKey::at(3), VertexKey::at(4)});
    for (int n = 2; n <= 6; ++n)
        for (auto& v : sub->members(n))
            for (auto& e : sub->predecessors(n, v)) CHECK(sub->ambient().multiplicity(n, v, e.source) == e.mult);
}

TEST_CASE("edge subdiagram keeps two successors per vertex")
{
    auto sub = build_subdiagram(make(Family::Binfty), SubdiagramSpec::binfty_pascal_edge(3));
    for (int n = 1; n <= 6; ++n)
        for (auto& v : sub->members(n)) {
            auto s = sub->successors(n, v, 100);
            CHECK(s == std::vector<VertexKey>{v, VertexKey::at(v.index + 1)});
        }
    for (int n = 2; n <= 6; ++n)
        for (auto& v : sub->members(n))
            for (auto& e : sub->predecessors(n, v)) CHECK(e.mult <= sub->ambient().multiplicity(n, v, e.source));
}

TEST_CASE("Pascal coordinate subdiagram")
{
    auto sub = build_subdiagram(make(Family::PascalN), SubdiagramSpec::pascal_coordinates({2, 5}));
    auto w = sub->members(2);
    CHECK(w.size() == 3);
    for (auto& v : w)
        for (auto& [c, m] : v.support) CHECK((c == 2 || c == 5));
}

TEST_CASE("subdiagram must lie inside the ambient diagram")
{
    SubdiagramSpec s = SubdiagramSpec::binfty_vertex(1);
    s.members = [](int) { return std::vector<VertexKey>{}; };
    CHECK_THROWS_AS(build_subdiagram(make(Family::Binfty), s), DomainError);
}
