#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bratteli/extension.hpp"

#include <cmath>

using namespace bratteli;

namespace {

DiagramPtr make(Family f, long k = 1, const std::string& rule = "")
{
    DiagramSpec s;
    s.family = f;
    s.k = k;
    if (!rule.empty()) s.odometer = OdometerRule::parse(rule);
    return build_diagram(s);
}

// The whole bounded-size diagram viewed as a subdiagram of itself.
SubdiagramSpec full_bounded(SubdiagramSpec::Kind kind)
{
    SubdiagramSpec s;
    s.kind = kind;
    s.label = "full";
    s.members = [](int n) {
        std::vector<VertexKey> out;
        for (long v = -n; v <= n; ++v) out.push_back(VertexKey::at(v));
        return out;
    };
    if (kind == SubdiagramSpec::Kind::Edge) s.retained = [](int, const VertexKey&, const VertexKey&, const Integer& m) { return m; };
    return s;
}

// Central trinomial coefficients by direct expansion of (1 + x + x^2)^m.
std::vector<Integer> central_trinomials(int m_max)
{
    std::vector<Integer> poly{1}, out{1};
    for (int m = 1; m <= m_max; ++m) {
        std::vector<Integer> next(poly.size() + 2, 0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t j = 0; j < 3; ++j) next[i + j] += poly[i];
        poly = next;
        out.push_back(poly[static_cast<std::size_t>(m)]);
    }
    return out;
}

} // namespace

TEST_CASE("closed form for the Pascal edge subdiagram")
{
    CHECK(closed_form_extension("mu-a-pascal-edge", Rational(1, 2), 2) == Rational(1, 6));
    for (long k : {1, 2, 7}) CHECK(closed_form_extension("mu-a-pascal-edge", 1, k) == 0);
    CHECK(closed_form_extension("mu-a-pascal-edge", 3, 2) == 0);
    CHECK(closed_form_extension("mu-a-pascal-edge", Rational(1, 3), 1) == Rational(2, 3));
    CHECK_THROWS_AS(closed_form_extension("unknown-case", Rational(1, 2), 2), Unsupported);
    CHECK_THROWS_AS(closed_form_extension("mu-a-pascal-edge", 0, 2), DomainError);
}

TEST_CASE("Catalan generating function")
{
    CHECK(catalan_generating(Rational(2, 9)) == Rational(3, 2));
    // x = a/(a+1)^2 gives a+1 for 0 < a < 1
    for (auto a : {Rational(1, 3), Rational(1, 4), Rational(2, 5)}) CHECK(catalan_generating(a / ((a + 1) * (a + 1))) == a + 1);
    CHECK_THROWS_AS(catalan_generating(Rational(1, 2)), DomainError);
}

TEST_CASE("the recursion agrees with the tail form at every level")
{
    for (auto a : {Rational(1, 2), Rational(1, 3)})
        for (long k : {1, 2, 3}) {
            auto rec = mu_a_edge_recursion(a, k, 25);
            for (int m = 0; m < 25; ++m) CHECK(rec[static_cast<std::size_t>(m)] == mu_a_edge_tail_form(a, k, m));
            for (int n = 1; n <= 8; ++n) CHECK(rec[static_cast<std::size_t>(n - 1)] == mu_a_edge_direct(a, k, n));
            for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec[i] <= rec[i - 1]);
            CHECK(rec.back() >= closed_form_extension("mu-a-pascal-edge", a, k));
        }
    auto r = mu_a_edge_recursion(Rational(1, 2), 2, 40);
    CHECK(std::fabs(to_double(r.back()) - 1.0 / 6) < 2e-5);
}

TEST_CASE("odometer verdicts follow the reciprocal series")
{
    ExtensionOptions opt;
    CHECK(odometer_extension(OdometerRule::parse("const:2"), 1, opt).verdict == Verdict::Infinite);
    auto sq = odometer_extension(OdometerRule::parse("poly:2"), 1, opt);
    CHECK(sq.verdict == Verdict::Finite);
    REQUIRE(sq.bound);
    CHECK(*sq.bound >= to_double(sq.partial_sums.back()));
    auto g = odometer_extension(OdometerRule::parse("pow2"), 1, opt);
    CHECK(g.verdict == Verdict::Finite);
    CHECK(g.certified);
    CHECK(g.tail_ratio <= 0.51);
    for (std::size_t i = 1; i < g.partial_sums.size(); ++i) CHECK(g.partial_sums[i] >= g.partial_sums[i - 1]);
}

TEST_CASE("nu_a and nu_p extensions")
{
    ExtensionOptions opt;
    auto fa = nu_a_extension(Rational(1, 2), 2, opt);
    CHECK(fa.verdict == Verdict::Finite);
    CHECK(fa.heuristic);
    REQUIRE(fa.bound);
    CHECK(*fa.bound >= to_double(fa.partial_sums.back()));

    for (auto p : {Rational(1, 2), Rational(1, 4)}) {
        auto r = nu_p_extension(p, 3, opt);
        CHECK(r.verdict == Verdict::Infinite);
        for (std::size_t i = 1; i < r.partial_sums.size(); ++i) CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
        CHECK(r.partial_sums.back() - r.base_mass >= 10 * r.terms.front());
    }
}

TEST_CASE("extension series term oracle for nu_p")
{
    // term_n = sum over W_{n+1} of (ambient in-degree minus retained in-degree) weighted by H and p
    long k = 2;
    Rational p(1, 3);
    auto sub = build_subdiagram(make(Family::Binfty), SubdiagramSpec::binfty_pascal_edge(k));
    auto mu = nu_p(p, k);
    ExtensionOptions opt;
    opt.N = 6;
    auto r = edge_extension_series(*sub, *mu, opt);
    int b = sub->base_level();
    for (int n = b; n < b + 6; ++n) {
        Rational t = 0;
        for (auto& v : sub->members(n + 1))
            for (long j = 1; j <= v.index; ++j) {
                Integer keep = sub->retained(n + 1, v, VertexKey::at(j), 1);
                t += Rational(1 - keep) * Rational(binomial(j + n - 2, n - 1)) * mu->cylinder(n + 1, v);
            }
        CHECK(r.terms[static_cast<std::size_t>(n - b)] == t);
    }
    CHECK_THROWS_AS(vertex_extension_series(*sub, *mu, opt), DomainError);
}

TEST_CASE("a subdiagram keeping every edge has zero terms")
{
    auto amb = make(Family::BoundedFinite, 1);
    auto sub = build_subdiagram(amb, full_bounded(SubdiagramSpec::Kind::Edge));
    auto mu = custom_measure(sub, "thirds", [](int n, const VertexKey&) -> Rational { return Rational(1) / Rational(power(Integer(3), static_cast<unsigned long>(n))); });
    ExtensionOptions opt;
    opt.N = 12;
    auto r = edge_extension_series(*sub, *mu, opt);
    for (auto& t : r.terms) CHECK(t == 0);
    CHECK(r.verdict == Verdict::Finite);
    REQUIRE(r.value);
    CHECK(*r.value == r.base_mass);
}

TEST_CASE("extended cylinders")
{
    auto amb = make(Family::BoundedFinite, 1);
    auto sub = build_subdiagram(amb, full_bounded(SubdiagramSpec::Kind::Vertex));
    auto mu = custom_measure(sub, "thirds", [](int n, const VertexKey&) -> Rational { return Rational(1) / Rational(power(Integer(3), static_cast<unsigned long>(n))); });
    auto r = extended_cylinder_mass(*sub, *mu, 2, VertexKey::at(1), 8, 1e-12);
    for (auto& v : r.values) CHECK(v == Rational(1, 9));
    CHECK(r.status == Convergence::Yes);

    auto odo = make(Family::OdometerIO, 1, "pow2");
    auto single = build_subdiagram(odo, SubdiagramSpec::odometer_single(2));
    auto bar = odometer_bar(odo, 2);
    auto e = extended_cylinder_mass(*single, *bar, 2, VertexKey::at(3), 40, 1e-9);
    CHECK(e.status == Convergence::Yes);
    CHECK(e.value > 0);
    for (std::size_t i = 1; i < e.values.size(); ++i) CHECK(e.values[i] >= e.values[i - 1]);
}

TEST_CASE("central coefficient decay")
{
    // values[m - 1] holds K_0^{(m)} / 3^m
    auto r = bk_decay_probe(1, 60);
    auto oracle = central_trinomials(60);
    REQUIRE(r.values.size() == 60);
    for (int m = 1; m <= 60; ++m) {
        auto i = static_cast<std::size_t>(m - 1);
        CHECK(r.coefficients[i] == oracle[static_cast<std::size_t>(m)]);
        CHECK(r.values[i] == Rational(oracle[static_cast<std::size_t>(m)]) / Rational(power(Integer(3), static_cast<unsigned long>(m))));
    }
    CHECK(r.values[0] == Rational(1, 3));
    CHECK(r.values[1] == Rational(1, 3));
    CHECK(r.values[2] == Rational(7, 27));
    CHECK(r.nonincreasing);
    CHECK(to_double(r.values.back()) < 0.07);
    auto r2 = bk_decay_probe(2, 3);
    CHECK(r2.values[0] == Rational(1, 5));
}

TEST_CASE("too few terms leave the verdict open")
{
    ExtensionOptions opt;
    opt.N = 3;
    auto r = nu_a_extension(Rational(1, 2), 2, opt);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK_FALSE(r.bound);
}
