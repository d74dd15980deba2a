#include "bratteli/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bratteli {

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Finite: return "Finite";
    case Verdict::Infinite: return "Infinite";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

class AmbientHeights {
public:
    explicit AmbientHeights(DiagramPtr d) : d_(d), cache_(d)
    {
        Family f = d->family();
        closed_ = f == Family::Binfty || f == Family::PascalN || f == Family::PascalZ || f == Family::PascalK ||
                  (f == Family::OdometerIO && d->spec().odometer.per_vertex.empty());
    }
    Integer operator()(int level, const VertexKey& v) const
    {
        return closed_ ? heights_closed_form(*d_, level, v) : cache_(level, v);
    }

private:
    DiagramPtr d_;
    HeightCache cache_;
    bool closed_ = false;
};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Heuristic decision from the computed terms.
void decide(ExtensionReport& r, const ExtensionOptions& opt)
{
    r.ratios.clear();
    for (std::size_t j = 0; j + 1 < r.terms.size(); ++j) {
        if (r.terms[j] == 0) continue;
        r.ratios.push_back(to_double(Rational(r.terms[j + 1] / r.terms[j])));
    }
    Rational first = 0;
    for (auto& t : r.terms)
        if (t > 0) {
            first = t;
            break;
        }
    if (first == 0) {
        r.verdict = Verdict::Finite;
        r.value = r.base_mass;
        r.bound = to_double(r.base_mass);
        r.heuristic = false;
        r.certified = true;
        r.recognized = "no edges leave the subdiagram";
        return;
    }
    std::size_t span = static_cast<std::size_t>(std::max(opt.span, 1));
    if (r.ratios.size() < span) {
        r.verdict = Verdict::Inconclusive;
        r.trace.push_back("too few terms for a ratio test: " + std::to_string(r.ratios.size()) + " ratios, span " + std::to_string(span));
        return;
    }
    auto beg = r.ratios.end() - static_cast<long>(span);
    double lo = *std::min_element(beg, r.ratios.end());
    double hi = *std::max_element(beg, r.ratios.end());
    Rational added = r.partial_sums.back() - r.base_mass;
    r.trace.push_back("span ratios in [" + fmt(lo) + ", " + fmt(hi) + "] over the last " + std::to_string(span) + " terms");
    if (added >= Rational(opt.ceiling_factor) * first && lo >= 1) {
        r.verdict = Verdict::Infinite;
        r.heuristic = true;
        r.tail_ratio = lo;
        r.trace.push_back("partial sums exceed " + fmt(opt.ceiling_factor) + " times the first term and the ratio does not decay");
        return;
    }
    if (hi < 1) {
        double rr;
        if (opt.monotone_ratio) {
            rr = r.ratios.back();
            r.certified = true;
            r.heuristic = false;
        } else {
            rr = hi;
            std::size_t n = r.ratios.size();
            if (n >= 3) {
                double a = r.ratios[n - 3], b = r.ratios[n - 2], c = r.ratios[n - 1];
                double den = c - 2 * b + a;
                if (std::fabs(den) > 1e-300) {
                    double lim = c - (c - b) * (c - b) / den;
                    if (std::isfinite(lim) && lim > rr && lim < 1) rr = lim;
                }
            }
            rr += opt.margin;
            r.heuristic = true;
        }
        if (rr >= 1) {
            r.verdict = Verdict::Inconclusive;
            r.trace.push_back("ratio estimate with margin reaches 1");
            return;
        }
        r.tail_ratio = rr;
        r.verdict = Verdict::Finite;
        r.bound = to_double(r.partial_sums.back()) + to_double(r.terms.back()) * rr / (1 - rr);
        r.trace.push_back("geometric tail bound with ratio " + fmt(rr));
        return;
    }
    r.verdict = Verdict::Inconclusive;
}

const Subdiagram& as_sub(const TailInvariantMeasure& mu)
{
    auto* s = dynamic_cast<const Subdiagram*>(mu.diagram().get());
    if (!s) throw DomainError("measure " + mu.name() + " does not live on a subdiagram");
    return *s;
}

} // namespace

ExtensionReport extension_series(const Subdiagram& sub, const TailInvariantMeasure& internal, const ExtensionOptions& opt)
{
    if (opt.N < 2) throw DomainError("extension series needs N >= 2");
    ExtensionReport r;
    if (internal.infinite_mass()) {
        r.verdict = Verdict::Infinite;
        r.heuristic = false;
        r.recognized = "internal measure has infinite total mass";
        return r;
    }
    AmbientHeights H(sub.ambient_ptr());
    int b = sub.base_level();
    r.base_mass = 0;
    for (auto& w : sub.members(b)) r.base_mass += Rational(H(b, w)) * internal.cylinder(b, w);
    Rational s = r.base_mass;
    for (int n = b; n < b + opt.N; ++n) {
        Rational t = 0;
        std::map<VertexKey, Integer> hn;
        for (auto& v : sub.members(n + 1)) {
            Integer acc = 0;
            for (auto& e : sub.ambient().predecessors(n + 1, v)) {
                Integer lost = e.mult - sub.retained(n + 1, v, e.source, e.mult);
                if (lost == 0) continue;
                auto it = hn.find(e.source);
                if (it == hn.end()) it = hn.emplace(e.source, H(n, e.source)).first;
                acc += lost * it->second;
            }
            if (acc != 0) t += Rational(acc) * internal.cylinder(n + 1, v);
        }
        s += t;
        r.terms.push_back(t);
        r.partial_sums.push_back(s);
    }
    decide(r, opt);
    return r;
}

ExtensionReport vertex_extension_series(const Subdiagram& sub, const TailInvariantMeasure& internal, const ExtensionOptions& opt)
{
    if (sub.sub_spec().kind != SubdiagramSpec::Kind::Vertex) throw DomainError("vertex extension needs a vertex subdiagram");
    return extension_series(sub, internal, opt);
}

ExtensionReport edge_extension_series(const Subdiagram& sub, const TailInvariantMeasure& internal, const ExtensionOptions& opt)
{
    if (sub.sub_spec().kind != SubdiagramSpec::Kind::Edge) throw DomainError("edge extension needs an edge subdiagram");
    return extension_series(sub, internal, opt);
}

ExtensionReport odometer_extension(const OdometerRule& rule, long i, const ExtensionOptions& opt)
{
    DiagramSpec spec;
    spec.family = Family::OdometerIO;
    spec.odometer = rule;
    auto odo = build_diagram(spec);
    auto mu = odometer_bar(odo, i);
    ExtensionOptions o = opt;
    bool converges = false;
    std::string why;
    using K = OdometerRule::Kind;
    if (!rule.per_vertex.empty()) {
        why = "stationary per-vertex rule: sum of 1/a_n diverges";
    } else if (rule.kind == K::Geometric) {
        converges = true;
        o.monotone_ratio = true;
        why = "geometric a_n: sum of 1/a_n converges and the term ratio (a_n+1)/a_{n+1} decreases";
    } else if (rule.kind == K::Polynomial && rule.exponent >= 2) {
        converges = true;
        why = "polynomial a_n of degree >= 2: sum of 1/a_n converges";
    } else if (rule.kind == K::Polynomial) {
        why = "polynomial a_n of degree <= 1: sum of 1/a_n diverges";
    } else {
        why = "a_n is eventually constant: sum of 1/a_n diverges";
    }
    ExtensionReport r = extension_series(as_sub(*mu), *mu, o);
    r.trace.push_back("series heuristic: " + verdict_name(r.verdict));
    r.recognized = why;
    r.verdict = converges ? Verdict::Finite : Verdict::Infinite;
    if (rule.kind == K::Polynomial && converges && rule.per_vertex.empty()) {
        double p = static_cast<double>(rule.exponent);
        double tail = 1.0 / ((p - 1) * std::pow(static_cast<double>(o.N - 1 + rule.shift), p - 1));
        r.bound = to_double(r.partial_sums.back()) * std::exp(tail);
        r.certified = true;
        r.heuristic = false;
    } else if (!converges) {
        r.bound.reset();
        r.heuristic = false;
        r.certified = false;
    }
    return r;
}

ExtensionReport nu_a_extension(const Rational& a, long k, const ExtensionOptions& opt)
{
    auto mu = nu_a(a, k);
    return vertex_extension_series(as_sub(*mu), *mu, opt);
}

ExtensionReport nu_p_extension(const Rational& p, long k, const ExtensionOptions& opt)
{
    auto mu = nu_p(p, k);
    return edge_extension_series(as_sub(*mu), *mu, opt);
}

Rational catalan_generating(const Rational& x)
{
    if (x == 0) return 1;
    if (x > Rational(1, 4)) throw DomainError("Catalan generating function diverges for x > 1/4");
    Rational root = exact_sqrt(Rational(1) - 4 * x);
    return (Rational(1) - root) / (2 * x);
}

Rational closed_form_extension(const std::string& case_name, const Rational& a, long k)
{
    if (case_name != "mu-a-pascal-edge") throw Unsupported("unsupported: no closed form for case " + case_name);
    if (a <= 0) throw DomainError("invalid parameter: a must be > 0");
    if (k < 1) throw DomainError("invalid parameter: k must be >= 1");
    if (a >= 1) return 0;
    return power(a / (a + 1), k - 1) * (Rational(1) - a);
}

namespace {

DiagramPtr binfty_ambient()
{
    DiagramSpec s;
    s.family = Family::Binfty;
    return build_diagram(s);
}

} // namespace

std::vector<Rational> mu_a_edge_recursion(const Rational& a, long k, int N)
{
    if (a <= 0) throw DomainError("invalid parameter: a must be > 0");
    if (k < 1) throw DomainError("invalid parameter: k must be >= 1");
    auto sub = build_subdiagram(binfty_ambient(), SubdiagramSpec::binfty_vertex(k));
    HeightCache h(sub);
    std::vector<Rational> out;
    if (N < 1) return out;
    Rational mu = power(a, k - 1) / power(a + 1, k);
    out.push_back(mu);
    for (int n = 1; n < N; ++n) {
        mu -= power(a, k + n) / power(a + 1, 2 * n + k) * Rational(h(n + 1, VertexKey::at(k + n - 1)));
        out.push_back(mu);
    }
    return out;
}

Rational mu_a_edge_tail_form(const Rational& a, long k, int m)
{
    if (a <= 0) throw DomainError("invalid parameter: a must be > 0");
    Rational x = a / ((a + 1) * (a + 1));
    Rational partial = 0;
    auto c = catalan_numbers(m);
    Rational xp = 1;
    for (int j = 0; j <= m; ++j) {
        partial += Rational(c[static_cast<std::size_t>(j)]) * xp;
        xp *= x;
    }
    return closed_form_extension("mu-a-pascal-edge", a, k) + power(a / (a + 1), k) * (catalan_generating(x) - partial);
}

Rational mu_a_edge_direct(const Rational& a, long k, int n)
{
    if (n < 1) throw DomainError("levels start at 1");
    auto sub = build_subdiagram(binfty_ambient(), SubdiagramSpec::binfty_vertex(k));
    HeightCache h(sub);
    Rational s = 0;
    for (auto& v : sub->members(n)) s += Rational(h(n, v)) * binfty_mu_a_value<Rational>(a, n, v.index);
    return s;
}

ExtendedCylinderReport extended_cylinder_mass(const Subdiagram& sub, const TailInvariantMeasure& internal, int n,
                                              const VertexKey& w, int m_max, double tol, int consecutive)
{
    if (!sub.ambient().contains(n, w)) throw DomainError("vertex " + w.str() + " not in ambient level " + std::to_string(n));
    if (m_max < 1) throw DomainError("m_max must be positive");
    const Diagram& amb = sub.ambient();
    ExtendedCylinderReport rep;
    int good = 0;
    for (int m = 1; m <= m_max; ++m) {
        std::map<VertexKey, Rational> f;
        for (auto& v : sub.members(n + m)) f[v] = internal.cylinder(n + m, v);
        for (int L = n + m; L > n; --L) {
            std::map<VertexKey, Rational> g;
            for (auto& [v, val] : f)
                for (auto& e : amb.predecessors(L, v)) g[e.source] += Rational(e.mult) * val;
            f = std::move(g);
        }
        Rational val = f.count(w) ? f[w] : Rational(0);
        if (!rep.values.empty()) {
            double diff = std::fabs(to_double(Rational(val - rep.values.back())));
            good = diff < tol ? good + 1 : 0;
        }
        rep.values.push_back(val);
        rep.value = val;
        rep.m_used = m;
        if (good >= consecutive) {
            rep.status = Convergence::Yes;
            break;
        }
    }
    return rep;
}

DecayReport bk_decay_probe(long k, int m_max)
{
    if (k < 1) throw DomainError("invalid parameter: k must be >= 1");
    DecayReport rep;
    rep.k = k;
    std::vector<Integer> poly{1};
    Integer den = 1;
    for (int m = 1; m <= m_max; ++m) {
        std::vector<Integer> next(poly.size() + static_cast<std::size_t>(2 * k), 0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (long s = 0; s <= 2 * k; ++s) next[i + static_cast<std::size_t>(s)] += poly[i];
        poly = std::move(next);
        den *= 2 * k + 1;
        Integer c = poly[static_cast<std::size_t>(k * m)];
        rep.coefficients.push_back(c);
        Rational v(c, den);
        v.canonicalize();
        if (!rep.values.empty() && v > rep.values.back() && rep.first_violation < 0) {
            rep.nonincreasing = false;
            rep.first_violation = m;
        }
        rep.values.push_back(v);
    }
    return rep;
}

} // namespace bratteli
