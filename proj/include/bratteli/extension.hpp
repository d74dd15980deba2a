#ifndef BRATTELI_EXTENSION_HPP
#define BRATTELI_EXTENSION_HPP

#include "bratteli/limits.hpp"
#include "bratteli/measures.hpp"

namespace bratteli {

enum class Verdict { Finite, Infinite, Inconclusive };
std::string verdict_name(Verdict v);

struct ExtensionReport {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Rational> value;    // exact, only from a recognized closed form
    std::optional<double> bound;      // upper bound attached to a Finite verdict
    Rational base_mass;               // mass of the subdiagram path space itself
    std::vector<Rational> terms;      // t_n, one per level
    std::vector<Rational> partial_sums; // base_mass + t_1 + ... + t_n
    std::vector<double> ratios;       // t_{n+1} / t_n
    std::string recognized;           // name of the closed form or criterion used, if any
    bool heuristic = true;
    bool certified = false;
    double tail_ratio = 0;
    std::vector<std::string> trace;
};

struct ExtensionOptions {
    int N = 60;
    int span = 10;
    double ceiling_factor = 10;
    double margin = 0.01;
    // The caller knows the term ratios are nonincreasing from some point on.
    bool monotone_ratio = false;
};

// Sum over n of sum_{v in W_{n+1}} sum_w (f'_vw - retained_vw) H_w^{(n)} p_v^{(n+1)}.
ExtensionReport extension_series(const Subdiagram& sub, const TailInvariantMeasure& internal, const ExtensionOptions& opt);
ExtensionReport vertex_extension_series(const Subdiagram& sub, const TailInvariantMeasure& internal, const ExtensionOptions& opt);
ExtensionReport edge_extension_series(const Subdiagram& sub, const TailInvariantMeasure& internal, const ExtensionOptions& opt);

// Ready-made cases.
ExtensionReport odometer_extension(const OdometerRule& rule, long i, const ExtensionOptions& opt);
ExtensionReport nu_a_extension(const Rational& a, long k, const ExtensionOptions& opt);
ExtensionReport nu_p_extension(const Rational& p, long k, const ExtensionOptions& opt);

// Recognized case "mu-a-pascal-edge": (a/(a+1))^{k-1}(1-a) for 0 < a < 1, 0 for a >= 1.
Rational closed_form_extension(const std::string& case_name, const Rational& a, long k);
// (1 - sqrt(1 - 4x)) / (2x), exact when 1 - 4x is a rational square.
Rational catalan_generating(const Rational& x);
// mu_1..mu_N of the recursion mu_{n+1} = mu_n - a^{k+n}/(a+1)^{2n+k} h^{(n+1)}_{k+n-1}.
std::vector<Rational> mu_a_edge_recursion(const Rational& a, long k, int N);
// Exact mu_{m+1} through the Catalan generating function.
Rational mu_a_edge_tail_form(const Rational& a, long k, int m);
// sum over W_n of h_i^{(n)} times the mu_a cylinder value.
Rational mu_a_edge_direct(const Rational& a, long k, int n);

struct ExtendedCylinderReport {
    Convergence status = Convergence::Inconclusive;
    Rational value;
    std::vector<Rational> values;
    int m_used = 0;
};

ExtendedCylinderReport extended_cylinder_mass(const Subdiagram& sub, const TailInvariantMeasure& internal, int n,
                                              const VertexKey& w, int m_max, double tol, int consecutive = 5);

struct DecayReport {
    long k = 1;
    std::vector<Integer> coefficients; // K_0^{(m)}
    std::vector<Rational> values;      // K_0^{(m)} / (2k+1)^m
    bool nonincreasing = true;
    int first_violation = -1;
};

DecayReport bk_decay_probe(long k, int m_max);

} // namespace bratteli

#endif
