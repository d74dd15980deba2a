#ifndef BRATTELI_MEASURES_HPP
#define BRATTELI_MEASURES_HPP

#include "bratteli/linalg.hpp"

#include <functional>
#include <optional>

namespace bratteli {

class TailInvariantMeasure {
public:
    virtual ~TailInvariantMeasure() = default;
    virtual std::string name() const = 0;
    virtual DiagramPtr diagram() const = 0;
    // p^{(n)}_w, the mass of any cylinder ending at w.
    virtual Rational cylinder(int n, const VertexKey& w) const = 0;
    virtual bool infinite_mass() const { return false; }
    // Exact sum of f'_vw p^{(n+1)}_v over successors v of w lying outside the window.
    virtual std::optional<Rational> successor_tail(int, const VertexKey&, long) const { return std::nullopt; }
    // Exact sum of H_w p_w over level-n vertices outside the window.
    virtual std::optional<Rational> tower_tail(int, long) const { return std::nullopt; }
    virtual std::vector<std::string> flags() const { return {}; }
};

using MeasurePtr = std::shared_ptr<const TailInvariantMeasure>;

// Closed-form cylinder values; T is Rational or mpf_class.
template <class T> T pow_t(const T& base, long e)
{
    T r = 1;
    r.set_prec(base.get_prec());
    for (long i = 0; i < e; ++i) r *= base;
    return r;
}

template <> inline Rational pow_t<Rational>(const Rational& base, long e) { return power(base, e); }

template <class T> T binfty_mu_a_value(const T& a, int n, long j)
{
    return pow_t<T>(a, j - 1) / pow_t<T>(a + 1, n + j - 1);
}

template <class T> T nu_a_value(const T& a, long k, int n, long j)
{
    T s = 0;
    T ar = 1;
    for (long r = 0; r <= n + k - j; ++r) {
        s += ar;
        ar *= a;
    }
    return pow_t<T>(a, j - k) / pow_t<T>(a + 1, n + j - k) * s;
}

Rational nu_p_value(const Rational& p, long k, int n, long i);

MeasurePtr pascal_mu(DiagramPtr d, std::vector<std::pair<long, Rational>> dvec);
MeasurePtr binfty_mu_a(const Rational& a);
MeasurePtr nu_a(const Rational& a, long k);
MeasurePtr nu_p(const Rational& p, long k);
MeasurePtr odometer_bar(DiagramPtr odometer, long i);
MeasurePtr custom_measure(DiagramPtr d, std::string name, std::function<Rational(int, const VertexKey&)> p);
// Negative control: one cylinder value shifted by delta.
MeasurePtr perturbed(MeasurePtr base, int n, const VertexKey& w, const Rational& delta);

Rational cylinder_mass(const TailInvariantMeasure& mu, int n, const VertexKey& w);
Rational tower_mass(const TailInvariantMeasure& mu, int n, const VertexKey& w);

struct InvarianceRecord {
    int level = 0;
    VertexKey vertex;
    enum class Status { Pass, Fail, Skipped } status = Status::Skipped;
    Rational lhs, rhs;
};

struct InvarianceReport {
    std::vector<InvarianceRecord> records;
    int passed = 0, failed = 0, skipped = 0;
    bool all_pass() const { return failed == 0 && passed > 0; }
};

InvarianceReport verify_invariance(const TailInvariantMeasure& mu, int n_max, long bound);

struct ProbabilityReport {
    int level = 0;
    Rational window_sum;
    std::optional<Rational> tail;
    Rational total;
    enum class Status { Exact, Bounded, Inconclusive } status = Status::Inconclusive;
    Rational deficit;
};

// With no analytic tail, the window sum is accepted as a bounded certificate when 1 - sum <= epsilon.
ProbabilityReport verify_probability(const TailInvariantMeasure& mu, int n, long bound, const Rational& epsilon = 0);

struct DifferenceTable {
    std::vector<std::vector<Rational>> rows; // rows[k][i] = [Delta^k c]_{i+1}
};

DifferenceTable difference_table(const std::vector<Rational>& c, int order);

struct MonotonicityVerdict {
    bool monotone = true;
    int k = -1;
    int i = -1; // 1-based position of the first non-positive entry
};

MonotonicityVerdict is_completely_monotonic(const std::vector<Rational>& c, int order);

// [Delta^l p]_n for p_n = a^{n-1}/(1+a)^{2n-2}.
Rational nu_a_difference_closed_form(const Rational& a, int l, int n);
std::vector<Rational> nu_a_sequence(const Rational& a, int length);
std::vector<Rational> mu_a_first_level_sequence(const Rational& a, int length);

struct SampleReport {
    std::vector<long> coords;
    std::vector<double> d;
    std::vector<double> mean;
    std::vector<double> std_error;
    std::vector<double> z_score;
    std::map<VertexKey, long> histogram;
    unsigned long long seed = 0;
    int depth = 0;
    long count = 0;
};

// Paths drawn by adding e_i with probability d_i at each step.
SampleReport sample_paths(const std::vector<std::pair<long, double>>& d, int depth, long count, unsigned long long seed,
                          int threads = 1, bool histogram = false);

// Endpoint distribution at the given depth by enumerating every path over the support of d.
std::map<VertexKey, Rational> exhaustive_endpoint_distribution(const TailInvariantMeasure& mu, const std::vector<long>& coords,
                                                               int depth);

} // namespace bratteli

#endif
