#include "bratteli/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace bratteli {

Rational nu_p_value(const Rational& p, long k, int n, long i)
{
    return power(p, n - 1 + k - i) * power(Rational(1) - p, i - k);
}

namespace {

class PascalMu : public TailInvariantMeasure {
public:
    PascalMu(DiagramPtr d, std::vector<std::pair<long, Rational>> dvec) : d_(std::move(d))
    {
        if (d_->family() != Family::PascalN && d_->family() != Family::PascalZ && d_->family() != Family::PascalK)
            throw DomainError("pascal measure needs a Pascal diagram");
        Rational total = 0;
        for (auto& [c, w] : dvec) {
            if (w < 0) throw DomainError("invalid parameter: negative entry in d");
            if (!d_->contains(1, VertexKey::concentrated(c, 1)))
                throw DomainError("invalid parameter: coordinate " + std::to_string(c) + " not in the diagram");
            total += w;
            if (w > 0) weights_[c] += w;
            if (w == 1) delta_ = true;
        }
        if (total != 1) throw DomainError("invalid parameter: d must sum to 1");
    }
    std::string name() const override
    {
        std::string s = "pascal-mu(";
        bool first = true;
        for (auto& [c, w] : weights_) {
            s += (first ? "" : ",") + std::to_string(c) + ":" + to_string(w);
            first = false;
        }
        return s + ") on " + d_->name();
    }
    DiagramPtr diagram() const override { return d_; }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        if (!d_->contains(n, w)) throw DomainError("vertex " + w.str() + " not in level " + std::to_string(n));
        Rational p = 1;
        for (auto& [c, m] : w.support) {
            auto it = weights_.find(c);
            if (it == weights_.end()) return 0;
            p *= power(it->second, m);
        }
        return p;
    }
    bool covered(long bound) const
    {
        auto coords = pascal_coordinates(d_->family(), bound, d_->spec().k);
        for (auto& [c, w] : weights_)
            if (std::find(coords.begin(), coords.end(), c) == coords.end()) return false;
        return true;
    }
    std::optional<Rational> successor_tail(int, const VertexKey&, long bound) const override
    {
        if (covered(bound)) return Rational(0);
        return std::nullopt;
    }
    std::optional<Rational> tower_tail(int, long bound) const override
    {
        if (covered(bound)) return Rational(0);
        return std::nullopt;
    }
    std::vector<std::string> flags() const override
    {
        if (delta_) return {"d has a unit entry: the measure is a point mass on a vertical path"};
        return {};
    }

private:
    DiagramPtr d_;
    std::map<long, Rational> weights_;
    bool delta_ = false;
};

class BinftyMuA : public TailInvariantMeasure {
public:
    explicit BinftyMuA(Rational a) : a_(std::move(a))
    {
        if (a_ <= 0) throw DomainError("invalid parameter: a must be > 0");
        DiagramSpec s;
        s.family = Family::Binfty;
        d_ = build_diagram(s);
    }
    std::string name() const override { return "binfty-mu(a=" + to_string(a_) + ")"; }
    DiagramPtr diagram() const override { return d_; }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        if (!d_->contains(n, w)) throw DomainError("vertex " + w.str() + " not in level " + std::to_string(n));
        return binfty_mu_a_value<Rational>(a_, n, w.index);
    }
    std::optional<Rational> successor_tail(int n, const VertexKey& w, long bound) const override
    {
        long J = std::max(bound + 1, w.index);
        return power(a_, J - 1) / power(a_ + 1, n + J - 1);
    }
    std::optional<Rational> tower_tail(int n, long bound) const override
    {
        Rational s = Rational(1) / (a_ + 1);
        Rational t = Rational(1) - s;
        Rational sum = 0;
        for (long r = 0; r <= n - 1; ++r)
            sum += Rational(binomial(n + bound - 1, r)) * power(s, r) * power(t, n + bound - 1 - r);
        return sum;
    }
    std::vector<std::string> flags() const override
    {
        if (a_ == 0) return {"a = 0: point mass on the vertical path through vertex 1"};
        return {};
    }

private:
    Rational a_;
    DiagramPtr d_;
};

DiagramPtr binfty()
{
    DiagramSpec s;
    s.family = Family::Binfty;
    return build_diagram(s);
}

class NuA : public TailInvariantMeasure {
public:
    NuA(Rational a, long k) : a_(std::move(a)), k_(k)
    {
        if (a_ <= 0 || a_ > 1) throw DomainError("invalid parameter: a must satisfy 0 < a <= 1");
        d_ = build_subdiagram(binfty(), SubdiagramSpec::binfty_vertex(k));
    }
    std::string name() const override { return "nu-a(a=" + to_string(a_) + ",k=" + std::to_string(k_) + ")"; }
    DiagramPtr diagram() const override { return d_; }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        if (!d_->contains(n, w)) throw DomainError("vertex " + w.str() + " not in W_" + std::to_string(n));
        return nu_a_value<Rational>(a_, k_, n, w.index);
    }
    bool infinite_mass() const override { return a_ == 1; }
    std::optional<Rational> successor_tail(int, const VertexKey&, long) const override { return Rational(0); }
    std::optional<Rational> tower_tail(int, long) const override { return Rational(0); }
    std::vector<std::string> flags() const override
    {
        if (a_ == 1) return {"infinite total mass"};
        return {};
    }

private:
    Rational a_;
    long k_;
    DiagramPtr d_;
};

class NuP : public TailInvariantMeasure {
public:
    NuP(Rational p, long k) : p_(std::move(p)), k_(k)
    {
        if (p_ <= 0 || p_ >= 1) throw DomainError("invalid parameter: p must satisfy 0 < p < 1");
        d_ = build_subdiagram(binfty(), SubdiagramSpec::binfty_pascal_edge(k));
    }
    std::string name() const override { return "nu-p(p=" + to_string(p_) + ",k=" + std::to_string(k_) + ")"; }
    DiagramPtr diagram() const override { return d_; }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        if (!d_->contains(n, w)) throw DomainError("vertex " + w.str() + " not in W_" + std::to_string(n));
        return nu_p_value(p_, k_, n, w.index);
    }
    std::optional<Rational> successor_tail(int, const VertexKey&, long) const override { return Rational(0); }
    std::optional<Rational> tower_tail(int, long) const override { return Rational(0); }

private:
    Rational p_;
    long k_;
    DiagramPtr d_;
};

class OdometerBar : public TailInvariantMeasure {
public:
    OdometerBar(DiagramPtr odo, long i) : odo_(std::move(odo)), i_(i)
    {
        if (odo_->family() != Family::OdometerIO) throw DomainError("odometer measure needs an odometer diagram");
        d_ = build_subdiagram(odo_, SubdiagramSpec::odometer_single(i));
    }
    std::string name() const override { return "odometer-bar(i=" + std::to_string(i_) + ") on " + odo_->name(); }
    DiagramPtr diagram() const override { return d_; }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        if (!d_->contains(n, w)) throw DomainError("vertex " + w.str() + " not in W_" + std::to_string(n));
        Integer den = 1;
        for (long j = 0; j < n; ++j) den *= odo_->spec().odometer.at(j, i_);
        return Rational(Integer(1), den);
    }
    std::optional<Rational> successor_tail(int, const VertexKey&, long) const override { return Rational(0); }
    std::optional<Rational> tower_tail(int, long) const override { return Rational(0); }

private:
    DiagramPtr odo_;
    long i_;
    DiagramPtr d_;
};

class CustomMeasure : public TailInvariantMeasure {
public:
    CustomMeasure(DiagramPtr d, std::string name, std::function<Rational(int, const VertexKey&)> p)
        : d_(std::move(d)), name_(std::move(name)), p_(std::move(p))
    {
    }
    std::string name() const override { return name_; }
    DiagramPtr diagram() const override { return d_; }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        Rational v = p_(n, w);
        if (v < 0) throw DomainError("negative cylinder value at " + w.str());
        return v;
    }

private:
    DiagramPtr d_;
    std::string name_;
    std::function<Rational(int, const VertexKey&)> p_;
};

class Perturbed : public TailInvariantMeasure {
public:
    Perturbed(MeasurePtr base, int n, VertexKey w, Rational delta)
        : base_(std::move(base)), n_(n), w_(std::move(w)), delta_(std::move(delta))
    {
    }
    std::string name() const override { return base_->name() + " perturbed at " + w_.str(); }
    DiagramPtr diagram() const override { return base_->diagram(); }
    Rational cylinder(int n, const VertexKey& w) const override
    {
        Rational v = base_->cylinder(n, w);
        return (n == n_ && w == w_) ? v + delta_ : v;
    }
    std::optional<Rational> successor_tail(int n, const VertexKey& w, long bound) const override
    {
        return base_->successor_tail(n, w, bound);
    }
    std::optional<Rational> tower_tail(int n, long bound) const override { return base_->tower_tail(n, bound); }

private:
    MeasurePtr base_;
    int n_;
    VertexKey w_;
    Rational delta_;
};

} // namespace

MeasurePtr pascal_mu(DiagramPtr d, std::vector<std::pair<long, Rational>> dvec)
{
    return std::make_shared<PascalMu>(std::move(d), std::move(dvec));
}

MeasurePtr binfty_mu_a(const Rational& a) { return std::make_shared<BinftyMuA>(a); }

MeasurePtr nu_a(const Rational& a, long k) { return std::make_shared<NuA>(a, k); }

MeasurePtr nu_p(const Rational& p, long k) { return std::make_shared<NuP>(p, k); }

MeasurePtr odometer_bar(DiagramPtr odometer, long i) { return std::make_shared<OdometerBar>(std::move(odometer), i); }

MeasurePtr custom_measure(DiagramPtr d, std::string name, std::function<Rational(int, const VertexKey&)> p)
{
    return std::make_shared<CustomMeasure>(std::move(d), std::move(name), std::move(p));
}

MeasurePtr perturbed(MeasurePtr base, int n, const VertexKey& w, const Rational& delta)
{
    return std::make_shared<Perturbed>(std::move(base), n, w, delta);
}

Rational cylinder_mass(const TailInvariantMeasure& mu, int n, const VertexKey& w) { return mu.cylinder(n, w); }

Rational tower_mass(const TailInvariantMeasure& mu, int n, const VertexKey& w)
{
    HeightCache H(mu.diagram());
    return Rational(H(n, w)) * mu.cylinder(n, w);
}

InvarianceReport verify_invariance(const TailInvariantMeasure& mu, int n_max, long bound)
{
    InvarianceReport rep;
    const Diagram& d = *mu.diagram();
    for (int n = d.base_level(); n < n_max; ++n) {
        for (auto& w : vertex_window(d, n, bound).vertices) {
            InvarianceRecord r;
            r.level = n;
            r.vertex = w;
            r.rhs = mu.cylinder(n, w);
            std::optional<Rational> tail;
            if (d.successors_closed(n, w, bound))
                tail = Rational(0);
            else
                tail = mu.successor_tail(n, w, bound);
            if (!tail) {
                r.status = InvarianceRecord::Status::Skipped;
                ++rep.skipped;
                rep.records.push_back(std::move(r));
                continue;
            }
            Rational lhs = *tail;
            for (auto& v : d.successors(n, w, bound)) lhs += Rational(d.multiplicity(n + 1, v, w)) * mu.cylinder(n + 1, v);
            r.lhs = lhs;
            if (lhs == r.rhs) {
                r.status = InvarianceRecord::Status::Pass;
                ++rep.passed;
            } else {
                r.status = InvarianceRecord::Status::Fail;
                ++rep.failed;
            }
            rep.records.push_back(std::move(r));
        }
    }
    return rep;
}

ProbabilityReport verify_probability(const TailInvariantMeasure& mu, int n, long bound, const Rational& epsilon)
{
    ProbabilityReport rep;
    rep.level = n;
    HeightCache H(mu.diagram());
    rep.window_sum = 0;
    for (auto& w : vertex_window(*mu.diagram(), n, bound).vertices) rep.window_sum += Rational(H(n, w)) * mu.cylinder(n, w);
    rep.tail = mu.tower_tail(n, bound);
    if (rep.tail) {
        rep.total = rep.window_sum + *rep.tail;
        rep.deficit = Rational(1) - rep.total;
        rep.status = rep.total == 1 ? ProbabilityReport::Status::Exact : ProbabilityReport::Status::Inconclusive;
    } else {
        rep.total = rep.window_sum;
        rep.deficit = Rational(1) - rep.window_sum;
        rep.status = (rep.deficit >= 0 && rep.deficit <= epsilon && epsilon > 0) ? ProbabilityReport::Status::Bounded
                                                                                : ProbabilityReport::Status::Inconclusive;
    }
    return rep;
}

DifferenceTable difference_table(const std::vector<Rational>& c, int order)
{
    if (order < 0 || c.size() < static_cast<std::size_t>(order) + 1)
        throw DomainError("difference table needs length >= order + 1");
    DifferenceTable t;
    t.rows.push_back(c);
    for (int k = 1; k <= order; ++k) {
        const auto& prev = t.rows.back();
        std::vector<Rational> next;
        for (std::size_t i = 0; i + 1 < prev.size(); ++i) next.push_back(prev[i] - prev[i + 1]);
        t.rows.push_back(std::move(next));
    }
    return t;
}

MonotonicityVerdict is_completely_monotonic(const std::vector<Rational>& c, int order)
{
    auto t = difference_table(c, order);
    MonotonicityVerdict v;
    for (int k = 0; k <= order; ++k)
        for (std::size_t i = 0; i < t.rows[k].size(); ++i)
            if (t.rows[k][i] <= 0) {
                v.monotone = false;
                v.k = k;
                v.i = static_cast<int>(i) + 1;
                return v;
            }
    return v;
}

Rational nu_a_difference_closed_form(const Rational& a, int l, int n)
{
    return power(a, n - 1) * power(1 + a + a * a, l) / power(1 + a, 2 * n + 2 * l - 2);
}

std::vector<Rational> nu_a_sequence(const Rational& a, int length)
{
    std::vector<Rational> out;
    for (int n = 1; n <= length; ++n) out.push_back(power(a, n - 1) / power(1 + a, 2 * n - 2));
    return out;
}

std::vector<Rational> mu_a_first_level_sequence(const Rational& a, int length)
{
    std::vector<Rational> out;
    for (int j = 1; j <= length; ++j) out.push_back(binfty_mu_a_value<Rational>(a, 1, j));
    return out;
}

SampleReport sample_paths(const std::vector<std::pair<long, double>>& d, int depth, long count, unsigned long long seed,
                          int threads, bool histogram)
{
    if (depth < 1 || count < 1) throw DomainError("depth and count must be >= 1");
    double total = 0;
    for (auto& [c, w] : d) {
        if (w < 0) throw DomainError("negative probability in d");
        total += w;
    }
    if (std::fabs(total - 1) > 1e-12) throw DomainError("d must sum to 1");
    SampleReport rep;
    rep.seed = seed;
    rep.depth = depth;
    rep.count = count;
    std::vector<double> weights;
    for (auto& [c, w] : d) {
        rep.coords.push_back(c);
        rep.d.push_back(w);
        weights.push_back(w);
    }
    const std::size_t K = weights.size();
    const long block = 1000;
    const long nblocks = (count + block - 1) / block;
    struct Partial {
        std::vector<double> sum, sumsq;
        std::map<VertexKey, long> hist;
    };
    std::vector<Partial> parts(static_cast<std::size_t>(nblocks));
    auto run_block = [&](long b) {
        std::seed_seq ss{static_cast<unsigned>(seed & 0xffffffffu), static_cast<unsigned>(seed >> 32),
                         static_cast<unsigned>(b)};
        std::mt19937_64 gen(ss);
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        Partial& p = parts[static_cast<std::size_t>(b)];
        p.sum.assign(K, 0);
        p.sumsq.assign(K, 0);
        long lo = b * block, hi = std::min(count, lo + block);
        std::vector<long> cnt(K);
        for (long path = lo; path < hi; ++path) {
            std::fill(cnt.begin(), cnt.end(), 0);
            for (int s = 0; s < depth; ++s) ++cnt[pick(gen)];
            for (std::size_t i = 0; i < K; ++i) {
                double f = static_cast<double>(cnt[i]) / depth;
                p.sum[i] += f;
                p.sumsq[i] += f * f;
            }
            if (histogram) {
                std::vector<std::pair<long, long>> sup;
                for (std::size_t i = 0; i < K; ++i) sup.emplace_back(rep.coords[i], cnt[i]);
                ++p.hist[VertexKey::multiset(sup)];
            }
        }
    };
    threads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (long b = t; b < nblocks; b += threads) run_block(b);
        });
    for (auto& th : pool) th.join();
    std::vector<double> sum(K, 0), sumsq(K, 0);
    for (auto& p : parts) {
        for (std::size_t i = 0; i < K; ++i) {
            sum[i] += p.sum[i];
            sumsq[i] += p.sumsq[i];
        }
        for (auto& [v, c] : p.hist) rep.histogram[v] += c;
    }
    for (std::size_t i = 0; i < K; ++i) {
        double mean = sum[i] / count;
        double var = count > 1 ? (sumsq[i] - count * mean * mean) / (count - 1) : 0;
        double se = std::sqrt(std::max(var, 0.0) / count);
        rep.mean.push_back(mean);
        rep.std_error.push_back(se);
        rep.z_score.push_back(se > 0 ? (mean - rep.d[i]) / se : (mean == rep.d[i] ? 0 : INFINITY));
    }
    return rep;
}

std::map<VertexKey, Rational> exhaustive_endpoint_distribution(const TailInvariantMeasure& mu, const std::vector<long>& coords,
                                                               int depth)
{
    std::map<VertexKey, Rational> out;
    std::vector<long> path;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0) {
            std::vector<std::pair<long, long>> sup;
            for (long c : path) sup.emplace_back(c, 1);
            VertexKey v = VertexKey::multiset(sup);
            out[v] += mu.cylinder(depth, v);
            return;
        }
        for (long c : coords) {
            path.push_back(c);
            rec(left - 1);
            path.pop_back();
        }
    };
    rec(depth);
    return out;
}

} // namespace bratteli
