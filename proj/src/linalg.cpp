#include "bratteli/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace bratteli {

Integer HeightCache::operator()(int level, const VertexKey& v) const
{
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find({level, v});
        if (it != memo_.end()) return it->second;
    }
    Integer h = compute(level, v);
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(std::make_pair(level, v), h);
    return h;
}

Integer HeightCache::compute(int level, const VertexKey& v) const
{
    if (level < d_->base_level()) throw DomainError("level below the base level of " + d_->name());
    if (!d_->contains(level, v))
        throw TruncationIncomplete("vertex " + v.str() + " not in level " + std::to_string(level), {v.str()});
    if (level == d_->base_level()) return 1;
    Integer h = 0;
    for (auto& e : d_->predecessors(level, v)) h += e.mult * (*this)(level - 1, e.source);
    return h;
}

HeightVector heights(const DiagramPtr& d, int n, const std::vector<VertexKey>& vertices)
{
    HeightCache cache(d);
    HeightVector hv;
    hv.level = n;
    std::vector<std::string> missing;
    for (auto& v : vertices) {
        try {
            hv.values[v] = cache(n, v);
        } catch (const TruncationIncomplete& e) {
            missing.insert(missing.end(), e.missing.begin(), e.missing.end());
        }
    }
    if (!missing.empty()) throw TruncationIncomplete("predecessor cone leaves the declared windows", missing);
    return hv;
}

HeightVector heights(const DiagramPtr& d, int n, long bound)
{
    return heights(d, n, vertex_window(*d, n, bound).vertices);
}

Integer bounded_coefficient(long k, long m, long j)
{
    if (k < 1 || m < 0) throw DomainError("invalid parameter for bounded coefficient");
    if (std::labs(j) > k * m) return 0;
    std::vector<Integer> c{1};
    for (long step = 0; step < m; ++step) {
        std::vector<Integer> next(c.size() + 2 * k);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (long t = 0; t <= 2 * k; ++t) next[i + t] += c[i];
        c = std::move(next);
    }
    return c[static_cast<std::size_t>(j + k * m)];
}

Integer heights_closed_form(const Diagram& d, int n, const VertexKey& v)
{
    switch (d.family()) {
    case Family::PascalN:
    case Family::PascalZ:
    case Family::PascalK: {
        if (!d.contains(n, v)) throw DomainError("vertex " + v.str() + " not in level " + std::to_string(n));
        Integer h = factorial(n);
        for (auto& p : v.support) h /= factorial(p.second);
        return h;
    }
    case Family::Binfty:
        if (n < 1 || v.index < 1) throw DomainError("B_infinity levels start at 1 with indices >= 1");
        return binomial(v.index + n - 2, n - 1);
    case Family::BoundedFinite:
        return bounded_coefficient(d.spec().k, n, v.index);
    case Family::OdometerIO: {
        if (!d.spec().odometer.per_vertex.empty()) throw Unsupported("unsupported: stationary per-vertex odometer rule");
        Integer h = 1;
        for (long j = 0; j < n; ++j) h *= d.spec().odometer.at(j) + 1;
        return h;
    }
    default:
        throw Unsupported("unsupported: no closed form for heights of " + d.name());
    }
}

Rational SparseRowMatrix::entry(const VertexKey& v, const VertexKey& w) const
{
    auto it = rows.find(v);
    if (it == rows.end()) return 0;
    Rational s = 0;
    for (auto& [key, val] : it->second)
        if (key == w) s += val;
    return s;
}

Rational SparseRowMatrix::row_sum(const VertexKey& v) const
{
    auto it = rows.find(v);
    Rational s = 0;
    if (it != rows.end())
        for (auto& p : it->second) s += p.second;
    return s;
}

SparseRowMatrix incidence_matrix(const Diagram& d, int n, const std::vector<VertexKey>& targets)
{
    SparseRowMatrix F;
    F.source_level = n;
    F.target_level = n + 1;
    for (auto& v : targets) {
        auto& row = F.rows[v];
        for (auto& e : d.predecessors(n + 1, v)) row.emplace_back(e.source, Rational(e.mult));
    }
    return F;
}

SparseRowMatrix stochastic_matrix(const DiagramPtr& d, int n, const std::vector<VertexKey>& targets)
{
    HeightCache H(d);
    SparseRowMatrix F;
    F.source_level = n;
    F.target_level = n + 1;
    for (auto& v : targets) {
        Integer hv = H(n + 1, v);
        auto& row = F.rows[v];
        for (auto& e : d->predecessors(n + 1, v)) {
            Rational f(e.mult * H(n, e.source), hv);
            f.canonicalize();
            row.emplace_back(e.source, f);
        }
    }
    return F;
}

SparseRowMatrix stochastic_matrix(const DiagramPtr& d, int n, long bound)
{
    return stochastic_matrix(d, n, vertex_window(*d, n + 1, bound).vertices);
}

std::map<VertexKey, Integer> product_row(const Diagram& d, int n, int m, const VertexKey& v)
{
    if (m < 0) throw DomainError("negative product length");
    std::map<VertexKey, Integer> cur{{v, Integer(1)}};
    for (int level = n + m; level > n; --level) {
        std::map<VertexKey, Integer> next;
        for (auto& [u, c] : cur)
            for (auto& e : d.predecessors(level, u)) next[e.source] += c * e.mult;
        cur = std::move(next);
    }
    return cur;
}

Integer bwk_product_entry(long k, int n, int m, long i, long j)
{
    if (m < 1 || j < k || j > k + n - 1 || i < k || i > k + n + m - 1) return 0;
    if (i <= k + n) return s_number(i - j + 1, m - 1);
    return s_number(i - j + 1, m - 1) - s_number(m + n + k - j + 1, i - k - n - 1);
}

std::optional<std::map<VertexKey, Integer>> product_row_closed_form(const Diagram& d, int n, int m, const VertexKey& v)
{
    if (m < 1) return std::nullopt;
    std::map<VertexKey, Integer> row;
    switch (d.family()) {
    case Family::Binfty:
        if (n < 1) return std::nullopt;
        for (long j = 1; j <= v.index; ++j) row[VertexKey::at(j)] = s_number(v.index - j + 1, m - 1);
        return row;
    case Family::PascalN:
    case Family::PascalZ:
    case Family::PascalK: {
        // Sub-multisets s <= v of total n; g' = m! / prod (t_i - s_i)!.
        std::vector<std::pair<long, long>> cur;
        const auto& sup = v.support;
        std::function<void(std::size_t, long)> rec = [&](std::size_t idx, long left) {
            if (idx == sup.size()) {
                if (left != 0) return;
                VertexKey s = VertexKey::multiset(cur);
                Integer g = factorial(m);
                for (auto& [c, t] : sup) g /= factorial(t - s.mult(c));
                row[s] = g;
                return;
            }
            for (long take = std::min(left, sup[idx].second); take >= 0; --take) {
                cur.emplace_back(sup[idx].first, take);
                rec(idx + 1, left - take);
                cur.pop_back();
            }
        };
        rec(0, n);
        return row;
    }
    case Family::Sub: {
        auto* sub = dynamic_cast<const Subdiagram*>(&d);
        if (!sub || sub->sub_spec().tag != "binfty-vertex" || sub->ambient().family() != Family::Binfty)
            return std::nullopt;
        long k = sub->sub_spec().k;
        for (long j = k; j <= k + n - 1; ++j) {
            Integer g = bwk_product_entry(k, n, m, v.index, j);
            if (g != 0) row[VertexKey::at(j)] = g;
        }
        return row;
    }
    default:
        return std::nullopt;
    }
}

namespace {

std::map<VertexKey, Integer> fast_row(const Diagram& d, int n, int m, const VertexKey& v)
{
    if (auto r = product_row_closed_form(d, n, m, v)) return *r;
    return product_row(d, n, m, v);
}

} // namespace

ProductPair product_matrices(const DiagramPtr& d, int n, int m, const std::vector<VertexKey>& targets)
{
    HeightCache H(d);
    ProductPair out;
    out.g_prime.source_level = out.g.source_level = n;
    out.g_prime.target_level = out.g.target_level = n + m;
    for (auto& v : targets) {
        Integer hv = H(n + m, v);
        auto& rp = out.g_prime.rows[v];
        auto& rg = out.g.rows[v];
        for (auto& [w, c] : fast_row(*d, n, m, v)) {
            if (c == 0) continue;
            rp.emplace_back(w, Rational(c));
            Rational g(c * H(n, w), hv);
            g.canonicalize();
            rg.emplace_back(w, g);
        }
    }
    return out;
}

ProductPair product_matrices(const DiagramPtr& d, int n, int m, long bound)
{
    return product_matrices(d, n, m, vertex_window(*d, n + m, bound).vertices);
}

Integer count_paths(const Diagram& d, int n, const VertexKey& w, int m, const VertexKey& v)
{
    if (m == 0) return v == w ? 1 : 0;
    Integer total = 0;
    for (auto& e : d.predecessors(n + m, v))
        for (Integer slot = 0; slot < e.mult; ++slot) total += count_paths(d, n, w, m - 1, e.source);
    return total;
}

Rational SimplexVector::total() const
{
    Rational s = 0;
    for (auto& e : entries) s += e.value;
    return s;
}

Rational SimplexVector::at(const VertexKey& v) const
{
    for (auto& e : entries)
        if (e.key == v) return e.value;
    return 0;
}

void SimplexVector::sort_by_rank()
{
    std::sort(entries.begin(), entries.end(), [](const SimplexEntry& a, const SimplexEntry& b) { return a.rank < b.rank; });
}

SimplexVector make_simplex(const Diagram& d, int level, const std::map<VertexKey, Rational>& values)
{
    SimplexVector x;
    x.level = level;
    for (auto& [k, v] : values) {
        if (v < 0) throw DomainError("negative simplex entry at " + k.str());
        x.entries.push_back({k, d.rank(level, k), v});
    }
    x.sort_by_rank();
    if (x.total() > 1) throw DomainError("simplex vector with total mass above 1");
    return x;
}

SimplexVector basis_vector(const Diagram& d, int level, const VertexKey& v)
{
    return make_simplex(d, level, {{v, Rational(1)}});
}

namespace {

struct Merged {
    long rank;
    Rational x, y;
};

std::vector<Merged> merge(const SimplexVector& x, const SimplexVector& y)
{
    if (x.level != y.level) throw DomainError("simplex vectors live on different levels");
    std::map<VertexKey, Merged> m;
    for (auto& e : x.entries) m[e.key] = {e.rank, e.value, 0};
    for (auto& e : y.entries) {
        auto it = m.find(e.key);
        if (it == m.end()) {
            m[e.key] = {e.rank, 0, e.value};
        } else {
            if (it->second.rank != e.rank) throw DomainError("mismatched enumeration for vertex " + e.key.str());
            it->second.y = e.value;
        }
    }
    std::vector<Merged> out;
    for (auto& [k, v] : m) out.push_back(v);
    return out;
}

} // namespace

Rational simplex_distance(const SimplexVector& x, const SimplexVector& y)
{
    Rational d = 0;
    for (auto& e : merge(x, y)) {
        if (e.rank < 1) throw DomainError("enumeration ranks must be positive");
        Rational diff = abs(e.x - e.y);
        if (diff != 0) d += diff / Rational(power(Integer(2), static_cast<unsigned long>(e.rank)));
    }
    return d;
}

double simplex_distance_approx(const SimplexVector& x, const SimplexVector& y, long cutoff_rank)
{
    double d = 0;
    for (auto& e : merge(x, y)) {
        if (e.rank > cutoff_rank) continue;
        d += std::ldexp(std::fabs(to_double(e.x - e.y)), static_cast<int>(-e.rank));
    }
    return d;
}

ContinuityReport continuity_probe(const Diagram& d, const SparseRowMatrix& F, long tail_start, long horizon)
{
    ContinuityReport rep;
    for (auto& [v, row] : F.rows) {
        long r = d.rank(F.target_level, v);
        if (r < tail_start || r > horizon) continue;
        Rational norm = 0;
        for (auto& [w, f] : row) {
            long a = d.rank(F.source_level, w);
            norm += f / Rational(power(Integer(2), static_cast<unsigned long>(a)));
        }
        rep.norms.emplace_back(r, norm);
    }
    std::sort(rep.norms.begin(), rep.norms.end(), [](auto& a, auto& b) { return a.first < b.first; });
    rep.sup = 0;
    rep.first_half_max = 0;
    rep.second_half_max = 0;
    std::size_t half = rep.norms.size() / 2;
    for (std::size_t i = 0; i < rep.norms.size(); ++i) {
        auto& n = rep.norms[i].second;
        if (n > rep.sup) rep.sup = n;
        auto& slot = i < half ? rep.first_half_max : rep.second_half_max;
        if (n > slot) slot = n;
    }
    rep.decaying = rep.norms.size() >= 2 && rep.second_half_max * 4 <= rep.first_half_max &&
                   rep.norms.back().second < rep.norms.front().second;
    rep.note = "certificate over ranks [" + std::to_string(tail_start) + ", " + std::to_string(horizon) +
               "] only; the continuity criterion is a limit statement";
    return rep;
}

} // namespace bratteli
