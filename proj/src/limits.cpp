#include "bratteli/limits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bratteli {

VertexSequence VertexSequence::constant(long i)
{
    VertexSequence s;
    s.kind = Kind::Constant;
    s.index = i;
    return s;
}

VertexSequence VertexSequence::linear(Rational alpha, long beta)
{
    if (alpha < 0) throw DomainError("linear vertex rule needs alpha >= 0");
    VertexSequence s;
    s.kind = Kind::Linear;
    s.alpha = alpha;
    s.beta = beta;
    return s;
}

VertexSequence VertexSequence::pascal(std::vector<std::pair<long, Rational>> d)
{
    Rational total = 0;
    for (auto& [c, w] : d) {
        if (w < 0) throw DomainError("negative weight in Pascal vertex rule");
        total += w;
    }
    if (total != 1) throw DomainError("Pascal vertex rule weights must sum to 1");
    VertexSequence s;
    s.kind = Kind::Pascal;
    s.d = std::move(d);
    return s;
}

VertexKey apportion(const std::vector<std::pair<long, Rational>>& d, long total)
{
    std::vector<std::pair<long, long>> units;
    std::vector<std::pair<Rational, std::size_t>> rema;
    long used = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        Rational share = d[i].second * total;
        Integer fl;
        mpz_fdiv_q(fl.get_mpz_t(), share.get_num_mpz_t(), share.get_den_mpz_t());
        units.emplace_back(d[i].first, fl.get_si());
        used += fl.get_si();
        rema.emplace_back(share - Rational(fl), i);
    }
    std::stable_sort(rema.begin(), rema.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; used < total && r < rema.size(); ++r, ++used) units[rema[r].second].second += 1;
    return VertexKey::multiset(units);
}

VertexKey VertexSequence::at(int n, int m) const
{
    switch (kind) {
    case Kind::Constant: return VertexKey::at(index);
    case Kind::Linear: {
        Rational x = alpha * m + Rational(1, 2);
        Integer fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return VertexKey::at(std::max<long>(1, fl.get_si() + beta));
    }
    case Kind::Pascal: return apportion(d, n + m);
    case Kind::Explicit:
        if (m < 1 || static_cast<std::size_t>(m) > explicit_list.size())
            throw DomainError("explicit vertex sequence exhausted at m = " + std::to_string(m));
        return explicit_list[static_cast<std::size_t>(m - 1)];
    }
    return VertexKey::at(index);
}

std::string VertexSequence::describe() const
{
    std::ostringstream os;
    switch (kind) {
    case Kind::Constant: os << "constant(" << index << ")"; break;
    case Kind::Linear: os << "linear(alpha=" << to_string(alpha) << ",beta=" << beta << ")"; break;
    case Kind::Pascal:
        os << "pascal(";
        for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i].first << ":" << to_string(d[i].second);
        os << ")";
        break;
    case Kind::Explicit: os << "explicit(" << explicit_list.size() << ")"; break;
    }
    return os.str();
}

SimplexVector normalized_row(const Diagram& d, int n, int m, const VertexKey& v, long max_rank)
{
    std::map<VertexKey, Integer> row;
    Integer total = 0;
    if (d.family() == Family::Binfty && n >= 1 && m >= 1 && max_rank > 0) {
        long top = std::min(v.index, max_rank);
        for (long j = 1; j <= top; ++j) row[VertexKey::at(j)] = s_number(v.index - j + 1, m - 1);
        total = s_number(v.index, m);
    } else {
        auto closed = product_row_closed_form(d, n, m, v);
        row = closed ? *closed : product_row(d, n, m, v);
        for (auto& [w, c] : row) total += c;
    }
    if (total == 0) throw DomainError("zero row for " + v.str() + " in G'(" + std::to_string(n) + "," + std::to_string(m) + ")");
    SimplexVector y;
    y.level = n;
    Rational kept = 0;
    for (auto& [w, c] : row) {
        if (c == 0) continue;
        long r = d.rank(n, w);
        if (max_rank > 0 && r > max_rank) continue;
        Rational val(c, total);
        val.canonicalize();
        kept += val;
        y.entries.push_back({w, r, val});
    }
    y.sort_by_rank();
    y.tail = Rational(1) - kept;
    return y;
}

std::string convergence_name(Convergence c)
{
    switch (c) {
    case Convergence::Yes: return "yes";
    case Convergence::No: return "no";
    case Convergence::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

Integer fast_height(const Diagram& d, const HeightCache& cache, int level, const VertexKey& v)
{
    if (d.family() == Family::Binfty || d.family() == Family::PascalN || d.family() == Family::PascalZ ||
        d.family() == Family::PascalK)
        return heights_closed_form(d, level, v);
    return cache(level, v);
}

} // namespace

ConvergenceReport limit_along(const DiagramPtr& d, int n, const VertexSequence& seq, const LimitOptions& opt)
{
    if (opt.m_max < 1 || opt.stride < 1) throw DomainError("m_max and stride must be positive");
    ConvergenceReport rep;
    rep.tol = opt.tol;
    rep.consecutive = opt.consecutive;
    HeightCache cache(d);
    SimplexVector prev;
    bool have_prev = false;
    int good = 0;
    for (int m = 1; m <= opt.m_max; m += opt.stride) {
        VertexKey v = seq.at(n, m);
        if (!d->contains(n + m, v))
            throw TruncationIncomplete("sequence vertex " + v.str() + " outside level " + std::to_string(n + m), {v.str()});
        SimplexVector y = normalized_row(*d, n, m, v, opt.max_rank);
        Integer hv = fast_height(*d, cache, n + m, v);
        Integer rowsum = 0;
        if (d->family() == Family::Binfty) {
            rowsum = s_number(v.index, m);
        } else {
            auto closed = product_row_closed_form(*d, n, m, v);
            for (auto& [w, c] : closed ? *closed : product_row(*d, n, m, v)) rowsum += c;
        }
        Rational wsum(hv, rowsum);
        wsum.canonicalize();
        rep.m_used = m;
        if (have_prev) {
            double dist = simplex_distance_approx(prev, y, opt.max_rank);
            double prev_w = to_double(rep.weighted_sums.back());
            double cur_w = to_double(wsum);
            double rel = std::fabs(cur_w - prev_w) / std::max(std::fabs(cur_w), 1e-300);
            rep.distances.push_back(dist);
            rep.relative_changes.push_back(rel);
            good = (dist < opt.tol && rel < opt.tol) ? good + 1 : 0;
        }
        rep.weighted_sums.push_back(wsum);
        prev = std::move(y);
        have_prev = true;
        if (good >= opt.consecutive) {
            rep.status = Convergence::Yes;
            break;
        }
        if (rep.weighted_sums.size() > 1 && to_double(wsum) > 1e12 * to_double(rep.weighted_sums.front())) {
            rep.status = Convergence::No;
            rep.note = "weighted sum grows without bound; the finiteness condition fails on the window";
            break;
        }
    }
    rep.limit = prev;
    if (rep.status == Convergence::Yes)
        rep.note = "numerical evidence: " + std::to_string(opt.consecutive) + " consecutive distances and weighted-sum changes below tol";
    else if (rep.status == Convergence::Inconclusive)
        rep.note = "m_max reached before the stopping rule fired";
    return rep;
}

SimplexVector assemble_q(const SimplexVector& y, const HeightVector& H, std::optional<Rational> total)
{
    if (y.level != H.level) throw DomainError("assemble_q: vector and heights on different levels");
    Rational denom = 0;
    std::vector<SimplexEntry> out;
    std::vector<std::string> missing;
    for (auto& e : y.entries) {
        auto it = H.values.find(e.key);
        if (it == H.values.end()) {
            missing.push_back(e.key.str());
            continue;
        }
        Rational w = e.value * Rational(it->second);
        denom += w;
        out.push_back({e.key, e.rank, w});
    }
    if (!missing.empty()) throw TruncationIncomplete("assemble_q: heights missing", missing);
    if (total) {
        if (*total < denom) throw DomainError("assemble_q: declared total below the window sum");
        denom = *total;
    }
    if (denom == 0) throw DomainError("assemble_q: zero denominator");
    SimplexVector q;
    q.level = y.level;
    Rational kept = 0;
    for (auto& e : out) {
        e.value /= denom;
        kept += e.value;
        q.entries.push_back(e);
    }
    q.tail = Rational(1) - kept;
    return q;
}

SimplexVector pascal_limit_vector(const Diagram& d, const std::vector<std::pair<long, Rational>>& dvec, int n)
{
    std::vector<long> coords;
    std::map<long, Rational> weight;
    Rational total = 0;
    for (auto& [c, w] : dvec) {
        if (w < 0) throw DomainError("negative entry in d");
        total += w;
        if (w > 0) {
            coords.push_back(c);
            weight[c] += w;
        }
    }
    if (total > 1) throw DomainError("d has total mass above 1");
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    std::map<VertexKey, Rational> vals;
    for (auto& s : multisets_over(coords, n)) {
        Rational q = Rational(heights_closed_form(d, n, s));
        for (auto& [c, m] : s.support) q *= power(weight[c], m);
        vals[s] = q;
    }
    SimplexVector out = make_simplex(d, n, vals);
    out.tail = Rational(1) - out.total();
    return out;
}

Rational binfty_limit_tail(const Rational& a, int n, long J)
{
    if (a < 0) throw DomainError("a must be >= 0");
    Rational s = Rational(1) / (a + 1);
    Rational t = Rational(1) - s;
    Rational sum = 0;
    for (long r = 0; r <= n - 1; ++r) sum += Rational(binomial(n + J - 1, r)) * power(s, r) * power(t, n + J - 1 - r);
    return sum;
}

SimplexVector binfty_limit_vector(const Diagram& d, const Rational& a, int n, long bound)
{
    if (a < 0) throw DomainError("a must be >= 0");
    if (n < 1) throw DomainError("B_infinity levels start at 1");
    std::map<VertexKey, Rational> vals;
    for (long j = 1; j <= bound; ++j) {
        Rational q = power(a, j - 1) / power(a + 1, n + j - 1) * Rational(binomial(n + j - 2, n - 1));
        if (q != 0) vals[VertexKey::at(j)] = q;
    }
    SimplexVector out = make_simplex(d, n, vals);
    out.tail = binfty_limit_tail(a, n, bound);
    return out;
}

SimplexVector mix(const std::vector<std::pair<Rational, SimplexVector>>& parts)
{
    if (parts.empty()) throw DomainError("empty mixture");
    Rational wsum = 0;
    std::map<VertexKey, SimplexEntry> acc;
    int level = parts.front().second.level;
    for (auto& [w, x] : parts) {
        if (w < 0) throw DomainError("negative mixture weight");
        if (x.level != level) throw DomainError("mixture of vectors on different levels");
        wsum += w;
        for (auto& e : x.entries) {
            auto it = acc.find(e.key);
            if (it == acc.end())
                acc[e.key] = {e.key, e.rank, w * e.value};
            else
                it->second.value += w * e.value;
        }
    }
    if (wsum > 1) throw DomainError("mixture weights exceed 1");
    SimplexVector out;
    out.level = level;
    for (auto& [k, e] : acc) out.entries.push_back(e);
    out.sort_by_rank();
    return out;
}

} // namespace bratteli
