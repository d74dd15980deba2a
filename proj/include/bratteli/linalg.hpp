#ifndef BRATTELI_LINALG_HPP
#define BRATTELI_LINALG_HPP

#include "bratteli/diagram.hpp"

#include <map>
#include <mutex>
#include <optional>

namespace bratteli {

struct HeightVector {
    int level = 0;
    std::map<VertexKey, Integer> values;
};

// Memoized H^{(n)}_v via the predecessor recursion; safe to share between threads.
class HeightCache {
public:
    explicit HeightCache(DiagramPtr d) : d_(std::move(d)) {}
    Integer operator()(int level, const VertexKey& v) const;
    const Diagram& diagram() const { return *d_; }

private:
    Integer compute(int level, const VertexKey& v) const;
    DiagramPtr d_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, VertexKey>, Integer> memo_;
};

HeightVector heights(const DiagramPtr& d, int n, long bound);
HeightVector heights(const DiagramPtr& d, int n, const std::vector<VertexKey>& vertices);

// Throws Unsupported for families without a known closed form.
Integer heights_closed_form(const Diagram& d, int n, const VertexKey& v);

// Coefficient of x^j in (x^{-k} + ... + x^{k})^m.
Integer bounded_coefficient(long k, long m, long j);

struct SparseRowMatrix {
    int source_level = 0;
    int target_level = 0;
    std::map<VertexKey, std::vector<std::pair<VertexKey, Rational>>> rows;

    Rational entry(const VertexKey& v, const VertexKey& w) const;
    Rational row_sum(const VertexKey& v) const;
};

// F'_n rows for the listed vertices of V_{n+1}.
SparseRowMatrix incidence_matrix(const Diagram& d, int n, const std::vector<VertexKey>& targets);
// F_n with f_vw = f'_vw H_w^{(n)} / H_v^{(n+1)}.
SparseRowMatrix stochastic_matrix(const DiagramPtr& d, int n, const std::vector<VertexKey>& targets);
SparseRowMatrix stochastic_matrix(const DiagramPtr& d, int n, long bound);

// g'^{(n,m)}_{v,*}: path counts from level n into v at level n+m.
std::map<VertexKey, Integer> product_row(const Diagram& d, int n, int m, const VertexKey& v);
// Closed forms (Pascal, B_infinity, B(W,k)) when available.
std::optional<std::map<VertexKey, Integer>> product_row_closed_form(const Diagram& d, int n, int m, const VertexKey& v);
// B(W,k) entry formula, with W_n = {k..k+n-1}.
Integer bwk_product_entry(long k, int n, int m, long i, long j);

struct ProductPair {
    SparseRowMatrix g_prime;
    SparseRowMatrix g;
};
ProductPair product_matrices(const DiagramPtr& d, int n, int m, const std::vector<VertexKey>& targets);
ProductPair product_matrices(const DiagramPtr& d, int n, int m, long bound);

// Brute-force path enumeration used as an oracle.
Integer count_paths(const Diagram& d, int n, const VertexKey& w, int m, const VertexKey& v);

struct SimplexEntry {
    VertexKey key;
    long rank = 0;
    Rational value;
};

struct SimplexVector {
    int level = 0;
    std::vector<SimplexEntry> entries;
    // Mass outside the listed entries, when known exactly.
    std::optional<Rational> tail;

    Rational total() const;
    Rational at(const VertexKey& v) const;
    void sort_by_rank();
};

SimplexVector make_simplex(const Diagram& d, int level, const std::map<VertexKey, Rational>& values);
SimplexVector basis_vector(const Diagram& d, int level, const VertexKey& v);

// Sum of 2^{-a(v)} |x_v - y_v|; rejects vectors on different levels or with conflicting ranks.
Rational simplex_distance(const SimplexVector& x, const SimplexVector& y);
// Same metric evaluated in floating point, ignoring ranks above cutoff_rank.
double simplex_distance_approx(const SimplexVector& x, const SimplexVector& y, long cutoff_rank = 200);

struct ContinuityReport {
    std::vector<std::pair<long, Rational>> norms; // (row rank, |g_v|)
    Rational sup;
    Rational first_half_max;
    Rational second_half_max;
    bool decaying = false;
    std::string note;
};

// Weighted row norms sum_w 2^{-a(w)} f_vw over rows with rank in [tail_start, horizon].
ContinuityReport continuity_probe(const Diagram& d, const SparseRowMatrix& F, long tail_start, long horizon);

} // namespace bratteli

#endif
