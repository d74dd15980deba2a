#ifndef BRATTELI_LIMITS_HPP
#define BRATTELI_LIMITS_HPP

#include "bratteli/linalg.hpp"

namespace bratteli {

struct VertexSequence {
    enum class Kind { Constant, Linear, Pascal, Explicit } kind = Kind::Constant;
    long index = 1;
    Rational alpha = 1;
    long beta = 0;
    std::vector<std::pair<long, Rational>> d; // Pascal rule: coordinate -> d_i
    std::vector<VertexKey> explicit_list;     // explicit_list[m-1] = v_m

    static VertexSequence constant(long i);
    static VertexSequence linear(Rational alpha, long beta = 0);
    static VertexSequence pascal(std::vector<std::pair<long, Rational>> d);

    // v_m in V_{n+m}.
    VertexKey at(int n, int m) const;
    std::string describe() const;
};

// Largest-remainder apportionment of total units according to weights d.
VertexKey apportion(const std::vector<std::pair<long, Rational>>& d, long total);

// Row of G'^{(n,m)} normalized to a probability vector. Entries with rank above
// max_rank are dropped (the dropped mass is recorded in tail) when max_rank > 0.
SimplexVector normalized_row(const Diagram& d, int n, int m, const VertexKey& v, long max_rank = 0);

enum class Convergence { Yes, No, Inconclusive };
std::string convergence_name(Convergence c);

struct ConvergenceReport {
    Convergence status = Convergence::Inconclusive;
    SimplexVector limit;
    int m_used = 0;
    std::vector<double> distances;
    std::vector<Rational> weighted_sums; // sum_w y_w H_w^{(n)} = H_v^{(n+m)} / row sum
    std::vector<double> relative_changes;
    double tol = 0;
    int consecutive = 5;
    std::string note;
};

struct LimitOptions {
    int m_max = 200;
    double tol = 1e-6;
    int consecutive = 5;
    long max_rank = 64;
    int stride = 1;
};

ConvergenceReport limit_along(const DiagramPtr& d, int n, const VertexSequence& seq, const LimitOptions& opt);

// q_w = y_w H_w / sum_u y_u H_u; total overrides the window sum when supplied.
SimplexVector assemble_q(const SimplexVector& y, const HeightVector& H, std::optional<Rational> total = std::nullopt);

SimplexVector pascal_limit_vector(const Diagram& d, const std::vector<std::pair<long, Rational>>& dvec, int n);
SimplexVector binfty_limit_vector(const Diagram& d, const Rational& a, int n, long bound);
// Exact mass of q_{a,j}^{(n)} over j > J.
Rational binfty_limit_tail(const Rational& a, int n, long J);

// Finite convex combination of limit vectors on the same level.
SimplexVector mix(const std::vector<std::pair<Rational, SimplexVector>>& parts);

} // namespace bratteli

#endif
