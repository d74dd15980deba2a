#ifndef BRATTELI_SERIALIZE_HPP
#define BRATTELI_SERIALIZE_HPP

#include "bratteli/extension.hpp"
#include "bratteli/limits.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/vershik.hpp"

#include "json.hpp"

namespace bratteli {

using json = nlohmann::ordered_json;

// Exact mode emits "p/q" strings; float mode emits decimals at the given binary precision.
struct NumberFormat {
    bool exact = true;
    unsigned precision_bits = 128;
    json num(const Rational& q) const;
    json num(const Integer& z) const;
};

json to_json(const VertexKey& v);
VertexKey vertex_from_json(const json& j);

json to_json(const SimplexVector& x, const NumberFormat& nf = {});
json to_json(const HeightVector& h);
json to_json(const SparseRowMatrix& m, const NumberFormat& nf = {});
json to_json(const ConvergenceReport& r, const NumberFormat& nf = {});
json to_json(const InvarianceReport& r, const NumberFormat& nf = {});
json to_json(const ProbabilityReport& r, const NumberFormat& nf = {});
json to_json(const ExtensionReport& r, const NumberFormat& nf = {});
json to_json(const ExtendedCylinderReport& r, const NumberFormat& nf = {});
json to_json(const DecayReport& r, const NumberFormat& nf = {});
json to_json(const ContinuityReport& r, const NumberFormat& nf = {});
json to_json(const SampleReport& r);
json to_json(const DifferenceTable& t, const MonotonicityVerdict& v, const NumberFormat& nf = {});
json to_json(const PathRep& p);
PathRep path_from_json(const json& j);
json to_json(const Classification& c);
json to_json(const SuccPredReport& r);
json to_json(const OrbitReport& r);
json to_json(const BijectionReport& r);

// Spec files: {"family": ..., "params": {...}, "truncation": {"bound": B, "seed": [...]}}.
// Errors name the file and the offending field.
DiagramSpec spec_from_json(const json& j, const std::string& source = "spec");
DiagramSpec load_spec(const std::string& path);
json to_json(const DiagramSpec& s);

struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);

} // namespace bratteli

#endif
