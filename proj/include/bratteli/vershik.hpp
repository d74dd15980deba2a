#ifndef BRATTELI_VERSHIK_HPP
#define BRATTELI_VERSHIK_HPP

#include "bratteli/diagram.hpp"

#include <functional>
#include <optional>

namespace bratteli {

// The prefix does not reach a non-extremal edge and the tail says nothing more.
struct DeepenPrefix : TruncationIncomplete {
    using TruncationIncomplete::TruncationIncomplete;
};

// The path is maximal (forward step) or minimal (inverse step).
struct ExtremalPathError : DomainError {
    using DomainError::DomainError;
};

struct InEdge {
    VertexKey source;
    long slot = 0;
    bool operator==(const InEdge&) const = default;
};

struct OrderSpec {
    enum class Kind { Natural, LeftToRight, RightToLeft, Alternating, CyclicBinfty, Custom } kind = Kind::Natural;
    // Custom: receives the in-edges of (level, v) in natural order and returns them sorted from minimal to maximal.
    std::function<std::vector<InEdge>(int, const VertexKey&, std::vector<InEdge>)> custom;

    std::string name() const;
    static OrderSpec parse(const std::string& s);
};

class OrderedDiagram {
public:
    OrderedDiagram(DiagramPtr d, OrderSpec order) : d_(std::move(d)), order_(std::move(order)) {}
    const Diagram& diagram() const { return *d_; }
    DiagramPtr diagram_ptr() const { return d_; }
    const OrderSpec& order() const { return order_; }
    // r^{-1}(v) from minimal to maximal.
    std::vector<InEdge> in_edges(int level, const VertexKey& v) const;
    bool is_max(int level, const VertexKey& target, const InEdge& e) const;
    bool is_min(int level, const VertexKey& target, const InEdge& e) const;

private:
    DiagramPtr d_;
    OrderSpec order_;
};

struct PathEdge {
    VertexKey source;
    VertexKey target;
    long slot = 0;
    bool operator==(const PathEdge&) const = default;
};

struct PathTail {
    enum class Kind { Unspecified, VerticalAt, DiagonalFrom, PascalConcentrating, PascalSpreading } kind = Kind::Unspecified;
    VertexKey vertex;     // VerticalAt, DiagonalFrom
    long slot = 0;        // slot used by vertical edges; -1 picks the last one
    long coordinate = 0;  // Pascal tails: coordinate being filled
    long filled = 0;      // PascalSpreading: units already added at coordinate
    long stride = 1;      // PascalSpreading: step to the next coordinate
    long count = 1;       // PascalSpreading: units per coordinate
    bool operator==(const PathTail&) const = default;
};

struct PathRep {
    int start = 0;
    std::vector<PathEdge> edges; // edges[j] joins level start+j to start+j+1
    PathTail tail;

    int end_level() const { return start + static_cast<int>(edges.size()); }
    VertexKey start_vertex() const;
    VertexKey end_vertex() const;
    std::string str() const;
    bool operator==(const PathRep&) const = default;
};

PathRep vertical_path(const OrderedDiagram& od, const VertexKey& v, int depth = 0, long slot = 0);
PathRep pascal_concentrating_path(int depth_prefix, long coordinate);

// Appends count edges generated by the tail.
PathRep materialize(const OrderedDiagram& od, const PathRep& x, int count);
// Keeps the first depth edges and drops the tail.
PathRep truncate(const PathRep& x, int depth);

// Minimal (maximal) path from the base level up to v at the given level.
PathRep minimal_path_to(const OrderedDiagram& od, int level, const VertexKey& v);
PathRep maximal_path_to(const OrderedDiagram& od, int level, const VertexKey& v);

PathRep vershik_step(const OrderedDiagram& od, const PathRep& x);
PathRep vershik_inverse_step(const OrderedDiagram& od, const PathRep& x);

enum class ExtremalClass { NotExtremal, MaxU, MaxC, MinU, MinC, Special };
std::string extremal_name(ExtremalClass c);

struct Classification {
    ExtremalClass cls = ExtremalClass::NotExtremal;
    bool maximal = false;
    bool minimal = false;
    bool definitive = true;
    std::string note;
};

Classification classify_extremal(const OrderedDiagram& od, const PathRep& x);

struct SuccPredOptions {
    std::vector<int> offsets{8, 16, 24};
    long bound = 40;
};

struct SuccPredReport {
    Classification cls;
    std::vector<PathRep> succ; // filled for maximal paths
    std::vector<PathRep> pred; // filled for minimal paths
    std::vector<std::string> notes;
};

// Limits of phi(y) over non-maximal y converging to x, restricted to vertical or concentrating candidates.
SuccPredReport succ_pred(const OrderedDiagram& od, const PathRep& x, const SuccPredOptions& opt = {});

struct OrbitReport {
    std::vector<PathRep> paths;
    std::map<std::string, long> visits; // cylinder prefix -> count
    int cylinder_level = 0;
    std::optional<std::string> error;
    int error_step = -1;
};

OrbitReport orbit(const OrderedDiagram& od, const PathRep& x, int steps, int cylinder_level);

// Every path of the given depth starting at the base level and ending at a window vertex.
std::vector<PathRep> enumerate_prefixes(const OrderedDiagram& od, int depth, long bound);

struct BijectionReport {
    int depth = 0;
    long paths = 0;
    long non_maximal = 0;
    long non_minimal = 0;
    bool injective = false;
    bool onto_non_minimal = false;
    bool inverse_identity = false;
    bool ok() const { return injective && onto_non_minimal && inverse_identity; }
};

BijectionReport bijection_check(const OrderedDiagram& od, int depth, long bound);

// Bits of an odometer prefix read from the lowest level, compared with +1 with carry.
struct OdometerReport {
    int depth = 0;
    long checked = 0;
    long mismatches = 0;
};

OdometerReport odometer_check(int depth);

// Depth-d prefixes of maximal (or minimal) paths of depth d + lookahead.
std::vector<PathRep> extremal_prefixes(const OrderedDiagram& od, int depth, long bound, bool maximal, int lookahead = 2);

// Pascal extremal path descriptor: coordinates in fill order with their counts.
struct PascalDescriptor {
    std::vector<long> positions;
    std::vector<long> counts;  // for concentrating paths the last count is ignored
    bool concentrating = true; // false: after positions, keep adding count units at each next coordinate
    long stride = 1;
    long count = 1;
    bool operator==(const PascalDescriptor&) const = default;
};

PathRep descriptor_path(const PascalDescriptor& d);

struct ReflectionResult {
    PascalDescriptor descriptor;
    bool clipped = false;
};

// i' = 2 i_1 - i_r on each coordinate; on the N-Pascal diagram values below 1 are clipped to 1.
ReflectionResult reflect_descriptor(const PascalDescriptor& d, Family f);

} // namespace bratteli

#endif
