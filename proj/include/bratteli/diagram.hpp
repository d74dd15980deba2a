#ifndef BRATTELI_DIAGRAM_HPP
#define BRATTELI_DIAGRAM_HPP

#include "bratteli/numeric.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bratteli {

// Level-local vertex identity: an integer index, or a finitely supported
// multiplicity vector stored as (coordinate, multiplicity) pairs.
struct VertexKey {
    bool pascal = false;
    long index = 0;
    std::vector<std::pair<long, long>> support;

    static VertexKey at(long i);
    static VertexKey multiset(std::vector<std::pair<long, long>> pairs);
    static VertexKey concentrated(long coord, long mult);

    long total() const;
    long mult(long coord) const;
    long max_coord() const;
    long min_coord() const;
    VertexKey plus_unit(long coord) const;
    VertexKey minus_unit(long coord) const;
    std::string str() const;

    auto operator<=>(const VertexKey&) const = default;
    bool operator==(const VertexKey&) const = default;
};

enum class Family { PascalN, PascalZ, PascalK, BoundedFinite, BoundedGeneralized, OdometerIO, Binfty, Custom, Sub };

std::string family_name(Family f);
Family parse_family(const std::string& s);

// a_n for the odometer family: constant c, geometric base^(n+shift),
// polynomial (n+shift)^exponent, or an explicit list whose last entry repeats.
// A nonempty per_vertex list makes the rule stationary per odometer i instead.
struct OdometerRule {
    enum class Kind { Constant, Geometric, Polynomial, Explicit } kind = Kind::Constant;
    long value = 2;
    long base = 2;
    long exponent = 2;
    long shift = 1;
    std::vector<long> values;
    std::vector<long> per_vertex;

    Integer at(long n, long i = 1) const;
    std::string describe() const;
    static OdometerRule parse(const std::string& s);
};

struct CustomRows {
    std::vector<long> level0;
    // rows[n-1][target] = list of (source, multiplicity) between levels n-1 and n
    std::vector<std::map<long, std::vector<std::pair<long, long>>>> rows;
};

struct DiagramSpec {
    Family family = Family::Binfty;
    long k = 1;
    OdometerRule odometer;
    CustomRows custom;
    long bound = 16;
    std::vector<VertexKey> seed;
};

struct Edge {
    VertexKey source;
    Integer mult;
};

struct LevelWindow {
    int level = 0;
    std::vector<VertexKey> vertices;
    std::vector<long> ranks;
};

class Diagram {
public:
    virtual ~Diagram() = default;
    virtual Family family() const = 0;
    virtual std::string name() const = 0;
    virtual int base_level() const { return 0; }
    virtual bool contains(int level, const VertexKey& v) const = 0;
    // Incoming edges of v in V_level from V_{level-1}.
    virtual std::vector<Edge> predecessors(int level, const VertexKey& v) const = 0;
    // Vertices of V_{level+1} joined to w, restricted to the truncation bound.
    virtual std::vector<VertexKey> successors(int level, const VertexKey& w, long bound) const = 0;
    // True when every successor of w is returned by successors() for this bound.
    virtual bool successors_closed(int level, const VertexKey& w, long bound) const = 0;
    virtual std::vector<VertexKey> window(int level, long bound) const = 0;
    // Enumeration a(v) used by the simplex metric.
    virtual long rank(int level, const VertexKey& v) const = 0;
    virtual const DiagramSpec& spec() const = 0;

    Integer multiplicity(int level, const VertexKey& v, const VertexKey& w) const;
};

using DiagramPtr = std::shared_ptr<const Diagram>;

DiagramPtr build_diagram(const DiagramSpec& spec);
LevelWindow vertex_window(const Diagram& d, int level, long bound);

// Pascal helpers shared with other modules.
long zigzag_rank(long c);
long zigzag_coord(long r);
std::vector<long> pascal_coordinates(Family f, long bound, long k);
std::vector<VertexKey> multisets_over(const std::vector<long>& coords, long n);
long pascal_rank(const VertexKey& v, Family f);

struct SubdiagramSpec {
    enum class Kind { Vertex, Edge } kind = Kind::Vertex;
    std::string label;
    // Recognized shape ("binfty-vertex", "binfty-pascal-edge", ...) and its parameter.
    std::string tag;
    long k = 0;
    int first_level = 0;
    std::function<std::vector<VertexKey>(int)> members;
    // Retained edge count between w in W_{level-1} and v in W_level (edge kind).
    std::function<Integer(int, const VertexKey&, const VertexKey&, const Integer&)> retained;

    static SubdiagramSpec binfty_vertex(long k);
    static SubdiagramSpec binfty_pascal_edge(long k);
    static SubdiagramSpec pascal_coordinates(std::vector<long> coords);
    static SubdiagramSpec odometer_single(long i);
};

class Subdiagram : public Diagram {
public:
    Subdiagram(DiagramPtr ambient, SubdiagramSpec spec);
    Family family() const override { return Family::Sub; }
    std::string name() const override;
    int base_level() const override { return sub_.first_level; }
    bool contains(int level, const VertexKey& v) const override;
    std::vector<Edge> predecessors(int level, const VertexKey& v) const override;
    std::vector<VertexKey> successors(int level, const VertexKey& w, long bound) const override;
    bool successors_closed(int, const VertexKey&, long) const override { return true; }
    std::vector<VertexKey> window(int level, long bound) const override;
    long rank(int level, const VertexKey& v) const override;
    const DiagramSpec& spec() const override { return ambient_->spec(); }

    const Diagram& ambient() const { return *ambient_; }
    DiagramPtr ambient_ptr() const { return ambient_; }
    const SubdiagramSpec& sub_spec() const { return sub_; }
    std::vector<VertexKey> members(int level) const;
    // Retained count for an ambient edge (w -> v); zero if either end lies outside W.
    Integer retained(int level, const VertexKey& v, const VertexKey& w, const Integer& ambient_mult) const;

private:
    DiagramPtr ambient_;
    SubdiagramSpec sub_;
};

std::shared_ptr<const Subdiagram> build_subdiagram(DiagramPtr ambient, SubdiagramSpec spec);

} // namespace bratteli

#endif
