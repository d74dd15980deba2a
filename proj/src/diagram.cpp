#include "bratteli/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace bratteli {

VertexKey VertexKey::at(long i)
{
    VertexKey v;
    v.index = i;
    return v;
}

VertexKey VertexKey::multiset(std::vector<std::pair<long, long>> pairs)
{
    std::map<long, long> acc;
    for (auto [c, m] : pairs) {
        if (m < 0) throw DomainError("negative multiplicity in Pascal vertex");
        acc[c] += m;
    }
    VertexKey v;
    v.pascal = true;
    for (auto [c, m] : acc)
        if (m > 0) v.support.emplace_back(c, m);
    return v;
}

VertexKey VertexKey::concentrated(long coord, long mult)
{
    if (mult <= 0) return multiset({});
    return multiset({{coord, mult}});
}

long VertexKey::total() const
{
    long t = 0;
    for (auto& p : support) t += p.second;
    return t;
}

long VertexKey::mult(long coord) const
{
    for (auto& p : support)
        if (p.first == coord) return p.second;
    return 0;
}

long VertexKey::max_coord() const
{
    if (support.empty()) throw DomainError("empty Pascal vertex has no coordinates");
    return support.back().first;
}

long VertexKey::min_coord() const
{
    if (support.empty()) throw DomainError("empty Pascal vertex has no coordinates");
    return support.front().first;
}

VertexKey VertexKey::plus_unit(long coord) const
{
    auto pairs = support;
    pairs.emplace_back(coord, 1);
    return multiset(std::move(pairs));
}

VertexKey VertexKey::minus_unit(long coord) const
{
    auto pairs = support;
    pairs.emplace_back(coord, -1);
    std::map<long, long> acc;
    for (auto [c, m] : pairs) acc[c] += m;
    VertexKey v;
    v.pascal = true;
    for (auto [c, m] : acc) {
        if (m < 0) throw DomainError("coordinate " + std::to_string(coord) + " absent from " + str());
        if (m > 0) v.support.emplace_back(c, m);
    }
    return v;
}

std::string VertexKey::str() const
{
    if (!pascal) return std::to_string(index);
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i) os << ',';
        os << '[' << support[i].first << ',' << support[i].second << ']';
    }
    os << ']';
    return os.str();
}

std::string family_name(Family f)
{
    switch (f) {
    case Family::PascalN: return "pascal-n";
    case Family::PascalZ: return "pascal-z";
    case Family::PascalK: return "pascal-k";
    case Family::BoundedFinite: return "bk-finite";
    case Family::BoundedGeneralized: return "bk-generalized";
    case Family::OdometerIO: return "odometer";
    case Family::Binfty: return "binfty";
    case Family::Custom: return "custom";
    case Family::Sub: return "subdiagram";
    }
    return "unknown";
}

Family parse_family(const std::string& s)
{
    static const std::map<std::string, Family> names = {
        {"pascal", Family::PascalN},        {"pascal-n", Family::PascalN},  {"pascaln", Family::PascalN},
        {"pascal-z", Family::PascalZ},      {"pascalz", Family::PascalZ},   {"pascal-k", Family::PascalK},
        {"pascalk", Family::PascalK},       {"bk-finite", Family::BoundedFinite},
        {"bounded-finite", Family::BoundedFinite}, {"bk-generalized", Family::BoundedGeneralized},
        {"bounded-generalized", Family::BoundedGeneralized}, {"odometer", Family::OdometerIO},
        {"bio", Family::OdometerIO},        {"binfty", Family::Binfty},     {"custom", Family::Custom},
    };
    auto it = names.find(s);
    if (it == names.end()) throw DomainError("unknown family '" + s + "'");
    return it->second;
}

Integer OdometerRule::at(long n, long i) const
{
    if (!per_vertex.empty()) {
        std::size_t idx = static_cast<std::size_t>(std::max<long>(0, i - 1));
        return per_vertex[std::min(idx, per_vertex.size() - 1)];
    }
    switch (kind) {
    case Kind::Constant: return value;
    case Kind::Geometric: return power(Integer(base), static_cast<unsigned long>(n + shift));
    case Kind::Polynomial: return power(Integer(n + shift), static_cast<unsigned long>(exponent));
    case Kind::Explicit:
        if (values.empty()) throw DomainError("explicit odometer rule without values");
        return values[std::min<std::size_t>(static_cast<std::size_t>(n), values.size() - 1)];
    }
    return value;
}

std::string OdometerRule::describe() const
{
    std::ostringstream os;
    if (!per_vertex.empty()) {
        os << "stationary:";
        for (std::size_t i = 0; i < per_vertex.size(); ++i) os << (i ? "," : "") << per_vertex[i];
        return os.str();
    }
    switch (kind) {
    case Kind::Constant: os << "const:" << value; break;
    case Kind::Geometric: os << "geometric:" << base << ":" << shift; break;
    case Kind::Polynomial: os << "poly:" << exponent << ":" << shift; break;
    case Kind::Explicit:
        os << "list:";
        for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
        break;
    }
    return os.str();
}

namespace {

std::vector<long> split_longs(const std::string& s, char sep)
{
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            out.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw DomainError("malformed integer '" + item + "'");
        }
    }
    return out;
}

} // namespace

OdometerRule OdometerRule::parse(const std::string& s)
{
    OdometerRule r;
    auto colon = s.find(':');
    std::string head = s.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto parts = rest.empty() ? std::vector<long>{} : split_longs(rest, head == "list" || head == "stationary" ? ',' : ':');
    if (head == "const") {
        r.kind = Kind::Constant;
        r.value = parts.empty() ? 2 : parts[0];
    } else if (head == "pow2") {
        r.kind = Kind::Geometric;
        r.base = 2;
        r.shift = 1;
    } else if (head == "geometric") {
        r.kind = Kind::Geometric;
        r.base = parts.size() > 0 ? parts[0] : 2;
        r.shift = parts.size() > 1 ? parts[1] : 1;
    } else if (head == "square") {
        r.kind = Kind::Polynomial;
        r.exponent = 2;
        r.shift = 2;
    } else if (head == "poly") {
        r.kind = Kind::Polynomial;
        r.exponent = parts.size() > 0 ? parts[0] : 2;
        r.shift = parts.size() > 1 ? parts[1] : 2;
    } else if (head == "list") {
        r.kind = Kind::Explicit;
        r.values = parts;
    } else if (head == "stationary") {
        r.per_vertex = parts;
    } else {
        throw DomainError("unknown odometer rule '" + s + "'");
    }
    return r;
}

long zigzag_rank(long c) { return c > 0 ? 2 * c : -2 * c + 1; }

long zigzag_coord(long r) { return r % 2 == 0 ? r / 2 : -(r - 1) / 2; }

std::vector<long> pascal_coordinates(Family f, long bound, long k)
{
    std::vector<long> coords;
    if (f == Family::PascalK) {
        for (long c = 1; c <= k; ++c) coords.push_back(c);
    } else if (f == Family::PascalZ) {
        for (long r = 1; r <= bound; ++r) coords.push_back(zigzag_coord(r));
        std::sort(coords.begin(), coords.end());
    } else {
        for (long c = 1; c <= bound; ++c) coords.push_back(c);
    }
    return coords;
}

std::vector<VertexKey> multisets_over(const std::vector<long>& coords, long n)
{
    std::vector<VertexKey> out;
    std::vector<std::pair<long, long>> cur;
    std::function<void(std::size_t, long)> rec = [&](std::size_t idx, long left) {
        if (left == 0) {
            out.push_back(VertexKey::multiset(cur));
            return;
        }
        if (idx == coords.size()) return;
        for (long m = left; m >= 0; --m) {
            if (m > 0) cur.emplace_back(coords[idx], m);
            rec(idx + 1, left - m);
            if (m > 0) cur.pop_back();
        }
    };
    rec(0, n);
    return out;
}

long pascal_rank(const VertexKey& v, Family f)
{
    long n = v.total();
    if (n == 0) return 1;
    std::vector<std::pair<long, long>> seq;
    for (auto [c, m] : v.support) seq.emplace_back(f == Family::PascalZ ? zigzag_rank(c) : c, m);
    std::sort(seq.begin(), seq.end());
    const long l = static_cast<long>(seq.size());
    const long R = seq.back().first;
    auto to_long = [](const Integer& z) { return z.get_si(); };
    // Fill k increasing ranks above `low` ending exactly at R with positive masses summing to mass.
    auto comp = [&](long k, long low, long mass) -> long {
        if (k <= 0 || mass < k || low >= R) return 0;
        if (k == 1) return 1;
        return to_long(binomial(R - low - 1, k - 1) * binomial(mass - 1, k - 1));
    };
    long count = to_long(binomial(n + R - 2, n));
    for (long s = 1; s < l; ++s) count += to_long(binomial(R - 1, s - 1) * binomial(n - 1, s - 1));
    long low = 0, mass = n;
    for (long p = 0; p + 1 < l; ++p) {
        long rp = seq[p].first, mp = seq[p].second, after = l - p - 1;
        for (long r2 = low + 1; r2 < rp; ++r2)
            for (long m2 = 1; m2 <= mass - after; ++m2) count += comp(after, r2, mass - m2);
        for (long m2 = 1; m2 < mp; ++m2) count += comp(after, rp, mass - m2);
        low = rp;
        mass -= mp;
    }
    return count + 1;
}

namespace {

class PascalDiagram : public Diagram {
public:
    explicit PascalDiagram(DiagramSpec s) : spec_(std::move(s)) {}
    Family family() const override { return spec_.family; }
    std::string name() const override
    {
        return spec_.family == Family::PascalK ? "pascal-k(" + std::to_string(spec_.k) + ")" : family_name(spec_.family);
    }
    bool valid_coord(long c) const
    {
        if (spec_.family == Family::PascalN) return c >= 1;
        if (spec_.family == Family::PascalK) return c >= 1 && c <= spec_.k;
        return true;
    }
    bool contains(int level, const VertexKey& v) const override
    {
        if (!v.pascal || v.total() != level) return false;
        for (auto& p : v.support)
            if (!valid_coord(p.first) || p.second < 1) return false;
        return true;
    }
    std::vector<Edge> predecessors(int level, const VertexKey& v) const override
    {
        if (level <= 0 || !contains(level, v)) return {};
        std::vector<Edge> out;
        for (auto& p : v.support) out.push_back({v.minus_unit(p.first), Integer(1)});
        return out;
    }
    std::vector<VertexKey> successors(int level, const VertexKey& w, long bound) const override
    {
        if (!contains(level, w)) return {};
        std::vector<VertexKey> out;
        for (long c : pascal_coordinates(spec_.family, bound, spec_.k)) out.push_back(w.plus_unit(c));
        return out;
    }
    bool successors_closed(int, const VertexKey&, long) const override { return spec_.family == Family::PascalK; }
    std::vector<VertexKey> window(int level, long bound) const override
    {
        return multisets_over(pascal_coordinates(spec_.family, bound, spec_.k), level);
    }
    long rank(int, const VertexKey& v) const override { return pascal_rank(v, spec_.family); }
    const DiagramSpec& spec() const override { return spec_; }

private:
    DiagramSpec spec_;
};

class BoundedDiagram : public Diagram {
public:
    explicit BoundedDiagram(DiagramSpec s) : spec_(std::move(s))
    {
        if (spec_.seed.empty()) spec_.seed.push_back(VertexKey::at(0));
    }
    bool finite() const { return spec_.family == Family::BoundedFinite; }
    Family family() const override { return spec_.family; }
    std::string name() const override { return family_name(spec_.family) + "(" + std::to_string(spec_.k) + ")"; }
    bool contains(int level, const VertexKey& v) const override
    {
        if (v.pascal) return false;
        return !finite() || std::labs(v.index) <= level * spec_.k;
    }
    std::vector<Edge> predecessors(int level, const VertexKey& v) const override
    {
        if (level <= 0 || !contains(level, v)) return {};
        std::vector<Edge> out;
        for (long w = v.index - spec_.k; w <= v.index + spec_.k; ++w)
            if (contains(level - 1, VertexKey::at(w))) out.push_back({VertexKey::at(w), Integer(1)});
        return out;
    }
    std::vector<VertexKey> successors(int level, const VertexKey& w, long bound) const override
    {
        std::vector<VertexKey> out;
        for (long v = w.index - spec_.k; v <= w.index + spec_.k; ++v)
            if (std::labs(v) <= bound && contains(level + 1, VertexKey::at(v))) out.push_back(VertexKey::at(v));
        return out;
    }
    bool successors_closed(int, const VertexKey& w, long bound) const override
    {
        return std::labs(w.index) + spec_.k <= bound;
    }
    std::vector<VertexKey> window(int level, long bound) const override
    {
        std::set<long> idx;
        for (auto& s : spec_.seed)
            for (long v = s.index - level * spec_.k; v <= s.index + level * spec_.k; ++v)
                if (std::labs(v) <= bound && contains(level, VertexKey::at(v))) idx.insert(v);
        std::vector<VertexKey> out;
        for (long v : idx) out.push_back(VertexKey::at(v));
        return out;
    }
    long rank(int, const VertexKey& v) const override { return zigzag_rank(v.index); }
    const DiagramSpec& spec() const override { return spec_; }

private:
    DiagramSpec spec_;
};

class OdometerDiagram : public Diagram {
public:
    explicit OdometerDiagram(DiagramSpec s) : spec_(std::move(s)) {}
    Family family() const override { return Family::OdometerIO; }
    std::string name() const override { return "odometer(" + spec_.odometer.describe() + ")"; }
    bool contains(int, const VertexKey& v) const override { return !v.pascal && v.index >= 1; }
    std::vector<Edge> predecessors(int level, const VertexKey& v) const override
    {
        if (level <= 0 || !contains(level, v)) return {};
        return {{v, spec_.odometer.at(level - 1, v.index)}, {VertexKey::at(v.index + 1), Integer(1)}};
    }
    std::vector<VertexKey> successors(int level, const VertexKey& w, long bound) const override
    {
        if (!contains(level, w)) return {};
        std::vector<VertexKey> out;
        if (w.index >= 2) out.push_back(VertexKey::at(w.index - 1));
        if (w.index <= bound) out.push_back(w);
        return out;
    }
    bool successors_closed(int, const VertexKey& w, long bound) const override { return w.index <= bound; }
    std::vector<VertexKey> window(int, long bound) const override
    {
        std::vector<VertexKey> out;
        for (long i = 1; i <= bound; ++i) out.push_back(VertexKey::at(i));
        return out;
    }
    long rank(int, const VertexKey& v) const override { return v.index; }
    const DiagramSpec& spec() const override { return spec_; }

private:
    DiagramSpec spec_;
};

class BinftyDiagram : public Diagram {
public:
    explicit BinftyDiagram(DiagramSpec s) : spec_(std::move(s)) {}
    Family family() const override { return Family::Binfty; }
    std::string name() const override { return "binfty"; }
    int base_level() const override { return 1; }
    bool contains(int level, const VertexKey& v) const override { return level >= 1 && !v.pascal && v.index >= 1; }
    std::vector<Edge> predecessors(int level, const VertexKey& v) const override
    {
        if (level <= 1 || !contains(level, v)) return {};
        std::vector<Edge> out;
        for (long j = 1; j <= v.index; ++j) out.push_back({VertexKey::at(j), Integer(1)});
        return out;
    }
    std::vector<VertexKey> successors(int level, const VertexKey& w, long bound) const override
    {
        std::vector<VertexKey> out;
        if (!contains(level, w)) return out;
        for (long i = w.index; i <= bound; ++i) out.push_back(VertexKey::at(i));
        return out;
    }
    bool successors_closed(int, const VertexKey&, long) const override { return false; }
    std::vector<VertexKey> window(int level, long bound) const override
    {
        std::vector<VertexKey> out;
        if (level < 1) return out;
        for (long i = 1; i <= bound; ++i) out.push_back(VertexKey::at(i));
        return out;
    }
    long rank(int, const VertexKey& v) const override { return v.index; }
    const DiagramSpec& spec() const override { return spec_; }

private:
    DiagramSpec spec_;
};

class CustomDiagram : public Diagram {
public:
    explicit CustomDiagram(DiagramSpec s) : spec_(std::move(s)) {}
    Family family() const override { return Family::Custom; }
    std::string name() const override { return "custom"; }
    int horizon() const { return static_cast<int>(spec_.custom.rows.size()); }
    bool contains(int level, const VertexKey& v) const override
    {
        if (v.pascal || level < 0) return false;
        if (level == 0)
            return std::find(spec_.custom.level0.begin(), spec_.custom.level0.end(), v.index) != spec_.custom.level0.end();
        if (level > horizon()) return false;
        return spec_.custom.rows[level - 1].count(v.index) > 0;
    }
    std::vector<Edge> predecessors(int level, const VertexKey& v) const override
    {
        if (level <= 0) return {};
        if (level > horizon())
            throw TruncationIncomplete("custom rows end at level " + std::to_string(horizon()), {v.str()});
        auto& rows = spec_.custom.rows[level - 1];
        auto it = rows.find(v.index);
        if (it == rows.end())
            throw TruncationIncomplete("vertex " + v.str() + " undeclared at level " + std::to_string(level), {v.str()});
        std::vector<Edge> out;
        for (auto [w, m] : it->second) out.push_back({VertexKey::at(w), Integer(m)});
        return out;
    }
    std::vector<VertexKey> successors(int level, const VertexKey& w, long) const override
    {
        std::vector<VertexKey> out;
        if (level + 1 > horizon()) return out;
        for (auto& [v, row] : spec_.custom.rows[level])
            for (auto [src, m] : row)
                if (src == w.index && m > 0) {
                    out.push_back(VertexKey::at(v));
                    break;
                }
        return out;
    }
    bool successors_closed(int level, const VertexKey&, long) const override { return level + 1 <= horizon(); }
    std::vector<VertexKey> window(int level, long) const override
    {
        std::vector<VertexKey> out;
        if (level == 0)
            for (long i : spec_.custom.level0) out.push_back(VertexKey::at(i));
        else if (level <= horizon())
            for (auto& [v, row] : spec_.custom.rows[level - 1]) out.push_back(VertexKey::at(v));
        else
            throw TruncationIncomplete("custom rows end at level " + std::to_string(horizon()), {});
        return out;
    }
    long rank(int, const VertexKey& v) const override { return zigzag_rank(v.index); }
    const DiagramSpec& spec() const override { return spec_; }

private:
    DiagramSpec spec_;
};

} // namespace

Integer Diagram::multiplicity(int level, const VertexKey& v, const VertexKey& w) const
{
    Integer m = 0;
    for (auto& e : predecessors(level, v))
        if (e.source == w) m += e.mult;
    return m;
}

DiagramPtr build_diagram(const DiagramSpec& spec)
{
    switch (spec.family) {
    case Family::PascalN:
    case Family::PascalZ:
        return std::make_shared<PascalDiagram>(spec);
    case Family::PascalK:
        if (spec.k < 1) throw DomainError("invalid parameter: k must be >= 1");
        return std::make_shared<PascalDiagram>(spec);
    case Family::BoundedFinite:
    case Family::BoundedGeneralized:
        if (spec.k < 1) throw DomainError("invalid parameter: k must be >= 1");
        return std::make_shared<BoundedDiagram>(spec);
    case Family::OdometerIO: {
        for (long v : spec.odometer.per_vertex)
            if (v < 2) throw DomainError("invalid parameter: odometer entries must be >= 2");
        for (long n = 0; n < 64; ++n)
            if (spec.odometer.at(n) < 2)
                throw DomainError("invalid parameter: odometer entry a_" + std::to_string(n) + " < 2");
        return std::make_shared<OdometerDiagram>(spec);
    }
    case Family::Binfty:
        return std::make_shared<BinftyDiagram>(spec);
    case Family::Custom:
        for (auto& level : spec.custom.rows)
            for (auto& [v, row] : level)
                for (auto [w, m] : row)
                    if (m < 0) throw DomainError("invalid parameter: negative multiplicity in custom row");
        return std::make_shared<CustomDiagram>(spec);
    case Family::Sub:
        break;
    }
    throw DomainError("build_diagram: use build_subdiagram for subdiagrams");
}

LevelWindow vertex_window(const Diagram& d, int level, long bound)
{
    LevelWindow w;
    w.level = level;
    auto verts = d.window(level, bound);
    std::vector<std::pair<long, VertexKey>> ranked;
    for (auto& v : verts) ranked.emplace_back(d.rank(level, v), v);
    std::sort(ranked.begin(), ranked.end());
    for (auto& [r, v] : ranked) {
        w.ranks.push_back(r);
        w.vertices.push_back(v);
    }
    return w;
}

SubdiagramSpec SubdiagramSpec::binfty_vertex(long k)
{
    if (k < 1) throw DomainError("invalid parameter: k must be >= 1");
    SubdiagramSpec s;
    s.kind = Kind::Vertex;
    s.label = "binfty-vertex(k=" + std::to_string(k) + ")";
    s.tag = "binfty-vertex";
    s.k = k;
    s.first_level = 1;
    s.members = [k](int n) {
        std::vector<VertexKey> out;
        for (long i = k; i <= k + n - 1; ++i) out.push_back(VertexKey::at(i));
        return out;
    };
    return s;
}

SubdiagramSpec SubdiagramSpec::binfty_pascal_edge(long k)
{
    SubdiagramSpec s = binfty_vertex(k);
    s.kind = Kind::Edge;
    s.label = "binfty-pascal-edge(k=" + std::to_string(k) + ")";
    s.tag = "binfty-pascal-edge";
    s.retained = [](int, const VertexKey& v, const VertexKey& w, const Integer&) {
        return Integer((w.index == v.index || w.index == v.index - 1) ? 1 : 0);
    };
    return s;
}

SubdiagramSpec SubdiagramSpec::pascal_coordinates(std::vector<long> coords)
{
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    if (coords.empty()) throw DomainError("empty coordinate set for Pascal subdiagram");
    SubdiagramSpec s;
    s.kind = Kind::Vertex;
    std::ostringstream os;
    os << "pascal-coordinates(";
    for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << coords[i];
    os << ")";
    s.label = os.str();
    s.tag = "pascal-coordinates";
    s.first_level = 0;
    s.members = [coords](int n) { return multisets_over(coords, n); };
    return s;
}

SubdiagramSpec SubdiagramSpec::odometer_single(long i)
{
    if (i < 1) throw DomainError("odometer vertex must be >= 1");
    SubdiagramSpec s;
    s.kind = Kind::Vertex;
    s.label = "odometer-single(i=" + std::to_string(i) + ")";
    s.tag = "odometer-single";
    s.k = i;
    s.first_level = 0;
    s.members = [i](int) { return std::vector<VertexKey>{VertexKey::at(i)}; };
    return s;
}

Subdiagram::Subdiagram(DiagramPtr ambient, SubdiagramSpec spec) : ambient_(std::move(ambient)), sub_(std::move(spec)) {}

std::string Subdiagram::name() const { return sub_.label + " in " + ambient_->name(); }

std::vector<VertexKey> Subdiagram::members(int level) const
{
    if (level < sub_.first_level) return {};
    return sub_.members(level);
}

bool Subdiagram::contains(int level, const VertexKey& v) const
{
    auto m = members(level);
    return std::find(m.begin(), m.end(), v) != m.end();
}

Integer Subdiagram::retained(int level, const VertexKey& v, const VertexKey& w, const Integer& ambient_mult) const
{
    if (!contains(level, v) || !contains(level - 1, w)) return 0;
    if (sub_.kind == SubdiagramSpec::Kind::Vertex) return ambient_mult;
    Integer r = sub_.retained(level, v, w, ambient_mult);
    return r > ambient_mult ? ambient_mult : r;
}

std::vector<Edge> Subdiagram::predecessors(int level, const VertexKey& v) const
{
    std::vector<Edge> out;
    if (level <= sub_.first_level || !contains(level, v)) return out;
    for (auto& e : ambient_->predecessors(level, v)) {
        Integer r = retained(level, v, e.source, e.mult);
        if (r > 0) out.push_back({e.source, r});
    }
    return out;
}

std::vector<VertexKey> Subdiagram::successors(int level, const VertexKey& w, long) const
{
    std::vector<VertexKey> out;
    for (auto& v : members(level + 1)) {
        Integer m = ambient_->multiplicity(level + 1, v, w);
        if (m > 0 && retained(level + 1, v, w, m) > 0) out.push_back(v);
    }
    return out;
}

std::vector<VertexKey> Subdiagram::window(int level, long) const { return members(level); }

long Subdiagram::rank(int level, const VertexKey& v) const { return ambient_->rank(level, v); }

std::shared_ptr<const Subdiagram> build_subdiagram(DiagramPtr ambient, SubdiagramSpec spec)
{
    if (!spec.members) throw DomainError("subdiagram without member rule");
    if (spec.kind == SubdiagramSpec::Kind::Edge && !spec.retained) throw DomainError("edge subdiagram without retained rule");
    auto sub = std::make_shared<Subdiagram>(std::move(ambient), std::move(spec));
    const int first = sub->base_level();
    for (int n = first; n < first + 8; ++n) {
        auto w = sub->members(n);
        if (w.empty()) throw DomainError("empty W_" + std::to_string(n) + " in subdiagram " + sub->name());
        for (auto& v : w)
            if (!sub->ambient().contains(n, v))
                throw DomainError("subdiagram vertex " + v.str() + " not in ambient level " + std::to_string(n));
        if (n > first && sub->sub_spec().kind == SubdiagramSpec::Kind::Edge)
            for (auto& v : w)
                for (auto& e : sub->ambient().predecessors(n, v))
                    if (sub->contains(n - 1, e.source) && sub->sub_spec().retained(n, v, e.source, e.mult) > e.mult)
                        throw DomainError("retained edge count exceeds ambient count at level " + std::to_string(n));
    }
    return sub;
}

} // namespace bratteli
