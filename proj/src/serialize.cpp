#include "bratteli/serialize.hpp"

#include <fstream>
#include <sstream>

namespace bratteli {

json NumberFormat::num(const Rational& q) const
{
    if (exact) return to_string(q);
    return to_decimal(q, precision_bits, static_cast<int>(precision_bits * 30103 / 100000) + 1);
}

json NumberFormat::num(const Integer& z) const { return to_string(z); }

json to_json(const VertexKey& v)
{
    if (!v.pascal) return v.index;
    json o = json::object();
    for (auto& [c, m] : v.support) o[std::to_string(c)] = m;
    return o;
}

VertexKey vertex_from_json(const json& j)
{
    if (j.is_number_integer()) return VertexKey::at(j.get<long>());
    if (j.is_object()) {
        std::vector<std::pair<long, long>> pairs;
        for (auto& [k, m] : j.items()) {
            if (!m.is_number_integer()) throw DomainError("vertex multiplicity for coordinate " + k + " must be an integer");
            pairs.emplace_back(std::stol(k), m.get<long>());
        }
        return VertexKey::multiset(pairs);
    }
    throw DomainError("vertex must be an integer or a {coordinate: multiplicity} object");
}

json to_json(const SimplexVector& x, const NumberFormat& nf)
{
    json o;
    o["level"] = x.level;
    json e = json::array();
    for (auto& s : x.entries) e.push_back({{"vertex", to_json(s.key)}, {"rank", s.rank}, {"value", nf.num(s.value)}});
    o["entries"] = e;
    o["tail"] = x.tail ? nf.num(*x.tail) : json(nullptr);
    return o;
}

json to_json(const HeightVector& h)
{
    json o;
    o["level"] = h.level;
    json e = json::array();
    for (auto& [v, z] : h.values) e.push_back({{"vertex", to_json(v)}, {"height", to_string(z)}});
    o["heights"] = e;
    return o;
}

json to_json(const SparseRowMatrix& m, const NumberFormat& nf)
{
    json o;
    o["source_level"] = m.source_level;
    o["target_level"] = m.target_level;
    json rows = json::array();
    for (auto& [v, row] : m.rows) {
        json r = json::array();
        for (auto& [w, q] : row) r.push_back({{"source", to_json(w)}, {"value", nf.num(q)}});
        rows.push_back({{"target", to_json(v)}, {"row_sum", nf.num(m.row_sum(v))}, {"entries", r}});
    }
    o["rows"] = rows;
    return o;
}

json to_json(const ConvergenceReport& r, const NumberFormat& nf)
{
    json o;
    o["status"] = convergence_name(r.status);
    o["m_used"] = r.m_used;
    o["tol"] = r.tol;
    o["consecutive"] = r.consecutive;
    o["distances"] = r.distances;
    o["relative_changes"] = r.relative_changes;
    json w = json::array();
    for (auto& q : r.weighted_sums) w.push_back(nf.num(q));
    o["weighted_sums"] = w;
    o["limit"] = to_json(r.limit, nf);
    o["note"] = r.note;
    return o;
}

json to_json(const InvarianceReport& r, const NumberFormat& nf)
{
    json o;
    o["all_pass"] = r.all_pass();
    o["passed"] = r.passed;
    o["failed"] = r.failed;
    o["skipped"] = r.skipped;
    json recs = json::array();
    for (auto& x : r.records) {
        const char* s = x.status == InvarianceRecord::Status::Pass   ? "pass"
                        : x.status == InvarianceRecord::Status::Fail ? "fail"
                                                                     : "skipped";
        recs.push_back({{"level", x.level}, {"vertex", to_json(x.vertex)}, {"status", s}, {"lhs", nf.num(x.lhs)}, {"rhs", nf.num(x.rhs)}});
    }
    o["records"] = recs;
    return o;
}

json to_json(const ProbabilityReport& r, const NumberFormat& nf)
{
    json o;
    o["level"] = r.level;
    o["window_sum"] = nf.num(r.window_sum);
    o["tail"] = r.tail ? nf.num(*r.tail) : json(nullptr);
    o["total"] = nf.num(r.total);
    o["status"] = r.status == ProbabilityReport::Status::Exact     ? "exact"
                  : r.status == ProbabilityReport::Status::Bounded ? "bounded"
                                                                   : "inconclusive";
    o["deficit"] = nf.num(r.deficit);
    return o;
}

json to_json(const ExtensionReport& r, const NumberFormat& nf)
{
    json o;
    o["verdict"] = verdict_name(r.verdict);
    if (r.value) o["value"] = nf.num(*r.value);
    if (r.bound) o["bound"] = *r.bound;
    o["heuristic"] = r.heuristic;
    o["certified"] = r.certified;
    o["recognized"] = r.recognized;
    o["tail_ratio"] = r.tail_ratio;
    o["base_mass"] = nf.num(r.base_mass);
    json t = json::array(), s = json::array();
    for (auto& q : r.terms) t.push_back(nf.num(q));
    for (auto& q : r.partial_sums) s.push_back(nf.num(q));
    o["terms"] = t;
    o["partial_sums"] = s;
    o["ratios"] = r.ratios;
    o["trace"] = r.trace;
    return o;
}

json to_json(const ExtendedCylinderReport& r, const NumberFormat& nf)
{
    json o;
    o["status"] = convergence_name(r.status);
    o["value"] = nf.num(r.value);
    o["m_used"] = r.m_used;
    json v = json::array();
    for (auto& q : r.values) v.push_back(nf.num(q));
    o["values"] = v;
    return o;
}

json to_json(const DecayReport& r, const NumberFormat& nf)
{
    json o;
    o["k"] = r.k;
    o["nonincreasing"] = r.nonincreasing;
    o["first_violation"] = r.first_violation;
    json rows = json::array();
    for (std::size_t i = 0; i < r.values.size(); ++i)
        rows.push_back({{"m", i + 1}, {"coefficient", to_string(r.coefficients[i])}, {"ratio", nf.num(r.values[i])}});
    o["rows"] = rows;
    return o;
}

json to_json(const ContinuityReport& r, const NumberFormat& nf)
{
    json o;
    json n = json::array();
    for (auto& [rank, q] : r.norms) n.push_back({{"rank", rank}, {"norm", nf.num(q)}});
    o["norms"] = n;
    o["sup"] = nf.num(r.sup);
    o["first_half_max"] = nf.num(r.first_half_max);
    o["second_half_max"] = nf.num(r.second_half_max);
    o["decaying"] = r.decaying;
    o["note"] = r.note;
    return o;
}

json to_json(const SampleReport& r)
{
    json o;
    o["seed"] = r.seed;
    o["depth"] = r.depth;
    o["count"] = r.count;
    json rows = json::array();
    for (std::size_t i = 0; i < r.coords.size(); ++i)
        rows.push_back({{"coordinate", r.coords[i]}, {"d", r.d[i]}, {"mean", r.mean[i]}, {"std_error", r.std_error[i]}, {"z", r.z_score[i]}});
    o["coordinates"] = rows;
    if (!r.histogram.empty()) {
        json h = json::array();
        for (auto& [v, c] : r.histogram) h.push_back({{"vertex", to_json(v)}, {"count", c}});
        o["histogram"] = h;
    }
    return o;
}

json to_json(const DifferenceTable& t, const MonotonicityVerdict& v, const NumberFormat& nf)
{
    json o;
    o["monotone"] = v.monotone;
    if (!v.monotone) o["first_failure"] = {{"order", v.k}, {"index", v.i}};
    json rows = json::array();
    for (auto& r : t.rows) {
        json row = json::array();
        for (auto& q : r) row.push_back(nf.num(q));
        rows.push_back(row);
    }
    o["differences"] = rows;
    return o;
}

namespace {

const char* tail_name(PathTail::Kind k)
{
    switch (k) {
    case PathTail::Kind::Unspecified: return "unspecified";
    case PathTail::Kind::VerticalAt: return "vertical";
    case PathTail::Kind::DiagonalFrom: return "diagonal";
    case PathTail::Kind::PascalConcentrating: return "concentrating";
    case PathTail::Kind::PascalSpreading: return "spreading";
    }
    return "unspecified";
}

} // namespace

json to_json(const PathRep& p)
{
    json o;
    o["start"] = p.start;
    json e = json::array();
    for (auto& x : p.edges) e.push_back(json::array({to_json(x.source), to_json(x.target), x.slot}));
    o["edges"] = e;
    json t;
    t["kind"] = tail_name(p.tail.kind);
    switch (p.tail.kind) {
    case PathTail::Kind::VerticalAt:
        t["vertex"] = to_json(p.tail.vertex);
        t["slot"] = p.tail.slot;
        break;
    case PathTail::Kind::DiagonalFrom: t["vertex"] = to_json(p.tail.vertex); break;
    case PathTail::Kind::PascalConcentrating: t["coordinate"] = p.tail.coordinate; break;
    case PathTail::Kind::PascalSpreading:
        t["coordinate"] = p.tail.coordinate;
        t["filled"] = p.tail.filled;
        t["stride"] = p.tail.stride;
        t["count"] = p.tail.count;
        break;
    case PathTail::Kind::Unspecified: break;
    }
    o["tail"] = t;
    return o;
}

PathRep path_from_json(const json& j)
{
    if (!j.is_object()) throw DomainError("path must be a JSON object");
    PathRep p;
    p.start = j.value("start", 0);
    if (j.contains("edges")) {
        for (auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() < 2) throw DomainError("path edge must be [source, target, slot]");
            p.edges.push_back({vertex_from_json(e[0]), vertex_from_json(e[1]), e.size() > 2 ? e[2].get<long>() : 0});
        }
    }
    for (std::size_t i = 1; i < p.edges.size(); ++i)
        if (p.edges[i].source != p.edges[i - 1].target) throw DomainError("path edges do not compose at position " + std::to_string(i));
    if (j.contains("tail")) {
        auto& t = j.at("tail");
        std::string k = t.value("kind", "unspecified");
        if (k == "unspecified") p.tail.kind = PathTail::Kind::Unspecified;
        else if (k == "vertical") {
            p.tail.kind = PathTail::Kind::VerticalAt;
            p.tail.vertex = vertex_from_json(t.at("vertex"));
            p.tail.slot = t.value("slot", 0L);
        } else if (k == "diagonal") {
            p.tail.kind = PathTail::Kind::DiagonalFrom;
            p.tail.vertex = vertex_from_json(t.at("vertex"));
        } else if (k == "concentrating") {
            p.tail.kind = PathTail::Kind::PascalConcentrating;
            p.tail.coordinate = t.at("coordinate").get<long>();
        } else if (k == "spreading") {
            p.tail.kind = PathTail::Kind::PascalSpreading;
            p.tail.coordinate = t.at("coordinate").get<long>();
            p.tail.filled = t.value("filled", 0L);
            p.tail.stride = t.value("stride", 1L);
            p.tail.count = t.value("count", 1L);
        } else
            throw DomainError("unknown tail kind '" + k + "'");
    }
    return p;
}

json to_json(const Classification& c)
{
    return {{"class", extremal_name(c.cls)}, {"maximal", c.maximal}, {"minimal", c.minimal}, {"definitive", c.definitive}, {"note", c.note}};
}

json to_json(const SuccPredReport& r)
{
    json o;
    o["classification"] = to_json(r.cls);
    json s = json::array(), p = json::array();
    for (auto& x : r.succ) s.push_back(to_json(x));
    for (auto& x : r.pred) p.push_back(to_json(x));
    if (r.cls.maximal) o["succ"] = s;
    if (r.cls.minimal) o["pred"] = p;
    o["notes"] = r.notes;
    return o;
}

json to_json(const OrbitReport& r)
{
    json o;
    json ps = json::array();
    for (auto& p : r.paths) ps.push_back(to_json(p));
    o["paths"] = ps;
    o["cylinder_level"] = r.cylinder_level;
    json v = json::array();
    for (auto& [k, c] : r.visits) v.push_back({{"cylinder", k}, {"visits", c}});
    o["visits"] = v;
    if (r.error) {
        o["error"] = *r.error;
        o["error_step"] = r.error_step;
    }
    return o;
}

json to_json(const BijectionReport& r)
{
    return {{"depth", r.depth},           {"paths", r.paths},         {"non_maximal", r.non_maximal},
            {"non_minimal", r.non_minimal}, {"injective", r.injective}, {"onto_non_minimal", r.onto_non_minimal},
            {"inverse_identity", r.inverse_identity}, {"bijection", r.ok()}};
}

namespace {

[[noreturn]] void bad(const std::string& source, const std::string& field, const std::string& msg)
{
    throw DomainError(source + ": " + field + ": " + msg);
}

long get_long(const json& o, const std::string& key, const std::string& source, const std::string& path, long dflt)
{
    if (!o.contains(key)) return dflt;
    if (!o.at(key).is_number_integer()) bad(source, path + key, "expected an integer");
    return o.at(key).get<long>();
}

} // namespace

DiagramSpec spec_from_json(const json& j, const std::string& source)
{
    if (!j.is_object()) bad(source, "(root)", "expected an object");
    DiagramSpec s;
    if (!j.contains("family")) bad(source, "family", "missing");
    if (!j.at("family").is_string()) bad(source, "family", "expected a string");
    try {
        s.family = parse_family(j.at("family").get<std::string>());
    } catch (const DomainError& e) {
        bad(source, "family", e.what());
    }
    if (j.contains("params")) {
        auto& p = j.at("params");
        if (!p.is_object()) bad(source, "params", "expected an object");
        s.k = get_long(p, "k", source, "params.", s.k);
        if (p.contains("rule")) {
            if (!p.at("rule").is_string()) bad(source, "params.rule", "expected a string such as \"const:2\"");
            try {
                s.odometer = OdometerRule::parse(p.at("rule").get<std::string>());
            } catch (const DomainError& e) {
                bad(source, "params.rule", e.what());
            }
        }
        if (p.contains("level0")) {
            if (!p.at("level0").is_array()) bad(source, "params.level0", "expected an array of integers");
            for (std::size_t i = 0; i < p.at("level0").size(); ++i) {
                auto& x = p.at("level0")[i];
                if (!x.is_number_integer()) bad(source, "params.level0[" + std::to_string(i) + "]", "expected an integer");
                s.custom.level0.push_back(x.get<long>());
            }
        }
        if (p.contains("rows")) {
            if (!p.at("rows").is_array()) bad(source, "params.rows", "expected an array of objects");
            for (std::size_t n = 0; n < p.at("rows").size(); ++n) {
                auto& row = p.at("rows")[n];
                std::string rp = "params.rows[" + std::to_string(n) + "]";
                if (!row.is_object()) bad(source, rp, "expected an object mapping target to [[source, multiplicity], ...]");
                std::map<long, std::vector<std::pair<long, long>>> m;
                for (auto& [key, edges] : row.items()) {
                    long target;
                    try {
                        target = std::stol(key);
                    } catch (...) {
                        bad(source, rp + "." + key, "target key must be an integer");
                    }
                    if (!edges.is_array()) bad(source, rp + "." + key, "expected an array of [source, multiplicity]");
                    for (std::size_t e = 0; e < edges.size(); ++e) {
                        auto& pair = edges[e];
                        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
                            bad(source, rp + "." + key + "[" + std::to_string(e) + "]", "expected [source, multiplicity]");
                        if (pair[1].get<long>() < 1) bad(source, rp + "." + key + "[" + std::to_string(e) + "]", "multiplicity must be >= 1");
                        m[target].emplace_back(pair[0].get<long>(), pair[1].get<long>());
                    }
                }
                s.custom.rows.push_back(std::move(m));
            }
        }
    }
    if (j.contains("truncation")) {
        auto& t = j.at("truncation");
        if (!t.is_object()) bad(source, "truncation", "expected an object");
        s.bound = get_long(t, "bound", source, "truncation.", s.bound);
        if (s.bound < 1) bad(source, "truncation.bound", "must be >= 1");
        if (t.contains("seed")) {
            if (!t.at("seed").is_array()) bad(source, "truncation.seed", "expected an array of vertices");
            for (std::size_t i = 0; i < t.at("seed").size(); ++i) {
                try {
                    s.seed.push_back(vertex_from_json(t.at("seed")[i]));
                } catch (const DomainError& e) {
                    bad(source, "truncation.seed[" + std::to_string(i) + "]", e.what());
                }
            }
        }
    }
    if (s.family == Family::Custom && s.custom.level0.empty()) bad(source, "params.level0", "custom diagrams need level-0 vertices");
    return s;
}

DiagramSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError(path + ": cannot open spec file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError(path + ": (root): malformed JSON: " + e.what());
    }
    return spec_from_json(j, path);
}

json to_json(const DiagramSpec& s)
{
    json o;
    o["family"] = family_name(s.family);
    json p;
    p["k"] = s.k;
    if (s.family == Family::OdometerIO) p["rule"] = s.odometer.describe();
    if (s.family == Family::Custom) {
        p["level0"] = s.custom.level0;
        json rows = json::array();
        for (auto& r : s.custom.rows) {
            json row = json::object();
            for (auto& [t, edges] : r) {
                json e = json::array();
                for (auto& [src, m] : edges) e.push_back(json::array({src, m}));
                row[std::to_string(t)] = e;
            }
            rows.push_back(row);
        }
        p["rows"] = rows;
    }
    o["params"] = p;
    json seed = json::array();
    for (auto& v : s.seed) seed.push_back(to_json(v));
    o["truncation"] = {{"bound", s.bound}, {"seed", seed}};
    return o;
}

std::string to_csv(const Table& t)
{
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::ostringstream os;
    for (std::size_t i = 0; i < t.headers.size(); ++i) os << (i ? "," : "") << cell(t.headers[i]);
    os << "\n";
    for (auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
        os << "\n";
    }
    return os.str();
}

} // namespace bratteli
