#include "bratteli/vershik.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bratteli {

std::string OrderSpec::name() const
{
    switch (kind) {
    case Kind::Natural: return "natural";
    case Kind::LeftToRight: return "left-to-right";
    case Kind::RightToLeft: return "right-to-left";
    case Kind::Alternating: return "alternating";
    case Kind::CyclicBinfty: return "cyclic-binfty";
    case Kind::Custom: return "custom";
    }
    return "natural";
}

OrderSpec OrderSpec::parse(const std::string& s)
{
    OrderSpec o;
    if (s == "natural" || s == "natural-pascal") o.kind = Kind::Natural;
    else if (s == "left-to-right" || s == "ltr") o.kind = Kind::LeftToRight;
    else if (s == "right-to-left" || s == "rtl") o.kind = Kind::RightToLeft;
    else if (s == "alternating") o.kind = Kind::Alternating;
    else if (s == "cyclic-binfty" || s == "cyclic") o.kind = Kind::CyclicBinfty;
    else throw DomainError("unknown order '" + s + "'");
    return o;
}

std::vector<InEdge> OrderedDiagram::in_edges(int level, const VertexKey& v) const
{
    std::vector<InEdge> nat;
    for (auto& e : d_->predecessors(level, v)) {
        if (e.mult > 1000000) throw DomainError("edge multiplicity too large to order slot by slot");
        long m = e.mult.get_si();
        for (long s = 0; s < m; ++s) nat.push_back({e.source, s});
    }
    switch (order_.kind) {
    case OrderSpec::Kind::Natural:
    case OrderSpec::Kind::LeftToRight: return nat;
    case OrderSpec::Kind::RightToLeft: std::reverse(nat.begin(), nat.end()); return nat;
    case OrderSpec::Kind::Alternating:
        if (level % 2 == 0) std::reverse(nat.begin(), nat.end());
        return nat;
    case OrderSpec::Kind::CyclicBinfty: {
        if (v.pascal || v.index <= 2 || nat.empty()) return nat;
        std::vector<InEdge> out;
        for (auto& e : nat)
            if (e.source.index == v.index - 1) out.push_back(e);
        for (auto& e : nat)
            if (e.source.index != v.index - 1) out.push_back(e);
        return out;
    }
    case OrderSpec::Kind::Custom:
        if (!order_.custom) throw DomainError("custom order without a rule");
        {
            auto out = order_.custom(level, v, nat);
            if (out.size() != nat.size()) throw DomainError("custom order is not a permutation of r^{-1}(" + v.str() + ")");
            return out;
        }
    }
    return nat;
}

bool OrderedDiagram::is_max(int level, const VertexKey& target, const InEdge& e) const
{
    auto in = in_edges(level, target);
    return !in.empty() && in.back() == e;
}

bool OrderedDiagram::is_min(int level, const VertexKey& target, const InEdge& e) const
{
    auto in = in_edges(level, target);
    return !in.empty() && in.front() == e;
}

VertexKey PathRep::start_vertex() const
{
    if (!edges.empty()) return edges.front().source;
    if (tail.kind == PathTail::Kind::VerticalAt || tail.kind == PathTail::Kind::DiagonalFrom) return tail.vertex;
    if (tail.kind == PathTail::Kind::PascalConcentrating || tail.kind == PathTail::Kind::PascalSpreading)
        return VertexKey::multiset({});
    throw DomainError("empty path with no tail has no start vertex");
}

VertexKey PathRep::end_vertex() const
{
    if (!edges.empty()) return edges.back().target;
    return start_vertex();
}

std::string PathRep::str() const
{
    std::ostringstream os;
    os << "start=" << start << " [";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i) os << " ";
        os << edges[i].source.str() << "->" << edges[i].target.str();
        if (edges[i].slot) os << "#" << edges[i].slot;
    }
    os << "]";
    switch (tail.kind) {
    case PathTail::Kind::Unspecified: break;
    case PathTail::Kind::VerticalAt: os << " vertical(" << tail.vertex.str() << ")"; break;
    case PathTail::Kind::DiagonalFrom: os << " diagonal(" << tail.vertex.str() << ")"; break;
    case PathTail::Kind::PascalConcentrating: os << " concentrating(" << tail.coordinate << ")"; break;
    case PathTail::Kind::PascalSpreading:
        os << " spreading(" << tail.coordinate << "," << tail.filled << "," << tail.stride << "," << tail.count << ")";
        break;
    }
    return os.str();
}

PathRep vertical_path(const OrderedDiagram& od, const VertexKey& v, int depth, long slot)
{
    PathRep x;
    x.start = od.diagram().base_level();
    if (!od.diagram().contains(x.start, v)) throw DomainError("vertex " + v.str() + " not on the base level");
    x.tail.kind = PathTail::Kind::VerticalAt;
    x.tail.vertex = v;
    x.tail.slot = slot;
    return depth > 0 ? materialize(od, x, depth) : x;
}

PathRep pascal_concentrating_path(int depth_prefix, long coordinate)
{
    PathRep x;
    x.start = 0;
    VertexKey u = VertexKey::multiset({});
    for (int j = 0; j < depth_prefix; ++j) {
        VertexKey t = u.plus_unit(coordinate);
        x.edges.push_back({u, t, 0});
        u = t;
    }
    x.tail.kind = PathTail::Kind::PascalConcentrating;
    x.tail.coordinate = coordinate;
    return x;
}

PathRep materialize(const OrderedDiagram& od, const PathRep& x, int count)
{
    PathRep y = x;
    const Diagram& d = od.diagram();
    for (int c = 0; c < count; ++c) {
        int L = y.end_level();
        VertexKey u = y.end_vertex();
        VertexKey t;
        long slot = 0;
        switch (y.tail.kind) {
        case PathTail::Kind::Unspecified:
            throw DeepenPrefix("deepen-prefix: the tail is unspecified beyond level " + std::to_string(L));
        case PathTail::Kind::VerticalAt:
            if (u != y.tail.vertex) throw DomainError("vertical tail does not continue the prefix");
            t = u;
            slot = y.tail.slot;
            if (slot < 0) slot = d.multiplicity(L + 1, t, u).get_si() - 1;
            break;
        case PathTail::Kind::DiagonalFrom:
            if (u.pascal) throw DomainError("diagonal tail needs integer vertices");
            t = VertexKey::at(u.index + 1);
            break;
        case PathTail::Kind::PascalConcentrating: t = u.plus_unit(y.tail.coordinate); break;
        case PathTail::Kind::PascalSpreading:
            if (y.tail.filled >= y.tail.count) {
                y.tail.coordinate += y.tail.stride;
                y.tail.filled = 0;
            }
            t = u.plus_unit(y.tail.coordinate);
            ++y.tail.filled;
            break;
        }
        if (!d.contains(L + 1, t) || d.multiplicity(L + 1, t, u) <= slot)
            throw DomainError("tail leaves the diagram at level " + std::to_string(L + 1));
        y.edges.push_back({u, t, slot});
        if (y.tail.kind == PathTail::Kind::DiagonalFrom) y.tail.vertex = t;
    }
    return y;
}

PathRep truncate(const PathRep& x, int depth)
{
    PathRep y;
    y.start = x.start;
    y.edges.assign(x.edges.begin(), x.edges.begin() + std::min<std::size_t>(x.edges.size(), static_cast<std::size_t>(depth)));
    return y;
}

namespace {

// Edges from level `bottom` up to v at level `top`, always taking the minimal (maximal) in-edge.
std::vector<PathEdge> extremal_descent(const OrderedDiagram& od, int top, const VertexKey& v, int bottom, bool maximal)
{
    std::vector<PathEdge> rev;
    VertexKey cur = v;
    for (int L = top; L > bottom; --L) {
        auto in = od.in_edges(L, cur);
        if (in.empty()) throw DomainError("vertex " + cur.str() + " has no incoming edges at level " + std::to_string(L));
        const InEdge& e = maximal ? in.back() : in.front();
        rev.push_back({e.source, cur, e.slot});
        cur = e.source;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

int lookahead_for(const PathTail& t)
{
    if (t.kind == PathTail::Kind::PascalSpreading) return static_cast<int>(2 * t.count + 2);
    return 2;
}

PathRep step_impl(const OrderedDiagram& od, const PathRep& x, bool forward)
{
    auto extremal = [&](const PathRep& p, std::size_t j) {
        int level = p.start + static_cast<int>(j) + 1;
        InEdge e{p.edges[j].source, p.edges[j].slot};
        return forward ? od.is_max(level, p.edges[j].target, e) : od.is_min(level, p.edges[j].target, e);
    };
    PathRep y = x;
    std::size_t j = 0;
    while (j < y.edges.size() && extremal(y, j)) ++j;
    if (j == y.edges.size()) {
        if (y.tail.kind == PathTail::Kind::Unspecified)
            throw DeepenPrefix("deepen-prefix: all " + std::to_string(y.edges.size()) + " specified edges are " +
                               (forward ? "maximal" : "minimal"));
        y = materialize(od, y, lookahead_for(y.tail));
        while (j < y.edges.size() && extremal(y, j)) ++j;
        if (j == y.edges.size()) throw ExtremalPathError(forward ? "maximal path" : "minimal path");
    }
    int level = y.start + static_cast<int>(j) + 1;
    auto in = od.in_edges(level, y.edges[j].target);
    InEdge cur{y.edges[j].source, y.edges[j].slot};
    auto it = std::find(in.begin(), in.end(), cur);
    if (it == in.end()) throw DomainError("edge " + cur.source.str() + "->" + y.edges[j].target.str() + " not in the diagram");
    const InEdge& nxt = forward ? *(it + 1) : *(it - 1);
    y.edges[j].source = nxt.source;
    y.edges[j].slot = nxt.slot;
    auto fresh = extremal_descent(od, level - 1, nxt.source, y.start, !forward);
    std::copy(fresh.begin(), fresh.end(), y.edges.begin());
    return y;
}

bool is_pascal(const Diagram& d)
{
    Family f = d.family();
    if (f == Family::Sub) f = static_cast<const Subdiagram&>(d).ambient().family();
    return f == Family::PascalN || f == Family::PascalZ || f == Family::PascalK;
}

} // namespace

PathRep minimal_path_to(const OrderedDiagram& od, int level, const VertexKey& v)
{
    PathRep x;
    x.start = od.diagram().base_level();
    x.edges = extremal_descent(od, level, v, x.start, false);
    return x;
}

PathRep maximal_path_to(const OrderedDiagram& od, int level, const VertexKey& v)
{
    PathRep x;
    x.start = od.diagram().base_level();
    x.edges = extremal_descent(od, level, v, x.start, true);
    return x;
}

PathRep vershik_step(const OrderedDiagram& od, const PathRep& x) { return step_impl(od, x, true); }

PathRep vershik_inverse_step(const OrderedDiagram& od, const PathRep& x) { return step_impl(od, x, false); }

std::string extremal_name(ExtremalClass c)
{
    switch (c) {
    case ExtremalClass::NotExtremal: return "NotExtremal";
    case ExtremalClass::MaxU: return "MaxU";
    case ExtremalClass::MaxC: return "MaxC";
    case ExtremalClass::MinU: return "MinU";
    case ExtremalClass::MinC: return "MinC";
    case ExtremalClass::Special: return "Special";
    }
    return "NotExtremal";
}

Classification classify_extremal(const OrderedDiagram& od, const PathRep& x)
{
    Classification c;
    PathRep y = x;
    if (y.tail.kind != PathTail::Kind::Unspecified) y = materialize(od, y, lookahead_for(y.tail));
    c.maximal = c.minimal = true;
    for (std::size_t j = 0; j < y.edges.size(); ++j) {
        int level = y.start + static_cast<int>(j) + 1;
        InEdge e{y.edges[j].source, y.edges[j].slot};
        if (!od.is_max(level, y.edges[j].target, e)) c.maximal = false;
        if (!od.is_min(level, y.edges[j].target, e)) c.minimal = false;
    }
    if (!c.maximal && !c.minimal) return c;
    if (x.tail.kind == PathTail::Kind::Unspecified) {
        c.definitive = false;
        c.note = std::string("extremal so far within depth ") + std::to_string(x.edges.size()) +
                 "; attach a symbolic tail to classify";
        c.maximal = c.minimal = false;
        return c;
    }
    if (c.maximal && c.minimal) {
        c.cls = ExtremalClass::Special;
        return c;
    }
    bool spreading = x.tail.kind == PathTail::Kind::PascalSpreading;
    if (c.maximal) c.cls = spreading ? ExtremalClass::MaxU : ExtremalClass::MaxC;
    else c.cls = spreading ? ExtremalClass::MinU : ExtremalClass::MinC;
    if (!is_pascal(od.diagram())) c.note = "non-Pascal family: concentrating analogue";
    return c;
}

namespace {

struct Candidate {
    PathRep path;
    std::string key;
};

// Vertical or concentrating path through the first edge of p, with the number of leading levels it shares with p.
std::pair<Candidate, int> candidate_for(const OrderedDiagram& od, const PathRep& p, bool forward)
{
    Candidate c;
    int agree = 0;
    if (is_pascal(od.diagram())) {
        if (p.edges.empty()) throw DomainError("empty extremal path");
        auto& first = p.edges.front().target.support;
        long coord = first.front().first;
        c.path = pascal_concentrating_path(0, coord);
        for (auto& e : p.edges) {
            if (e.target.support.size() != 1 || e.target.support.front().first != coord) break;
            ++agree;
        }
    } else {
        VertexKey v = p.start_vertex();
        c.path.start = p.start;
        c.path.tail.kind = PathTail::Kind::VerticalAt;
        c.path.tail.vertex = v;
        c.path.tail.slot = forward ? 0 : -1;
        for (auto& e : p.edges) {
            if (e.target != v) break;
            ++agree;
        }
    }
    c.key = c.path.str();
    return {c, agree};
}

std::vector<PathRep> limit_set(const OrderedDiagram& od, const PathRep& x, const SuccPredOptions& opt, bool forward,
                               std::vector<std::string>& notes)
{
    const Diagram& d = od.diagram();
    int top_offset = *std::max_element(opt.offsets.begin(), opt.offsets.end());
    PathRep full = materialize(od, x, top_offset + 1);
    int base = x.start;
    std::map<std::string, std::vector<int>> agreement;
    std::map<std::string, PathRep> paths;
    std::vector<int> samples;
    for (int off : opt.offsets) samples.push_back(x.end_level() + off);
    std::sort(samples.begin(), samples.end());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        int n = samples[s];
        VertexKey vn = full.edges[static_cast<std::size_t>(n - base - 1)].target;
        std::map<std::string, int> best;
        for (auto& z : d.successors(n, vn, opt.bound)) {
            auto in = od.in_edges(n + 1, z);
            for (std::size_t i = 0; i < in.size(); ++i) {
                if (in[i].source != vn) continue;
                if (forward ? i + 1 == in.size() : i == 0) continue;
                const InEdge& nxt = forward ? in[i + 1] : in[i - 1];
                PathRep p = forward ? minimal_path_to(od, n, nxt.source) : maximal_path_to(od, n, nxt.source);
                if (p.edges.empty()) continue;
                auto [cand, agree] = candidate_for(od, p, forward);
                paths.emplace(cand.key, cand.path);
                best[cand.key] = std::max(best[cand.key], agree);
            }
        }
        for (auto& [k, a] : best) {
            auto& hist = agreement[k];
            hist.resize(s, 0);
            hist.push_back(a);
        }
    }
    std::vector<PathRep> out;
    int last = samples.back() - base;
    for (auto& [k, hist] : agreement) {
        if (hist.size() != samples.size()) continue;
        bool growing = std::is_sorted(hist.begin(), hist.end());
        if (growing && 2 * hist.back() >= last) {
            out.push_back(paths[k]);
            notes.push_back(std::string(forward ? "succ" : "pred") + " candidate " + k + " agrees on " +
                            std::to_string(hist.back()) + " of " + std::to_string(last) + " levels");
        }
    }
    return out;
}

} // namespace

SuccPredReport succ_pred(const OrderedDiagram& od, const PathRep& x, const SuccPredOptions& opt)
{
    if (opt.offsets.empty()) throw DomainError("succ_pred needs sample offsets");
    SuccPredReport r;
    r.cls = classify_extremal(od, x);
    if (r.cls.cls == ExtremalClass::NotExtremal) throw DomainError("succ_pred needs an extremal path with a symbolic tail");
    if (r.cls.maximal) r.succ = limit_set(od, x, opt, true, r.notes);
    if (r.cls.minimal) r.pred = limit_set(od, x, opt, false, r.notes);
    return r;
}

OrbitReport orbit(const OrderedDiagram& od, const PathRep& x, int steps, int cylinder_level)
{
    if (steps < 0) throw DomainError("steps must be >= 0");
    OrbitReport r;
    r.cylinder_level = cylinder_level;
    auto record = [&](const PathRep& p) {
        r.paths.push_back(p);
        int depth = cylinder_level - p.start;
        if (depth >= 0 && static_cast<std::size_t>(depth) <= p.edges.size()) r.visits[truncate(p, depth).str()] += 1;
    };
    record(x);
    PathRep cur = x;
    for (int s = 1; s <= steps; ++s) {
        try {
            cur = vershik_step(od, cur);
        } catch (const std::exception& e) {
            r.error = "step " + std::to_string(s) + ": " + e.what();
            r.error_step = s;
            break;
        }
        record(cur);
    }
    return r;
}

std::vector<PathRep> enumerate_prefixes(const OrderedDiagram& od, int depth, long bound)
{
    if (depth < 1) throw DomainError("depth must be >= 1");
    const Diagram& d = od.diagram();
    int base = d.base_level();
    auto tops = d.window(base + depth, bound);
    if (tops.empty()) throw DomainError("window too small: no vertices at level " + std::to_string(base + depth));
    std::vector<PathRep> out;
    std::vector<PathEdge> rev;
    std::function<void(int, const VertexKey&)> rec = [&](int L, const VertexKey& v) {
        if (L == base) {
            PathRep p;
            p.start = base;
            p.edges.assign(rev.rbegin(), rev.rend());
            out.push_back(std::move(p));
            return;
        }
        for (auto& e : od.in_edges(L, v)) {
            rev.push_back({e.source, v, e.slot});
            rec(L - 1, e.source);
            rev.pop_back();
        }
    };
    for (auto& t : tops) rec(base + depth, t);
    return out;
}

BijectionReport bijection_check(const OrderedDiagram& od, int depth, long bound)
{
    BijectionReport r;
    r.depth = depth;
    auto all = enumerate_prefixes(od, depth, bound);
    r.paths = static_cast<long>(all.size());
    auto edge_is = [&](const PathRep& p, bool maximal) {
        for (std::size_t j = 0; j < p.edges.size(); ++j) {
            int level = p.start + static_cast<int>(j) + 1;
            InEdge e{p.edges[j].source, p.edges[j].slot};
            if (!(maximal ? od.is_max(level, p.edges[j].target, e) : od.is_min(level, p.edges[j].target, e))) return false;
        }
        return true;
    };
    std::set<std::string> non_min, images;
    bool inverse_ok = true;
    for (auto& p : all) {
        if (!edge_is(p, false)) non_min.insert(p.str());
        if (edge_is(p, true)) continue;
        ++r.non_maximal;
        PathRep q = vershik_step(od, p);
        images.insert(q.str());
        if (!(vershik_inverse_step(od, q) == p)) inverse_ok = false;
    }
    r.non_minimal = static_cast<long>(non_min.size());
    r.injective = static_cast<long>(images.size()) == r.non_maximal;
    r.onto_non_minimal = images == non_min;
    r.inverse_identity = inverse_ok;
    return r;
}

OdometerReport odometer_check(int depth)
{
    DiagramSpec s;
    s.family = Family::OdometerIO;
    s.odometer = OdometerRule::parse("const:2");
    auto sub = build_subdiagram(build_diagram(s), SubdiagramSpec::odometer_single(1));
    OrderedDiagram od(sub, OrderSpec{});
    OdometerReport r;
    r.depth = depth;
    for (auto& p : enumerate_prefixes(od, depth, 1)) {
        std::vector<long> bits;
        for (auto& e : p.edges) bits.push_back(e.slot);
        if (std::all_of(bits.begin(), bits.end(), [](long b) { return b == 1; })) continue;
        std::size_t i = 0;
        while (bits[i] == 1) bits[i++] = 0;
        bits[i] = 1;
        PathRep q = vershik_step(od, p);
        ++r.checked;
        for (std::size_t j = 0; j < bits.size(); ++j)
            if (q.edges[j].slot != bits[j]) {
                ++r.mismatches;
                break;
            }
    }
    return r;
}

std::vector<PathRep> extremal_prefixes(const OrderedDiagram& od, int depth, long bound, bool maximal, int lookahead)
{
    const Diagram& d = od.diagram();
    int base = d.base_level();
    std::vector<PathRep> out;
    std::set<std::string> seen;
    for (auto& v : d.window(base + depth + lookahead, bound)) {
        PathRep p;
        p.start = base;
        p.edges = extremal_descent(od, base + depth + lookahead, v, base, maximal);
        p = truncate(p, depth);
        if (seen.insert(p.str()).second) out.push_back(p);
    }
    return out;
}

PathRep descriptor_path(const PascalDescriptor& d)
{
    if (d.positions.empty()) throw DomainError("empty Pascal descriptor");
    if (d.counts.size() != d.positions.size()) throw DomainError("descriptor needs one count per position");
    bool up = d.positions.size() < 2 || d.positions[1] > d.positions[0];
    for (std::size_t i = 1; i < d.positions.size(); ++i)
        if ((d.positions[i] > d.positions[i - 1]) != up || d.positions[i] == d.positions[i - 1])
            throw DomainError("descriptor positions must be strictly monotone");
    PathRep x;
    x.start = 0;
    VertexKey u = VertexKey::multiset({});
    std::size_t filled = d.concentrating ? d.positions.size() - 1 : d.positions.size();
    for (std::size_t i = 0; i < filled; ++i) {
        if (d.counts[i] < 1) throw DomainError("descriptor counts must be >= 1");
        for (long c = 0; c < d.counts[i]; ++c) {
            VertexKey t = u.plus_unit(d.positions[i]);
            x.edges.push_back({u, t, 0});
            u = t;
        }
    }
    if (d.concentrating) {
        x.tail.kind = PathTail::Kind::PascalConcentrating;
        x.tail.coordinate = d.positions.back();
    } else {
        if (d.stride == 0 || d.count < 1) throw DomainError("spreading tail needs a nonzero stride and count >= 1");
        if ((d.stride > 0) != up && d.positions.size() > 1) throw DomainError("stride must continue the fill direction");
        x.tail.kind = PathTail::Kind::PascalSpreading;
        x.tail.coordinate = d.positions.back() + d.stride;
        x.tail.filled = 0;
        x.tail.stride = d.stride;
        x.tail.count = d.count;
    }
    return x;
}

ReflectionResult reflect_descriptor(const PascalDescriptor& d, Family f)
{
    if (f != Family::PascalZ && f != Family::PascalN) throw Unsupported("unsupported: reflection is defined on N and Z Pascal diagrams");
    if (d.positions.empty()) throw DomainError("empty Pascal descriptor");
    ReflectionResult r;
    PascalDescriptor out = d;
    long i1 = d.positions.front();
    for (auto& p : out.positions) p = 2 * i1 - p;
    out.stride = -d.stride;
    if (f == Family::PascalN) {
        if (!out.concentrating) {
            long next = out.positions.back() + out.stride;
            if (out.stride < 0) {
                while (next >= 1) {
                    out.positions.push_back(next);
                    out.counts.push_back(out.count);
                    next += out.stride;
                }
                out.positions.push_back(1);
                out.counts.push_back(1);
                out.concentrating = true;
                r.clipped = true;
            }
        }
        PascalDescriptor merged = out;
        merged.positions.clear();
        merged.counts.clear();
        for (std::size_t i = 0; i < out.positions.size(); ++i) {
            long p = out.positions[i];
            if (p < 1) {
                p = 1;
                r.clipped = true;
            }
            if (!merged.positions.empty() && merged.positions.back() == p) {
                merged.counts.back() += out.counts[i];
                r.clipped = true;
            } else {
                merged.positions.push_back(p);
                merged.counts.push_back(out.counts[i]);
            }
        }
        out = merged;
    }
    r.descriptor = out;
    return r;
}

} // namespace bratteli
