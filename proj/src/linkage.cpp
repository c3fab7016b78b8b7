#include "pdp/linkage.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace pdp {
namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

int position_at(const PlaneGraph& g, EdgeId e, VertexId v) { return g.position(g.dart_from(e, v)); }

int cw_offset(const PlaneGraph& g, VertexId v, EdgeId from, EdgeId x) {
    return mod(position_at(g, x, v) - position_at(g, from, v), g.degree(v));
}

// x lies strictly inside the clockwise sweep from `from` to `to` around v.
bool strictly_between(const PlaneGraph& g, VertexId v, EdgeId from, EdgeId to, EdgeId x) {
    const int off = cw_offset(g, v, from, x);
    return off > 0 && off < cw_offset(g, v, from, to);
}

struct Visit {
    int walk;
    int position;
    EdgeId in;
    EdgeId out;
};

std::vector<std::vector<Visit>> visits_by_vertex(const PlaneGraph& g, const WeakLinkage& w) {
    std::vector<std::vector<Visit>> out(g.num_vertices());
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i) {
        const Walk& walk = w.walks[i];
        const auto verts = walk_vertices(g, walk);
        for (int j = 1; j < static_cast<int>(walk.edges.size()); ++j)
            out[verts[j]].push_back({i, j, walk.edges[j - 1], walk.edges[j]});
    }
    return out;
}

bool visits_cross(const PlaneGraph& g, VertexId v, const Visit& a, const Visit& b) {
    if (a.in == b.in || a.in == b.out || a.out == b.in || a.out == b.out) return false;
    return strictly_between(g, v, a.in, a.out, b.in) != strictly_between(g, v, a.in, a.out, b.out);
}

constexpr int kFree = -1;
constexpr int kShared = -2;

// Walk using each edge, kFree, or kShared when several uses exist.
std::vector<int> edge_owners(const PlaneGraph& g, const WeakLinkage& w) {
    std::vector<int> owner(g.num_edges(), kFree);
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i)
        for (EdgeId e : w.walks[i].edges) owner[e] = owner[e] == kFree ? i : kShared;
    return owner;
}

// Faces separated from the outer face by the cycle.
std::vector<char> enclosed_faces(const PlaneGraph& g, std::span<const EdgeId> cycle) {
    std::vector<char> blocked(g.num_edges(), 0);
    for (EdgeId e : cycle) blocked[e] = 1;
    std::vector<char> seen(g.num_faces(), 0);
    std::deque<FaceId> queue{g.outer_face()};
    seen[g.outer_face()] = 1;
    while (!queue.empty()) {
        const FaceId f = queue.front();
        queue.pop_front();
        for (Dart d : g.face_darts(f)) {
            if (blocked[edge_of(d)]) continue;
            const FaceId other = g.left_face(d);
            if (!seen[other]) {
                seen[other] = 1;
                queue.push_back(other);
            }
        }
    }
    for (auto& s : seen) s = !s;
    return seen;
}

long long count_set(const std::vector<char>& mask) { return std::count(mask.begin(), mask.end(), 1); }

bool edge_enclosed(const PlaneGraph& g, const std::vector<char>& enclosed, EdgeId e) {
    return enclosed[g.right_face(dart_of(e, false))] != 0;
}

// Vertex sequence of a closed simple edge cycle (first vertex not repeated).
std::vector<VertexId> cycle_vertices(const PlaneGraph& g, std::span<const EdgeId> cycle) {
    if (cycle.size() < 2) throw NotApplicable("a cycle needs at least two edges");
    const Edge& a = g.edge(cycle.front());
    const Edge& z = g.edge(cycle.back());
    const VertexId start = (a.u == z.u || a.u == z.v) ? a.u : a.v;
    if (start != z.u && start != z.v) throw NotApplicable("cycle edges do not close up");
    std::vector<VertexId> out;
    std::set<EdgeId> edges;
    VertexId cur = start;
    for (EdgeId e : cycle) {
        const Edge& ed = g.edge(e);
        if (ed.u != cur && ed.v != cur) throw NotApplicable("cycle edges are not consecutive");
        if (!edges.insert(e).second) throw NotApplicable("cycle repeats an edge");
        out.push_back(cur);
        cur = g.other_end(e, cur);
    }
    if (cur != start) throw NotApplicable("cycle edges do not close up");
    std::set<VertexId> distinct(out.begin(), out.end());
    if (distinct.size() != out.size()) throw NotApplicable("cycle is not simple");
    return out;
}

struct Run {
    int first = -1;
    int length = 0;
};

Run run_on(const Walk& walk, const std::vector<char>& on_cycle) {
    Run r;
    int count = 0, last = -1;
    for (int j = 0; j < static_cast<int>(walk.edges.size()); ++j) {
        if (!on_cycle[walk.edges[j]]) continue;
        if (r.first < 0) r.first = j;
        last = j;
        ++count;
    }
    if (count == 0) return r;
    if (last - r.first + 1 != count) throw NotApplicable("walk meets the cycle in more than one subwalk");
    r.length = count;
    return r;
}

void check_walk_index(const WeakLinkage& w, int walk) {
    if (walk < 0 || walk >= static_cast<int>(w.walks.size()))
        throw NotApplicable("no walk " + std::to_string(walk));
}

void check_others_avoid(const WeakLinkage& w, int walk, const std::vector<char>& on_cycle) {
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i) {
        if (i == walk) continue;
        for (EdgeId e : w.walks[i].edges)
            if (on_cycle[e]) throw NotApplicable("walk " + std::to_string(i) + " uses an edge of the cycle");
    }
}

void check_interior_empty(const PlaneGraph& g, const WeakLinkage& w, std::span<const EdgeId> cycle,
                          const std::vector<char>& on_cycle) {
    const auto enclosed = enclosed_faces(g, cycle);
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges)
            if (!on_cycle[e] && edge_enclosed(g, enclosed, e))
                throw NotApplicable("edge " + std::to_string(e) + " of a walk lies inside the cycle");
}

std::vector<char> mask_of(const PlaneGraph& g, std::span<const EdgeId> edges) {
    std::vector<char> m(g.num_edges(), 0);
    for (EdgeId e : edges) m[e] = 1;
    return m;
}

std::vector<EdgeId> face_boundary(const PlaneGraph& g, FaceId f) {
    if (f < 0 || f >= g.num_faces()) throw NotApplicable("no face " + std::to_string(f));
    if (f == g.outer_face()) throw NotApplicable("the outer face admits no homotopy operation");
    std::vector<EdgeId> out;
    for (Dart d : g.face_darts(f)) out.push_back(edge_of(d));
    return out;
}

constexpr int kLeft = 1;
constexpr int kRight = 2;

// Side of edge e at internal vertex x of the tree path, seen along the path.
int path_side(const TreeFrame& frame, const TreePath& p, VertexId x, EdgeId e) {
    const int i = frame.index_on_path(x);
    const EdgeId in = p.edges[i - 1], out = p.edges[i];
    return strictly_between(frame.graph(), x, out, in, e) ? kRight : kLeft;
}

int path_label(const TreeFrame& frame, const TreePath& p, VertexId x, EdgeId before, EdgeId after) {
    const int a = path_side(frame, p, x, before), b = path_side(frame, p, x, after);
    if (a == kLeft && b == kRight) return 1;
    if (a == kRight && b == kLeft) return -1;
    return 0;
}

void check_no_zero_copy(const TreeFrame& frame, const WeakLinkage& w) {
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges)
            if (frame.tree_edge(e)) throw ZeroCopyUsed("walk uses tree edge " + std::to_string(e));
}

long long total_edges(const WeakLinkage& w) {
    long long s = 0;
    for (const Walk& walk : w.walks) s += static_cast<long long>(walk.edges.size());
    return s;
}

int sign(int x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

// ---------------------------------------------------------------------------
// Crossings and atomic operations

std::vector<Crossing> detect_crossings(const PlaneGraph& g, const WeakLinkage& w) {
    std::vector<Crossing> out;
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i) {
        std::set<EdgeId> seen;
        for (EdgeId e : w.walks[i].edges)
            if (!seen.insert(e).second) {
                Crossing c;
                c.walk_a = c.walk_b = i;
                c.repeated_edge = e;
                out.push_back(c);
            }
    }
    const auto visits = visits_by_vertex(g, w);
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto& vs = visits[v];
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t b = a + 1; b < vs.size(); ++b)
                if (visits_cross(g, v, vs[a], vs[b]))
                    out.push_back({v, vs[a].walk, vs[a].position, vs[b].walk, vs[b].position, -1});
    }
    return out;
}

bool is_weak_linkage(const PlaneGraph& g, const WeakLinkage& w) {
    for (int e : edge_owners(g, w))
        if (e == kShared) return false;
    return detect_crossings(g, w).empty();
}

WeakLinkage cycle_move(const PlaneGraph& g, const WeakLinkage& w, int walk, std::span<const EdgeId> cycle) {
    check_walk_index(w, walk);
    cycle_vertices(g, cycle);
    const auto on_cycle = mask_of(g, cycle);
    const Walk& source = w.walks[walk];
    const Run r = run_on(source, on_cycle);
    if (r.length == 0) throw NotApplicable("walk does not use the cycle");
    if (r.length >= static_cast<int>(cycle.size())) throw NotApplicable("walk traverses the whole cycle");
    check_others_avoid(w, walk, on_cycle);
    check_interior_empty(g, w, cycle, on_cycle);

    const auto verts = walk_vertices(g, source);
    const VertexId from = verts[r.first], to = verts[r.first + r.length];
    std::vector<char> taken(g.num_edges(), 0);
    for (int j = r.first; j < r.first + r.length; ++j) taken[source.edges[j]] = 1;
    std::vector<EdgeId> detour;
    VertexId cur = from;
    while (cur != to) {
        EdgeId next = -1;
        for (EdgeId e : cycle)
            if (!taken[e] && (g.edge(e).u == cur || g.edge(e).v == cur)) {
                next = e;
                break;
            }
        if (next < 0) throw InvariantViolation("cycle complement is not a path");
        taken[next] = 1;
        detour.push_back(next);
        cur = g.other_end(next, cur);
    }
    WeakLinkage out = w;
    auto& edges = out.walks[walk].edges;
    edges.erase(edges.begin() + r.first, edges.begin() + r.first + r.length);
    edges.insert(edges.begin() + r.first, detour.begin(), detour.end());
    return out;
}

WeakLinkage cycle_pull(const PlaneGraph& g, const WeakLinkage& w, int walk, std::span<const EdgeId> cycle) {
    check_walk_index(w, walk);
    cycle_vertices(g, cycle);
    const auto on_cycle = mask_of(g, cycle);
    const Run r = run_on(w.walks[walk], on_cycle);
    if (r.length != static_cast<int>(cycle.size())) throw NotApplicable("walk does not traverse the whole cycle");
    check_interior_empty(g, w, cycle, on_cycle);
    WeakLinkage out = w;
    auto& edges = out.walks[walk].edges;
    edges.erase(edges.begin() + r.first, edges.begin() + r.first + r.length);
    return out;
}

WeakLinkage face_move(const PlaneGraph& g, const WeakLinkage& w, int walk, FaceId f) {
    const auto boundary = face_boundary(g, f);
    return cycle_move(g, w, walk, boundary);
}

WeakLinkage face_pull(const PlaneGraph& g, const WeakLinkage& w, int walk, FaceId f) {
    const auto boundary = face_boundary(g, f);
    return cycle_pull(g, w, walk, boundary);
}

WeakLinkage face_push(const PlaneGraph& g, const WeakLinkage& w, int walk, FaceId f, std::optional<int> position) {
    check_walk_index(w, walk);
    const auto boundary = face_boundary(g, f);
    const auto cverts = cycle_vertices(g, boundary);
    const auto on_cycle = mask_of(g, boundary);
    for (const Walk& other : w.walks)
        for (EdgeId e : other.edges)
            if (on_cycle[e]) throw NotApplicable("a walk uses an edge of the face");

    const Walk& source = w.walks[walk];
    const auto verts = walk_vertices(g, source);
    const int len = static_cast<int>(source.edges.size());
    const auto visits = visits_by_vertex(g, w);
    std::vector<char> on_face(g.num_vertices(), 0);
    for (VertexId v : cverts) on_face[v] = 1;

    std::string failure = "walk does not pass a vertex of the face";
    auto attempt = [&](int j) -> std::optional<WeakLinkage> {
        const VertexId v = verts[j];
        if (!on_face[v]) return std::nullopt;
        const EdgeId e = source.edges[j - 1], e2 = source.edges[j];
        std::vector<EdgeId> at_v;
        for (EdgeId c : boundary)
            if (g.edge(c).u == v || g.edge(c).v == v) at_v.push_back(c);
        if (at_v.size() != 2) {
            failure = "face boundary is not simple at the vertex";
            return std::nullopt;
        }
        const int oe2 = cw_offset(g, v, e, e2);
        const int o1 = cw_offset(g, v, e, at_v[0]), o2 = cw_offset(g, v, e, at_v[1]);
        const bool clockwise = o1 < oe2 && o2 < oe2;
        const bool counter = o1 > oe2 && o2 > oe2;
        if (!clockwise && !counter) {
            failure = "face edges are not on one side of the visit";
            return std::nullopt;
        }
        EdgeId first, second;
        if (clockwise) {
            first = o1 < o2 ? at_v[0] : at_v[1];
        } else {
            first = o1 > o2 ? at_v[0] : at_v[1];
        }
        second = first == at_v[0] ? at_v[1] : at_v[0];
        const int of = cw_offset(g, v, e, first), os = cw_offset(g, v, e, second);
        auto region = [&](EdgeId x) {
            const int o = cw_offset(g, v, e, x);
            if (clockwise) {
                if (o > 0 && o < of) return 1;
                if (o > os && o < oe2) return 2;
            } else {
                if (o > of) return 1;
                if (o > oe2 && o < os) return 2;
            }
            return 0;
        };
        for (const Visit& other : visits[v]) {
            if (other.walk == walk && other.position == j) continue;
            const int a = region(other.in), b = region(other.out);
            if ((a == 1 && b == 2) || (a == 2 && b == 1)) {
                failure = "another visit would be separated by the pushed face";
                return std::nullopt;
            }
        }
        std::vector<EdgeId> loop{first};
        VertexId cur = g.other_end(first, v);
        while (cur != v) {
            EdgeId next = -1;
            for (EdgeId c : boundary)
                if (std::find(loop.begin(), loop.end(), c) == loop.end() && (g.edge(c).u == cur || g.edge(c).v == cur)) {
                    next = c;
                    break;
                }
            if (next < 0) throw InvariantViolation("face boundary does not close");
            loop.push_back(next);
            cur = g.other_end(next, cur);
        }
        WeakLinkage out = w;
        auto& edges = out.walks[walk].edges;
        edges.insert(edges.begin() + j, loop.begin(), loop.end());
        return out;
    };

    if (position) {
        if (*position < 1 || *position >= len) throw NotApplicable("position is not an inner vertex of the walk");
        if (auto r = attempt(*position)) return *r;
        throw NotApplicable(failure);
    }
    for (int j = 1; j < len; ++j)
        if (auto r = attempt(j)) return *r;
    throw NotApplicable(failure);
}

// ---------------------------------------------------------------------------
// Frame

TreeFrame::TreeFrame(OrientedEnrichment h, SteinerTree tree, VertexId outer_terminal, std::vector<TerminalPair> pairs)
    : h_(std::move(h.enriched)), orders_(std::move(h.orders)), tree_(std::move(tree)), outer_terminal_(outer_terminal), pairs_(std::move(pairs)) {
    tree_base_.assign(h_.classes.base_edges(), 0);
    for (EdgeId e : tree_.edges()) {
        if (e < 0 || e >= h_.classes.base_edges()) throw PreconditionViolation("tree edge is not a base edge");
        tree_base_[e] = 1;
    }
    paths_ = tree_.maximal_paths();
    path_of_.assign(h_.graph.num_vertices(), -1);
    path_index_.assign(h_.graph.num_vertices(), -1);
    for (int p = 0; p < static_cast<int>(paths_.size()); ++p)
        for (int i = 1; i + 1 < static_cast<int>(paths_[p].vertices.size()); ++i) {
            path_of_[paths_[p].vertices[i]] = p;
            path_index_[paths_[p].vertices[i]] = i;
        }
}

EdgeId TreeFrame::tree_edge_between(VertexId a, VertexId b) const {
    for (EdgeId e : tree_.incident(a))
        if (tree_.other_end(e, a) == b) return e;
    throw InvariantViolation("vertices " + std::to_string(a) + " and " + std::to_string(b) + " are not tree neighbours");
}

TreeFrame frame_of_backbone(const RadialCompletion& h, const BackboneTree& backbone, std::span<const TerminalPair> pairs,
                            int copies) {
    if (copies < 1) throw PreconditionViolation("at least one copy on each side is needed");
    OrientedEnrichment oriented = orient_edges_order(enrich_parallel(h.graph, copies), backbone.tree.edges());
    return TreeFrame(std::move(oriented), backbone.tree, backbone.outer_terminal,
                     std::vector<TerminalPair>(pairs.begin(), pairs.end()));
}

TreeFrame frame_of_tree(const PlaneGraph& host, const SteinerTree& tree, VertexId outer_terminal,
                        std::span<const TerminalPair> pairs, int copies) {
    if (copies < 1) throw PreconditionViolation("at least one copy on each side is needed");
    OrientedEnrichment oriented = orient_edges_order(enrich_parallel(host, copies), tree.edges());
    return TreeFrame(std::move(oriented), tree, outer_terminal, std::vector<TerminalPair>(pairs.begin(), pairs.end()));
}

WeakLinkage lift_to_copies(const ParallelClasses& classes, const WeakLinkage& w, int index) {
    WeakLinkage out = w;
    for (Walk& walk : out.walks)
        for (EdgeId& e : walk.edges) e = classes.copy(e, index);
    return out;
}

WeakLinkage project_to_base(const ParallelClasses& classes, const WeakLinkage& w) {
    WeakLinkage out = w;
    for (Walk& walk : out.walks)
        for (EdgeId& e : walk.edges) e = classes.base_of(e);
    return out;
}

WeakLinkage solution_on_nice(const Instance& input, const NiceInstance& nice, const WeakLinkage& solution) {
    if (solution.walks.size() != input.pairs.size() || nice.instance.pairs.size() != input.pairs.size())
        throw PreconditionViolation("solution and instance disagree on the number of pairs");
    WeakLinkage out;
    for (std::size_t i = 0; i < solution.walks.size(); ++i) {
        std::vector<VertexId> verts = walk_vertices(input.graph, solution.walks[i]);
        const TerminalPair& p = nice.instance.pairs[i];
        if (verts.front() != input.pairs[i].source) std::reverse(verts.begin(), verts.end());
        if (p.source != verts.front()) verts.insert(verts.begin(), p.source);
        if (p.target != verts.back()) verts.push_back(p.target);
        out.walks.push_back(Walk{verts.front(), path_edges(nice.instance.graph, verts)});
    }
    return out;
}

FramedLinkage frame_solution(const Instance& input, const WeakLinkage& solution, const AlgorithmConstants& constants,
                             int copies) {
    const NiceInstance nice = make_nice(input);
    const WeakLinkage on_nice = solution_on_nice(input, nice, solution);
    const RadialCompletion h = radial_completion(nice.instance.graph);
    const BackboneTree backbone = build_backbone(h, nice.instance, nice.outer_terminal, constants);
    TreeFrame frame = frame_of_backbone(h, backbone, nice.instance.pairs,
                                        copies > 0 ? copies : nice.instance.graph.num_vertices());
    WeakLinkage lifted = lift_to_copies(frame.classes(), on_nice, 1);
    return FramedLinkage{std::move(frame), std::move(lifted)};
}

// ---------------------------------------------------------------------------
// Sequences, segments, potential

std::vector<SubwalkRef> sequences(const TreeFrame& frame, const WeakLinkage& w) {
    check_no_zero_copy(frame, w);
    std::vector<SubwalkRef> out;
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i) {
        const Walk& walk = w.walks[i];
        const auto verts = walk_vertices(frame.graph(), walk);
        int prev = -1;
        for (int j = 0; j < static_cast<int>(verts.size()); ++j) {
            if (!frame.on_tree(verts[j])) continue;
            if (prev >= 0 && (j - prev >= 2 || !frame.tree_class(walk.edges[prev]))) out.push_back({i, prev, j});
            prev = j;
        }
    }
    return out;
}

std::vector<EdgeId> projecting_cycle(const TreeFrame& frame, const WeakLinkage& w, const SubwalkRef& s) {
    const Walk& walk = w.walks[s.walk];
    const auto verts = walk_vertices(frame.graph(), walk);
    std::vector<EdgeId> cycle(walk.edges.begin() + s.first, walk.edges.begin() + s.last);
    const VertexId a = verts[s.first], b = verts[s.last];
    if (a != b) {
        const auto back = frame.tree().path_between(b, a);
        for (std::size_t i = 0; i + 1 < back.size(); ++i) cycle.push_back(frame.tree_edge_between(back[i], back[i + 1]));
    }
    return cycle;
}

long long volume(const TreeFrame& frame, const WeakLinkage& w, const SubwalkRef& s) {
    return count_set(enclosed_faces(frame.graph(), projecting_cycle(frame, w, s)));
}

long long Segmentation::potential() const {
    long long s = 0;
    for (const auto& g : groups) s += g.potential;
    return s;
}

std::vector<int> tree_crossings(const TreeFrame& frame, const Walk& walk) {
    const PlaneGraph& g = frame.graph();
    const auto verts = walk_vertices(g, walk);
    std::vector<int> out;
    for (int j = 1; j < static_cast<int>(walk.edges.size()); ++j) {
        const VertexId x = verts[j];
        if (!frame.on_tree(x) || frame.tree_degree(x) < 2) continue;
        const EdgeId in = walk.edges[j - 1], out_edge = walk.edges[j];
        int inside = 0;
        for (EdgeId t : frame.tree().incident(x))
            if (strictly_between(g, x, in, out_edge, t)) ++inside;
        if (inside > 0 && inside < frame.tree_degree(x)) out.push_back(j);
    }
    return out;
}

Segmentation segments(const TreeFrame& frame, const WeakLinkage& w) {
    check_no_zero_copy(frame, w);
    Segmentation out;
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i) {
        const Walk& walk = w.walks[i];
        const int len = static_cast<int>(walk.edges.size());
        if (len == 0) continue;
        const auto verts = walk_vertices(frame.graph(), walk);
        std::vector<int> cuts{0};
        for (int j : tree_crossings(frame, walk)) cuts.push_back(j);
        cuts.push_back(len);
        const int base = static_cast<int>(out.segments.size());
        std::vector<int> key;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            out.segments.push_back({i, cuts[k], cuts[k + 1]});
            const int pa = frame.path_of(verts[cuts[k]]), pb = frame.path_of(verts[cuts[k + 1]]);
            key.push_back(pa >= 0 && pa == pb ? pa : -1);
        }
        const int count = static_cast<int>(key.size());
        for (int k = 0; k < count;) {
            int end = k + 1;
            if (key[k] >= 0)
                while (end < count && key[end] == key[k]) ++end;
            SegmentGroup grp{i, base + k, base + end, key[k], 1};
            if (end - k > 1) {
                const TreePath& p = frame.paths()[key[k]];
                const int lo = std::max(cuts[k] - 1, 0), hi = std::min(cuts[end] + 1, len);
                int sum = 0;
                for (int j = lo + 1; j < hi; ++j)
                    if (frame.path_of(verts[j]) == key[k])
                        sum += path_label(frame, p, verts[j], walk.edges[j - 1], walk.edges[j]);
                grp.potential = 1 + std::abs(sum);
            }
            out.groups.push_back(grp);
            k = end;
        }
    }
    return out;
}

long long potential(const TreeFrame& frame, const WeakLinkage& w) { return segments(frame, w).potential(); }

// ---------------------------------------------------------------------------
// Properties

bool is_pushed(const TreeFrame& frame, const WeakLinkage& w) {
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges)
            if (!frame.tree_class(e) || frame.tree_edge(e)) return false;
    return true;
}

int multiplicity(const ParallelClasses& classes, const WeakLinkage& w) {
    std::map<EdgeId, int> count;
    int best = 0;
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) best = std::max(best, ++count[classes.base_of(e)]);
    return best;
}

bool is_outer_terminal(const TreeFrame& frame, const WeakLinkage& w) {
    int touching = 0;
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) {
            const Edge& ed = frame.graph().edge(e);
            if (ed.u == frame.outer_terminal() || ed.v == frame.outer_terminal()) ++touching;
        }
    return touching == 1;
}

namespace {

// Used copy indices per tree base edge.
std::map<EdgeId, std::vector<int>> used_indices(const TreeFrame& frame, const WeakLinkage& w) {
    std::map<EdgeId, std::vector<int>> out;
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) out[frame.classes().base_of(e)].push_back(frame.classes().index_of(e));
    for (auto& [base, v] : out) std::sort(v.begin(), v.end());
    return out;
}

}  // namespace

bool is_extremal(const TreeFrame& frame, const WeakLinkage& w) {
    if (!is_pushed(frame, w)) return false;
    const int span = frame.classes().span();
    if (multiplicity(frame.classes(), w) > span) return false;
    for (const auto& [base, idx] : used_indices(frame, w)) {
        const auto pos = std::upper_bound(idx.begin(), idx.end(), 0);
        if (pos == idx.end() || pos == idx.begin()) continue;
        const int i = *pos, j = *(pos - 1);
        if ((i - 1) + std::abs(j + 1) < span) return false;
    }
    return true;
}

bool is_canonical(const TreeFrame& frame, const WeakLinkage& w) {
    if (!is_pushed(frame, w)) return false;
    for (const auto& [base, idx] : used_indices(frame, w))
        for (std::size_t t = 0; t < idx.size(); ++t)
            if (idx[t] != static_cast<int>(t) + 1) return false;
    return true;
}

bool is_sensible(const TreeFrame& frame, const WeakLinkage& w) {
    return is_sensible(frame.graph(), frame.pairs(), w);
}

std::vector<UTurn> u_turns(const TreeFrame& frame, const WeakLinkage& w) {
    const PlaneGraph& g = frame.graph();
    const ParallelClasses& cls = frame.classes();
    const auto owner = edge_owners(g, w);
    std::vector<char> extreme(g.num_edges(), 0);
    for (const Walk& walk : w.walks)
        if (!walk.edges.empty()) {
            extreme[walk.edges.front()] = 1;
            extreme[walk.edges.back()] = 1;
        }
    std::vector<UTurn> out;
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i) {
        const Walk& walk = w.walks[i];
        for (int j = 1; j < static_cast<int>(walk.edges.size()); ++j) {
            const EdgeId a = walk.edges[j - 1], b = walk.edges[j];
            if (a == b || !cls.is_parallel(a, b)) continue;
            const int ia = cls.index_of(a), ib = cls.index_of(b);
            const EdgeId base = cls.base_of(a);
            bool holds_end = false, holds_any = false;
            for (int t = std::min(ia, ib) + 1; t < std::max(ia, ib); ++t) {
                const EdgeId c = cls.copy(base, t);
                if (extreme[c]) holds_end = true;
                if (owner[c] != kFree) holds_any = true;
            }
            if (holds_end) continue;
            const Edge& ed = g.edge(a);
            UTurn u;
            u.walk = i;
            u.position = j;
            u.first = a;
            u.second = b;
            u.special = sign(ia) == sign(ib) || (frame.tree_degree(ed.u) == 2 && frame.tree_degree(ed.v) == 2);
            u.innermost = !holds_any;
            out.push_back(u);
        }
    }
    return out;
}

std::vector<SubwalkRef> swollen_segments(const TreeFrame& frame, const WeakLinkage& w) {
    const Segmentation seg = segments(frame, w);
    std::vector<SubwalkRef> out;
    for (const SubwalkRef& s : seg.segments) {
        const Walk& walk = w.walks[s.walk];
        if (s.first == 0 || s.last == static_cast<int>(walk.edges.size())) continue;
        const auto verts = walk_vertices(frame.graph(), walk);
        const VertexId a = verts[s.first], b = verts[s.last];
        const int p = frame.path_of(a);
        if (p < 0 || frame.path_of(b) != p) continue;
        const TreePath& path = frame.paths()[p];
        const int entry = path_label(frame, path, a, walk.edges[s.first - 1], walk.edges[s.first]);
        const int exit = path_label(frame, path, b, walk.edges[s.last - 1], walk.edges[s.last]);
        if (entry != 0 && entry == -exit) out.push_back(s);
    }
    return out;
}

bool segments_use_two_copies(const TreeFrame& frame, const WeakLinkage& w) {
    for (const SubwalkRef& s : segments(frame, w).segments) {
        std::map<EdgeId, int> count;
        for (int j = s.first; j < s.last; ++j) {
            const EdgeId e = w.walks[s.walk].edges[j];
            if (frame.tree_class(e) && ++count[frame.classes().base_of(e)] > 2) return false;
        }
    }
    return true;
}

bool MeasureTrace::monotone() const {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (trend == Trend::decreasing && values[i] >= values[i - 1]) return false;
        if (trend == Trend::increasing && values[i] <= values[i - 1]) return false;
    }
    return true;
}

bool MeasureTrace::potential_constant() const {
    return std::adjacent_find(potentials.begin(), potentials.end(), std::not_equal_to<>()) == potentials.end();
}

bool MeasureTrace::potential_nonincreasing() const {
    for (std::size_t i = 1; i < potentials.size(); ++i)
        if (potentials[i] > potentials[i - 1]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Pushing onto the tree

namespace {

struct SequenceState {
    SubwalkRef ref;
    std::vector<EdgeId> cycle;
    std::vector<char> enclosed;
    long long volume = 0;
};

struct PushState {
    std::vector<SequenceState> seqs;
    // Per tree base edge: sequences enclosing copy -1 and copy +1.
    std::map<EdgeId, std::array<int, 2>> enclosing;
    long long total = 0;
};

PushState push_state(const TreeFrame& frame, const WeakLinkage& w) {
    PushState st;
    const PlaneGraph& g = frame.graph();
    for (const SubwalkRef& s : sequences(frame, w)) {
        SequenceState q;
        q.ref = s;
        q.cycle = projecting_cycle(frame, w, s);
        q.enclosed = enclosed_faces(g, q.cycle);
        q.volume = count_set(q.enclosed);
        st.total += q.volume;
        for (EdgeId b : frame.tree().edges())
            for (int side = 0; side < 2; ++side)
                if (edge_enclosed(g, q.enclosed, frame.classes().copy(b, side ? 1 : -1))) ++st.enclosing[b][side];
        st.seqs.push_back(std::move(q));
    }
    return st;
}

std::optional<std::string> well_behaved_failure(const TreeFrame& frame, const WeakLinkage& w, const PushState& st) {
    for (const auto& q : st.seqs) {
        const auto verts = walk_vertices(frame.graph(), w.walks[q.ref.walk]);
        std::set<VertexId> inner(verts.begin() + q.ref.first + 1, verts.begin() + q.ref.last);
        if (static_cast<int>(inner.size()) != q.ref.length() - 1)
            return "sequence of walk " + std::to_string(q.ref.walk) + " is neither a path nor a cycle";
    }
    return std::nullopt;
}

// Copy index a new edge of a tree class takes on side s (+1/-1).
int reserved_index(const TreeFrame& frame, const PushState& st, EdgeId base, int s) {
    auto it = st.enclosing.find(base);
    const int c = it == st.enclosing.end() ? 0 : it->second[s > 0 ? 1 : 0];
    return s * std::min(frame.n() - c + 1, frame.classes().span());
}

std::optional<std::string> shallow_failure(const TreeFrame& frame, const WeakLinkage& w, const PushState& st) {
    const int n = frame.n();
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) {
            if (!frame.tree_class(e)) continue;
            const int i = frame.classes().index_of(e);
            const auto it = st.enclosing.find(frame.classes().base_of(e));
            const int c = it == st.enclosing.end() ? 0 : it->second[i > 0 ? 1 : 0];
            if (c > 0 && std::abs(i) >= n - c + 1 && std::abs(i) <= n)
                return "copy " + std::to_string(i) + " of tree edge " + std::to_string(frame.classes().base_of(e)) +
                       " is reserved for pushing";
        }
    return std::nullopt;
}

struct Candidate {
    std::vector<EdgeId> cycle;
    bool pull = false;
    long long faces = 0;
};

// Shrinking cycles for sequence q read from its endpoint at `from_start`.
std::vector<Candidate> shrinking_cycles(const TreeFrame& frame, const WeakLinkage& w, const PushState& st,
                                        const SequenceState& q, bool from_start, const std::vector<int>& owner) {
    const PlaneGraph& g = frame.graph();
    const ParallelClasses& cls = frame.classes();
    const Walk& walk = w.walks[q.ref.walk];
    const auto all = walk_vertices(g, walk);
    const int m = q.ref.length();
    std::vector<VertexId> x(m + 1);
    std::vector<EdgeId> s(m + 1, -1);  // s[k] joins x[k-1] and x[k]
    for (int k = 0; k <= m; ++k) x[k] = from_start ? all[q.ref.first + k] : all[q.ref.last - k];
    for (int k = 1; k <= m; ++k) s[k] = from_start ? walk.edges[q.ref.first + k - 1] : walk.edges[q.ref.last - k];
    const VertexId v = x[0], u = x[1];

    Dart r = g.dart_from(s[1], v);
    if (!q.enclosed[g.right_face(r)]) {
        r = reverse(r);
        if (!q.enclosed[g.right_face(r)]) throw InvariantViolation("sequence edge has no enclosed side");
    }
    for (int guard = 0; g.face_darts(g.face(r)).size() == 2; ++guard) {
        if (guard > g.num_edges()) throw InvariantViolation("runaway parallel scan");
        const auto fd = g.face_darts(g.face(r));
        r = reverse(fd[0] == r ? fd[1] : fd[0]);
    }
    if (g.face_darts(g.face(r)).size() != 3) throw InvariantViolation("enriched graph is not triangulated");
    const Dart t1 = g.next_in_face(r), t2 = g.next_in_face(t1);
    const bool along = g.tail(r) == v;
    const EdgeId near_uw = edge_of(along ? t1 : t2), near_wv = edge_of(along ? t2 : t1);
    const VertexId w3 = g.head(t1);
    if (w3 == v || w3 == u) throw InvariantViolation("degenerate triangle beside a sequence");

    auto options = [&](EdgeId near) {
        std::vector<EdgeId> out;
        const EdgeId base = cls.base_of(near);
        if (frame.tree_class(near)) {
            out.push_back(cls.copy(base, reserved_index(frame, st, base, sign(cls.index_of(near)))));
        } else {
            out.push_back(cls.copy(base, -cls.index_of(near)));
            if (out.back() != near) out.push_back(near);
        }
        return out;
    };

    int j = -1;
    for (int k = 2; k <= m; ++k)
        if (x[k] == w3) j = k;

    std::vector<Candidate> out;
    auto add = [&](int prefix, std::vector<EdgeId> rest, bool pull) {
        Candidate c;
        c.cycle.assign(s.begin() + 1, s.begin() + 1 + prefix);
        c.cycle.insert(c.cycle.end(), rest.begin(), rest.end());
        c.pull = pull;
        for (EdgeId e : rest)
            if (owner[e] != kFree) return;
        try {
            cycle_vertices(g, c.cycle);
        } catch (const NotApplicable&) {
            return;
        }
        const auto on_cycle = mask_of(g, c.cycle);
        const auto enclosed = enclosed_faces(g, c.cycle);
        for (EdgeId t : frame.tree().edges())
            if (!on_cycle[t] && edge_enclosed(g, enclosed, t)) return;
        c.faces = count_set(enclosed);
        out.push_back(std::move(c));
    };

    if (j < 0) {
        for (EdgeId a : options(near_uw))
            for (EdgeId b : options(near_wv)) add(1, {a, b}, false);
    } else {
        for (EdgeId b : options(near_wv)) {
            if (j < m && b == s[j + 1] && j + 1 == m) add(m, {}, true);
            else add(j, {b}, false);
        }
        // The subpath of S up to w may wrap around a branch of the tree; the
        // triangle itself still shrinks S when w is a tree vertex.
        if (frame.on_tree(w3))
            for (EdgeId a : options(near_uw))
                for (EdgeId b : options(near_wv)) add(1, {a, b}, false);
    }
    return out;
}

}  // namespace

WeakLinkage push_onto_tree(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* trace) {
    const PlaneGraph& g = frame.graph();
    if (frame.n() < 1) throw PreconditionViolation("enrichment needs at least one copy per side");
    if (!is_sensible(frame, w)) throw PreconditionViolation("linkage is not sensible");
    if (!is_weak_linkage(g, w)) throw PreconditionViolation("walks share edges or cross");
    if (!is_outer_terminal(frame, w)) throw PreconditionViolation("linkage is not outer-terminal");
    PushState st = push_state(frame, w);
    if (auto f = well_behaved_failure(frame, w, st)) throw PreconditionViolation("not well-behaved: " + *f);
    if (auto f = shallow_failure(frame, w, st)) throw PreconditionViolation("not shallow: " + *f);

    if (trace) {
        *trace = MeasureTrace{"push", "total volume", Trend::decreasing, {st.total}, {potential(frame, w)}, {}};
    }
    WeakLinkage cur = w;
    while (!st.seqs.empty()) {
        const SequenceState* q = &st.seqs.front();
        for (const auto& c : st.seqs)
            if (c.volume < q->volume) q = &c;

        const auto on_cycle = mask_of(g, q->cycle);
        for (const Walk& walk : cur.walks)
            for (EdgeId e : walk.edges)
                if (!frame.tree_class(e) && !on_cycle[e] && edge_enclosed(g, q->enclosed, e))
                    throw InvariantViolation("sequence of least volume is not innermost");

        const auto verts = walk_vertices(g, cur.walks[q->ref.walk]);
        const VertexId a = verts[q->ref.first], b = verts[q->ref.last];
        const auto owner = edge_owners(g, cur);
        std::vector<Candidate> cands;
        if (a != frame.outer_terminal()) cands = shrinking_cycles(frame, cur, st, *q, true, owner);
        if (a == frame.outer_terminal() || a == b) {
            if (b == frame.outer_terminal()) throw InvariantViolation("sequence has both ends at the outer terminal");
            auto more = shrinking_cycles(frame, cur, st, *q, false, owner);
            cands.insert(cands.end(), more.begin(), more.end());
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& x, const Candidate& y) { return x.faces > y.faces; });

        std::optional<WeakLinkage> next;
        PushState after;
        for (const Candidate& c : cands) {
            WeakLinkage moved;
            try {
                moved = c.pull ? cycle_pull(g, cur, q->ref.walk, c.cycle) : cycle_move(g, cur, q->ref.walk, c.cycle);
            } catch (const NotApplicable&) {
                continue;
            }
            if (!is_outer_terminal(frame, moved)) continue;
            PushState candidate_state = push_state(frame, moved);
            if (candidate_state.total >= st.total || well_behaved_failure(frame, moved, candidate_state) ||
                shallow_failure(frame, moved, candidate_state))
                continue;
            next = std::move(moved);
            after = std::move(candidate_state);
            break;
        }
        if (!next) throw InvariantViolation("no applicable shrinking cycle for an innermost sequence");

        cur = std::move(*next);
        st = std::move(after);
        if (trace) {
            trace->values.push_back(st.total);
            trace->potentials.push_back(potential(frame, cur));
        }
    }
    return cur;
}

// ---------------------------------------------------------------------------
// U-turns, swollen segments, normal forms

WeakLinkage eliminate_u_turns(const TreeFrame& frame, const WeakLinkage& w, UTurnMode mode, MeasureTrace* trace) {
    const PlaneGraph& g = frame.graph();
    if (trace) {
        *trace = MeasureTrace{mode == UTurnMode::all ? "all U-turns" : "special U-turns", "edges", Trend::decreasing,
                              {total_edges(w)}, {potential(frame, w)}, {}};
        trace->segment_counts.push_back(static_cast<long long>(segments(frame, w).segments.size()));
    }
    WeakLinkage cur = w;
    while (true) {
        const auto turns = u_turns(frame, cur);
        const UTurn* pick = nullptr;
        bool wanted = false;
        for (const UTurn& t : turns) {
            if (mode == UTurnMode::special_only && !t.special) continue;
            wanted = true;
            if (t.innermost) {
                pick = &t;
                break;
            }
        }
        if (!pick) {
            if (wanted) throw InvariantViolation("U-turns remain but none is innermost");
            break;
        }
        const std::array<EdgeId, 2> cycle{pick->first, pick->second};
        cur = cycle_pull(g, cur, pick->walk, cycle);
        if (trace) {
            trace->values.push_back(total_edges(cur));
            trace->potentials.push_back(potential(frame, cur));
            trace->segment_counts.push_back(static_cast<long long>(segments(frame, cur).segments.size()));
        }
    }
    return cur;
}

WeakLinkage eliminate_swollen(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* trace) {
    const PlaneGraph& g = frame.graph();
    const ParallelClasses& cls = frame.classes();
    const int span = cls.span();
    WeakLinkage cur = w;
    long long count = static_cast<long long>(segments(frame, cur).segments.size());
    if (trace) *trace = MeasureTrace{"swollen segments", "segments", Trend::decreasing, {count}, {potential(frame, w)}, {}};
    while (true) {
        const auto swollen = swollen_segments(frame, cur);
        if (swollen.empty()) break;
        const SubwalkRef* pick = nullptr;
        long long best = 0;
        for (const SubwalkRef& s : swollen) {
            long long sum = 0;
            for (int j = s.first; j < s.last; ++j) sum += std::abs(cls.index_of(cur.walks[s.walk].edges[j]));
            if (!pick || sum < best) {
                pick = &s;
                best = sum;
            }
        }
        const SubwalkRef s = *pick;
        {
            const auto verts = walk_vertices(g, cur.walks[s.walk]);
            const int p = frame.path_of(verts[s.first]);
            const int dir = frame.index_on_path(verts[s.last]) > frame.index_on_path(verts[s.first]) ? 1 : -1;
            for (int j = s.first + 1; j <= s.last; ++j)
                if (frame.path_of(verts[j]) != p ||
                    frame.index_on_path(verts[j]) - frame.index_on_path(verts[j - 1]) != dir)
                    throw InvariantViolation("innermost swollen segment does not run along its tree path");
        }
        for (int j = s.first; j < s.last; ++j) {
            const EdgeId e = cur.walks[s.walk].edges[j];
            const EdgeId base = cls.base_of(e);
            const int side = -sign(cls.index_of(e));
            if (side == 0) throw InvariantViolation("swollen segment uses a zero copy");
            const auto owner = edge_owners(g, cur);
            int reach = 0;
            while (reach < span && owner[cls.copy(base, side * (reach + 1))] == kFree) ++reach;
            if (reach == 0) throw InvariantViolation("move-through target copy is missing");
            const std::array<EdgeId, 2> cycle{e, cls.copy(base, side * reach)};
            try {
                cur = cycle_move(g, cur, s.walk, cycle);
            } catch (const NotApplicable& ex) {
                throw InvariantViolation(std::string("move-through is blocked: ") + ex.what());
            }
        }
        const long long after = static_cast<long long>(segments(frame, cur).segments.size());
        if (after != count - 2) throw InvariantViolation("move-through did not merge three segments into one");
        count = after;
        if (trace) {
            trace->values.push_back(count);
            trace->potentials.push_back(potential(frame, cur));
        }
    }
    return cur;
}

namespace {

void require_pushed_low(const TreeFrame& frame, const WeakLinkage& w) {
    if (!is_pushed(frame, w)) throw PreconditionViolation("linkage is not pushed onto the tree");
    const int m = multiplicity(frame.classes(), w);
    if (m > frame.classes().span())
        throw MultiplicityTooHigh("multiplicity " + std::to_string(m) + " exceeds " +
                                  std::to_string(frame.classes().span()));
}

long long sum_abs_index(const TreeFrame& frame, const WeakLinkage& w) {
    long long s = 0;
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) s += std::abs(frame.classes().index_of(e));
    return s;
}

long long sum_index(const TreeFrame& frame, const WeakLinkage& w) {
    long long s = 0;
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) s += frame.classes().index_of(e);
    return s;
}

long long sum_weight(const TreeFrame& frame, const WeakLinkage& w) {
    const int span = frame.classes().span();
    long long s = 0;
    for (const Walk& walk : w.walks)
        for (EdgeId e : walk.edges) {
            const int i = frame.classes().index_of(e);
            s += (frame.tree_class(e) && i >= 1) ? span - i : -span;
        }
    return s;
}

// Moves copy `from` of a class onto the free copy `to`; the copies strictly
// between them must be free.
WeakLinkage shift_copy(const TreeFrame& frame, const WeakLinkage& w, const std::vector<int>& owner, EdgeId base,
                       int from, int to) {
    const std::array<EdgeId, 2> cycle{frame.classes().copy(base, from), frame.classes().copy(base, to)};
    return cycle_move(frame.graph(), w, owner[cycle[0]], cycle);
}

template <typename Measure>
void record(MeasureTrace* trace, const TreeFrame& frame, const WeakLinkage& w, Measure measure) {
    if (!trace) return;
    trace->values.push_back(measure(frame, w));
    trace->potentials.push_back(potential(frame, w));
}

}  // namespace

WeakLinkage make_extremal(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* trace) {
    require_pushed_low(frame, w);
    const int span = frame.classes().span();
    if (trace) *trace = MeasureTrace{"extremal", "sum of |index|", Trend::increasing, {}, {}, {}};
    record(trace, frame, w, sum_abs_index);
    WeakLinkage cur = w;
    for (EdgeId base : frame.tree().edges()) {
        int ceiling = span + 1;
        for (int i = span; i >= 1; --i) {
            const auto owner = edge_owners(frame.graph(), cur);
            if (owner[frame.classes().copy(base, i)] == kFree) continue;
            const int target = ceiling - 1;
            if (target > i) {
                cur = shift_copy(frame, cur, owner, base, i, target);
                record(trace, frame, cur, sum_abs_index);
            }
            ceiling = std::max(target, i);
        }
        int floor = -span - 1;
        for (int i = -span; i <= -1; ++i) {
            const auto owner = edge_owners(frame.graph(), cur);
            if (owner[frame.classes().copy(base, i)] == kFree) continue;
            const int target = floor + 1;
            if (target < i) {
                cur = shift_copy(frame, cur, owner, base, i, target);
                record(trace, frame, cur, sum_abs_index);
            }
            floor = std::min(target, i);
        }
    }
    return cur;
}

WeakLinkage make_canonical(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* lift, MeasureTrace* pack) {
    require_pushed_low(frame, w);
    const int span = frame.classes().span();
    if (lift) *lift = MeasureTrace{"canonical lift", "sum of indices", Trend::increasing, {}, {}, {}};
    if (pack) *pack = MeasureTrace{"canonical pack", "copy weight", Trend::increasing, {}, {}, {}};
    record(lift, frame, w, sum_index);
    WeakLinkage cur = w;
    for (EdgeId base : frame.tree().edges()) {
        int ceiling = span + 1;
        for (int i = span; i >= -span; --i) {
            if (i == 0) continue;
            const auto owner = edge_owners(frame.graph(), cur);
            if (owner[frame.classes().copy(base, i)] == kFree) continue;
            const int target = ceiling - 1;
            if (target > i) {
                cur = shift_copy(frame, cur, owner, base, i, target);
                record(lift, frame, cur, sum_index);
            }
            ceiling = std::max(target, i);
        }
    }
    record(pack, frame, cur, sum_weight);
    for (EdgeId base : frame.tree().edges()) {
        int floor = 0;
        for (int i = 1; i <= span; ++i) {
            const auto owner = edge_owners(frame.graph(), cur);
            if (owner[frame.classes().copy(base, i)] == kFree) continue;
            const int target = floor + 1;
            if (target < i) {
                cur = shift_copy(frame, cur, owner, base, i, target);
                record(pack, frame, cur, sum_weight);
            }
            floor = std::min(target, i);
        }
    }
    return cur;
}

Simplified simplify(const TreeFrame& frame, const WeakLinkage& w) {
    Simplified out;
    auto& traces = out.report.traces;
    traces.resize(7);
    WeakLinkage cur = push_onto_tree(frame, w, &traces[0]);
    cur = make_extremal(frame, cur, &traces[1]);
    cur = eliminate_u_turns(frame, cur, UTurnMode::special_only, &traces[2]);
    cur = eliminate_swollen(frame, cur, &traces[3]);
    const Segmentation seg = segments(frame, cur);
    out.report.segments_after_swollen = static_cast<long long>(seg.segments.size());
    out.report.potential_after_swollen = seg.potential();
    cur = eliminate_u_turns(frame, cur, UTurnMode::all, &traces[4]);
    out.report.two_copies_per_segment = segments_use_two_copies(frame, cur);
    cur = make_canonical(frame, cur, &traces[5], &traces[6]);
    out.report.multiplicity = multiplicity(frame.classes(), cur);
    out.linkage = std::move(cur);
    return out;
}

}  // namespace pdp
