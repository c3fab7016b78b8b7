#include "pdp/rings.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <optional>
#include <string>

namespace pdp {
namespace {

EdgeId least_edge(const PlaneGraph& g, VertexId a, VertexId b) {
    EdgeId best = -1;
    for (EdgeId e : g.rotation(a))
        if (g.other_end(e, a) == b && (best == -1 || e < best)) best = e;
    if (best == -1)
        throw PreconditionViolation("interface vertices " + std::to_string(a) + " and " + std::to_string(b) +
                                    " are not adjacent");
    return best;
}

std::vector<EdgeId> closed_edges(const PlaneGraph& g, std::span<const VertexId> cycle) {
    std::vector<EdgeId> out;
    for (std::size_t i = 0; i < cycle.size(); ++i) out.push_back(least_edge(g, cycle[i], cycle[(i + 1) % cycle.size()]));
    return out;
}

// Faces reachable from the outer face without crossing the given edges.
std::vector<char> exterior_faces(const PlaneGraph& g, std::span<const EdgeId> cut) {
    std::vector<char> blocked(g.num_edges(), 0);
    for (EdgeId e : cut) blocked[e] = 1;
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
    return seen;
}

// For a vertex off the cycle, all incident faces lie on the same side.
bool vertex_exterior(const PlaneGraph& g, std::span<const char> exterior, VertexId v) {
    if (g.degree(v) == 0) return true;
    return exterior[g.face(g.out_dart(v, 0))] != 0;
}

// Orients the cycle so that the faces right of its darts satisfy `want_exterior_right`.
void orient_cycle(const PlaneGraph& g, std::vector<VertexId>& cycle, std::span<const char> exterior,
                  bool want_exterior_right) {
    const EdgeId e0 = least_edge(g, cycle[0], cycle[1]);
    const bool right_exterior = exterior[g.right_face(g.dart_from(e0, cycle[0]))] != 0;
    if (right_exterior != want_exterior_right) std::reverse(cycle.begin() + 1, cycle.end());
}

int mod(int a, int m) { return ((a % m) + m) % m; }

constexpr int kLeft = 1;
constexpr int kRight = 2;
constexpr int kOnReference = 0;

int encoded(const PlaneGraph& g, EdgeId e, VertexId at) { return 2 * g.position(g.dart_from(e, at)); }

}  // namespace

Ring::Ring(const PlaneGraph& g, std::vector<VertexId> inner, std::vector<VertexId> outer, Walk reference)
    : g_(&g), inner_(std::move(inner)), outer_(std::move(outer)), reference_(std::move(reference)) {
    const int n = g.num_vertices();
    if (inner_.size() < 3 || outer_.size() < 3) throw PreconditionViolation("interface cycles need 3 vertices");
    interface_.assign(n, 0);
    for (VertexId v : inner_) {
        if (interface_[v]) throw PreconditionViolation("inner interface repeats a vertex");
        interface_[v] = 1;
    }
    for (VertexId v : outer_) {
        if (interface_[v]) throw PreconditionViolation("interfaces are not vertex-disjoint");
        interface_[v] = 2;
    }

    const auto inner_edges = closed_edges(g, inner_);
    const auto outer_edges = closed_edges(g, outer_);
    const auto ext_in = exterior_faces(g, inner_edges);
    const auto ext_out = exterior_faces(g, outer_edges);
    orient_cycle(g, inner_, ext_in, false);
    orient_cycle(g, outer_, ext_out, true);

    for (VertexId v : inner_)
        if (vertex_exterior(g, ext_out, v)) throw PreconditionViolation("inner cycle is not inside the outer cycle");

    member_.assign(n, 0);
    for (VertexId v = 0; v < n; ++v)
        member_[v] = interface_[v] || (vertex_exterior(g, ext_in, v) && !vertex_exterior(g, ext_out, v));

    slot_.assign(n, -1);
    for (const auto* cycle : {&inner_, &outer_}) {
        const std::size_t m = cycle->size();
        for (std::size_t i = 0; i < m; ++i) {
            const VertexId x = (*cycle)[i], next = (*cycle)[(i + 1) % m];
            const int d = g.degree(x);
            int p = g.position(g.dart_from(least_edge(g, x, next), x));
            for (int step = 1; step < d; ++step) {
                const int q = (p + 1) % d;
                if (g.other_end(g.rotation(x)[q], x) != next) break;
                p = q;
            }
            slot_[x] = 2 * p + 1;
        }
    }

    const auto verts = walk_vertices(g, reference_);
    if (on_outer(verts.front()) && on_inner(verts.back())) {
        reference_ = reversed_walk(g, reference_);
    } else if (!(on_inner(verts.front()) && on_outer(verts.back()))) {
        throw PreconditionViolation("reference path does not traverse the ring");
    }
    std::vector<char> seen(n, 0);
    for (VertexId v : verts) {
        if (!member_[v]) throw PreconditionViolation("reference path leaves the ring");
        if (seen[v]) throw PreconditionViolation("reference path is not simple");
        seen[v] = 1;
    }
}

int Ring::num_members() const { return static_cast<int>(std::count(member_.begin(), member_.end(), 1)); }

Walk reversed_walk(const PlaneGraph& g, const Walk& w) {
    Walk out{walk_end(g, w), w.edges};
    std::reverse(out.edges.begin(), out.edges.end());
    return out;
}

ClassifiedWalk classify(const Ring& ring, const Walk& walk) {
    const PlaneGraph& g = ring.graph();
    const auto verts = walk_vertices(g, walk);
    for (VertexId v : verts)
        if (!ring.contains(v)) throw PreconditionViolation("walk leaves the ring at " + std::to_string(v));
    const VertexId s = verts.front(), t = verts.back();
    if (!ring.on_interface(s) || !ring.on_interface(t))
        throw EndpointOffInterface("walk endpoint off the interface cycles");
    ClassifiedWalk out;
    bool flip = false;
    if (ring.on_inner(s) != ring.on_inner(t)) {
        out.kind = WalkKind::traversing;
        flip = ring.on_outer(s);
    } else {
        out.kind = ring.on_inner(s) ? WalkKind::inner_visitor : WalkKind::outer_visitor;
        flip = t < s;
    }
    out.oriented = flip ? reversed_walk(g, walk) : walk;
    return out;
}

std::vector<LabeledPair> label_pairs(const Ring& ring, const Walk& walk, const Walk& reference, SharedEdges mode) {
    const PlaneGraph& g = ring.graph();
    const ClassifiedWalk ref = classify(ring, reference);
    if (ref.kind != WalkKind::traversing) throw PreconditionViolation("reference does not traverse the ring");
    const auto ref_verts = walk_vertices(g, ref.oriented);
    const int m = static_cast<int>(ref.oriented.edges.size());

    std::vector<int> index(g.num_vertices(), -1);
    for (int i = 0; i <= m; ++i) {
        if (index[ref_verts[i]] != -1) throw PreconditionViolation("reference path is not simple");
        index[ref_verts[i]] = i;
    }
    std::vector<char> ref_edge(g.num_edges(), 0);
    for (EdgeId e : ref.oriented.edges) ref_edge[e] = 1;
    if (mode == SharedEdges::reject)
        for (EdgeId e : walk.edges)
            if (ref_edge[e]) throw SharedEdge("walk uses reference edge " + std::to_string(e));

    auto side_at = [&](VertexId x, int enc) {
        const int i = index[x];
        const int in = i > 0 ? encoded(g, ref.oriented.edges[i - 1], x) : ring.slot(x);
        const int out = i < m ? encoded(g, ref.oriented.edges[i], x) : ring.slot(x);
        if (enc == in || enc == out) return kOnReference;
        const int span = 2 * g.degree(x);
        return mod(enc - out, span) < mod(in - out, span) ? kRight : kLeft;
    };
    auto label_of = [](int from, int to) {
        if (from == kLeft && to == kRight) return 1;
        if (from == kRight && to == kLeft) return -1;
        return 0;
    };

    const auto verts = walk_vertices(g, walk);
    const int len = static_cast<int>(walk.edges.size());
    std::vector<LabeledPair> out;
    int last = kOnReference;
    for (int j = 0; j <= len; ++j) {
        const VertexId x = verts[j];
        if (index[x] < 0) continue;
        std::optional<int> before, after;
        if (j > 0) before = encoded(g, walk.edges[j - 1], x);
        else if (ring.on_interface(x)) before = ring.slot(x);
        if (j < len) after = encoded(g, walk.edges[j], x);
        else if (ring.on_interface(x)) after = ring.slot(x);

        if (mode == SharedEdges::reject) {
            if (!before || !after) continue;
            out.push_back({j, x, label_of(side_at(x, *before), side_at(x, *after))});
            continue;
        }
        int label = 0;
        for (const auto& enc : {before, after}) {
            if (!enc) continue;
            const int s = side_at(x, *enc);
            if (s == kOnReference) continue;
            if (last != kOnReference) label += label_of(last, s);
            last = s;
        }
        if (before && after) out.push_back({j, x, label});
        else if (label != 0) out.push_back({j, x, label});
    }
    return out;
}

int winding_number(const Ring& ring, const Walk& alpha, const Walk& beta, SharedEdges mode) {
    const Walk oriented = classify(ring, alpha).oriented;
    int total = 0;
    for (const auto& p : label_pairs(ring, oriented, beta, mode)) total += p.label;
    return total;
}

int winding_number(const Ring& ring, const Walk& alpha, SharedEdges mode) {
    return winding_number(ring, alpha, ring.reference(), mode);
}

int winding_number_of_linkage(const Ring& ring, const WeakLinkage& linkage) {
    for (const Walk& w : linkage.walks)
        if (classify(ring, w).kind == WalkKind::traversing) return winding_number(ring, w);
    return 0;
}

Ring ring_of_long_path(const RadialCompletion& h, const LongPathData& path) {
    Walk reference{path.replacement.front(), path_edges(h.graph, path.replacement)};
    return Ring(h.graph, cycle_order(h.graph, path.sep_u), cycle_order(h.graph, path.sep_v), std::move(reference));
}

int solution_winding(const RadialCompletion& h, const LongPathData& path, const WeakLinkage& solution) {
    const Ring ring = ring_of_long_path(h, path);
    int best = 0;
    for (const Walk& w : solution.walks) {
        const auto verts = walk_vertices(h.graph, w);
        const int len = static_cast<int>(w.edges.size());
        int a = 0;
        while (a <= len) {
            if (!ring.contains(verts[a])) {
                ++a;
                continue;
            }
            int b = a;
            while (b < len && ring.contains(verts[b + 1])) ++b;
            if (b > a && ring.on_interface(verts[a]) && ring.on_interface(verts[b])) {
                Walk sub{verts[a], std::vector<EdgeId>(w.edges.begin() + a, w.edges.begin() + b)};
                best = std::max(best, std::abs(winding_number(ring, sub, SharedEdges::tolerate)));
            }
            a = b + 1;
        }
    }
    return best;
}

}  // namespace pdp
