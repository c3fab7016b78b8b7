#include "pdp/plane_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace pdp {

PlaneGraph::PlaneGraph(RotationSystem description) : desc_(std::move(description)) {
    const int n = desc_.num_vertices;
    const int m = static_cast<int>(desc_.edges.size());
    if (n <= 0) throw MalformedRotation("graph needs at least one vertex");
    if (static_cast<int>(desc_.rotation.size()) != n)
        throw MalformedRotation("rotation count differs from vertex count");
    for (EdgeId e = 0; e < m; ++e) {
        const Edge& ed = desc_.edges[e];
        if (ed.u < 0 || ed.u >= n || ed.v < 0 || ed.v >= n)
            throw MalformedRotation("edge " + std::to_string(e) + " has an unknown endpoint");
        if (ed.u == ed.v) throw MalformedRotation("self-loop on edge " + std::to_string(e));
    }

    position_.assign(2 * m, -1);
    for (VertexId v = 0; v < n; ++v) {
        const auto& rot = desc_.rotation[v];
        for (int p = 0; p < static_cast<int>(rot.size()); ++p) {
            EdgeId e = rot[p];
            if (e < 0 || e >= m)
                throw MalformedRotation("rotation of " + std::to_string(v) + " lists unknown edge " +
                                        std::to_string(e));
            const Edge& ed = desc_.edges[e];
            if (ed.u != v && ed.v != v)
                throw MalformedRotation("rotation of " + std::to_string(v) + " lists non-incident edge " +
                                        std::to_string(e));
            Dart d = dart_of(e, ed.u != v);
            if (position_[d] != -1)
                throw MalformedRotation("edge " + std::to_string(e) + " listed twice around " +
                                        std::to_string(v));
            position_[d] = p;
        }
    }
    for (Dart d = 0; d < 2 * m; ++d)
        if (position_[d] == -1)
            throw MalformedRotation("edge " + std::to_string(edge_of(d)) + " missing from the rotation of " +
                                    std::to_string(tail(d)));
    if (!is_connected(*this)) throw MalformedRotation("graph is disconnected");

    face_of_dart_.assign(2 * m, -1);
    for (Dart start = 0; start < 2 * m; ++start) {
        if (face_of_dart_[start] != -1) continue;
        const FaceId f = static_cast<FaceId>(faces_.size());
        faces_.emplace_back();
        Dart d = start;
        do {
            face_of_dart_[d] = f;
            faces_.back().push_back(d);
            d = next_in_face(d);
        } while (d != start);
    }
    if (m == 0) {
        faces_.emplace_back();
        outer_face_ = 0;
    } else {
        if (desc_.outer_witness < 0 || desc_.outer_witness >= 2 * m)
            throw MalformedRotation("outer face witness is not a dart");
        outer_face_ = face_of_dart_[desc_.outer_witness];
    }
    if (n - m + num_faces() != 2)
        throw NonPlanarRotation("V - E + F = " + std::to_string(n - m + num_faces()));
}

EdgeId PlaneGraph::rotation_next(VertexId v, EdgeId e) const {
    const auto& rot = desc_.rotation[v];
    int p = position_[dart_from(e, v)];
    return rot[(p + 1) % rot.size()];
}

EdgeId PlaneGraph::rotation_prev(VertexId v, EdgeId e) const {
    const auto& rot = desc_.rotation[v];
    int p = position_[dart_from(e, v)];
    return rot[(p + rot.size() - 1) % rot.size()];
}

Dart PlaneGraph::next_in_face(Dart d) const {
    const VertexId h = head(d);
    const int deg = degree(h);
    const int p = position_[reverse(d)];
    return out_dart(h, (p + deg - 1) % deg);
}

PlaneGraph PlaneGraph::with_outer(Dart witness) const {
    RotationSystem rs = desc_;
    rs.outer_witness = witness;
    return PlaneGraph(std::move(rs));
}

bool is_connected(const PlaneGraph& g) {
    const int n = g.num_vertices();
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (EdgeId e : g.rotation(v)) {
            VertexId w = g.other_end(e, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

bool is_triangulated(const PlaneGraph& g) {
    for (FaceId f = 0; f < g.num_faces(); ++f) {
        auto sz = g.face_darts(f).size();
        if (sz != 2 && sz != 3) return false;
    }
    return true;
}

std::vector<VertexId> Instance::sources() const {
    std::vector<VertexId> out;
    for (const auto& p : pairs) out.push_back(p.source);
    return out;
}

std::vector<VertexId> Instance::targets() const {
    std::vector<VertexId> out;
    for (const auto& p : pairs) out.push_back(p.target);
    return out;
}

std::vector<VertexId> Instance::terminals() const {
    std::vector<VertexId> out;
    for (const auto& p : pairs) {
        out.push_back(p.source);
        out.push_back(p.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Instance::is_terminal(VertexId v) const {
    return std::any_of(pairs.begin(), pairs.end(),
                       [v](const TerminalPair& p) { return p.source == v || p.target == v; });
}

void validate_pairs(const Instance& inst) {
    std::set<VertexId> sources, targets;
    for (const auto& p : inst.pairs) {
        if (p.source < 0 || p.source >= inst.graph.num_vertices() || p.target < 0 ||
            p.target >= inst.graph.num_vertices())
            throw ParseError("terminal outside the vertex range");
        if (p.source == p.target) throw ParseError("pair with identical endpoints");
        if (!sources.insert(p.source).second) throw ParseError("repeated source");
        if (!targets.insert(p.target).second) throw ParseError("repeated target");
    }
}

RadialCompletion radial_completion(const PlaneGraph& g) {
    if (g.num_edges() == 0) throw MalformedRotation("radial completion needs at least one edge");
    const int n = g.num_vertices();
    const int m = g.num_edges();
    RotationSystem rs;
    rs.num_vertices = n + g.num_faces();
    rs.edges = g.description().edges;
    rs.rotation.assign(rs.num_vertices, {});

    // corner_edge[d]: the new edge in the corner entered by dart d.
    std::vector<EdgeId> corner_edge(2 * m, -1);
    for (FaceId f = 0; f < g.num_faces(); ++f) {
        const VertexId r = n + f;
        for (Dart d : g.face_darts(f)) {
            EdgeId e = static_cast<EdgeId>(rs.edges.size());
            rs.edges.push_back({g.head(d), r});
            corner_edge[d] = e;
            rs.rotation[r].push_back(e);
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        auto rot = g.rotation(v);
        for (int p = 0; p < static_cast<int>(rot.size()); ++p) {
            Dart incoming = reverse(g.out_dart(v, p));
            rs.rotation[v].push_back(corner_edge[incoming]);
            rs.rotation[v].push_back(rot[p]);
        }
    }
    rs.outer_witness = g.outer_witness();
    PlaneGraph h(std::move(rs));
    if (!is_triangulated(h)) throw InvariantViolation("radial completion is not triangulated");
    return RadialCompletion{std::move(h), n, m};
}

ParallelClasses::ParallelClasses(int n, int base_edges)
    : n_(n),
      base_edges_(base_edges),
      copies_(base_edges, std::vector<EdgeId>(4 * n + 1, -1)),
      base_of_(static_cast<size_t>(base_edges) * (4 * n + 1), -1),
      index_of_(static_cast<size_t>(base_edges) * (4 * n + 1), 0),
      cw_at_u_(base_edges, true) {}

void ParallelClasses::assign(EdgeId base, int index, EdgeId id) {
    copies_[base][index + 2 * n_] = id;
    base_of_[id] = base;
    index_of_[id] = index;
}

void ParallelClasses::flip(EdgeId base) {
    for (int i = 1; i <= 2 * n_; ++i) {
        EdgeId a = copy(base, i);
        EdgeId b = copy(base, -i);
        assign(base, i, b);
        assign(base, -i, a);
    }
    cw_at_u_[base] = !cw_at_u_[base];
}

EnrichedGraph enrich_parallel(const PlaneGraph& h, int n) {
    if (n < 0) throw PreconditionViolation("negative copy parameter");
    const int m = h.num_edges();
    ParallelClasses classes(n, m);
    RotationSystem rs;
    rs.num_vertices = h.num_vertices();
    rs.edges.resize(static_cast<size_t>(m) * (4 * n + 1));
    EdgeId next = m;
    for (EdgeId e = 0; e < m; ++e) {
        for (int i = -2 * n; i <= 2 * n; ++i) {
            EdgeId id = (i == 0) ? e : next++;
            rs.edges[id] = h.edge(e);
            classes.assign(e, i, id);
        }
    }
    rs.rotation.assign(rs.num_vertices, {});
    for (VertexId v = 0; v < h.num_vertices(); ++v) {
        for (EdgeId e : h.rotation(v)) {
            if (h.edge(e).u == v) {
                for (int i = -2 * n; i <= 2 * n; ++i) rs.rotation[v].push_back(classes.copy(e, i));
            } else {
                for (int i = 2 * n; i >= -2 * n; --i) rs.rotation[v].push_back(classes.copy(e, i));
            }
        }
    }
    // The outer face sits beyond the outermost copy on the witness side:
    // copy 2n is rightmost seen from u, so it bounds the right of u -> v.
    const Dart w = h.outer_witness();
    const bool from_v = w & 1;
    rs.outer_witness = dart_of(classes.copy(edge_of(w), from_v ? -2 * n : 2 * n), from_v);
    return EnrichedGraph{PlaneGraph(std::move(rs)), std::move(classes)};
}

OrientedEnrichment orient_edges_order(EnrichedGraph h, std::span<const EdgeId> tree_edges) {
    const PlaneGraph& g = h.graph;
    const int n = g.num_vertices();
    std::vector<std::vector<EdgeId>> adj(n);
    std::vector<char> is_tree_base(h.classes.base_edges(), 0);
    std::set<VertexId> vertices;
    for (EdgeId e : tree_edges) {
        if (e < 0 || e >= h.classes.base_edges() || is_tree_base[e])
            throw NotATree("invalid or repeated tree edge " + std::to_string(e));
        is_tree_base[e] = 1;
        adj[g.edge(e).u].push_back(e);
        adj[g.edge(e).v].push_back(e);
        vertices.insert(g.edge(e).u);
        vertices.insert(g.edge(e).v);
    }
    EdgeOrders orders;
    orders.color.assign(n, std::nullopt);
    orders.order.assign(n, {});
    orders.tree_edge_order.assign(n, {});
    if (tree_edges.empty()) return OrientedEnrichment{std::move(h), std::move(orders)};
    if (tree_edges.size() + 1 != vertices.size()) throw NotATree("edge count does not match a tree");

    VertexId root = *vertices.begin();
    orders.color[root] = Color::red;
    std::deque<VertexId> queue{root};
    size_t reached = 1;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (EdgeId e : adj[v]) {
            VertexId w = g.other_end(e, v);
            Color want = *orders.color[v] == Color::red ? Color::green : Color::red;
            if (!orders.color[w]) {
                orders.color[w] = want;
                ++reached;
                queue.push_back(w);
            } else if (*orders.color[w] != want) {
                throw NotATree("odd cycle through " + std::to_string(w));
            }
        }
    }
    if (reached != vertices.size()) throw NotATree("tree edges are disconnected");

    for (EdgeId e : tree_edges) {
        VertexId red = *orders.color[g.edge(e).u] == Color::red ? g.edge(e).u : g.edge(e).v;
        bool cw_at_red = (red == g.edge(e).u) == h.classes.increasing_clockwise_at_u(e);
        if (!cw_at_red) h.classes.flip(e);
    }

    const int span = h.classes.span();
    for (VertexId v : vertices) {
        EdgeId first = *std::min_element(adj[v].begin(), adj[v].end());
        Dart start = g.dart_from(h.classes.copy(first, -span), v);
        const int deg = g.degree(v);
        const int step = *orders.color[v] == Color::red ? 1 : deg - 1;
        int p = g.position(start);
        for (int i = 0; i < deg; ++i, p = (p + step) % deg) {
            EdgeId e = g.rotation(v)[p];
            EdgeId base = h.classes.base_of(e);
            if (!is_tree_base[base]) continue;
            orders.order[v].push_back(e);
            if (orders.tree_edge_order[v].empty() || orders.tree_edge_order[v].back() != base)
                orders.tree_edge_order[v].push_back(base);
        }
        // Each block must list indices -2n..2n in order.
        const auto& ord = orders.order[v];
        for (size_t i = 0; i < ord.size(); ++i) {
            int expected = static_cast<int>(i % (2 * span + 1)) - span;
            if (h.classes.index_of(ord[i]) != expected)
                throw InvariantViolation("copy order broken around vertex " + std::to_string(v));
        }
    }
    return OrientedEnrichment{std::move(h), std::move(orders)};
}

std::vector<std::optional<int>> bfs_distances(const PlaneGraph& g, VertexId source) {
    std::vector<std::optional<int>> dist(g.num_vertices());
    dist[source] = 0;
    std::deque<VertexId> queue{source};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (EdgeId e : g.rotation(v)) {
            VertexId w = g.other_end(e, v);
            if (!dist[w]) {
                dist[w] = *dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::optional<int> dist(const PlaneGraph& g, VertexId u, VertexId v) { return bfs_distances(g, u)[v]; }

std::optional<int> rdist(const PlaneGraph& g, VertexId u, VertexId v) {
    // Breadth-first search in the vertex/face incidence structure: one hop
    // moves between two vertices on a common face.
    std::vector<std::vector<FaceId>> faces_at(g.num_vertices());
    for (FaceId f = 0; f < g.num_faces(); ++f)
        for (Dart d : g.face_darts(f)) faces_at[g.tail(d)].push_back(f);
    std::vector<int> vdist(g.num_vertices(), -1);
    std::vector<char> face_done(g.num_faces(), 0);
    vdist[u] = 0;
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        if (x == v) return vdist[x];
        for (FaceId f : faces_at[x]) {
            if (face_done[f]) continue;
            face_done[f] = 1;
            for (Dart d : g.face_darts(f)) {
                VertexId y = g.tail(d);
                if (vdist[y] == -1) {
                    vdist[y] = vdist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

struct Role {
    int pair;
    bool is_source;
};

// Inserts a new pendant vertex into the corner entered by `incoming` at v.
// Returns the dart from v to the pendant.
Dart attach_pendant(RotationSystem& rs, VertexId v, Dart incoming) {
    VertexId w = rs.num_vertices++;
    EdgeId e = static_cast<EdgeId>(rs.edges.size());
    rs.edges.push_back({v, w});
    rs.rotation.push_back({e});
    auto& rot = rs.rotation[v];
    EdgeId before = edge_of(incoming);
    auto it = std::find(rot.begin(), rot.end(), before);
    rot.insert(it, e);
    return dart_of(e, false);
}

}  // namespace

NiceInstance make_nice(const Instance& inst) {
    validate_pairs(inst);
    const PlaneGraph& g = inst.graph;
    NiceInstance out;
    if (inst.k() == 0) {
        out.instance = inst;
        out.outer_terminal = -1;
        out.origin.resize(g.num_vertices());
        std::iota(out.origin.begin(), out.origin.end(), 0);
        return out;
    }

    std::vector<std::vector<Role>> roles(g.num_vertices());
    for (int i = 0; i < inst.k(); ++i) {
        roles[inst.pairs[i].source].push_back({i, true});
        roles[inst.pairs[i].target].push_back({i, false});
    }

    // Pick the outer face so that some target lies on it.
    Dart witness = g.outer_witness();
    VertexId star = -1;
    {
        std::set<VertexId> on_outer;
        for (Dart d : g.face_darts(g.outer_face())) on_outer.insert(g.tail(d));
        for (const auto& p : inst.pairs)
            if (on_outer.count(p.target) && (star == -1 || p.target < star)) star = p.target;
        if (star == -1) {
            star = inst.pairs.front().target;
            for (const auto& p : inst.pairs) star = std::min(star, p.target);
            witness = reverse(g.out_dart(star, 0));
        }
    }
    const PlaneGraph rooted = g.with_outer(witness);

    RotationSystem rs = rooted.description();
    out.origin.resize(g.num_vertices());
    std::iota(out.origin.begin(), out.origin.end(), 0);
    std::vector<TerminalPair> pairs = inst.pairs;
    VertexId outer_terminal = star;

    auto needs_pendant = [&](VertexId v) { return g.degree(v) != 1 || roles[v].size() > 1; };

    // The outer terminal first, in a corner of the outer face.
    if (needs_pendant(star)) {
        Dart incoming = -1;
        for (Dart d : rooted.face_darts(rooted.outer_face()))
            if (rooted.head(d) == star) {
                incoming = d;
                break;
            }
        Dart to_pendant = attach_pendant(rs, star, incoming);
        VertexId w = rs.num_vertices - 1;
        out.origin.push_back(star);
        for (const Role& r : roles[star])
            if (!r.is_source) pairs[r.pair].target = w;
        outer_terminal = w;
        rs.outer_witness = to_pendant;
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (roles[v].empty() || !needs_pendant(v)) continue;
        for (const Role& r : roles[v]) {
            if (v == star && !r.is_source) continue;
            attach_pendant(rs, v, reverse(rooted.out_dart(v, 0)));
            VertexId w = rs.num_vertices - 1;
            out.origin.push_back(v);
            if (r.is_source)
                pairs[r.pair].source = w;
            else
                pairs[r.pair].target = w;
        }
    }
    out.instance = Instance{PlaneGraph(std::move(rs)), std::move(pairs)};
    out.outer_terminal = outer_terminal;
    return out;
}

}  // namespace pdp
