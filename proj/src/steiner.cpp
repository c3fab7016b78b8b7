#include "pdp/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace pdp {

namespace {

constexpr std::int64_t saturated = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > saturated / b) return saturated;
    return a * b;
}

std::int64_t sat_add(std::int64_t a, std::int64_t b) { return std::min(saturated, a + b); }

using Adjacency = std::vector<std::vector<std::pair<VertexId, EdgeId>>>;

// Neighbours sorted by (vertex, edge) so every search is lexicographic.
Adjacency sorted_adjacency(const PlaneGraph& h) {
    Adjacency adj(h.num_vertices());
    for (VertexId v = 0; v < h.num_vertices(); ++v) {
        for (EdgeId e : h.rotation(v)) adj[v].emplace_back(h.other_end(e, v), e);
        std::sort(adj[v].begin(), adj[v].end());
    }
    return adj;
}

std::vector<char> mask_of(int n, std::span<const VertexId> vs) {
    std::vector<char> m(n, 0);
    for (VertexId v : vs) m[v] = 1;
    return m;
}

// Drops non-terminal leaves until every leaf is a terminal.
std::vector<EdgeId> prune_to_terminals(const PlaneGraph& h, std::vector<EdgeId> edges,
                                       const std::vector<char>& is_terminal) {
    std::vector<std::vector<EdgeId>> inc(h.num_vertices());
    std::vector<char> alive(h.num_edges(), 0);
    for (EdgeId e : edges) {
        alive[e] = 1;
        inc[h.edge(e).u].push_back(e);
        inc[h.edge(e).v].push_back(e);
    }
    std::vector<int> deg(h.num_vertices());
    for (VertexId v = 0; v < h.num_vertices(); ++v) deg[v] = static_cast<int>(inc[v].size());
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < h.num_vertices(); ++v)
        if (deg[v] == 1 && !is_terminal[v]) queue.push_back(v);
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        if (deg[v] != 1 || is_terminal[v]) continue;
        for (EdgeId e : inc[v]) {
            if (!alive[e]) continue;
            alive[e] = 0;
            --deg[v];
            const VertexId w = h.other_end(e, v);
            if (--deg[w] == 1 && !is_terminal[w]) queue.push_back(w);
        }
    }
    std::vector<EdgeId> out;
    for (EdgeId e : edges)
        if (alive[e]) out.push_back(e);
    return out;
}

// Vertices reachable from `start` in the tree without entering `blocked`.
std::vector<char> tree_component(const SteinerTree& r, VertexId start, const std::vector<char>& blocked) {
    std::vector<char> seen(r.host_vertices(), 0);
    if (blocked[start]) return seen;
    std::deque<VertexId> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        for (EdgeId e : r.incident(x)) {
            const VertexId y = r.other_end(e, x);
            if (seen[y] || blocked[y]) continue;
            seen[y] = 1;
            queue.push_back(y);
        }
    }
    return seen;
}

// Residual network with unit-scale capacities and integer costs.
class Network {
public:
    explicit Network(int nodes) : adj_(nodes) {}

    int add_arc(int from, int to, int cap, int cost) {
        const int id = static_cast<int>(arcs_.size());
        arcs_.push_back({to, cap, cost});
        arcs_.push_back({from, 0, -cost});
        adj_[from].push_back(id);
        adj_[to].push_back(id + 1);
        return id;
    }

    // Breadth-first augmenting paths; returns the flow value.
    int max_flow(int source, int sink) {
        int value = 0;
        while (true) {
            std::vector<int> via(adj_.size(), -1);
            std::deque<int> queue{source};
            std::vector<char> seen(adj_.size(), 0);
            seen[source] = 1;
            while (!queue.empty() && !seen[sink]) {
                const int x = queue.front();
                queue.pop_front();
                for (int a : adj_[x]) {
                    const int y = arcs_[a].to;
                    if (arcs_[a].cap <= 0 || seen[y]) continue;
                    seen[y] = 1;
                    via[y] = a;
                    queue.push_back(y);
                }
            }
            if (!seen[sink]) return value;
            augment(sink, via, source);
            ++value;
        }
    }

    // Successive shortest paths (Bellman-Ford queue) until no augmenting
    // path remains; returns (flow, cost).
    std::pair<int, int> min_cost_max_flow(int source, int sink) {
        int value = 0, cost = 0;
        const int inf = std::numeric_limits<int>::max() / 4;
        while (true) {
            std::vector<int> dist(adj_.size(), inf), via(adj_.size(), -1);
            std::vector<char> queued(adj_.size(), 0);
            std::deque<int> queue{source};
            dist[source] = 0;
            queued[source] = 1;
            while (!queue.empty()) {
                const int x = queue.front();
                queue.pop_front();
                queued[x] = 0;
                for (int a : adj_[x]) {
                    if (arcs_[a].cap <= 0) continue;
                    const int y = arcs_[a].to;
                    if (dist[x] + arcs_[a].cost < dist[y]) {
                        dist[y] = dist[x] + arcs_[a].cost;
                        via[y] = a;
                        if (!queued[y]) {
                            queued[y] = 1;
                            queue.push_back(y);
                        }
                    }
                }
            }
            if (dist[sink] == inf) return {value, cost};
            augment(sink, via, source);
            ++value;
            cost += dist[sink];
        }
    }

    std::vector<char> reachable(int source) const {
        std::vector<char> seen(adj_.size(), 0);
        std::deque<int> queue{source};
        seen[source] = 1;
        while (!queue.empty()) {
            const int x = queue.front();
            queue.pop_front();
            for (int a : adj_[x])
                if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
                    seen[arcs_[a].to] = 1;
                    queue.push_back(arcs_[a].to);
                }
        }
        return seen;
    }

    int flow_on(int arc) const { return arcs_[arc ^ 1].cap; }

private:
    struct Arc {
        int to;
        int cap;
        int cost;
    };

    void augment(int sink, const std::vector<int>& via, int source) {
        for (int y = sink; y != source;) {
            const int a = via[y];
            arcs_[a].cap -= 1;
            arcs_[a ^ 1].cap += 1;
            y = arcs_[a ^ 1].to;
        }
    }

    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> adj_;
};

// Original-graph vertices strictly between two nested cuts.
std::vector<char> between_mask(const RadialCompletion& h, std::span<const VertexId> inner_cut,
                               std::span<const VertexId> outer_cut) {
    const PlaneGraph& H = h.graph;
    const auto inner_inside = strict_interior(H, inner_cut);
    const auto outer_inside = strict_interior(H, outer_cut);
    const auto on_inner = mask_of(H.num_vertices(), inner_cut);
    const auto on_outer = mask_of(H.num_vertices(), outer_cut);
    std::vector<char> out(H.num_vertices(), 0);
    for (VertexId v = 0; v < H.num_vertices(); ++v)
        out[v] = h.is_original_vertex(v) && !on_inner[v] && !on_outer[v] && !inner_inside[v] && outer_inside[v];
    return out;
}

bool connects(const PlaneGraph& h, const std::vector<char>& removed, std::span<const VertexId> from,
              std::span<const VertexId> to) {
    const auto comp = component_mask(h, removed, from);
    return std::any_of(to.begin(), to.end(), [&](VertexId v) { return comp[v] != 0; });
}

}  // namespace

// ---------------------------------------------------------------- constants

AlgorithmConstants AlgorithmConstants::standard(int k, double c) {
    AlgorithmConstants a;
    a.k = k;
    a.c = c;
    return a;
}

AlgorithmConstants AlgorithmConstants::relaxed(int k, std::int64_t long_path, std::int64_t pattern) {
    if (pattern < 2 || long_path <= 2 * pattern)
        throw PreconditionViolation("relaxed constants need pattern >= 2 and long path > 2 * pattern");
    AlgorithmConstants a;
    a.k = k;
    a.long_override = long_path;
    a.pat_override = pattern;
    return a;
}

std::int64_t AlgorithmConstants::two_ck() const {
    const double e = c * k;
    if (e >= 60) return saturated;
    return static_cast<std::int64_t>(std::ceil(std::pow(2.0, e)));
}

std::int64_t AlgorithmConstants::dist() const { return sat_mul(4, two_ck()); }
std::int64_t AlgorithmConstants::long_path() const { return long_override ? *long_override : sat_mul(10000, two_ck()); }
std::int64_t AlgorithmConstants::pattern() const { return pat_override ? *pat_override : sat_mul(100, two_ck()); }
std::int64_t AlgorithmConstants::sep() const {
    // (7/2) 2^{ck} + 2, rounded up.
    return sat_add((sat_mul(7, two_ck()) + 1) / 2, 2);
}
std::int64_t AlgorithmConstants::winding() const { return sat_add(sat_mul(60, sep()), 11); }
std::int64_t AlgorithmConstants::seg_groups() const { return sat_mul(sat_mul(100000, k), two_ck()); }
std::int64_t AlgorithmConstants::potential() const {
    return sat_mul(sat_add(sat_mul(10000, sat_mul(two_ck(), two_ck())), 1), seg_groups());
}
std::int64_t AlgorithmConstants::multiplicity() const { return sat_mul(2, potential()); }
std::int64_t AlgorithmConstants::npair() const { return 48LL * k; }
std::int64_t AlgorithmConstants::non_ring() const { return sat_mul(sat_mul(10000, k), two_ck()); }

// ------------------------------------------------------------- Steiner tree

SteinerTree::SteinerTree(const PlaneGraph& host, std::vector<EdgeId> edges, std::vector<VertexId> terminals)
    : edges_(std::move(edges)), terminals_(std::move(terminals)), incident_(host.num_vertices()) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    std::sort(terminals_.begin(), terminals_.end());
    ends_.reserve(host.num_edges());
    for (EdgeId e = 0; e < host.num_edges(); ++e) ends_.push_back(host.edge(e));
    std::vector<char> in_tree(host.num_edges(), 0);
    for (EdgeId e : edges_) {
        if (e < 0 || e >= host.num_edges()) throw PreconditionViolation("tree edge " + std::to_string(e) + " unknown");
        in_tree[e] = 1;
    }
    for (VertexId v = 0; v < host.num_vertices(); ++v)
        for (EdgeId e : host.rotation(v))
            if (in_tree[e]) incident_[v].push_back(e);
}

bool SteinerTree::contains_edge(EdgeId e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

VertexId SteinerTree::other_end(EdgeId e, VertexId v) const { return ends_[e].u == v ? ends_[e].v : ends_[e].u; }

std::vector<VertexId> SteinerTree::vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < host_vertices(); ++v)
        if (!incident_[v].empty()) out.push_back(v);
    return out;
}

std::vector<VertexId> SteinerTree::leaves() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < host_vertices(); ++v)
        if (incident_[v].size() == 1) out.push_back(v);
    return out;
}

std::vector<VertexId> SteinerTree::branch_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < host_vertices(); ++v)
        if (!incident_[v].empty() && incident_[v].size() != 2) out.push_back(v);
    return out;
}

std::vector<TreePath> SteinerTree::maximal_paths() const {
    std::vector<TreePath> out;
    for (VertexId b : branch_vertices()) {
        for (EdgeId first : incident_[b]) {
            TreePath p;
            p.vertices.push_back(b);
            VertexId cur = b;
            EdgeId e = first;
            while (true) {
                p.edges.push_back(e);
                const VertexId next = other_end(e, cur);
                p.vertices.push_back(next);
                if (incident_[next].size() != 2) break;
                e = incident_[next][0] == e ? incident_[next][1] : incident_[next][0];
                cur = next;
                if (static_cast<int>(p.edges.size()) > num_edges()) throw InvariantViolation("tree contains a cycle");
            }
            if (p.vertices.front() < p.vertices.back()) out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end(), [](const TreePath& a, const TreePath& b) {
        return std::pair(a.front(), a.edges.front()) < std::pair(b.front(), b.edges.front());
    });
    return out;
}

std::vector<VertexId> SteinerTree::path_between(VertexId u, VertexId v) const {
    std::vector<VertexId> parent(host_vertices(), -1);
    std::vector<char> seen(host_vertices(), 0);
    std::deque<VertexId> queue{u};
    seen[u] = 1;
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        if (x == v) break;
        for (EdgeId e : incident_[x]) {
            const VertexId y = other_end(e, x);
            if (seen[y]) continue;
            seen[y] = 1;
            parent[y] = x;
            queue.push_back(y);
        }
    }
    if (!seen[v]) throw Unreachable("no tree path between " + std::to_string(u) + " and " + std::to_string(v));
    std::vector<VertexId> path{v};
    while (path.back() != u) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

bool SteinerTree::is_tree() const {
    const auto vs = vertices();
    if (vs.empty()) return edges_.empty();
    if (static_cast<int>(vs.size()) != num_edges() + 1) return false;
    const auto comp = tree_component(*this, vs.front(), std::vector<char>(host_vertices(), 0));
    return std::all_of(vs.begin(), vs.end(), [&](VertexId v) { return comp[v] != 0; });
}

SteinerTree initial_steiner_tree(const PlaneGraph& h, std::span<const VertexId> terminals) {
    std::vector<VertexId> terms(terminals.begin(), terminals.end());
    if (terms.empty()) return SteinerTree(h, {}, {});
    const auto is_terminal = mask_of(h.num_vertices(), terms);
    VertexId start = terms.front();
    for (VertexId v = 0; v < h.num_vertices(); ++v)
        if (!is_terminal[v]) {
            start = v;
            break;
        }
    const Adjacency adj = sorted_adjacency(h);
    std::vector<EdgeId> parent_edge(h.num_vertices(), -1);
    std::vector<char> seen(h.num_vertices(), 0);
    std::deque<VertexId> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        if (is_terminal[x] && x != start) continue;
        for (auto [y, e] : adj[x]) {
            if (seen[y]) continue;
            seen[y] = 1;
            parent_edge[y] = e;
            queue.push_back(y);
        }
    }
    for (VertexId t : terms)
        if (!seen[t]) throw TerminalsDisconnected("terminal " + std::to_string(t) + " unreachable");
    std::vector<EdgeId> edges;
    for (VertexId v = 0; v < h.num_vertices(); ++v)
        if (parent_edge[v] != -1) edges.push_back(parent_edge[v]);
    return SteinerTree(h, prune_to_terminals(h, std::move(edges), is_terminal), terms);
}

// ------------------------------------------------------------------ detours

namespace {

struct PathSides {
    std::vector<char> interior;  // internal vertices of the path
    std::vector<char> side_u;
    std::vector<char> side_v;
};

PathSides sides_of(const SteinerTree& r, const TreePath& p) {
    PathSides s;
    s.interior.assign(r.host_vertices(), 0);
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) s.interior[p.vertices[i]] = 1;
    s.side_u = tree_component(r, p.front(), s.interior);
    s.side_v = tree_component(r, p.back(), s.interior);
    return s;
}

}  // namespace

std::optional<DetourWitness> find_detour(const PlaneGraph& h, const SteinerTree& r) {
    const Adjacency adj = sorted_adjacency(h);
    const auto is_terminal = mask_of(h.num_vertices(), r.terminals());
    for (const TreePath& p : r.maximal_paths()) {
        if (p.length() < 2) continue;
        const PathSides sides = sides_of(r, p);
        std::vector<char> removed(h.num_vertices(), 0);
        for (VertexId v = 0; v < h.num_vertices(); ++v)
            removed[v] = (sides.interior[v] || is_terminal[v]) && v != p.front() && v != p.back();
        std::vector<int> dist(h.num_vertices(), -1);
        std::vector<VertexId> parent(h.num_vertices(), -1);
        std::deque<VertexId> queue;
        for (VertexId v = 0; v < h.num_vertices(); ++v)
            if (sides.side_u[v] && !removed[v]) {
                dist[v] = 0;
                queue.push_back(v);
            }
        VertexId hit = -1;
        while (!queue.empty() && hit == -1) {
            const VertexId x = queue.front();
            queue.pop_front();
            if (dist[x] + 1 >= p.length()) break;
            for (auto [y, e] : adj[x]) {
                if (removed[y] || dist[y] != -1) continue;
                dist[y] = dist[x] + 1;
                parent[y] = x;
                if (sides.side_v[y]) {
                    hit = y;
                    break;
                }
                queue.push_back(y);
            }
        }
        if (hit == -1) continue;
        DetourWitness w;
        w.u = p.front();
        w.v = p.back();
        for (VertexId x = hit; x != -1; x = parent[x]) w.path.push_back(x);
        std::reverse(w.path.begin(), w.path.end());
        w.edges = path_edges(h, w.path);
        return w;
    }
    return std::nullopt;
}

SteinerTree undetour(const PlaneGraph& h, const SteinerTree& r, const DetourWitness& w) {
    const auto paths = r.maximal_paths();
    const auto it = std::find_if(paths.begin(), paths.end(), [&](const TreePath& p) {
        return (p.front() == w.u && p.back() == w.v) || (p.front() == w.v && p.back() == w.u);
    });
    if (it == paths.end()) throw NonCompactWitness("witness endpoints are not near each other");
    if (w.path.size() < 2 || w.edges.size() + 1 != w.path.size())
        throw NonCompactWitness("witness path is malformed");
    if (static_cast<int>(w.edges.size()) >= it->length()) throw NonCompactWitness("witness path is not shorter");
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        const Edge& ed = h.edge(w.edges[i]);
        if (!((ed.u == w.path[i] && ed.v == w.path[i + 1]) || (ed.v == w.path[i] && ed.u == w.path[i + 1])))
            throw NonCompactWitness("witness edges do not follow its vertices");
    }
    const PathSides sides = sides_of(r, *it);
    const bool forward = it->front() == w.u;
    const auto& near_side = forward ? sides.side_u : sides.side_v;
    const auto& far_side = forward ? sides.side_v : sides.side_u;
    if (!near_side[w.path.front()] || !far_side[w.path.back()])
        throw NonCompactWitness("witness endpoints lie outside the two sides");
    for (std::size_t i = 1; i + 1 < w.path.size(); ++i)
        if (sides.side_u[w.path[i]] || sides.side_v[w.path[i]])
            throw NonCompactWitness("witness passes through the tree outside the path");
    const auto is_terminal = mask_of(h.num_vertices(), r.terminals());
    for (VertexId end : {w.path.front(), w.path.back()})
        if (is_terminal[end] && end != w.u && end != w.v)
            throw NonCompactWitness("witness ends at a leaf other than its endpoints");

    std::set<EdgeId> drop(it->edges.begin(), it->edges.end());
    std::vector<EdgeId> edges;
    for (EdgeId e : r.edges())
        if (!drop.count(e)) edges.push_back(e);
    edges.insert(edges.end(), w.edges.begin(), w.edges.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    SteinerTree out(h, prune_to_terminals(h, std::move(edges), is_terminal),
                    std::vector<VertexId>(r.terminals().begin(), r.terminals().end()));
    if (out.num_edges() >= r.num_edges() || !out.is_tree())
        throw InvariantViolation("undetouring did not yield a smaller tree");
    return out;
}

SteinerTree remove_detours(const PlaneGraph& h, SteinerTree r, int* steps) {
    const int limit = r.num_edges();
    int count = 0;
    while (auto w = find_detour(h, r)) {
        r = undetour(h, r, *w);
        if (++count > limit) throw InvariantViolation("undetouring failed to terminate");
    }
    if (steps) *steps = count;
    return r;
}

// --------------------------------------------------------------- separators

std::vector<VertexId> min_vertex_separator(const PlaneGraph& h, std::span<const VertexId> a,
                                           std::span<const VertexId> b) {
    const int n = h.num_vertices();
    const auto in_a = mask_of(n, a), in_b = mask_of(n, b);
    for (VertexId v = 0; v < n; ++v)
        if (in_a[v] && in_b[v]) throw PreconditionViolation("separated sets overlap");
    const int source = 2 * n, sink = 2 * n + 1;
    auto entry = [&](VertexId v) { return in_a[v] ? source : in_b[v] ? sink : 2 * v; };
    auto exit = [&](VertexId v) { return in_a[v] ? source : in_b[v] ? sink : 2 * v + 1; };
    Network net(2 * n + 2);
    for (VertexId v = 0; v < n; ++v)
        if (!in_a[v] && !in_b[v]) net.add_arc(2 * v, 2 * v + 1, 1, 0);
    const int big = n + 1;
    const Adjacency adj = sorted_adjacency(h);
    for (VertexId x = 0; x < n; ++x)
        for (auto [y, e] : adj[x]) {
            if ((in_a[x] && in_b[y]) || (in_b[x] && in_a[y]))
                throw NoSeparatorNeeded("edge " + std::to_string(e) + " joins the two sides");
            if (exit(x) == entry(y)) continue;
            net.add_arc(exit(x), entry(y), big, 0);
        }
    net.max_flow(source, sink);
    const auto reach = net.reachable(source);
    std::vector<VertexId> cut;
    for (VertexId v = 0; v < n; ++v)
        if (!in_a[v] && !in_b[v] && reach[2 * v] && !reach[2 * v + 1]) cut.push_back(v);
    return cut;
}

bool induces_cycle(const PlaneGraph& h, std::span<const VertexId> vertices) {
    if (vertices.size() < 2) return false;
    const auto in = mask_of(h.num_vertices(), vertices);
    for (VertexId v : vertices) {
        int deg = 0;
        for (EdgeId e : h.rotation(v))
            if (in[h.other_end(e, v)]) ++deg;
        if (deg != 2) return false;
    }
    std::vector<char> removed(h.num_vertices(), 0);
    for (VertexId v = 0; v < h.num_vertices(); ++v) removed[v] = !in[v];
    const VertexId first = vertices.front();
    const auto comp = component_mask(h, removed, std::span<const VertexId>(&first, 1));
    return std::all_of(vertices.begin(), vertices.end(), [&](VertexId v) { return comp[v] != 0; });
}

std::vector<VertexId> cycle_order(const PlaneGraph& h, std::span<const VertexId> vertices) {
    if (!induces_cycle(h, vertices)) throw PreconditionViolation("vertex set does not induce a cycle");
    const auto in = mask_of(h.num_vertices(), vertices);
    const VertexId start = *std::min_element(vertices.begin(), vertices.end());
    std::vector<VertexId> order{start};
    VertexId prev = -1, cur = start;
    while (order.size() < vertices.size()) {
        VertexId next = -1;
        for (EdgeId e : h.rotation(cur)) {
            const VertexId y = h.other_end(e, cur);
            if (in[y] && y != prev && y != cur) {
                next = y;
                break;
            }
        }
        if (next == -1 || next == start) break;
        order.push_back(next);
        prev = cur;
        cur = next;
    }
    return order;
}

std::vector<char> component_mask(const PlaneGraph& h, std::span<const char> removed, std::span<const VertexId> from) {
    std::vector<char> seen(h.num_vertices(), 0);
    std::deque<VertexId> queue;
    for (VertexId v : from)
        if (!removed[v] && !seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        for (EdgeId e : h.rotation(x)) {
            const VertexId y = h.other_end(e, x);
            if (removed[y] || seen[y]) continue;
            seen[y] = 1;
            queue.push_back(y);
        }
    }
    return seen;
}

std::vector<char> strict_interior(const PlaneGraph& h, std::span<const VertexId> cut) {
    const auto removed = mask_of(h.num_vertices(), cut);
    std::vector<VertexId> boundary;
    if (h.num_edges() == 0) boundary.push_back(0);
    else
        for (Dart d : h.face_darts(h.outer_face())) boundary.push_back(h.tail(d));
    const auto outside = component_mask(h, removed, boundary);
    std::vector<char> inside(h.num_vertices(), 0);
    for (VertexId v = 0; v < h.num_vertices(); ++v) inside[v] = !removed[v] && !outside[v];
    return inside;
}

std::optional<std::vector<VertexId>> shortest_path_within(const PlaneGraph& h, std::span<const char> allowed,
                                                          VertexId from, VertexId to) {
    if (!allowed[from] || !allowed[to]) return std::nullopt;
    const Adjacency adj = sorted_adjacency(h);
    std::vector<VertexId> parent(h.num_vertices(), -1);
    std::vector<char> seen(h.num_vertices(), 0);
    std::deque<VertexId> queue{from};
    seen[from] = 1;
    while (!queue.empty() && !seen[to]) {
        const VertexId x = queue.front();
        queue.pop_front();
        for (auto [y, e] : adj[x]) {
            if (!allowed[y] || seen[y]) continue;
            seen[y] = 1;
            parent[y] = x;
            queue.push_back(y);
        }
    }
    if (!seen[to]) return std::nullopt;
    std::vector<VertexId> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<EdgeId> path_edges(const PlaneGraph& h, std::span<const VertexId> path) {
    std::vector<EdgeId> out;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        EdgeId best = -1;
        for (EdgeId e : h.rotation(path[i]))
            if (h.other_end(e, path[i]) == path[i + 1] && (best == -1 || e < best)) best = e;
        if (best == -1)
            throw InvariantViolation("vertices " + std::to_string(path[i]) + " and " + std::to_string(path[i + 1]) +
                                     " are not adjacent");
        out.push_back(best);
    }
    return out;
}

SeparatorData compute_separator(const PlaneGraph& h, const SteinerTree& r, const TreePath& path, VertexId endpoint,
                                const AlgorithmConstants& constants) {
    std::vector<VertexId> seq = path.vertices;
    if (seq.back() == endpoint) std::reverse(seq.begin(), seq.end());
    if (seq.front() != endpoint) throw PreconditionViolation("endpoint is not an end of the path");
    const auto pat = constants.pattern();
    const auto half = pat / 2;
    if (static_cast<std::int64_t>(seq.size()) <= 2 * pat) throw PreconditionViolation("path is not long");
    const int n = h.num_vertices();
    std::vector<char> prefix(n, 0), blocked(n, 0);
    for (std::int64_t i = 0; i < pat; ++i) {
        prefix[seq[i]] = 1;
        if (i > 0) blocked[seq[i]] = 1;
    }
    auto side = tree_component(r, endpoint, blocked);
    for (std::int64_t i = 0; i < half; ++i) side[seq[i]] = 1;
    SeparatorData out;
    for (VertexId v : r.vertices()) {
        if (side[v]) out.side_a.push_back(v);
        else if (!prefix[v]) out.side_b.push_back(v);
    }
    out.separator = min_vertex_separator(h, out.side_a, out.side_b);
    const auto in_sep = mask_of(n, out.separator);
    for (std::int64_t i = 0; i < pat; ++i)
        if (in_sep[seq[i]]) {
            out.anchor = seq[i];
            out.anchor_index = static_cast<int>(i);
            break;
        }
    if (out.anchor == -1) throw InvariantViolation("separator misses the pattern prefix");
    return out;
}

// ------------------------------------------------------- concentric cycles

namespace {

// Closed boundary walks of the subgraph of original edges inside `keep`
// that border the region `outside`, traced with the restricted rotation.
std::vector<std::vector<VertexId>> outer_boundary_walks(const RadialCompletion& h, const std::vector<char>& keep,
                                                        const std::vector<char>& outside) {
    const PlaneGraph& H = h.graph;
    auto kept = [&](EdgeId e) {
        return h.is_original_edge(e) && keep[H.edge(e).u] && keep[H.edge(e).v];
    };
    auto borders = [&](Dart d) {
        const VertexId third = H.head(H.next_in_face(d));
        return !h.is_original_vertex(third) && outside[third];
    };
    std::vector<char> used(H.num_darts(), 0);
    std::vector<std::vector<VertexId>> walks;
    for (Dart start = 0; start < H.num_darts(); ++start) {
        if (used[start] || !kept(edge_of(start)) || !borders(start)) continue;
        std::vector<VertexId> walk;
        Dart d = start;
        int guard = 0;
        do {
            used[d] = 1;
            walk.push_back(H.tail(d));
            const VertexId y = H.head(d);
            const auto rot = H.rotation(y);
            const int deg = static_cast<int>(rot.size());
            int p = H.position(reverse(d));
            do {
                p = (p - 1 + deg) % deg;
            } while (!kept(rot[p]));
            d = H.dart_from(rot[p], y);
            if (++guard > H.num_darts()) throw InvariantViolation("boundary tracing did not close");
        } while (d != start);
        walks.push_back(std::move(walk));
    }
    return walks;
}

// Splits a closed walk into the simple cycles it is made of.
std::vector<std::vector<VertexId>> simple_cycles_of(const std::vector<VertexId>& walk) {
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> stack;
    std::map<VertexId, std::size_t> where;
    auto visit = [&](VertexId x) {
        if (auto it = where.find(x); it != where.end()) {
            std::vector<VertexId> loop(stack.begin() + static_cast<std::ptrdiff_t>(it->second), stack.end());
            if (loop.size() >= 3) out.push_back(loop);
            for (std::size_t i = it->second + 1; i < stack.size(); ++i) where.erase(stack[i]);
            stack.resize(it->second + 1);
        } else {
            where[x] = stack.size();
            stack.push_back(x);
        }
    };
    for (VertexId x : walk) visit(x);
    if (!walk.empty()) visit(walk.front());
    return out;
}

}  // namespace

ConcentricCycles concentric_cycles(const RadialCompletion& h, std::span<const VertexId> inner_cut,
                                   std::span<const VertexId> outer_cut) {
    const PlaneGraph& H = h.graph;
    const int n = H.num_vertices();
    const auto on_inner = mask_of(n, inner_cut), on_outer = mask_of(n, outer_cut);
    std::vector<char> keep = between_mask(h, inner_cut, outer_cut);
    std::vector<std::vector<VertexId>> outer_first;

    while (true) {
        // Strip vertices with at most one neighbour among the kept ones.
        std::deque<VertexId> queue;
        std::vector<int> deg(n, 0);
        for (VertexId v = 0; v < n; ++v) {
            if (!keep[v]) continue;
            std::set<VertexId> nbrs;
            for (EdgeId e : H.rotation(v))
                if (h.is_original_edge(e) && keep[H.other_end(e, v)]) nbrs.insert(H.other_end(e, v));
            deg[v] = static_cast<int>(nbrs.size());
            if (deg[v] <= 1) queue.push_back(v);
        }
        while (!queue.empty()) {
            const VertexId v = queue.front();
            queue.pop_front();
            if (!keep[v]) continue;
            keep[v] = 0;
            std::set<VertexId> nbrs;
            for (EdgeId e : H.rotation(v))
                if (h.is_original_edge(e) && keep[H.other_end(e, v)]) nbrs.insert(H.other_end(e, v));
            for (VertexId w : nbrs)
                if (--deg[w] <= 1) queue.push_back(w);
        }
        if (connects(H, keep, inner_cut, outer_cut)) break;

        const auto outside = component_mask(H, keep, outer_cut);
        std::vector<VertexId> chosen;
        for (const auto& walk : outer_boundary_walks(h, keep, outside)) {
            for (const auto& cycle : simple_cycles_of(walk)) {
                if (connects(H, mask_of(n, cycle), inner_cut, outer_cut)) continue;
                chosen = cycle;
                break;
            }
            if (!chosen.empty()) break;
        }
        if (chosen.empty()) throw InvariantViolation("enclosing boundary cycle not found");
        const auto inside = strict_interior(H, chosen);
        for (VertexId v = 0; v < n; ++v) keep[v] = keep[v] && inside[v];
        outer_first.push_back(std::move(chosen));
    }
    if (outer_first.empty()) throw EmptyRing("no cycle of the original graph separates the two cuts");

    ConcentricCycles out;
    out.cycles.assign(outer_first.rbegin(), outer_first.rend());

    // Reference path: one pick per layer, consecutive picks adjacent in H or
    // sharing a connector vertex outside the original graph and the cuts.
    std::vector<std::vector<VertexId>> layers;
    {
        std::vector<VertexId> in(inner_cut.begin(), inner_cut.end()), ou(outer_cut.begin(), outer_cut.end());
        std::sort(in.begin(), in.end());
        std::sort(ou.begin(), ou.end());
        layers.push_back(in);
        for (const auto& c : out.cycles) {
            auto sorted = c;
            std::sort(sorted.begin(), sorted.end());
            layers.push_back(sorted);
        }
        layers.push_back(ou);
    }
    auto is_connector = [&](VertexId z) { return !h.is_original_vertex(z) && !on_inner[z] && !on_outer[z]; };
    auto link = [&](VertexId x, VertexId y) -> std::optional<VertexId> {
        for (EdgeId e : H.rotation(x))
            if (H.other_end(e, x) == y) return -1;
        std::optional<VertexId> best;
        for (EdgeId e : H.rotation(x)) {
            const VertexId z = H.other_end(e, x);
            if (!is_connector(z)) continue;
            for (EdgeId f : H.rotation(z))
                if (H.other_end(f, z) == y && (!best || z < *best)) best = z;
        }
        return best;
    };
    std::vector<std::map<VertexId, VertexId>> parent(layers.size());
    for (VertexId v : layers[0]) parent[0][v] = -1;
    for (std::size_t i = 0; i + 1 < layers.size(); ++i)
        for (VertexId y : layers[i + 1])
            for (auto [x, unused] : parent[i]) {
                (void)unused;
                if (link(x, y)) {
                    parent[i + 1][y] = x;
                    break;
                }
            }
    if (parent.back().empty()) throw InvariantViolation("no reference path through the cycles");
    std::vector<VertexId> picks{parent.back().begin()->first};
    for (std::size_t i = layers.size() - 1; i > 0; --i) picks.push_back(parent[i].at(picks.back()));
    std::reverse(picks.begin(), picks.end());
    out.reference_picks = picks;
    std::set<VertexId> connectors;
    out.reference.push_back(picks.front());
    for (std::size_t i = 0; i + 1 < picks.size(); ++i) {
        const VertexId z = *link(picks[i], picks[i + 1]);
        if (z != -1) {
            if (!connectors.insert(z).second) throw InvariantViolation("reference connectors repeat");
            out.reference.push_back(z);
        }
        out.reference.push_back(picks[i + 1]);
    }
    out.reference_edges = path_edges(H, out.reference);
    return out;
}

FlowLinkage min_flow_linkage(const RadialCompletion& h, std::span<const VertexId> inner_cut,
                             std::span<const VertexId> outer_cut, const ConcentricCycles& cycles) {
    const PlaneGraph& H = h.graph;
    const int n = H.num_vertices();
    const auto on_inner = mask_of(n, inner_cut), on_outer = mask_of(n, outer_cut);
    auto usable = between_mask(h, inner_cut, outer_cut);
    for (VertexId v = 0; v < n; ++v)
        if ((on_inner[v] || on_outer[v]) && h.is_original_vertex(v)) usable[v] = 1;

    std::set<std::pair<VertexId, VertexId>> cycle_pairs;
    for (const auto& c : cycles.cycles)
        for (std::size_t i = 0; i < c.size(); ++i) {
            const VertexId a = c[i], b = c[(i + 1) % c.size()];
            cycle_pairs.insert({std::min(a, b), std::max(a, b)});
        }
    auto weight = [&](VertexId a, VertexId b) { return cycle_pairs.count({std::min(a, b), std::max(a, b)}) ? 0 : 1; };

    const int source = 2 * n, sink = 2 * n + 1;
    Network net(2 * n + 2);
    std::map<VertexId, int> source_arcs;
    for (VertexId v = 0; v < n; ++v) {
        if (!usable[v]) continue;
        net.add_arc(2 * v, 2 * v + 1, 1, 0);
        if (on_inner[v]) source_arcs[v] = net.add_arc(source, 2 * v, 1, 0);
        if (on_outer[v]) net.add_arc(2 * v + 1, sink, 1, 0);
    }
    std::map<int, std::pair<VertexId, VertexId>> arc_ends;
    for (EdgeId e = 0; e < H.num_edges(); ++e) {
        if (!h.is_original_edge(e)) continue;
        const VertexId a = H.edge(e).u, b = H.edge(e).v;
        if (!usable[a] || !usable[b]) continue;
        if ((on_inner[a] && on_inner[b]) || (on_outer[a] && on_outer[b])) continue;
        arc_ends[net.add_arc(2 * a + 1, 2 * b, 1, weight(a, b))] = {a, b};
        arc_ends[net.add_arc(2 * b + 1, 2 * a, 1, weight(a, b))] = {b, a};
    }
    net.min_cost_max_flow(source, sink);

    std::map<VertexId, VertexId> next;
    for (auto [arc, ends] : arc_ends)
        if (net.flow_on(arc) > 0) next[ends.first] = ends.second;
    FlowLinkage out;
    for (auto [s, source_arc] : source_arcs) {
        if (net.flow_on(source_arc) == 0) continue;
        std::vector<VertexId> path{s};
        std::set<VertexId> seen{s};
        while (!on_outer[path.back()]) {
            auto it = next.find(path.back());
            if (it == next.end() || !seen.insert(it->second).second) {
                path.clear();
                break;
            }
            path.push_back(it->second);
        }
        if (path.empty() || (path.size() == 1 && !on_outer[s])) continue;
        // Keep the part after the last inner-cut vertex up to the first outer-cut vertex.
        std::size_t begin = 0;
        for (std::size_t i = 0; i < path.size(); ++i)
            if (on_inner[path[i]]) begin = i;
        std::size_t end = begin;
        while (!on_outer[path[end]]) ++end;
        out.paths.emplace_back(path.begin() + static_cast<std::ptrdiff_t>(begin),
                               path.begin() + static_cast<std::ptrdiff_t>(end) + 1);
    }
    std::sort(out.paths.begin(), out.paths.end());
    for (const auto& p : out.paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i) out.cost += weight(p[i], p[i + 1]);
    return out;
}

int crossing_runs(std::span<const VertexId> path, std::span<const VertexId> flow_path) {
    const std::set<VertexId> on(flow_path.begin(), flow_path.end());
    int runs = 0;
    bool inside = false;
    for (VertexId v : path) {
        const bool now = on.count(v) > 0;
        if (now && !inside) ++runs;
        inside = now;
    }
    return runs;
}

std::vector<VertexId> path_through_flow(const PlaneGraph& h, std::span<const char> allowed,
                                        std::span<const std::vector<VertexId>> flow, VertexId from, VertexId to,
                                        std::vector<VertexId> initial, int* splices) {
    std::vector<VertexId> p = std::move(initial);
    if (p.empty()) {
        auto found = shortest_path_within(h, allowed, from, to);
        if (!found) throw Unreachable("anchors are disconnected inside the ring");
        p = std::move(*found);
    }
    if (p.front() != from || p.back() != to) throw PreconditionViolation("initial path has the wrong ends");
    int count = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& q : flow) {
            if (crossing_runs(p, q) <= 1) continue;
            std::map<VertexId, std::size_t> pos_in_q;
            for (std::size_t i = 0; i < q.size(); ++i) pos_in_q[q[i]] = i;
            std::size_t first = p.size(), last = 0;
            for (std::size_t i = 0; i < p.size(); ++i)
                if (pos_in_q.count(p[i])) {
                    first = std::min(first, i);
                    last = i;
                }
            const std::size_t qa = pos_in_q[p[first]], qb = pos_in_q[p[last]];
            std::vector<VertexId> piece;
            if (qa <= qb) piece.assign(q.begin() + static_cast<std::ptrdiff_t>(qa), q.begin() + static_cast<std::ptrdiff_t>(qb) + 1);
            else {
                piece.assign(q.begin() + static_cast<std::ptrdiff_t>(qb), q.begin() + static_cast<std::ptrdiff_t>(qa) + 1);
                std::reverse(piece.begin(), piece.end());
            }
            std::vector<VertexId> next(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(first));
            next.insert(next.end(), piece.begin(), piece.end());
            next.insert(next.end(), p.begin() + static_cast<std::ptrdiff_t>(last) + 1, p.end());
            p = std::move(next);
            ++count;
            changed = true;
            if (count > static_cast<int>(flow.size()) * static_cast<int>(flow.size()) + 1)
                throw InvariantViolation("splicing along flow paths did not terminate");
            break;
        }
    }
    if (splices) *splices = count;
    return p;
}

// ----------------------------------------------------------------- backbone

namespace {

std::vector<VertexId> oriented(const TreePath& p, VertexId from) {
    std::vector<VertexId> seq = p.vertices;
    if (seq.front() != from) std::reverse(seq.begin(), seq.end());
    return seq;
}

std::vector<VertexId> ring_vertices(const RadialCompletion& h, std::span<const VertexId> inner_cut,
                                    std::span<const VertexId> outer_cut) {
    const PlaneGraph& H = h.graph;
    const auto inner_inside = strict_interior(H, inner_cut);
    const auto outer_inside = strict_interior(H, outer_cut);
    const auto on_inner = mask_of(H.num_vertices(), inner_cut), on_outer = mask_of(H.num_vertices(), outer_cut);
    std::vector<VertexId> out;
    for (VertexId v = 0; v < H.num_vertices(); ++v)
        if (on_inner[v] || on_outer[v] || (!inner_inside[v] && outer_inside[v])) out.push_back(v);
    return out;
}

}  // namespace

BackboneTree build_backbone(const RadialCompletion& h, const Instance& nice, VertexId outer_terminal,
                            const AlgorithmConstants& constants) {
    const PlaneGraph& H = h.graph;
    const int n = H.num_vertices();
    BackboneTree out;
    out.outer_terminal = outer_terminal;
    const auto terminals = nice.terminals();
    out.initial = initial_steiner_tree(H, terminals);
    out.detour_free = remove_detours(H, out.initial, &out.undetour_steps);
    const SteinerTree& r2 = out.detour_free;

    std::set<EdgeId> edges(r2.edges().begin(), r2.edges().end());
    for (const TreePath& p : r2.maximal_paths()) {
        if (p.length() < constants.long_path()) continue;
        LongPathData d;
        d.path = p;
        std::vector<char> interior(n, 0);
        for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) interior[p.vertices[i]] = 1;
        const bool front_outer = outer_terminal >= 0 && tree_component(r2, p.front(), interior)[outer_terminal];
        d.u = front_outer ? p.back() : p.front();
        d.v = front_outer ? p.front() : p.back();
        const std::vector<VertexId> seq = oriented(p, d.u);
        d.path.vertices = seq;
        d.path.edges = path_edges(H, seq);

        const SeparatorData su = compute_separator(H, r2, p, d.u, constants);
        const SeparatorData sv = compute_separator(H, r2, p, d.v, constants);
        d.sep_u = su.separator;
        d.sep_v = sv.separator;
        d.anchor_u = su.anchor;
        d.anchor_v = sv.anchor;
        d.anchor_u_index = su.anchor_index;
        d.anchor_v_index = sv.anchor_index;

        std::vector<char> cuts(n, 0);
        for (VertexId x : d.sep_u) cuts[x] = 1;
        for (VertexId x : d.sep_v) cuts[x] = 1;
        std::vector<VertexId> near_u = su.side_a, near_v = sv.side_a;
        for (int i = 0; i < su.anchor_index; ++i) near_u.push_back(seq[i]);
        for (int i = 0; i < sv.anchor_index; ++i) near_v.push_back(seq[seq.size() - 1 - i]);
        const auto comp_u = component_mask(H, cuts, near_u);
        const auto comp_v = component_mask(H, cuts, near_v);
        std::vector<char> allowed(n, 0);
        for (VertexId x = 0; x < n; ++x) allowed[x] = !comp_u[x] && !comp_v[x];

        d.cycles = concentric_cycles(h, d.sep_u, d.sep_v);
        d.flow = min_flow_linkage(h, d.sep_u, d.sep_v, d.cycles);
        const std::size_t lo = static_cast<std::size_t>(d.anchor_u_index);
        const std::size_t hi = seq.size() - 1 - static_cast<std::size_t>(d.anchor_v_index);
        std::vector<VertexId> middle(seq.begin() + static_cast<std::ptrdiff_t>(lo),
                                     seq.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
        const bool inside = std::all_of(middle.begin(), middle.end(), [&](VertexId x) { return allowed[x] != 0; });
        d.replacement = path_through_flow(H, allowed, d.flow.paths, d.anchor_u, d.anchor_v,
                                          inside ? middle : std::vector<VertexId>{});
        for (EdgeId e : path_edges(H, middle)) edges.erase(e);
        for (EdgeId e : path_edges(H, d.replacement)) edges.insert(e);
        d.ring = ring_vertices(h, d.sep_u, d.sep_v);
        out.long_paths.push_back(std::move(d));
    }
    out.tree = SteinerTree(H, std::vector<EdgeId>(edges.begin(), edges.end()), terminals);
    return out;
}

std::vector<std::string> check_backbone(const RadialCompletion& h, const BackboneTree& b,
                                        const AlgorithmConstants& constants) {
    const PlaneGraph& H = h.graph;
    const int n = H.num_vertices();
    std::vector<std::string> bad;
    auto terms = std::vector<VertexId>(b.tree.terminals().begin(), b.tree.terminals().end());
    if (!b.tree.is_tree()) bad.push_back("backbone is not a tree");
    if (b.tree.leaves() != terms) bad.push_back("backbone leaves differ from the terminals");
    if (find_detour(H, b.detour_free)) bad.push_back("detour-free tree still has a detour");

    const auto pat = constants.pattern();
    for (std::size_t idx = 0; idx < b.long_paths.size(); ++idx) {
        const LongPathData& d = b.long_paths[idx];
        const std::string tag = "path " + std::to_string(d.u) + "-" + std::to_string(d.v) + ": ";
        if (!induces_cycle(H, d.sep_u)) bad.push_back(tag + "inner separator is not a cycle");
        if (!induces_cycle(H, d.sep_v)) bad.push_back(tag + "outer separator is not a cycle");
        if (d.anchor_u == d.anchor_v) bad.push_back(tag + "anchors coincide");
        for (int idx_anchor : {d.anchor_u_index, d.anchor_v_index}) {
            const std::int64_t count = idx_anchor + 1;
            if (count < pat / 2 || count > pat) bad.push_back(tag + "anchor outside the pattern window");
        }
        // Each separator still splits the backbone at its anchor.
        const auto& seq = d.path.vertices;
        for (int side = 0; side < 2; ++side) {
            const auto& sep = side == 0 ? d.sep_u : d.sep_v;
            const int anchor_index = side == 0 ? d.anchor_u_index : d.anchor_v_index;
            std::vector<VertexId> stem;
            for (int i = 0; i <= anchor_index; ++i) stem.push_back(side == 0 ? seq[i] : seq[seq.size() - 1 - i]);
            std::vector<char> blocked(n, 0);
            for (std::size_t i = 1; i < stem.size(); ++i) blocked[stem[i]] = 1;
            auto a_star = tree_component(b.tree, stem.front(), blocked);
            for (VertexId x : stem) a_star[x] = 1;
            const auto in_sep = mask_of(n, sep);
            std::vector<VertexId> a_free, b_free;
            for (VertexId x : b.tree.vertices()) {
                if (in_sep[x]) continue;
                (a_star[x] ? a_free : b_free).push_back(x);
            }
            if (connects(H, in_sep, a_free, b_free)) bad.push_back(tag + "separator no longer separates");
        }
        for (const auto& q : d.flow.paths)
            if (crossing_runs(d.replacement, q) > 1) bad.push_back(tag + "replacement crosses a flow path twice");
        // Cycles disjoint and nested; one reference pick per cycle.
        std::set<VertexId> seen;
        for (std::size_t i = 0; i < d.cycles.cycles.size(); ++i) {
            for (VertexId x : d.cycles.cycles[i])
                if (!seen.insert(x).second) bad.push_back(tag + "concentric cycles overlap");
            if (i > 0) {
                const auto inside = strict_interior(H, d.cycles.cycles[i]);
                for (VertexId x : d.cycles.cycles[i - 1])
                    if (!inside[x]) {
                        bad.push_back(tag + "concentric cycles are not nested");
                        break;
                    }
            }
        }
        const auto& picks = d.cycles.reference_picks;
        if (picks.size() != d.cycles.cycles.size() + 2) bad.push_back(tag + "reference path misses a layer");
        else
            for (std::size_t i = 0; i < d.cycles.cycles.size(); ++i) {
                const auto& c = d.cycles.cycles[i];
                if (std::find(c.begin(), c.end(), picks[i + 1]) == c.end())
                    bad.push_back(tag + "reference pick off its cycle");
            }
        for (std::size_t j = idx + 1; j < b.long_paths.size(); ++j) {
            const auto& other = b.long_paths[j].ring;
            std::vector<VertexId> common;
            std::set_intersection(d.ring.begin(), d.ring.end(), other.begin(), other.end(), std::back_inserter(common));
            if (!common.empty()) bad.push_back(tag + "ring meets another ring");
        }
    }
    return bad;
}

}  // namespace pdp
