#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdp/plane_graph.hpp"

namespace pdp {

// Thresholds that scale with the number of pairs. The defaults reproduce the
// asymptotic formulas with scale constant c; relaxed() shrinks the long-path
// and pattern lengths so that rings appear on graphs of a few hundred
// vertices.
struct AlgorithmConstants {
    int k = 1;
    double c = 1.0;
    std::optional<std::int64_t> long_override;
    std::optional<std::int64_t> pat_override;

    static AlgorithmConstants standard(int k, double c = 1.0);
    static AlgorithmConstants relaxed(int k, std::int64_t long_path, std::int64_t pattern);

    std::int64_t two_ck() const;
    std::int64_t dist() const;
    std::int64_t long_path() const;
    std::int64_t pattern() const;
    std::int64_t sep() const;
    std::int64_t winding() const;
    std::int64_t seg_groups() const;
    std::int64_t potential() const;
    std::int64_t multiplicity() const;
    std::int64_t npair() const;
    std::int64_t non_ring() const;
};

// Maximal path of the tree whose interior vertices all have tree degree 2.
// vertices.front() < vertices.back().
struct TreePath {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
    int length() const { return static_cast<int>(edges.size()); }
    VertexId front() const { return vertices.front(); }
    VertexId back() const { return vertices.back(); }
};

// Subtree of a host plane graph, stored by edge ids of the host.
class SteinerTree {
public:
    SteinerTree() = default;
    SteinerTree(const PlaneGraph& host, std::vector<EdgeId> edges, std::vector<VertexId> terminals);

    std::span<const EdgeId> edges() const { return edges_; }
    std::span<const VertexId> terminals() const { return terminals_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int host_vertices() const { return static_cast<int>(incident_.size()); }
    bool contains_vertex(VertexId v) const { return !incident_[v].empty(); }
    bool contains_edge(EdgeId e) const;
    int degree(VertexId v) const { return static_cast<int>(incident_[v].size()); }
    // Tree edges at v, in the host's clockwise rotation order.
    std::span<const EdgeId> incident(VertexId v) const { return incident_[v]; }
    VertexId other_end(EdgeId e, VertexId v) const;

    std::vector<VertexId> vertices() const;
    std::vector<VertexId> leaves() const;
    // Vertices of degree 1 or at least 3.
    std::vector<VertexId> branch_vertices() const;
    std::vector<TreePath> maximal_paths() const;
    // Unique tree path, as a vertex sequence from u to v. Throws Unreachable.
    std::vector<VertexId> path_between(VertexId u, VertexId v) const;
    bool is_tree() const;

    friend bool operator==(const SteinerTree& a, const SteinerTree& b) {
        return a.edges_ == b.edges_ && a.terminals_ == b.terminals_;
    }

private:
    std::vector<EdgeId> edges_;  // sorted
    std::vector<VertexId> terminals_;  // sorted
    std::vector<Edge> ends_;  // host edge endpoints, indexed by host edge id
    std::vector<std::vector<EdgeId>> incident_;
};

// BFS from the least non-terminal vertex, never expanding terminals, then
// repeated removal of non-terminal leaves. Throws TerminalsDisconnected.
SteinerTree initial_steiner_tree(const PlaneGraph& h, std::span<const VertexId> terminals);

struct DetourWitness {
    VertexId u = -1;
    VertexId v = -1;
    // Replacement path from the u side to the v side.
    std::vector<VertexId> path;
    std::vector<EdgeId> edges;
};

std::optional<DetourWitness> find_detour(const PlaneGraph& h, const SteinerTree& r);
// Throws NonCompactWitness when w is not a compact witness for r.
SteinerTree undetour(const PlaneGraph& h, const SteinerTree& r, const DetourWitness& w);
// Undetours until no detour remains; `steps` receives the iteration count.
SteinerTree remove_detours(const PlaneGraph& h, SteinerTree r, int* steps = nullptr);

// Minimum set of vertices outside a and b whose removal disconnects a from
// b, by unit-capacity augmenting paths on the vertex-split graph. Among
// minimum cuts the one closest to a is returned, sorted. Throws
// NoSeparatorNeeded if a and b touch.
std::vector<VertexId> min_vertex_separator(const PlaneGraph& h, std::span<const VertexId> a,
                                           std::span<const VertexId> b);

bool induces_cycle(const PlaneGraph& h, std::span<const VertexId> vertices);
// Orders the vertices of an induced cycle along the cycle.
std::vector<VertexId> cycle_order(const PlaneGraph& h, std::span<const VertexId> vertices);

// Vertices of h outside `cut` that the cut separates from the outer face of h.
std::vector<char> strict_interior(const PlaneGraph& h, std::span<const VertexId> cut);
// Component of h - removed containing `from`, as a membership mask.
std::vector<char> component_mask(const PlaneGraph& h, std::span<const char> removed, std::span<const VertexId> from);
// BFS shortest path inside `allowed` (lexicographic tie-break), as vertices.
std::optional<std::vector<VertexId>> shortest_path_within(const PlaneGraph& h, std::span<const char> allowed,
                                                          VertexId from, VertexId to);
// Least edge joining consecutive vertices of a vertex path.
std::vector<EdgeId> path_edges(const PlaneGraph& h, std::span<const VertexId> path);

struct SeparatorData {
    std::vector<VertexId> separator;
    std::vector<VertexId> side_a;
    std::vector<VertexId> side_b;
    // Vertex of the pattern prefix closest to the endpoint lying in the
    // separator, and its 0-based index along the path from that endpoint.
    VertexId anchor = -1;
    int anchor_index = -1;
};

// Separator near endpoint `endpoint` of the long path `path` of r.
SeparatorData compute_separator(const PlaneGraph& h, const SteinerTree& r, const TreePath& path, VertexId endpoint,
                                const AlgorithmConstants& constants);

struct ConcentricCycles {
    std::vector<std::vector<VertexId>> cycles;  // innermost first, each in cyclic order
    std::vector<VertexId> reference;            // path in h from the inner cut to the outer cut
    std::vector<EdgeId> reference_edges;
    // The vertices of the reference path that lie on the original graph or
    // the cuts: one on the inner cut, one per cycle, one on the outer cut.
    std::vector<VertexId> reference_picks;
};

// Peels outer faces of the original-graph vertices strictly between two
// nested cuts of the radial completion. Throws EmptyRing when no cycle of
// the original graph separates the cuts.
ConcentricCycles concentric_cycles(const RadialCompletion& h, std::span<const VertexId> inner_cut,
                                   std::span<const VertexId> outer_cut);

struct FlowLinkage {
    std::vector<std::vector<VertexId>> paths;  // each from the inner cut to the outer cut
    int cost = 0;                               // edges used outside the cycles
};

// Maximum family of vertex-disjoint paths in the original graph between the
// cuts, minimizing edges off the cycles (successive shortest paths).
FlowLinkage min_flow_linkage(const RadialCompletion& h, std::span<const VertexId> inner_cut,
                             std::span<const VertexId> outer_cut, const ConcentricCycles& cycles);

// Number of maximal runs of consecutive path vertices lying on `flow_path`.
int crossing_runs(std::span<const VertexId> path, std::span<const VertexId> flow_path);

// Starting from `initial` (or a shortest path inside `allowed` when empty),
// splices along flow paths until each flow path is met by a single run of
// consecutive vertices. `splices` receives the number of splices.
std::vector<VertexId> path_through_flow(const PlaneGraph& h, std::span<const char> allowed,
                                        std::span<const std::vector<VertexId>> flow, VertexId from, VertexId to,
                                        std::vector<VertexId> initial = {}, int* splices = nullptr);

struct LongPathData {
    TreePath path;  // the path in R², oriented u (inner) to v (outer)
    VertexId u = -1, v = -1;
    std::vector<VertexId> sep_u, sep_v;  // sorted
    VertexId anchor_u = -1, anchor_v = -1;
    int anchor_u_index = -1, anchor_v_index = -1;  // along path from u and from v
    ConcentricCycles cycles;
    FlowLinkage flow;
    std::vector<VertexId> replacement;  // P* from anchor_u to anchor_v
    std::vector<VertexId> ring;          // sorted vertex set of Ring(S_u, S_v)
};

struct BackboneTree {
    SteinerTree initial;   // R¹
    SteinerTree detour_free;  // R²
    SteinerTree tree;      // R³
    int undetour_steps = 0;
    std::vector<LongPathData> long_paths;
    VertexId outer_terminal = -1;
};

// Steps I-IV on the radial completion of a nice instance.
BackboneTree build_backbone(const RadialCompletion& h, const Instance& nice, VertexId outer_terminal,
                            const AlgorithmConstants& constants);

// Checks the structural guarantees of a backbone and returns one message per
// violation.
std::vector<std::string> check_backbone(const RadialCompletion& h, const BackboneTree& b,
                                        const AlgorithmConstants& constants);

}  // namespace pdp
