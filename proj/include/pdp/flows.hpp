#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "pdp/plane_graph.hpp"
#include "pdp/walk.hpp"
#include "pdp/words.hpp"

namespace pdp {

using ArcId = int;

// Plane graph whose edge a is read as the arc edge(a).u -> edge(a).v.
struct DirectedPlaneGraph {
    PlaneGraph graph;

    int num_arcs() const { return graph.num_edges(); }
    VertexId tail(ArcId a) const { return graph.edge(a).u; }
    VertexId head(ArcId a) const { return graph.edge(a).v; }
    FaceId right_face(ArcId a) const { return graph.right_face(dart_of(a, false)); }
    FaceId left_face(ArcId a) const { return graph.left_face(dart_of(a, false)); }
};

// Arc 2e runs u -> v and arc 2e + 1 runs v -> u for every edge e = {u, v};
// the pair bounds a new 2-gon lying right of both arcs.
DirectedPlaneGraph doubled_orientation(const PlaneGraph& g);
constexpr ArcId forward_arc(EdgeId e) { return 2 * e; }
constexpr ArcId backward_arc(EdgeId e) { return 2 * e + 1; }
// Arc of the doubled orientation used when a walk crosses e starting at x.
inline ArcId arc_along(const PlaneGraph& g, EdgeId e, VertexId x) {
    return g.edge(e).u == x ? forward_arc(e) : backward_arc(e);
}

// Every edge of g read as the arc u -> v.
DirectedPlaneGraph as_directed(const PlaneGraph& g);

using Flow = std::vector<Word>;  // indexed by arc

// Concatenated letters around v, clockwise from the least incident arc,
// each tagged with the arc it came from.
struct ConcLetter {
    Letter letter;
    ArcId arc;
};
std::vector<ConcLetter> conc(const DirectedPlaneGraph& d, const Flow& phi, VertexId v);

struct FlowViolation {
    VertexId vertex = -1;
    Word reduced_conc;
    std::string reason;
};

// Conservation at non-terminals; at terminals, some cyclic rotation of
// conc(v) must reduce to its own first letter, which must name the pair's
// target with the sign of the arc's direction at v.
std::optional<FlowViolation> flow_check(const DirectedPlaneGraph& d, std::span<const TerminalPair> pairs,
                                        const Flow& phi);

// g is the undirected graph the linkage lives in; the flow is on
// doubled_orientation(g). Walk letters name the walk's end vertex.
Flow flow_of_linkage(const PlaneGraph& g, const WeakLinkage& w);

struct HomologyWitness {
    std::vector<Word> h;  // indexed by face
};
struct NotHomologous {
    ArcId arc = -1;
};

// Propagates h breadth-first over the dual from the outer face, then checks
// every arc.
std::variant<HomologyWitness, NotHomologous> homologous(const DirectedPlaneGraph& d, const Flow& phi,
                                                        const Flow& psi);
bool are_homologous(const DirectedPlaneGraph& d, const Flow& phi, const Flow& psi);
// First arc where h(left)^-1 phi h(right) != psi, if any.
std::optional<ArcId> verify_witness(const DirectedPlaneGraph& d, const Flow& phi, const Flow& psi,
                                    const HomologyWitness& w);

struct ForbiddenTransform {
    DirectedPlaneGraph graph;
    Flow flow;
    // Subdivision vertex of every forbidden arc, in the order of X.
    std::vector<VertexId> sinks;
};

// Each arc (u, v) in X becomes a sink w with arcs (u, w), which keeps the
// arc id, and (v, w), which gets a fresh id.
ForbiddenTransform forbid_edges_transform(const DirectedPlaneGraph& d, const Flow& phi,
                                          std::span<const ArcId> forbidden);

// Collapses a flow on doubled_orientation(enriched graph) onto the base
// graph read by as_directed: every class becomes one arc carrying the
// ordered product of what its copies carry from left to right.
Flow compress_parallel_flow(const EnrichedGraph& h, const Flow& phi);
// Same for a weak linkage in the enriched graph, without building the
// doubled orientation.
Flow compressed_flow_of_linkage(const EnrichedGraph& h, const WeakLinkage& w);

nlohmann::json flow_to_json(const Flow& phi);
Flow flow_from_json(const nlohmann::json& j, int num_arcs, const std::set<int>* alphabet = nullptr);

}  // namespace pdp
