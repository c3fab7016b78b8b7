#pragma once

#include <vector>

#include "json.hpp"

#include "pdp/plane_graph.hpp"

namespace pdp {

// A walk is its start vertex and the edges it traverses in order; the start
// disambiguates direction for walks with parallel edges or of length 0.
struct Walk {
    VertexId start = 0;
    std::vector<EdgeId> edges;
    friend bool operator==(const Walk&, const Walk&) = default;
};

// Walk i of a weak linkage belongs to terminal pair i.
struct WeakLinkage {
    std::vector<Walk> walks;
    friend bool operator==(const WeakLinkage&, const WeakLinkage&) = default;
};

// Vertex sequence of the walk (length edges + 1). Throws MalformedRotation if
// consecutive edges do not meet.
std::vector<VertexId> walk_vertices(const PlaneGraph& g, const Walk& w);
VertexId walk_end(const PlaneGraph& g, const Walk& w);
bool is_connected_walk(const PlaneGraph& g, const Walk& w);

// Every walk i runs from pairs[i].source to pairs[i].target.
bool is_sensible(const PlaneGraph& g, std::span<const TerminalPair> pairs, const WeakLinkage& w);

// Paths in g, pairwise vertex-disjoint, walk i from s_i to t_i.
bool is_solution(const Instance& inst, const WeakLinkage& w);

nlohmann::json linkage_to_json(const WeakLinkage& w);
WeakLinkage linkage_from_json(const nlohmann::json& j);

}  // namespace pdp
