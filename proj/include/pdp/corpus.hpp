#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pdp/plane_graph.hpp"

namespace pdp {

// rows x cols grid; vertex (i, j) has id i * cols + j. Rotation runs north,
// east, south, west; the outer face lies right of the westward dart on the
// top row (or of any dart for a single row).
PlaneGraph grid_graph(int rows, int cols);

// `rings` concentric cycles of length `spokes`, joined by radial edges.
// Vertex (ring i, position j) has id i * spokes + j; ring 0 is innermost and
// the outer face lies outside the last ring.
PlaneGraph annulus_graph(int rings, int spokes);

// Stacked triangulation: a triangle refined by inserting `extra_vertices`
// vertices into uniformly chosen inner faces.
PlaneGraph random_triangulation(int extra_vertices, std::mt19937_64& rng);

// Grid with up to `removals` random non-bridge edges deleted.
PlaneGraph random_sparse_grid(int rows, int cols, int removals, std::mt19937_64& rng);

// Inserts a new vertex into face f of g, joined to every corner of f.
RotationSystem insert_face_vertex(const PlaneGraph& g, FaceId f);

// Every grid instance with the given shape and k pairs on distinct vertices,
// taking each set of pairs once (pairs are ordered, the set is not).
std::vector<Instance> grid_instances(int rows, int cols, int k);

// Rows/cols shapes r <= c <= 4 used by the exhaustive sweep.
std::vector<std::pair<int, int>> sweep_shapes();

// Instance on a random triangulation whose pairs are the ends of k
// vertex-disjoint planted paths; feasible by construction.
Instance planted_instance(int extra_vertices, int k, std::mt19937_64& rng);

struct PlantedInstance {
    Instance instance;
    std::vector<std::vector<VertexId>> paths;  // the planted path of each pair
};
PlantedInstance planted_with_paths(int extra_vertices, int k, std::mt19937_64& rng);

}  // namespace pdp
