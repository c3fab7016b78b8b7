#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdp/errors.hpp"

namespace pdp {

using VertexId = int;
using EdgeId = int;
using FaceId = int;

// A dart is one direction of an edge: dart 2e runs edge.u -> edge.v and
// dart 2e+1 runs edge.v -> edge.u.
using Dart = int;

constexpr Dart dart_of(EdgeId e, bool reversed) { return 2 * e + (reversed ? 1 : 0); }
constexpr EdgeId edge_of(Dart d) { return d >> 1; }
constexpr Dart reverse(Dart d) { return d ^ 1; }

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Raw combinatorial description: clockwise rotation per vertex plus a dart
// whose right-hand face is the outer face.
struct RotationSystem {
    int num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<EdgeId>> rotation;
    Dart outer_witness = 0;
    friend bool operator==(const RotationSystem&, const RotationSystem&) = default;
};

// Immutable plane multigraph given by a rotation system.
//
// Faces are traced with a right-hand rule: after arriving at v along edge e,
// the walk leaves along the predecessor of e in v's clockwise rotation. The
// face traced by a dart therefore lies on the dart's right, and the left face
// of a dart is the face of its reverse.
class PlaneGraph {
public:
    PlaneGraph() = default;
    explicit PlaneGraph(RotationSystem description);

    int num_vertices() const { return desc_.num_vertices; }
    int num_edges() const { return static_cast<int>(desc_.edges.size()); }
    int num_darts() const { return 2 * num_edges(); }
    int num_faces() const { return static_cast<int>(faces_.size()); }

    const Edge& edge(EdgeId e) const { return desc_.edges[e]; }
    std::span<const EdgeId> rotation(VertexId v) const { return desc_.rotation[v]; }
    int degree(VertexId v) const { return static_cast<int>(desc_.rotation[v].size()); }
    VertexId other_end(EdgeId e, VertexId v) const {
        const Edge& ed = desc_.edges[e];
        return ed.u == v ? ed.v : ed.u;
    }

    VertexId tail(Dart d) const { return (d & 1) ? desc_.edges[d >> 1].v : desc_.edges[d >> 1].u; }
    VertexId head(Dart d) const { return (d & 1) ? desc_.edges[d >> 1].u : desc_.edges[d >> 1].v; }
    Dart dart_from(EdgeId e, VertexId v) const { return dart_of(e, desc_.edges[e].u != v); }
    Dart out_dart(VertexId v, int position) const { return dart_from(desc_.rotation[v][position], v); }
    // Position of the dart's edge in the rotation of the dart's tail.
    int position(Dart d) const { return position_[d]; }
    EdgeId rotation_next(VertexId v, EdgeId e) const;
    EdgeId rotation_prev(VertexId v, EdgeId e) const;

    Dart next_in_face(Dart d) const;
    FaceId face(Dart d) const { return face_of_dart_[d]; }
    FaceId right_face(Dart d) const { return face_of_dart_[d]; }
    FaceId left_face(Dart d) const { return face_of_dart_[reverse(d)]; }
    std::span<const Dart> face_darts(FaceId f) const { return faces_[f]; }
    FaceId outer_face() const { return outer_face_; }
    Dart outer_witness() const { return desc_.outer_witness; }

    const RotationSystem& description() const { return desc_; }
    PlaneGraph with_outer(Dart witness) const;

    friend bool operator==(const PlaneGraph& a, const PlaneGraph& b) { return a.desc_ == b.desc_; }

private:
    RotationSystem desc_;
    std::vector<int> position_;
    std::vector<FaceId> face_of_dart_;
    std::vector<std::vector<Dart>> faces_;
    FaceId outer_face_ = 0;
};

bool is_connected(const PlaneGraph& g);
// Every face bounded by two or three darts.
bool is_triangulated(const PlaneGraph& g);

struct TerminalPair {
    VertexId source = 0;
    VertexId target = 0;
    friend bool operator==(const TerminalPair&, const TerminalPair&) = default;
};

struct Instance {
    PlaneGraph graph;
    std::vector<TerminalPair> pairs;

    int k() const { return static_cast<int>(pairs.size()); }
    std::vector<VertexId> sources() const;
    std::vector<VertexId> targets() const;
    std::vector<VertexId> terminals() const;
    bool is_terminal(VertexId v) const;
    friend bool operator==(const Instance& a, const Instance& b) {
        return a.graph == b.graph && a.pairs == b.pairs;
    }
};

void validate_pairs(const Instance& inst);

// One vertex per face of g, joined to every corner of that face. Vertex and
// edge ids of g are preserved; face f becomes vertex g.num_vertices() + f.
struct RadialCompletion {
    PlaneGraph graph;
    int original_vertices = 0;
    int original_edges = 0;
    VertexId face_vertex(FaceId f) const { return original_vertices + f; }
    bool is_original_vertex(VertexId v) const { return v < original_vertices; }
    bool is_original_edge(EdgeId e) const { return e < original_edges; }
};

RadialCompletion radial_completion(const PlaneGraph& g);

// Parallel copies e_{-2n..2n} of every edge. Copy 0 keeps the base edge id.
class ParallelClasses {
public:
    ParallelClasses() = default;
    ParallelClasses(int n, int base_edges);

    int n() const { return n_; }
    int span() const { return 2 * n_; }
    int base_edges() const { return base_edges_; }
    EdgeId copy(EdgeId base, int index) const { return copies_[base][index + 2 * n_]; }
    EdgeId base_of(EdgeId e) const { return base_of_[e]; }
    int index_of(EdgeId e) const { return index_of_[e]; }
    bool is_parallel(EdgeId a, EdgeId b) const { return base_of_[a] == base_of_[b]; }
    // True when index order runs clockwise around the base edge's u endpoint.
    bool increasing_clockwise_at_u(EdgeId base) const { return cw_at_u_[base]; }
    void flip(EdgeId base);
    void assign(EdgeId base, int index, EdgeId id);

private:
    int n_ = 0;
    int base_edges_ = 0;
    std::vector<std::vector<EdgeId>> copies_;
    std::vector<EdgeId> base_of_;
    std::vector<int> index_of_;
    std::vector<bool> cw_at_u_;
};

struct EnrichedGraph {
    PlaneGraph graph;
    ParallelClasses classes;
};

EnrichedGraph enrich_parallel(const PlaneGraph& h, int n);

enum class Color { red, green };

// Enumeration of the copies of tree edges around each tree vertex, with the
// copy orientation fixed by a proper two-colouring of the tree.
struct EdgeOrders {
    std::vector<std::optional<Color>> color;
    std::vector<std::vector<EdgeId>> order;  // empty for vertices off the tree
    // Tree edges at v in the order their blocks appear in order[v].
    std::vector<std::vector<EdgeId>> tree_edge_order;
};

struct OrientedEnrichment {
    EnrichedGraph enriched;
    EdgeOrders orders;
};

// tree_edges are base edge ids (the 0-copies). Throws NotATree.
OrientedEnrichment orient_edges_order(EnrichedGraph h, std::span<const EdgeId> tree_edges);

// Unreachable pairs yield std::nullopt.
std::optional<int> dist(const PlaneGraph& g, VertexId u, VertexId v);
std::optional<int> rdist(const PlaneGraph& g, VertexId u, VertexId v);
std::vector<std::optional<int>> bfs_distances(const PlaneGraph& g, VertexId source);

struct NiceInstance {
    Instance instance;
    VertexId outer_terminal = 0;
    // For every vertex of the nice instance, the vertex of the input it
    // stands for (pendants map to the terminal they were attached to).
    std::vector<VertexId> origin;
};

NiceInstance make_nice(const Instance& inst);

}  // namespace pdp
