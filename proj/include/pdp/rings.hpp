#pragma once

#include <span>
#include <vector>

#include "pdp/plane_graph.hpp"
#include "pdp/steiner.hpp"
#include "pdp/walk.hpp"

namespace pdp {

// The part of a plane graph between two nested vertex-disjoint cycles, with a
// simple reference path running from the inner cycle to the outer one.
//
// Each interface vertex carries a virtual edge slot on the side facing away
// from the ring (into the inner disk for the inner cycle, outward for the
// outer one). Walks ending on an interface are extended through that slot, so
// a walk that starts on the reference's own start vertex is on neither side
// there. Rotation positions are encoded as 2p for the real edge at position p
// and 2p+1 for a slot sitting right after position p.
//
// The graph must outlive the ring.
class Ring {
public:
    Ring(const PlaneGraph& g, std::vector<VertexId> inner, std::vector<VertexId> outer, Walk reference);

    const PlaneGraph& graph() const { return *g_; }
    // Interface cycles in cyclic order; the side away from the ring is on
    // the right of the traversal.
    std::span<const VertexId> inner() const { return inner_; }
    std::span<const VertexId> outer() const { return outer_; }
    const Walk& reference() const { return reference_; }

    bool contains(VertexId v) const { return member_[v] != 0; }
    bool on_inner(VertexId v) const { return interface_[v] == 1; }
    bool on_outer(VertexId v) const { return interface_[v] == 2; }
    bool on_interface(VertexId v) const { return interface_[v] != 0; }
    // Encoded slot of an interface vertex.
    int slot(VertexId v) const { return slot_[v]; }
    int num_members() const;

private:
    const PlaneGraph* g_;
    std::vector<VertexId> inner_;
    std::vector<VertexId> outer_;
    Walk reference_;
    std::vector<char> member_;
    std::vector<char> interface_;  // 0 none, 1 inner, 2 outer
    std::vector<int> slot_;
};

enum class WalkKind { traversing, inner_visitor, outer_visitor };

struct ClassifiedWalk {
    WalkKind kind = WalkKind::traversing;
    Walk oriented;  // traversers from the inner end, visitors from the smaller end
};

Walk reversed_walk(const PlaneGraph& g, const Walk& w);

// Throws EndpointOffInterface when an endpoint is off both interface cycles,
// PreconditionViolation when the walk leaves the ring.
ClassifiedWalk classify(const Ring& ring, const Walk& walk);

enum class SharedEdges { reject, tolerate };

struct LabeledPair {
    int position = 0;   // pair of the walk's (position-1)-th and position-th edges
    VertexId vertex = 0;
    int label = 0;      // +1 left to right of the reference, -1 right to left
};

// Labels of the consecutive edge pairs of `walk` (including the virtual end
// edges at interface endpoints) at the vertices of `reference`, which must be
// a simple traversing path of the ring. With SharedEdges::reject a common
// edge throws SharedEdge; with tolerate, edges on the reference are skipped
// and a label is recorded whenever the side differs from the last side seen.
std::vector<LabeledPair> label_pairs(const Ring& ring, const Walk& walk, const Walk& reference,
                                     SharedEdges mode = SharedEdges::reject);

// Signed crossing count of alpha against beta; both are oriented by classify
// first.
int winding_number(const Ring& ring, const Walk& alpha, const Walk& beta, SharedEdges mode = SharedEdges::reject);
// Against the ring's own reference path.
int winding_number(const Ring& ring, const Walk& alpha, SharedEdges mode = SharedEdges::reject);

// Winding number of the first traversing walk, 0 when no walk traverses.
int winding_number_of_linkage(const Ring& ring, const WeakLinkage& linkage);

// Ring between the two separators of a long path, referenced by the
// replacement path.
Ring ring_of_long_path(const RadialCompletion& h, const LongPathData& path);

// Largest |winding number| of a maximal solution subpath inside the ring of
// the long path, against the replacement path. Subpaths with an endpoint off
// the interfaces are skipped.
int solution_winding(const RadialCompletion& h, const LongPathData& path, const WeakLinkage& solution);

}  // namespace pdp
