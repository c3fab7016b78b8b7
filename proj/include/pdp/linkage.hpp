#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdp/plane_graph.hpp"
#include "pdp/steiner.hpp"
#include "pdp/walk.hpp"

namespace pdp {

// Two consecutive-edge pairs at a common vertex that cross, or a walk that
// repeats an edge (then `repeated_edge` names it and the pairs are unset).
struct Crossing {
    VertexId vertex = -1;
    int walk_a = -1;
    int position_a = -1;  // pair of edges position-1 and position of walk_a
    int walk_b = -1;
    int position_b = -1;
    EdgeId repeated_edge = -1;
};

std::vector<Crossing> detect_crossings(const PlaneGraph& g, const WeakLinkage& w);
// Pairwise edge-disjoint walks with no crossings.
bool is_weak_linkage(const PlaneGraph& g, const WeakLinkage& w);

// Discrete homotopy operations. Each checks its applicability clauses and
// throws NotApplicable naming the first failed one; the result keeps every
// walk's endpoints.
WeakLinkage face_move(const PlaneGraph& g, const WeakLinkage& w, int walk, FaceId f);
WeakLinkage face_pull(const PlaneGraph& g, const WeakLinkage& w, int walk, FaceId f);
// Inserts a traversal of the face boundary where the walk passes the vertex
// at `position` (1..length-1); without a position the first applicable one
// is used.
WeakLinkage face_push(const PlaneGraph& g, const WeakLinkage& w, int walk, FaceId f,
                      std::optional<int> position = std::nullopt);
// `cycle` lists the edges of a simple cycle in cyclic order.
WeakLinkage cycle_move(const PlaneGraph& g, const WeakLinkage& w, int walk, std::span<const EdgeId> cycle);
WeakLinkage cycle_pull(const PlaneGraph& g, const WeakLinkage& w, int walk, std::span<const EdgeId> cycle);

// The enriched radial completion with oriented copies, the backbone tree
// (edge ids are the 0-copies) and the instance's terminal pairs.
class TreeFrame {
public:
    TreeFrame(OrientedEnrichment h, SteinerTree tree, VertexId outer_terminal, std::vector<TerminalPair> pairs);

    const PlaneGraph& graph() const { return h_.graph; }
    const ParallelClasses& classes() const { return h_.classes; }
    const EnrichedGraph& enriched() const { return h_; }
    // Copies of tree edges around v, starting at the -2n copy of the least
    // tree edge at v.
    std::span<const EdgeId> order(VertexId v) const { return orders_.order[v]; }
    // Tree edges at v in the order their copy blocks appear in order(v).
    std::span<const EdgeId> tree_edge_order(VertexId v) const { return orders_.tree_edge_order[v]; }
    const SteinerTree& tree() const { return tree_; }
    VertexId outer_terminal() const { return outer_terminal_; }
    std::span<const TerminalPair> pairs() const { return pairs_; }
    int n() const { return h_.classes.n(); }

    bool on_tree(VertexId v) const { return tree_.contains_vertex(v); }
    int tree_degree(VertexId v) const { return tree_.degree(v); }
    // Copy of a tree edge, including the tree edge itself.
    bool tree_class(EdgeId e) const { return tree_base_[h_.classes.base_of(e)] != 0; }
    bool tree_edge(EdgeId e) const { return tree_class(e) && h_.classes.index_of(e) == 0; }
    // Tree edge joining two adjacent tree vertices.
    EdgeId tree_edge_between(VertexId a, VertexId b) const;

    std::span<const TreePath> paths() const { return paths_; }
    // Maximal degree-2 path having v as an internal vertex, or -1.
    int path_of(VertexId v) const { return path_of_[v]; }
    int index_on_path(VertexId v) const { return path_index_[v]; }

private:
    EnrichedGraph h_;
    EdgeOrders orders_;
    SteinerTree tree_;
    VertexId outer_terminal_;
    std::vector<TerminalPair> pairs_;
    std::vector<char> tree_base_;
    std::vector<TreePath> paths_;
    std::vector<int> path_of_;
    std::vector<int> path_index_;
};

// Enriches the radial completion with `copies` (the parameter n of 4n+1
// copies per edge) and orients the copies around the backbone.
TreeFrame frame_of_backbone(const RadialCompletion& h, const BackboneTree& backbone,
                            std::span<const TerminalPair> pairs, int copies);

// Same for an arbitrary subtree of a plane graph, used where no backbone has
// been built.
TreeFrame frame_of_tree(const PlaneGraph& host, const SteinerTree& tree, VertexId outer_terminal,
                        std::span<const TerminalPair> pairs, int copies);

// Moves a linkage of the radial completion onto copy `index` of each edge.
WeakLinkage lift_to_copies(const ParallelClasses& classes, const WeakLinkage& w, int index = 1);
// Replaces every copy by its base edge.
WeakLinkage project_to_base(const ParallelClasses& classes, const WeakLinkage& w);

// Carries a solution of the input onto its nice instance by adding the
// pendant edges at the terminals.
WeakLinkage solution_on_nice(const Instance& input, const NiceInstance& nice, const WeakLinkage& solution);

struct FramedLinkage {
    TreeFrame frame;
    WeakLinkage linkage;  // the solution on the nice instance, on copy +1
};

// Nice instance, backbone tree and enrichment for a solved instance, with the
// solution lifted into the enriched graph. `copies` 0 takes the number of
// vertices of the nice instance.
FramedLinkage frame_solution(const Instance& input, const WeakLinkage& solution, const AlgorithmConstants& constants,
                             int copies = 0);

// Edges [first, last) of walk `walk`.
struct SubwalkRef {
    int walk = 0;
    int first = 0;
    int last = 0;
    int length() const { return last - first; }
    friend bool operator==(const SubwalkRef&, const SubwalkRef&) = default;
};

// Maximal subwalks whose inner vertices are off the tree and that use an edge
// not parallel to the tree. Throws ZeroCopyUsed.
std::vector<SubwalkRef> sequences(const TreeFrame& frame, const WeakLinkage& w);
// The sequence together with the tree path between its ends.
std::vector<EdgeId> projecting_cycle(const TreeFrame& frame, const WeakLinkage& w, const SubwalkRef& s);
long long volume(const TreeFrame& frame, const WeakLinkage& w, const SubwalkRef& s);

struct SegmentGroup {
    int walk = 0;
    int first_segment = 0;  // indices into Segmentation::segments
    int last_segment = 0;   // exclusive
    int path = -1;          // maximal degree-2 path, -1 for singletons
    int potential = 1;
};

struct Segmentation {
    std::vector<SubwalkRef> segments;  // walk by walk, in walk order
    std::vector<SegmentGroup> groups;
    long long potential() const;
};

// Walk positions (1..length-1) where the walk crosses the tree.
std::vector<int> tree_crossings(const TreeFrame& frame, const Walk& walk);
// Throws ZeroCopyUsed.
Segmentation segments(const TreeFrame& frame, const WeakLinkage& w);
long long potential(const TreeFrame& frame, const WeakLinkage& w);

bool is_pushed(const TreeFrame& frame, const WeakLinkage& w);
// Largest number of used copies of one edge.
int multiplicity(const ParallelClasses& classes, const WeakLinkage& w);
// Exactly one used edge touches the outer terminal.
bool is_outer_terminal(const TreeFrame& frame, const WeakLinkage& w);
bool is_extremal(const TreeFrame& frame, const WeakLinkage& w);
bool is_canonical(const TreeFrame& frame, const WeakLinkage& w);
// Sensible with respect to the frame's pairs.
bool is_sensible(const TreeFrame& frame, const WeakLinkage& w);

struct UTurn {
    int walk = 0;
    int position = 0;  // the pair of edges position-1 and position
    EdgeId first = -1;
    EdgeId second = -1;
    bool special = false;
    bool innermost = false;
};
std::vector<UTurn> u_turns(const TreeFrame& frame, const WeakLinkage& w);

std::vector<SubwalkRef> swollen_segments(const TreeFrame& frame, const WeakLinkage& w);
// No segment uses more than two copies of one tree edge.
bool segments_use_two_copies(const TreeFrame& frame, const WeakLinkage& w);

enum class Trend { decreasing, increasing };

// Values of one stage's loop variant, starting with the input's value, plus
// the potential after every step.
struct MeasureTrace {
    std::string stage;
    std::string measure;
    Trend trend = Trend::decreasing;
    std::vector<long long> values;
    std::vector<long long> potentials;
    // Filled by the U-turn stages only.
    std::vector<long long> segment_counts;

    int steps() const { return values.empty() ? 0 : static_cast<int>(values.size()) - 1; }
    bool monotone() const;
    bool potential_constant() const;
    bool potential_nonincreasing() const;
};

// Pushes every sequence onto the tree by maximal shrinking cycles, innermost
// sequence first. Throws PreconditionViolation when the input is not
// sensible, well-behaved, shallow and outer-terminal.
WeakLinkage push_onto_tree(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* trace = nullptr);

enum class UTurnMode { special_only, all };
WeakLinkage eliminate_u_turns(const TreeFrame& frame, const WeakLinkage& w, UTurnMode mode,
                              MeasureTrace* trace = nullptr);
// Moves innermost swollen segments across the tree; measure is the number of
// segments.
WeakLinkage eliminate_swollen(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* trace = nullptr);
// Throws MultiplicityTooHigh above 2n.
WeakLinkage make_extremal(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* trace = nullptr);
// Lifts every class to the top copies (sum of indices), then packs it down
// onto copies 1..m (copy weight). Throws MultiplicityTooHigh above 2n.
WeakLinkage make_canonical(const TreeFrame& frame, const WeakLinkage& w, MeasureTrace* lift = nullptr,
                           MeasureTrace* pack = nullptr);

struct SimplifyReport {
    std::vector<MeasureTrace> traces;
    // Taken right after swollen segments are gone.
    long long segments_after_swollen = 0;
    long long potential_after_swollen = 0;
    // Taken right after all U-turns are gone.
    bool two_copies_per_segment = true;
    int multiplicity = 0;
};

struct Simplified {
    WeakLinkage linkage;
    SimplifyReport report;
};

// push, extremal, special U-turns, swollen segments, all U-turns, canonical.
Simplified simplify(const TreeFrame& frame, const WeakLinkage& w);

}  // namespace pdp
