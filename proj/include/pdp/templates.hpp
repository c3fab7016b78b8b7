#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "pdp/linkage.hpp"

namespace pdp {

// Unordered pair of tree edges meeting at a vertex, stored with `first`
// ahead of `second` in the vertex's edge order. At a leaf the single edge may
// pair with itself.
struct EdgePair {
    EdgeId first = -1;
    EdgeId second = -1;
    bool is_self() const { return first == second; }
    auto operator<=>(const EdgePair&) const = default;
};

struct Pairing {
    std::map<VertexId, std::vector<EdgePair>> at;  // sorted pairs per vertex
    std::size_t total() const;
    friend bool operator==(const Pairing&, const Pairing&) = default;
};

// Positive count for every pair of the underlying pairing.
struct Template {
    std::map<VertexId, std::map<EdgePair, int>> at;
    Pairing pairing() const;
    std::size_t total_pairs() const;
    long long mass() const;
    friend bool operator==(const Template&, const Template&) = default;
};

// Leaves, branch vertices, and degree-2 vertices next to either.
std::vector<VertexId> star_vertices(const SteinerTree& tree);
// Tree edges touching a star vertex.
std::vector<EdgeId> star_edges(const SteinerTree& tree);

// Orders a pair of tree edges at v by the frame's edge order.
EdgePair ordered_pair(const TreeFrame& frame, VertexId v, EdgeId a, EdgeId b);

// Involution on the copies around each tree vertex; a missing key is
// unmapped, a key mapped to itself is a walk end.
struct Stitching {
    std::map<VertexId, std::map<EdgeId, EdgeId>> at;
    std::optional<EdgeId> image(VertexId v, EdgeId e) const;
    friend bool operator==(const Stitching&, const Stitching&) = default;
};

// The stitching a pushed linkage induces. Throws NotPushed.
Stitching stitching_of(const TreeFrame& frame, const WeakLinkage& w);
// Counts the consecutive copy pairs at every star vertex. At a leaf the
// walk end counts as one more pair of the doubled edge. Throws NotPushed.
Template template_of(const TreeFrame& frame, const WeakLinkage& w);
Pairing pairing_of(const TreeFrame& frame, const WeakLinkage& w);

// No two pairs at a vertex interleave in the given cyclic edge order.
bool is_noncrossing_at(std::span<const EdgeId> cyclic_order, std::span<const EdgePair> pairs);
bool is_noncrossing(const SteinerTree& tree, const Pairing& pairing);
// Mapped copy pairs at every vertex are mutually non-crossing in the frame's
// order.
bool stitching_noncrossing(const TreeFrame& frame, const Stitching& s);

struct TemplateCaps {
    int max_pairs = 0;
    int max_count = 0;
    // 48k pairs, and counts up to the multiplicity bound or the number of
    // copies on one side, whichever is smaller.
    static TemplateCaps standard(const TreeFrame& frame, const AlgorithmConstants& constants);
    friend bool operator==(const TemplateCaps&, const TemplateCaps&) = default;
};

// One candidate pair of the enumeration universe.
struct PairSlot {
    VertexId vertex = -1;
    EdgePair pair;
    friend bool operator==(const PairSlot&, const PairSlot&) = default;
};
std::vector<PairSlot> pair_universe(const TreeFrame& frame);

// Position of a template stream: the next template has this mass, this
// many pairs, these universe slots and these counts.
struct StreamCursor {
    long long mass = 0;
    std::vector<int> slots;
    std::vector<int> counts;
    bool finished = false;
    friend bool operator==(const StreamCursor&, const StreamCursor&) = default;
};
nlohmann::json cursor_to_json(const StreamCursor& c);
StreamCursor cursor_from_json(const nlohmann::json& j);

// Every non-crossing pairing on the star vertices with at most max_pairs
// pairs, times every count assignment in 1..max_count, by increasing mass.
// Each template appears once.
class TemplateStream {
public:
    TemplateStream(const TreeFrame& frame, TemplateCaps caps);
    TemplateStream(const TreeFrame& frame, TemplateCaps caps, StreamCursor resume);

    std::optional<Template> next();
    // Resuming from this cursor continues with the template next() would
    // return now.
    const StreamCursor& cursor() const { return cursor_; }
    std::span<const PairSlot> universe() const { return universe_; }

private:
    bool noncrossing(const std::vector<int>& slots) const;
    bool first_slots(int size);
    bool next_slots();
    void advance();

    const TreeFrame* frame_;
    TemplateCaps caps_;
    std::vector<PairSlot> universe_;
    long long max_mass_ = 0;
    StreamCursor cursor_;
};

// Drains a fresh TemplateStream.
std::vector<Template> enumerate_all(const TreeFrame& frame, TemplateCaps caps);

// The members of the template stream that extend and have a valid
// multiplicity function, generated directly: one multiplicity per maximal
// path, and a non-crossing split of the multiplicities at every branch
// vertex. Also by increasing mass; within one mass the order differs from
// TemplateStream.
class ConsistentTemplateStream {
public:
    ConsistentTemplateStream(const TreeFrame& frame, TemplateCaps caps);
    std::optional<Template> next();

private:
    struct BranchChoice {
        VertexId vertex;
        std::vector<std::map<EdgePair, int>> options;
    };
    bool load_vector();
    bool next_choice();
    Template assemble() const;

    const TreeFrame* frame_;
    TemplateCaps caps_;
    std::vector<int> weight_;       // per maximal path
    std::vector<int> upper_;        // per maximal path
    std::vector<char> leaf_path_;   // path ends at a leaf: odd multiplicity
    std::map<EdgeId, int> path_of_edge_;
    long long leaves_ = 0;
    long long mass_ = -1;
    long long max_mass_ = 0;
    std::vector<std::vector<int>> vectors_;  // multiplicity vectors of the current mass
    std::size_t vector_index_ = 0;
    std::vector<int> current_;
    std::vector<BranchChoice> branches_;
    std::vector<std::size_t> choice_;
    bool have_choice_ = false;
};

enum class InvalidClause {
    not_extensible,
    multiplicity_mismatch,
    empty_terminal,
    even_multiplicity,
    fixed_point,
    copy_overflow,
    edge_mismatch,
};
std::string to_string(InvalidClause c);

struct Invalid {
    InvalidClause clause = InvalidClause::not_extensible;
    VertexId vertex = -1;
    EdgeId edge = -1;
    int path = -1;  // index into TreeFrame::paths()
    std::string detail;
};

template <class T>
using Checked = std::variant<T, Invalid>;

// Per tree edge (base id), the number of copies in use.
struct MultiplicityFn {
    std::map<EdgeId, int> of;
    int operator()(EdgeId e) const;
};

// Propagates star-vertex data along the maximal degree-2 paths.
Checked<Template> extend(const TreeFrame& frame, const Template& a);
Checked<MultiplicityFn> multiplicity_from(const TreeFrame& frame, const Template& extended);
// Copy i of the terminal's edge goes to copy l+1-i.
Checked<std::map<EdgeId, EdgeId>> stitch_terminal(const TreeFrame& frame, const MultiplicityFn& ell, VertexId v);
Checked<std::map<EdgeId, EdgeId>> stitch_nonterminal(const TreeFrame& frame, const Template& extended,
                                                     const MultiplicityFn& ell, VertexId v);
Checked<Stitching> stitching_from(const TreeFrame& frame, const Template& extended);

// Traces walk i from the i-th source. Throws NonterminatingTrace when a
// trace leaves the stitching or stitched copies form a closed loop, and
// UnmatchedTerminals when terminal ends do not pair up.
WeakLinkage reconstruct(const TreeFrame& frame, const Stitching& s);

// extend, stitching_from and reconstruct in sequence.
Checked<WeakLinkage> linkage_of_template(const TreeFrame& frame, const Template& a);

// {"<vertex>": [{"pair": [e, e'], "count": n}, ...]}
nlohmann::json template_to_json(const Template& t);
// Throws ParseError on malformed input or counts below 1. With a frame the
// pairs are checked against the tree and put in the frame's edge order.
Template template_from_json(const nlohmann::json& j, const TreeFrame* frame = nullptr);

}  // namespace pdp
