#include "pdp/templates.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "pdp/errors.hpp"

namespace pdp {

namespace {

int position_in(std::span<const EdgeId> order, EdgeId e) {
    const auto it = std::find(order.begin(), order.end(), e);
    return it == order.end() ? -1 : static_cast<int>(it - order.begin());
}

bool is_terminal(const TreeFrame& frame, VertexId v) {
    for (const TerminalPair& p : frame.pairs())
        if (p.source == v || p.target == v) return true;
    return false;
}

int count_of(const Template& t, VertexId v, EdgePair p) {
    const auto at = t.at.find(v);
    if (at == t.at.end()) return 0;
    const auto it = at->second.find(p);
    return it == at->second.end() ? 0 : it->second;
}

Invalid invalid(InvalidClause c, std::string detail) {
    Invalid out;
    out.clause = c;
    out.detail = std::move(detail);
    return out;
}

// Lexicographically least split of `sum` into `parts` values in 1..cap.
std::optional<std::vector<int>> first_split(long long sum, int parts, int cap) {
    if (parts < 0 || sum < parts || sum > static_cast<long long>(parts) * cap) return std::nullopt;
    std::vector<int> out(parts);
    for (int i = 0; i < parts; ++i) {
        const long long rest = parts - 1 - i;
        out[i] = static_cast<int>(std::max<long long>(1, sum - rest * cap));
        sum -= out[i];
    }
    return out;
}

bool next_split(std::vector<int>& parts, int cap) {
    const int n = static_cast<int>(parts.size());
    long long suffix = 0;
    for (int i = n - 1; i >= 0; --i) {
        suffix += parts[i];
        const long long rest = n - 1 - i;
        // Raising parts[i] by one leaves suffix - parts[i] - 1 for the rest.
        const long long left = suffix - parts[i] - 1;
        if (parts[i] < cap && left >= rest && left <= rest * cap) {
            ++parts[i];
            auto tail = first_split(left, static_cast<int>(rest), cap);
            std::copy(tail->begin(), tail->end(), parts.begin() + i + 1);
            return true;
        }
    }
    return false;
}

bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

bool interleave(int i, int j, int x, int y) { return (i < x && x < j && j < y) || (x < i && i < y && y < j); }

}  // namespace

// ---------------------------------------------------------------------------
// Basic structures

std::size_t Pairing::total() const {
    std::size_t n = 0;
    for (const auto& [v, pairs] : at) n += pairs.size();
    return n;
}

Pairing Template::pairing() const {
    Pairing p;
    for (const auto& [v, counts] : at) {
        auto& list = p.at[v];
        for (const auto& [pair, c] : counts) list.push_back(pair);
    }
    return p;
}

std::size_t Template::total_pairs() const {
    std::size_t n = 0;
    for (const auto& [v, counts] : at) n += counts.size();
    return n;
}

long long Template::mass() const {
    long long m = 0;
    for (const auto& [v, counts] : at)
        for (const auto& [pair, c] : counts) m += c;
    return m;
}

std::vector<VertexId> star_vertices(const SteinerTree& tree) {
    std::vector<VertexId> out;
    auto all = tree.vertices();
    std::sort(all.begin(), all.end());
    for (VertexId v : all) {
        if (tree.degree(v) != 2) {
            out.push_back(v);
            continue;
        }
        for (EdgeId e : tree.incident(v))
            if (tree.degree(tree.other_end(e, v)) != 2) {
                out.push_back(v);
                break;
            }
    }
    return out;
}

std::vector<EdgeId> star_edges(const SteinerTree& tree) {
    std::set<EdgeId> out;
    for (VertexId v : star_vertices(tree))
        for (EdgeId e : tree.incident(v)) out.insert(e);
    return {out.begin(), out.end()};
}

EdgePair ordered_pair(const TreeFrame& frame, VertexId v, EdgeId a, EdgeId b) {
    const auto order = frame.tree_edge_order(v);
    const int pa = position_in(order, a), pb = position_in(order, b);
    if (pa < 0 || pb < 0)
        throw PreconditionViolation("edges " + std::to_string(a) + ", " + std::to_string(b) +
                                    " do not both meet tree vertex " + std::to_string(v));
    return pa <= pb ? EdgePair{a, b} : EdgePair{b, a};
}

std::optional<EdgeId> Stitching::image(VertexId v, EdgeId e) const {
    const auto at_v = at.find(v);
    if (at_v == at.end()) return std::nullopt;
    const auto it = at_v->second.find(e);
    if (it == at_v->second.end()) return std::nullopt;
    return it->second;
}

int MultiplicityFn::operator()(EdgeId e) const {
    const auto it = of.find(e);
    return it == of.end() ? 0 : it->second;
}

std::string to_string(InvalidClause c) {
    switch (c) {
        case InvalidClause::not_extensible: return "not_extensible";
        case InvalidClause::multiplicity_mismatch: return "multiplicity_mismatch";
        case InvalidClause::empty_terminal: return "empty_terminal";
        case InvalidClause::even_multiplicity: return "even_multiplicity";
        case InvalidClause::fixed_point: return "fixed_point";
        case InvalidClause::copy_overflow: return "copy_overflow";
        case InvalidClause::edge_mismatch: return "edge_mismatch";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Extraction from a linkage

Stitching stitching_of(const TreeFrame& frame, const WeakLinkage& w) {
    if (!is_pushed(frame, w)) throw NotPushed("the linkage uses an edge that is not a non-zero copy of a tree edge");
    Stitching s;
    auto set = [&](VertexId v, EdgeId a, EdgeId b) {
        auto [it, fresh] = s.at[v].emplace(a, b);
        if (!fresh && it->second != b)
            throw PreconditionViolation("copy " + std::to_string(a) + " is used twice at vertex " + std::to_string(v));
    };
    for (const Walk& walk : w.walks) {
        if (walk.edges.empty()) continue;
        const auto verts = walk_vertices(frame.graph(), walk);
        set(verts.front(), walk.edges.front(), walk.edges.front());
        set(verts.back(), walk.edges.back(), walk.edges.back());
        for (std::size_t j = 1; j < walk.edges.size(); ++j) {
            set(verts[j], walk.edges[j - 1], walk.edges[j]);
            set(verts[j], walk.edges[j], walk.edges[j - 1]);
        }
    }
    return s;
}

Template template_of(const TreeFrame& frame, const WeakLinkage& w) {
    const Stitching s = stitching_of(frame, w);
    const ParallelClasses& cls = frame.classes();
    Template t;
    for (VertexId v : star_vertices(frame.tree())) {
        auto& counts = t.at[v];
        const auto at = s.at.find(v);
        if (at == s.at.end()) continue;
        for (const auto& [a, b] : at->second)
            if (a <= b) ++counts[ordered_pair(frame, v, cls.base_of(a), cls.base_of(b))];
    }
    return t;
}

Pairing pairing_of(const TreeFrame& frame, const WeakLinkage& w) { return template_of(frame, w).pairing(); }

bool is_noncrossing_at(std::span<const EdgeId> cyclic_order, std::span<const EdgePair> pairs) {
    std::vector<std::pair<int, int>> chords;
    for (const EdgePair& p : pairs) {
        int i = position_in(cyclic_order, p.first), j = position_in(cyclic_order, p.second);
        if (i < 0 || j < 0) throw PreconditionViolation("pair edge missing from the cyclic order");
        if (i > j) std::swap(i, j);
        chords.emplace_back(i, j);
    }
    for (std::size_t a = 0; a < chords.size(); ++a)
        for (std::size_t b = a + 1; b < chords.size(); ++b)
            if (interleave(chords[a].first, chords[a].second, chords[b].first, chords[b].second)) return false;
    return true;
}

bool is_noncrossing(const SteinerTree& tree, const Pairing& pairing) {
    for (const auto& [v, pairs] : pairing.at)
        if (!is_noncrossing_at(tree.incident(v), pairs)) return false;
    return true;
}

bool stitching_noncrossing(const TreeFrame& frame, const Stitching& s) {
    for (const auto& [v, map] : s.at) {
        const auto order = frame.order(v);
        std::vector<std::pair<int, int>> chords;
        for (const auto& [a, b] : map) {
            if (a >= b) continue;
            int i = position_in(order, a), j = position_in(order, b);
            if (i < 0 || j < 0) return false;
            if (i > j) std::swap(i, j);
            chords.emplace_back(i, j);
        }
        for (std::size_t x = 0; x < chords.size(); ++x)
            for (std::size_t y = x + 1; y < chords.size(); ++y)
                if (interleave(chords[x].first, chords[x].second, chords[y].first, chords[y].second)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Enumeration

TemplateCaps TemplateCaps::standard(const TreeFrame& frame, const AlgorithmConstants& constants) {
    TemplateCaps caps;
    caps.max_pairs = static_cast<int>(std::min<std::int64_t>(constants.npair(), 1 << 30));
    caps.max_count = static_cast<int>(std::min<std::int64_t>(constants.multiplicity(), frame.classes().span()));
    return caps;
}

std::vector<PairSlot> pair_universe(const TreeFrame& frame) {
    std::vector<PairSlot> out;
    for (VertexId v : star_vertices(frame.tree())) {
        const auto order = frame.tree_edge_order(v);
        if (order.size() == 1) out.push_back({v, {order[0], order[0]}});
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = i + 1; j < order.size(); ++j) out.push_back({v, {order[i], order[j]}});
    }
    return out;
}

nlohmann::json cursor_to_json(const StreamCursor& c) {
    return {{"mass", c.mass}, {"slots", c.slots}, {"counts", c.counts}, {"finished", c.finished}};
}

StreamCursor cursor_from_json(const nlohmann::json& j) {
    try {
        StreamCursor c;
        c.mass = j.at("mass").get<long long>();
        c.slots = j.at("slots").get<std::vector<int>>();
        c.counts = j.at("counts").get<std::vector<int>>();
        c.finished = j.value("finished", false);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("cursor: ") + e.what());
    }
}

std::vector<Template> enumerate_all(const TreeFrame& frame, TemplateCaps caps) {
    TemplateStream stream(frame, caps);
    std::vector<Template> out;
    while (auto t = stream.next()) out.push_back(std::move(*t));
    return out;
}

TemplateStream::TemplateStream(const TreeFrame& frame, TemplateCaps caps)
    : frame_(&frame), caps_(caps), universe_(pair_universe(frame)) {
    if (caps.max_pairs < 0 || caps.max_count < 0) throw PreconditionViolation("caps must be non-negative");
    const long long size = std::min<long long>(caps.max_pairs, static_cast<long long>(universe_.size()));
    max_mass_ = caps.max_count == 0 ? 0 : size * caps.max_count;
}

TemplateStream::TemplateStream(const TreeFrame& frame, TemplateCaps caps, StreamCursor resume)
    : TemplateStream(frame, caps) {
    if (resume.finished) {
        cursor_ = std::move(resume);
        return;
    }
    const int n = static_cast<int>(universe_.size());
    bool ok = resume.slots.size() == resume.counts.size() &&
              static_cast<int>(resume.slots.size()) <= caps.max_pairs && resume.mass <= max_mass_;
    long long sum = 0;
    for (std::size_t i = 0; ok && i < resume.slots.size(); ++i) {
        ok = resume.slots[i] >= 0 && resume.slots[i] < n && (i == 0 || resume.slots[i - 1] < resume.slots[i]) &&
             resume.counts[i] >= 1 && resume.counts[i] <= caps.max_count;
        sum += resume.counts[i];
    }
    if (!ok || sum != resume.mass || !noncrossing(resume.slots))
        throw PreconditionViolation("cursor does not describe a template of this stream");
    cursor_ = std::move(resume);
}

bool TemplateStream::noncrossing(const std::vector<int>& slots) const {
    std::map<VertexId, std::vector<EdgePair>> by_vertex;
    for (int s : slots) by_vertex[universe_[s].vertex].push_back(universe_[s].pair);
    for (const auto& [v, pairs] : by_vertex)
        if (!is_noncrossing_at(frame_->tree_edge_order(v), pairs)) return false;
    return true;
}

bool TemplateStream::first_slots(int size) {
    const int n = static_cast<int>(universe_.size());
    if (size > n) return false;
    cursor_.slots.resize(size);
    for (int i = 0; i < size; ++i) cursor_.slots[i] = i;
    if (noncrossing(cursor_.slots)) return true;
    return next_slots();
}

bool TemplateStream::next_slots() {
    const int n = static_cast<int>(universe_.size());
    while (next_combination(cursor_.slots, n))
        if (noncrossing(cursor_.slots)) return true;
    return false;
}

void TemplateStream::advance() {
    const int cap = caps_.max_count;
    if (next_split(cursor_.counts, cap)) return;
    int size = static_cast<int>(cursor_.slots.size());
    // Same size, next slot set.
    if (size > 0 && next_slots()) {
        cursor_.counts = *first_split(cursor_.mass, size, cap);
        return;
    }
    while (true) {
        ++size;
        const int limit = static_cast<int>(std::min<long long>(caps_.max_pairs, cursor_.mass));
        if (size <= limit && static_cast<long long>(size) * cap >= cursor_.mass && first_slots(size)) {
            cursor_.counts = *first_split(cursor_.mass, size, cap);
            return;
        }
        if (size < limit) continue;
        if (cursor_.mass >= max_mass_) {
            cursor_.finished = true;
            return;
        }
        ++cursor_.mass;
        size = 0;
    }
}

std::optional<Template> TemplateStream::next() {
    if (cursor_.finished) return std::nullopt;
    Template t;
    for (VertexId v : star_vertices(frame_->tree())) t.at[v];
    for (std::size_t i = 0; i < cursor_.slots.size(); ++i) {
        const PairSlot& s = universe_[cursor_.slots[i]];
        t.at[s.vertex][s.pair] = cursor_.counts[i];
    }
    advance();
    return t;
}

namespace {

// Symmetric splits of the demands over the pairs of distinct edges at a
// branch vertex, with entries up to cap and non-crossing support.
std::vector<std::map<EdgePair, int>> branch_splits(std::span<const EdgeId> order, std::vector<int> demand, int cap) {
    const int d = static_cast<int>(order.size());
    std::vector<std::map<EdgePair, int>> out;
    std::map<EdgePair, int> cur;
    std::function<void(int, int)> rec = [&](int i, int j) {
        if (i == d - 1) {
            if (demand[i] != 0) return;
            std::vector<EdgePair> pairs;
            for (const auto& [p, c] : cur) pairs.push_back(p);
            if (is_noncrossing_at(order, pairs)) out.push_back(cur);
            return;
        }
        if (j == d) {
            if (demand[i] == 0) rec(i + 1, i + 2);
            return;
        }
        const int hi = std::min({cap, demand[i], demand[j]});
        // The last partner of i must take the rest of its demand.
        const int lo = j == d - 1 ? demand[i] : 0;
        for (int c = lo; c <= hi; ++c) {
            demand[i] -= c;
            demand[j] -= c;
            if (c > 0) cur[{order[i], order[j]}] = c;
            rec(i, j + 1);
            cur.erase({order[i], order[j]});
            demand[i] += c;
            demand[j] += c;
        }
    };
    rec(0, 1);
    return out;
}

}  // namespace

ConsistentTemplateStream::ConsistentTemplateStream(const TreeFrame& frame, TemplateCaps caps)
    : frame_(&frame), caps_(caps) {
    if (caps.max_pairs < 0 || caps.max_count < 0) throw PreconditionViolation("caps must be non-negative");
    const SteinerTree& tree = frame.tree();
    const int span = frame.classes().span();
    const auto paths = frame.paths();
    for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
        const TreePath& path = paths[p];
        const int inner = std::min(path.length() - 1, 2);
        const bool leaf = tree.degree(path.front()) == 1 || tree.degree(path.back()) == 1;
        int upper = span;
        if (inner > 0) upper = std::min(upper, caps.max_count);
        if (leaf) upper = std::min(upper, 2 * caps.max_count - 1);
        weight_.push_back(1 + inner);
        upper_.push_back(upper);
        leaf_path_.push_back(leaf);
        for (EdgeId e : path.edges) path_of_edge_[e] = p;
        leaves_ += (tree.degree(path.front()) == 1) + (tree.degree(path.back()) == 1);
    }
    for (std::size_t p = 0; p < upper_.size(); ++p) max_mass_ += static_cast<long long>(upper_[p]) * weight_[p];
    max_mass_ = (2 * max_mass_ + leaves_) / 2;
    mass_ = -1;
    vector_index_ = 0;
}

bool ConsistentTemplateStream::load_vector() {
    while (true) {
        while (vector_index_ >= vectors_.size()) {
            ++mass_;
            if (mass_ > max_mass_) return false;
            vectors_.clear();
            vector_index_ = 0;
            const long long twice = 2 * mass_ - leaves_;
            if (twice < 0 || twice % 2 != 0) continue;
            const long long budget = twice / 2;
            std::vector<int> cur(weight_.size(), 0);
            std::function<void(std::size_t, long long)> rec = [&](std::size_t p, long long left) {
                if (p == weight_.size()) {
                    if (left == 0) vectors_.push_back(cur);
                    return;
                }
                const int step = leaf_path_[p] ? 2 : 1;
                for (int m = leaf_path_[p] ? 1 : 0; m <= upper_[p] && static_cast<long long>(m) * weight_[p] <= left;
                     m += step) {
                    cur[p] = m;
                    rec(p + 1, left - static_cast<long long>(m) * weight_[p]);
                }
            };
            rec(0, budget);
        }
        const std::vector<int>& m = vectors_[vector_index_++];
        branches_.clear();
        bool feasible = true;
        for (VertexId v : frame_->tree().vertices()) {
            if (frame_->tree_degree(v) < 3) continue;
            const auto order = frame_->tree_edge_order(v);
            std::vector<int> demand;
            for (EdgeId e : order) demand.push_back(m[path_of_edge_.at(e)]);
            BranchChoice b{v, branch_splits(order, demand, caps_.max_count)};
            if (b.options.empty()) {
                feasible = false;
                break;
            }
            branches_.push_back(std::move(b));
        }
        if (!feasible) continue;
        current_ = m;
        choice_.assign(branches_.size(), 0);
        return true;
    }
}

bool ConsistentTemplateStream::next_choice() {
    for (std::size_t i = choice_.size(); i-- > 0;) {
        if (++choice_[i] < branches_[i].options.size()) return true;
        choice_[i] = 0;
    }
    return false;
}

Template ConsistentTemplateStream::assemble() const {
    const SteinerTree& tree = frame_->tree();
    Template t;
    for (VertexId v : star_vertices(tree)) t.at[v];
    const auto paths = frame_->paths();
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const TreePath& path = paths[p];
        const int m = current_[p];
        for (VertexId end : {path.front(), path.back()})
            if (tree.degree(end) == 1) {
                const EdgeId e = tree.incident(end)[0];
                t.at[end][{e, e}] = (m + 1) / 2;
            }
        if (m == 0 || path.length() < 2) continue;
        const int last = path.length() - 1;
        for (int i : {1, last}) {
            const VertexId v = path.vertices[i];
            t.at[v][ordered_pair(*frame_, v, path.edges[i - 1], path.edges[i])] = m;
        }
    }
    for (std::size_t b = 0; b < branches_.size(); ++b) t.at[branches_[b].vertex] = branches_[b].options[choice_[b]];
    return t;
}

std::optional<Template> ConsistentTemplateStream::next() {
    while (true) {
        if (have_choice_ && next_choice()) {
        } else {
            if (!load_vector()) return std::nullopt;
            have_choice_ = true;
        }
        Template t = assemble();
        if (t.total_pairs() > static_cast<std::size_t>(caps_.max_pairs)) continue;
        bool within = true;
        for (const auto& [v, counts] : t.at)
            for (const auto& [p, c] : counts) within = within && c <= caps_.max_count;
        if (within) return t;
    }
}

// ---------------------------------------------------------------------------
// Extension, multiplicity, stitching

Checked<Template> extend(const TreeFrame& frame, const Template& a) {
    const SteinerTree& tree = frame.tree();
    const auto star = star_vertices(tree);
    Template out;
    for (VertexId v : star) out.at[v];
    for (const auto& [v, counts] : a.at) {
        if (!std::binary_search(star.begin(), star.end(), v))
            throw PreconditionViolation("template entry at vertex " + std::to_string(v) + " outside the star vertices");
        for (const auto& [p, c] : counts) {
            if (c < 1) throw PreconditionViolation("template counts must be positive");
            if (ordered_pair(frame, v, p.first, p.second) != p)
                throw PreconditionViolation("pair at vertex " + std::to_string(v) + " is not in edge order");
            if (p.is_self() && tree.degree(v) != 1) {
                Invalid bad = invalid(InvalidClause::not_extensible, "doubled edge at a non-leaf vertex");
                bad.vertex = v;
                return bad;
            }
        }
        out.at[v] = counts;
    }
    const auto paths = frame.paths();
    for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
        const TreePath& path = paths[p];
        const int len = path.length();
        if (len < 2) continue;
        const VertexId u = path.vertices[1], w = path.vertices[len - 1];
        const int cu = count_of(a, u, ordered_pair(frame, u, path.edges[0], path.edges[1]));
        const int cw = count_of(a, w, ordered_pair(frame, w, path.edges[len - 2], path.edges[len - 1]));
        if (len >= 4 && cu != cw) {
            Invalid bad = invalid(InvalidClause::not_extensible,
                                  (cu > 0) != (cw > 0) ? "pair present at one end of the path only"
                                                       : "counts " + std::to_string(cu) + " and " +
                                                             std::to_string(cw) + " differ along the path");
            bad.path = p;
            return bad;
        }
        for (int i = 2; i <= len - 2; ++i) {
            const VertexId v = path.vertices[i];
            auto& counts = out.at[v];
            counts.clear();
            if (cu > 0) counts[ordered_pair(frame, v, path.edges[i - 1], path.edges[i])] = cu;
        }
    }
    return out;
}

Checked<MultiplicityFn> multiplicity_from(const TreeFrame& frame, const Template& extended) {
    const SteinerTree& tree = frame.tree();
    std::map<std::pair<VertexId, EdgeId>, int> local;
    for (const auto& [v, counts] : extended.at) {
        if (is_terminal(frame, v) && counts.empty()) {
            Invalid bad = invalid(InvalidClause::empty_terminal, "terminal with an empty pairing");
            bad.vertex = v;
            return bad;
        }
        for (const auto& [p, c] : counts) {
            if (p.is_self()) {
                local[{v, p.first}] += 2 * c - 1;
            } else {
                local[{v, p.first}] += c;
                local[{v, p.second}] += c;
            }
        }
    }
    for (VertexId v : tree.vertices())
        if (is_terminal(frame, v) && !extended.at.count(v)) {
            Invalid bad = invalid(InvalidClause::empty_terminal, "terminal with an empty pairing");
            bad.vertex = v;
            return bad;
        }
    MultiplicityFn ell;
    for (EdgeId e : tree.edges()) {
        const Edge& ends = frame.graph().edge(e);
        const auto lu = local.find({ends.u, e}), lv = local.find({ends.v, e});
        const int a = lu == local.end() ? 0 : lu->second, b = lv == local.end() ? 0 : lv->second;
        if (a != b) {
            Invalid bad = invalid(InvalidClause::multiplicity_mismatch,
                                  "ends disagree: " + std::to_string(a) + " vs " + std::to_string(b));
            bad.edge = e;
            return bad;
        }
        ell.of[e] = a;
    }
    return ell;
}

Checked<std::map<EdgeId, EdgeId>> stitch_terminal(const TreeFrame& frame, const MultiplicityFn& ell, VertexId v) {
    if (frame.tree_degree(v) != 1) throw PreconditionViolation("terminal " + std::to_string(v) + " is not a leaf");
    const EdgeId e = frame.tree().incident(v)[0];
    const int l = ell(e);
    if (l % 2 == 0) {
        Invalid bad = invalid(InvalidClause::even_multiplicity, "even multiplicity " + std::to_string(l));
        bad.vertex = v;
        bad.edge = e;
        return bad;
    }
    if (l > frame.classes().span()) {
        Invalid bad = invalid(InvalidClause::copy_overflow, "multiplicity exceeds the copies on one side");
        bad.vertex = v;
        bad.edge = e;
        return bad;
    }
    std::map<EdgeId, EdgeId> f;
    for (int i = 1; i <= l; ++i) f[frame.classes().copy(e, i)] = frame.classes().copy(e, l + 1 - i);
    return f;
}

Checked<std::map<EdgeId, EdgeId>> stitch_nonterminal(const TreeFrame& frame, const Template& extended,
                                                     const MultiplicityFn& /*ell*/, VertexId v) {
    const auto order = frame.tree_edge_order(v);
    const ParallelClasses& cls = frame.classes();
    const int span = cls.span();
    std::map<EdgeId, EdgeId> f;
    const auto at = extended.at.find(v);
    if (at == extended.at.end()) return f;
    auto t = [&](EdgeId a, EdgeId b) { return count_of(extended, v, ordered_pair(frame, v, a, b)); };
    for (const auto& [p, m] : at->second) {
        const int pe = position_in(order, p.first), pf = position_in(order, p.second);
        long long x = 0, y = 1 + m;
        for (int q = 0; q < static_cast<int>(order.size()); ++q) {
            if (q < pe || q > pf) x += t(p.first, order[q]);
            // Copies of the later edge are consumed first by pairs with edges
            // lying between the two.
            if (q > pe && q < pf) y += t(p.second, order[q]);
        }
        for (int i = 1; i <= m; ++i) {
            const long long ia = x + i, ib = y - i;
            if (ia < 1 || ia > span || ib < 1 || ib > span) {
                Invalid bad = invalid(InvalidClause::copy_overflow, "copy index beyond the available copies");
                bad.vertex = v;
                bad.edge = ia > span ? p.first : p.second;
                return bad;
            }
            const EdgeId a = cls.copy(p.first, static_cast<int>(ia)), b = cls.copy(p.second, static_cast<int>(ib));
            if (a == b || f.count(a) || f.count(b)) {
                Invalid bad = invalid(InvalidClause::fixed_point, a == b ? "copy mapped to itself" : "copy mapped twice");
                bad.vertex = v;
                bad.edge = f.count(a) ? a : b;
                return bad;
            }
            f[a] = b;
            f[b] = a;
        }
    }
    return f;
}

Checked<Stitching> stitching_from(const TreeFrame& frame, const Template& extended) {
    auto ell = multiplicity_from(frame, extended);
    if (auto* bad = std::get_if<Invalid>(&ell)) return *bad;
    const MultiplicityFn& fn = std::get<MultiplicityFn>(ell);
    Stitching s;
    for (VertexId v : frame.tree().vertices()) {
        auto local = frame.tree_degree(v) == 1 ? stitch_terminal(frame, fn, v) : stitch_nonterminal(frame, extended, fn, v);
        if (auto* bad = std::get_if<Invalid>(&local)) return *bad;
        auto& map = std::get<std::map<EdgeId, EdgeId>>(local);
        if (!map.empty()) s.at[v] = std::move(map);
    }
    for (const auto& [v, map] : s.at)
        for (const auto& [a, b] : map) {
            const Edge& ends = frame.graph().edge(a);
            const VertexId other = ends.u == v ? ends.v : ends.u;
            if (!s.image(other, a)) {
                Invalid bad = invalid(InvalidClause::edge_mismatch, "copy stitched at one end only");
                bad.vertex = v;
                bad.edge = a;
                return bad;
            }
        }
    return s;
}

WeakLinkage reconstruct(const TreeFrame& frame, const Stitching& s) {
    const PlaneGraph& g = frame.graph();
    std::size_t stitched = 0;
    for (const auto& [v, map] : s.at) stitched += map.size();
    std::set<EdgeId> used;
    std::set<VertexId> ends;
    WeakLinkage out;
    for (const TerminalPair& pair : frame.pairs()) {
        const VertexId start = pair.source;
        const auto at = s.at.find(start);
        std::optional<EdgeId> first;
        if (at != s.at.end())
            for (const auto& [a, b] : at->second)
                if (a == b) {
                    if (first) throw UnmatchedTerminals("two walk ends at terminal " + std::to_string(start));
                    first = a;
                }
        if (!first) throw UnmatchedTerminals("no walk end at source " + std::to_string(start));
        Walk walk{start, {}};
        VertexId cur = start;
        EdgeId e = *first;
        while (true) {
            if (!used.insert(e).second) throw NonterminatingTrace("copy " + std::to_string(e) + " traced twice");
            walk.edges.push_back(e);
            if (walk.edges.size() > stitched) throw NonterminatingTrace("trace does not close");
            const VertexId next = g.other_end(e, cur);
            const auto img = s.image(next, e);
            if (!img) throw NonterminatingTrace("copy " + std::to_string(e) + " is unstitched at " + std::to_string(next));
            cur = next;
            if (*img == e) break;
            e = *img;
        }
        if (cur == start || !ends.insert(cur).second)
            throw UnmatchedTerminals("trace from " + std::to_string(start) + " ends at " + std::to_string(cur));
        for (const TerminalPair& other : frame.pairs())
            if (other.source == cur) throw UnmatchedTerminals("trace from " + std::to_string(start) + " ends at source " +
                                                              std::to_string(cur));
        ends.insert(start);
        out.walks.push_back(std::move(walk));
    }
    for (const auto& [v, map] : s.at)
        for (const auto& [a, b] : map)
            if (!used.count(a)) throw NonterminatingTrace("copy " + std::to_string(a) + " lies on a closed loop");
    return out;
}

Checked<WeakLinkage> linkage_of_template(const TreeFrame& frame, const Template& a) {
    auto ext = extend(frame, a);
    if (auto* bad = std::get_if<Invalid>(&ext)) return *bad;
    auto st = stitching_from(frame, std::get<Template>(ext));
    if (auto* bad = std::get_if<Invalid>(&st)) return *bad;
    return reconstruct(frame, std::get<Stitching>(st));
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json template_to_json(const Template& t) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [v, counts] : t.at) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& [p, c] : counts) list.push_back({{"pair", {p.first, p.second}}, {"count", c}});
        j[std::to_string(v)] = std::move(list);
    }
    return j;
}

Template template_from_json(const nlohmann::json& j, const TreeFrame* frame) {
    if (!j.is_object()) throw ParseError("template must be a JSON object");
    Template t;
    try {
        for (const auto& [key, list] : j.items()) {
            std::size_t used = 0;
            const VertexId v = std::stoi(key, &used);
            if (used != key.size()) throw ParseError("bad vertex key '" + key + "'");
            auto& counts = t.at[v];
            for (const auto& item : list) {
                const auto pair = item.at("pair").get<std::vector<EdgeId>>();
                const int c = item.at("count").get<int>();
                if (pair.size() != 2) throw ParseError("pair must have two edges");
                if (c < 1) throw ParseError("count must be at least 1");
                EdgePair p{pair[0], pair[1]};
                if (frame) {
                    if (!frame->on_tree(v)) throw ParseError("vertex " + key + " is not on the tree");
                    try {
                        p = ordered_pair(*frame, v, p.first, p.second);
                    } catch (const PreconditionViolation& e) {
                        throw ParseError(e.what());
                    }
                }
                if (!counts.emplace(p, c).second) throw ParseError("pair listed twice at vertex " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("template: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ParseError("vertex keys must be integers");
    }
    return t;
}

}  // namespace pdp
