#include "pdp/flows.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace pdp {

DirectedPlaneGraph doubled_orientation(const PlaneGraph& g) {
    RotationSystem rs;
    rs.num_vertices = g.num_vertices();
    rs.edges.reserve(2 * g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        rs.edges.push_back({g.edge(e).u, g.edge(e).v});
        rs.edges.push_back({g.edge(e).v, g.edge(e).u});
    }
    rs.rotation.assign(rs.num_vertices, {});
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        for (EdgeId e : g.rotation(v)) {
            if (g.edge(e).u == v) {
                rs.rotation[v].push_back(forward_arc(e));
                rs.rotation[v].push_back(backward_arc(e));
            } else {
                rs.rotation[v].push_back(backward_arc(e));
                rs.rotation[v].push_back(forward_arc(e));
            }
        }
    if (g.num_edges() > 0) {
        // Right of u -> v lies beyond the backward arc, whose reverse dart
        // runs u -> v; symmetrically for v -> u.
        const Dart w = g.outer_witness();
        const EdgeId e = edge_of(w);
        rs.outer_witness = (w & 1) ? dart_of(forward_arc(e), true) : dart_of(backward_arc(e), true);
    }
    return DirectedPlaneGraph{PlaneGraph(std::move(rs))};
}

DirectedPlaneGraph as_directed(const PlaneGraph& g) { return DirectedPlaneGraph{g}; }

std::vector<ConcLetter> conc(const DirectedPlaneGraph& d, const Flow& phi, VertexId v) {
    auto rot = d.graph.rotation(v);
    std::vector<ConcLetter> out;
    if (rot.empty()) return out;
    const auto start = std::min_element(rot.begin(), rot.end()) - rot.begin();
    for (std::size_t i = 0; i < rot.size(); ++i) {
        ArcId a = rot[(start + i) % rot.size()];
        const int sign = d.head(a) == v ? 1 : -1;
        for (Letter l : phi[a].pow(sign).letters()) out.push_back({l, a});
    }
    return out;
}

std::optional<FlowViolation> flow_check(const DirectedPlaneGraph& d, std::span<const TerminalPair> pairs,
                                        const Flow& phi) {
    if (static_cast<int>(phi.size()) != d.num_arcs()) throw PreconditionViolation("flow size differs from arc count");
    std::vector<int> source_of(d.graph.num_vertices(), -1), target_of(d.graph.num_vertices(), -1);
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
        source_of[pairs[i].source] = i;
        target_of[pairs[i].target] = i;
    }
    for (VertexId v = 0; v < d.graph.num_vertices(); ++v) {
        std::vector<ConcLetter> word = conc(d, phi, v);
        std::vector<Letter> letters;
        letters.reserve(word.size());
        for (const auto& c : word) letters.push_back(c.letter);
        const Word reduced = Word::reduce(letters);
        const bool is_source = source_of[v] != -1, is_target = target_of[v] != -1;
        if (!is_source && !is_target) {
            if (!reduced.is_identity()) return FlowViolation{v, reduced, "conservation fails"};
            continue;
        }
        if (word.empty()) return FlowViolation{v, reduced, "terminal carries no letter"};
        const std::size_t len = word.size();
        bool found = false;
        for (std::size_t i = 0; i < len && !found; ++i) {
            const ArcId a = word[i].arc;
            const bool leaving = d.tail(a) == v;
            Letter expected = is_source ? Letter(pairs[source_of[v]].target, leaving)
                                        : Letter(v, leaving);
            if (word[i].letter != expected) continue;
            std::vector<Letter> rotated;
            rotated.reserve(len);
            for (std::size_t j = 0; j < len; ++j) rotated.push_back(word[(i + j) % len].letter);
            Word r = Word::reduce(rotated);
            found = r.size() == 1 && r[0] == expected;
        }
        if (!found) return FlowViolation{v, reduced, is_source ? "source condition fails" : "target condition fails"};
    }
    return std::nullopt;
}

Flow flow_of_linkage(const PlaneGraph& g, const WeakLinkage& w) {
    Flow phi(2 * g.num_edges());
    for (const Walk& walk : w.walks) {
        const std::vector<VertexId> vs = walk_vertices(g, walk);
        const Word letter = Word::of(vs.back());
        for (std::size_t i = 0; i < walk.edges.size(); ++i) {
            ArcId a = arc_along(g, walk.edges[i], vs[i]);
            if (!phi[a].is_identity()) throw InvariantViolation("arc " + std::to_string(a) + " carried twice");
            phi[a] = letter;
        }
    }
    return phi;
}

std::variant<HomologyWitness, NotHomologous> homologous(const DirectedPlaneGraph& d, const Flow& phi,
                                                        const Flow& psi) {
    const PlaneGraph& g = d.graph;
    std::vector<std::optional<Word>> h(g.num_faces());
    h[g.outer_face()] = Word{};
    std::deque<FaceId> queue{g.outer_face()};
    while (!queue.empty()) {
        const FaceId f = queue.front();
        queue.pop_front();
        const Word& hf = *h[f];
        for (Dart dart : g.face_darts(f)) {
            const ArcId a = edge_of(dart);
            if ((dart & 1) == 0) {
                // f is right of a.
                const FaceId left = d.left_face(a);
                if (!h[left]) {
                    h[left] = phi[a] * hf * psi[a].inverse();
                    queue.push_back(left);
                }
            } else {
                const FaceId right = d.right_face(a);
                if (!h[right]) {
                    h[right] = phi[a].inverse() * hf * psi[a];
                    queue.push_back(right);
                }
            }
        }
    }
    HomologyWitness witness;
    witness.h.reserve(h.size());
    for (auto& x : h) witness.h.push_back(std::move(*x));
    if (auto bad = verify_witness(d, phi, psi, witness)) return NotHomologous{*bad};
    return witness;
}

bool are_homologous(const DirectedPlaneGraph& d, const Flow& phi, const Flow& psi) {
    return std::holds_alternative<HomologyWitness>(homologous(d, phi, psi));
}

std::optional<ArcId> verify_witness(const DirectedPlaneGraph& d, const Flow& phi, const Flow& psi,
                                    const HomologyWitness& w) {
    if (!w.h[d.graph.outer_face()].is_identity()) return ArcId{-1};
    for (ArcId a = 0; a < d.num_arcs(); ++a)
        if (w.h[d.left_face(a)].inverse() * phi[a] * w.h[d.right_face(a)] != psi[a]) return a;
    return std::nullopt;
}

ForbiddenTransform forbid_edges_transform(const DirectedPlaneGraph& d, const Flow& phi,
                                          std::span<const ArcId> forbidden) {
    RotationSystem rs = d.graph.description();
    Flow out = phi;
    std::vector<VertexId> sinks;
    for (ArcId a : forbidden) {
        const VertexId u = rs.edges[a].u, v = rs.edges[a].v;
        const VertexId w = rs.num_vertices++;
        const ArcId fresh = static_cast<ArcId>(rs.edges.size());
        rs.edges[a] = {u, w};
        rs.edges.push_back({v, w});
        auto& rot_v = rs.rotation[v];
        std::replace(rot_v.begin(), rot_v.end(), a, fresh);
        rs.rotation.push_back({a, fresh});
        out.push_back(phi[a].inverse());
        sinks.push_back(w);
    }
    return ForbiddenTransform{DirectedPlaneGraph{PlaneGraph(std::move(rs))}, std::move(out), std::move(sinks)};
}

namespace {

// Rank of copy index i among the class read from left to right of u -> v.
int left_to_right_rank(const ParallelClasses& cls, EdgeId base, int index) {
    return cls.increasing_clockwise_at_u(base) ? index : -index;
}

}  // namespace

Flow compress_parallel_flow(const EnrichedGraph& h, const Flow& phi) {
    const ParallelClasses& cls = h.classes;
    Flow out(cls.base_edges());
    for (EdgeId base = 0; base < cls.base_edges(); ++base) {
        std::vector<std::pair<int, EdgeId>> ordered;
        for (int i = -cls.span(); i <= cls.span(); ++i)
            ordered.emplace_back(left_to_right_rank(cls, base, i), cls.copy(base, i));
        std::sort(ordered.begin(), ordered.end());
        Word acc;
        for (auto [rank, c] : ordered) {
            acc *= phi[forward_arc(c)];
            acc *= phi[backward_arc(c)].inverse();
        }
        out[base] = std::move(acc);
    }
    return out;
}

Flow compressed_flow_of_linkage(const EnrichedGraph& h, const WeakLinkage& w) {
    const ParallelClasses& cls = h.classes;
    std::map<EdgeId, std::vector<std::pair<int, Word>>> crossings;
    for (const Walk& walk : w.walks) {
        const std::vector<VertexId> vs = walk_vertices(h.graph, walk);
        const int target = vs.back();
        for (std::size_t i = 0; i < walk.edges.size(); ++i) {
            const EdgeId c = walk.edges[i];
            const EdgeId base = cls.base_of(c);
            const bool forward = h.graph.edge(c).u == vs[i];
            crossings[base].emplace_back(left_to_right_rank(cls, base, cls.index_of(c)), Word::of(target, !forward));
        }
    }
    Flow out(cls.base_edges());
    for (auto& [base, list] : crossings) {
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Word acc;
        for (const auto& [rank, letter] : list) acc *= letter;
        out[base] = std::move(acc);
    }
    return out;
}

nlohmann::json flow_to_json(const Flow& phi) {
    nlohmann::json j = nlohmann::json::object();
    for (ArcId a = 0; a < static_cast<ArcId>(phi.size()); ++a)
        if (!phi[a].is_identity()) j[std::to_string(a)] = phi[a].to_string();
    return j;
}

Flow flow_from_json(const nlohmann::json& j, int num_arcs, const std::set<int>* alphabet) {
    Flow phi(num_arcs);
    try {
        for (const auto& [key, value] : j.items()) {
            const int a = std::stoi(key);
            if (a < 0 || a >= num_arcs) throw ParseError("arc " + key + " out of range");
            phi[a] = Word::parse(value.get<std::string>(), alphabet);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    } catch (const std::invalid_argument&) {
        throw ParseError("arc keys must be integers");
    }
    return phi;
}

}  // namespace pdp
