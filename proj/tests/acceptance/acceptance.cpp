// Acceptance runs: one PASS/FAIL line per criterion, exit status 1 if any fails.
// `pdp_acceptance 3 5` runs only criteria 3 and 5.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pdp/corpus.hpp"
#include "pdp/errors.hpp"
#include "pdp/flows.hpp"
#include "pdp/linkage.hpp"
#include "pdp/rings.hpp"
#include "pdp/solver.hpp"
#include "pdp/steiner.hpp"
#include "pdp/templates.hpp"

using namespace pdp;

namespace {

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

Walk walk_of_path(const PlaneGraph& g, const std::vector<VertexId>& path) {
    return Walk{path.front(), path_edges(g, path)};
}

WeakLinkage linkage_of_paths(const PlaneGraph& g, const std::vector<std::vector<VertexId>>& paths) {
    WeakLinkage w;
    for (const auto& p : paths) w.walks.push_back(walk_of_path(g, p));
    return w;
}

std::optional<FramedLinkage> planted_frame(std::uint64_t seed, int extra, int k) {
    std::mt19937_64 rng(seed);
    const PlantedInstance p = planted_with_paths(extra, k, rng);
    try {
        return frame_solution(p.instance, linkage_of_paths(p.instance.graph, p.paths),
                              AlgorithmConstants::relaxed(k, 1000, 100));
    } catch (const TerminalsDisconnected&) {
        return std::nullopt;
    }
}

// Random vertex-simple path from `from` to a vertex accepted by `done`,
// avoiding used edges.
std::optional<Walk> random_path(const PlaneGraph& g, VertexId from, const std::vector<char>& used_edges,
                                const std::vector<char>& done, std::mt19937_64& rng) {
    std::vector<EdgeId> parent(g.num_vertices(), -1);
    std::vector<char> seen(g.num_vertices(), 0);
    std::vector<VertexId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        if (done[v] && v != from) {
            std::vector<EdgeId> edges;
            for (VertexId x = v; x != from; x = g.other_end(parent[x], x)) edges.push_back(parent[x]);
            std::reverse(edges.begin(), edges.end());
            return Walk{from, edges};
        }
        std::vector<EdgeId> next(g.rotation(v).begin(), g.rotation(v).end());
        std::shuffle(next.begin(), next.end(), rng);
        for (EdgeId e : next) {
            const VertexId y = g.other_end(e, v);
            if (used_edges[e] || seen[y]) continue;
            seen[y] = 1;
            parent[y] = e;
            stack.push_back(y);
        }
    }
    return std::nullopt;
}

std::vector<VertexId> ring_vertices(int index, int spokes) {
    std::vector<VertexId> out(spokes);
    std::iota(out.begin(), out.end(), index * spokes);
    return out;
}

// ---------------------------------------------------------------------------

CriterionResult oracle_equivalence() {
    std::vector<Instance> all;
    for (auto [rows, cols] : sweep_shapes())
        for (int k : {1, 2}) {
            auto part = grid_instances(rows, cols, k);
            all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    const auto start = std::chrono::steady_clock::now();
    const SweepSummary s = sweep(all, SolverConfig{}, true);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::int64_t errors = 0, invalid = 0, capped = 0;
    for (const auto& e : s.entries) {
        errors += !e.error.empty();
        invalid += !e.solution_valid;
        capped += e.verdict == Verdict::infeasible_within_caps;
    }
    const bool pass = s.disagreements == 0 && errors == 0 && invalid == 0 && all.size() >= 10000 && seconds <= 1800;
    return {pass, std::to_string(all.size()) + " instances, " + std::to_string(s.agreements) + " agree, " +
                      std::to_string(s.disagreements) + " disagree, " + std::to_string(s.feasible) + " feasible, " +
                      std::to_string(capped) + " within caps, " + std::to_string(errors) + " errors, " +
                      std::to_string(static_cast<int>(seconds)) + " s"};
}

// Simplified linkages of planted solutions and of oracle solutions on grids.
struct CorpusLinkage {
    std::optional<FramedLinkage> framed;
    WeakLinkage simplified;
    int k = 1;
};

std::vector<CorpusLinkage> simplified_corpus(int wanted, int* skipped) {
    std::vector<CorpusLinkage> out;
    std::mt19937_64 rng(2024);
    std::uint64_t seed = 1;
    while (static_cast<int>(out.size()) < wanted) {
        CorpusLinkage c;
        if (out.size() % 3 == 2) {
            const int rows = 3 + static_cast<int>(rng() % 2), cols = 3 + static_cast<int>(rng() % 2);
            c.k = 1 + static_cast<int>(rng() % 2);
            std::vector<VertexId> verts(rows * cols);
            std::iota(verts.begin(), verts.end(), 0);
            std::shuffle(verts.begin(), verts.end(), rng);
            Instance inst{grid_graph(rows, cols), {}};
            for (int i = 0; i < c.k; ++i) inst.pairs.push_back({verts[2 * i], verts[2 * i + 1]});
            const auto s = brute_force(inst);
            if (!s) continue;
            c.framed = frame_solution(inst, *s, AlgorithmConstants::relaxed(c.k, 1000, 100));
        } else {
            c.k = 1 + static_cast<int>(seed % 3);
            c.framed = planted_frame(seed, 4 + static_cast<int>(seed % 11), c.k);
            ++seed;
            if (!c.framed) continue;
        }
        if (c.framed->frame.tree().vertices().size() > 50) {
            ++*skipped;
            continue;
        }
        c.simplified = simplify(c.framed->frame, c.framed->linkage).linkage;
        out.push_back(std::move(c));
    }
    return out;
}

CriterionResult round_trip(const std::vector<CorpusLinkage>& corpus) {
    int failures = 0;
    std::string first;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const TreeFrame& f = corpus[i].framed->frame;
        const WeakLinkage& w = corpus[i].simplified;
        std::string why;
        try {
            const Template t = template_of(f, w);
            if (!(pairing_of(f, w) == t.pairing())) why = "pairing differs from the template's";
            const auto ext = extend(f, t);
            if (why.empty() && std::holds_alternative<Invalid>(ext)) why = "extend: " + std::get<Invalid>(ext).detail;
            if (why.empty()) {
                const auto s = stitching_from(f, std::get<Template>(ext));
                if (std::holds_alternative<Invalid>(s)) why = "stitching: " + std::get<Invalid>(s).detail;
                else if (!(reconstruct(f, std::get<Stitching>(s)) == w)) why = "reconstruction differs";
            }
        } catch (const std::exception& e) {
            why = e.what();
        }
        if (!why.empty()) {
            if (failures++ == 0) first = "sample " + std::to_string(i) + ": " + why;
        }
    }
    return {failures == 0, std::to_string(corpus.size()) + " linkages, " + std::to_string(failures) + " failures" +
                               (first.empty() ? "" : " (" + first + ")")};
}

CriterionResult pairing_bound(const std::vector<CorpusLinkage>& corpus) {
    int violations = 0;
    std::size_t largest = 0;
    for (const auto& c : corpus) {
        const TreeFrame& f = c.framed->frame;
        const Pairing p = pairing_of(f, c.simplified);
        largest = std::max(largest, p.total());
        if (!is_noncrossing(f.tree(), p)) ++violations;
        if (static_cast<std::int64_t>(p.total()) > AlgorithmConstants::standard(c.k).npair()) ++violations;
    }
    return {violations == 0, std::to_string(corpus.size()) + " pairings, largest " + std::to_string(largest) +
                                 " pairs, " + std::to_string(violations) + " violations"};
}

// ---------------------------------------------------------------------------

std::vector<EdgeId> face_cycle(const PlaneGraph& g, FaceId f) {
    std::vector<EdgeId> out;
    for (Dart d : g.face_darts(f)) out.push_back(edge_of(d));
    return out;
}

CriterionResult homology_invariance() {
    std::mt19937_64 rng(77);
    int sequences = 0, failures = 0, empty = 0;
    long long applied_total = 0;
    std::uint64_t seed = 100;
    while (sequences < 1000) {
        PlaneGraph g;
        WeakLinkage start;
        if (sequences % 2 == 0) {
            std::mt19937_64 prng(seed++);
            const PlantedInstance p = planted_with_paths(6 + static_cast<int>(prng() % 15), 1 + sequences % 3, prng);
            g = p.instance.graph;
            start = linkage_of_paths(g, p.paths);
        } else {
            const int rows = 3 + static_cast<int>(rng() % 3), cols = 4 + static_cast<int>(rng() % 3);
            g = grid_graph(rows, cols);
            std::vector<int> row_ids(rows);
            std::iota(row_ids.begin(), row_ids.end(), 0);
            std::shuffle(row_ids.begin(), row_ids.end(), rng);
            const int k = 1 + static_cast<int>(rng() % std::min(3, rows));
            for (int i = 0; i < k; ++i) {
                const int r = row_ids[i], a = static_cast<int>(rng() % (cols - 1));
                const int b = a + 1 + static_cast<int>(rng() % (cols - 1 - a));
                std::vector<VertexId> path;
                for (int c = a; c <= b; ++c) path.push_back(r * cols + c);
                start.walks.push_back(walk_of_path(g, path));
            }
        }
        const int length = 1 + static_cast<int>(rng() % 50);
        WeakLinkage cur = start;
        int applied = 0;
        for (int attempt = 0; attempt < 40 * length && applied < length; ++attempt) {
            const int walk = static_cast<int>(rng() % cur.walks.size());
            const FaceId f = static_cast<FaceId>(rng() % g.num_faces());
            try {
                switch (rng() % 5) {
                    case 0: cur = face_move(g, cur, walk, f); break;
                    case 1: cur = face_pull(g, cur, walk, f); break;
                    case 2: cur = face_push(g, cur, walk, f); break;
                    case 3: cur = cycle_move(g, cur, walk, face_cycle(g, f)); break;
                    default: cur = cycle_pull(g, cur, walk, face_cycle(g, f)); break;
                }
                ++applied;
            } catch (const NotApplicable&) {
            }
        }
        empty += applied == 0;
        applied_total += applied;
        const DirectedPlaneGraph d = doubled_orientation(g);
        const Flow before = flow_of_linkage(g, start), after = flow_of_linkage(g, cur);
        const auto result = homologous(d, before, after);
        if (!std::holds_alternative<HomologyWitness>(result) ||
            verify_witness(d, before, after, std::get<HomologyWitness>(result)) || !is_weak_linkage(g, cur))
            ++failures;
        ++sequences;
    }
    return {failures == 0, std::to_string(sequences) + " sequences, " + std::to_string(applied_total) +
                               " operations applied, " + std::to_string(empty) + " sequences without one, " +
                               std::to_string(failures) + " failures"};
}

// ---------------------------------------------------------------------------

CriterionResult winding_properties() {
    std::mt19937_64 rng(4242);
    int triples = 0, violations = 0, visitors = 0, largest = 0;
    for (int attempt = 0; attempt < 20000 && triples < 500; ++attempt) {
        const int rings = 3 + static_cast<int>(rng() % 6), spokes = 4 + static_cast<int>(rng() % 7);
        const PlaneGraph g = annulus_graph(rings, spokes);
        std::vector<int> starts(spokes), ends(spokes);
        std::iota(starts.begin(), starts.end(), 0);
        std::iota(ends.begin(), ends.end(), 0);
        std::shuffle(starts.begin(), starts.end(), rng);
        std::shuffle(ends.begin(), ends.end(), rng);
        std::vector<char> used(g.num_edges(), 0);
        std::vector<Walk> walks;
        for (int w = 0; w < 3; ++w) {
            std::vector<char> done(g.num_vertices(), 0);
            done[(rings - 1) * spokes + ends[w]] = 1;
            auto p = random_path(g, starts[w], used, done, rng);
            if (!p) break;
            for (EdgeId e : p->edges) used[e] = 1;
            walks.push_back(*p);
        }
        if (walks.size() < 3) continue;
        const Ring ring(g, ring_vertices(0, spokes), ring_vertices(rings - 1, spokes), walks[0]);
        int wn[3][3] = {};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) wn[i][j] = winding_number(ring, walks[i], walks[j]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) violations += wn[i][j] != -wn[j][i];
        violations += std::abs(std::abs(wn[0][1] - wn[0][2]) - std::abs(wn[1][2])) > 1;
        largest = std::max({largest, std::abs(wn[0][1]), std::abs(wn[0][2]), std::abs(wn[1][2])});
        ++triples;

        // Visitors avoid the reference's edges and return to the cycle they
        // started on.
        std::vector<char> reference_edges(g.num_edges(), 0);
        for (EdgeId e : walks[0].edges) reference_edges[e] = 1;
        const int side = static_cast<int>(rng() % 2) == 0 ? 0 : rings - 1;
        const VertexId from = side * spokes + static_cast<int>(rng() % spokes);
        std::vector<char> done(g.num_vertices(), 0);
        done[side * spokes + static_cast<int>(rng() % spokes)] = 1;
        if (auto v = random_path(g, from, reference_edges, done, rng)) {
            ++visitors;
            violations += std::abs(winding_number(ring, *v)) > 1;
        }
    }
    return {triples == 500 && violations == 0 && largest >= 2,
            std::to_string(triples) + " triples, " + std::to_string(visitors) + " visitors, largest |wn| " +
                std::to_string(largest) + ", " + std::to_string(violations) + " violations"};
}

// ---------------------------------------------------------------------------

// Moves a stretch of the walk running on copy +-1 along tree edges over to
// copy -+1 of the same edges, so the walk crosses the tree and comes back.
std::optional<WeakLinkage> inject_swollen(const TreeFrame& f, const WeakLinkage& w, std::mt19937_64& rng) {
    const ParallelClasses& cls = f.classes();
    const PlaneGraph& g = f.graph();
    const std::size_t before = swollen_segments(f, w).size();
    for (int attempt = 0; attempt < 60; ++attempt) {
        const int walk = static_cast<int>(rng() % w.walks.size());
        const Walk& wk = w.walks[walk];
        if (wk.edges.empty()) continue;
        const int a = static_cast<int>(rng() % wk.edges.size());
        const int index = cls.index_of(wk.edges[a]);
        if (std::abs(index) != 1 || !f.tree_class(wk.edges[a])) continue;
        int b = a + 1;
        while (b < static_cast<int>(wk.edges.size()) && cls.index_of(wk.edges[b]) == index && b - a < 4 &&
               rng() % 3 != 0)
            ++b;
        const auto verts = walk_vertices(g, wk);
        std::set<VertexId> distinct(verts.begin() + a, verts.begin() + b + 1);
        if (static_cast<int>(distinct.size()) != b - a + 1) continue;
        std::vector<EdgeId> cycle(wk.edges.begin() + a, wk.edges.begin() + b);
        for (int i = b - 1; i >= a; --i) cycle.push_back(cls.copy(cls.base_of(wk.edges[i]), -index));
        try {
            WeakLinkage moved = cycle_move(g, w, walk, cycle);
            if (is_weak_linkage(g, moved) && swollen_segments(f, moved).size() > before) return moved;
        } catch (const NotApplicable&) {
        }
    }
    return std::nullopt;
}

// Pushes a free 2-gon beside a used copy into the walk using it.
std::optional<WeakLinkage> inject_u_turn(const TreeFrame& f, const WeakLinkage& w, std::mt19937_64& rng) {
    const ParallelClasses& cls = f.classes();
    const PlaneGraph& g = f.graph();
    std::vector<std::pair<int, int>> uses;
    for (int i = 0; i < static_cast<int>(w.walks.size()); ++i)
        for (int j = 0; j < static_cast<int>(w.walks[i].edges.size()); ++j) uses.emplace_back(i, j);
    std::shuffle(uses.begin(), uses.end(), rng);
    const std::size_t before = u_turns(f, w).size();
    for (auto [walk, pos] : uses) {
        const EdgeId e = w.walks[walk].edges[pos];
        const int i = cls.index_of(e);
        const int step = i > 0 ? 1 : -1;
        if (i == 0 || std::abs(i) + 2 > cls.span()) continue;
        const EdgeId near = cls.copy(cls.base_of(e), i + step), far = cls.copy(cls.base_of(e), i + 2 * step);
        for (Dart d : {dart_of(near, false), dart_of(near, true)}) {
            const auto darts = g.face_darts(g.face(d));
            if (darts.size() != 2 || (edge_of(darts[0]) != far && edge_of(darts[1]) != far)) continue;
            try {
                WeakLinkage bent = face_push(g, w, walk, g.face(d));
                if (is_weak_linkage(g, bent) && u_turns(f, bent).size() > before) return bent;
            } catch (const NotApplicable&) {
            }
        }
    }
    return std::nullopt;
}

CriterionResult simplification_measures() {
    std::mt19937_64 rng(515);
    int samples = 0, violations = 0, attempts = 0;
    long long steps = 0;
    std::string first;
    std::uint64_t seed = 1;
    while (samples < 200 && attempts < 5000) {
        ++attempts;
        const auto fl = planted_frame(seed, 6 + static_cast<int>(seed % 6), 1 + static_cast<int>(seed % 2));
        ++seed;
        if (!fl) continue;
        const TreeFrame& f = fl->frame;
        WeakLinkage w = push_onto_tree(f, fl->linkage);
        const auto swollen = inject_swollen(f, w, rng);
        if (!swollen) continue;
        const auto bent = inject_u_turn(f, *swollen, rng);
        // The pipeline expects a single used edge at the outer terminal.
        if (!bent || swollen_segments(f, *bent).empty() || !is_outer_terminal(f, *bent)) continue;
        ++samples;
        std::string why;
        try {
            const Simplified s = simplify(f, *bent);
            for (const auto& t : s.report.traces) {
                steps += t.steps();
                if (!t.monotone()) why = "stage " + t.stage + " not monotone";
                // Once swollen segments are gone the segment bound holds at
                // every U-turn step. Canonical packing drops the copy sides
                // segments are read from, so the bound is not taken after it.
                if (t.stage == "all U-turns")
                    for (std::size_t i = 0; i < t.segment_counts.size(); ++i)
                        if (t.segment_counts[i] > t.potentials[i]) why = "more segments than potential during U-turns";
            }
            const WeakLinkage& out = s.linkage;
            if (!u_turns(f, out).empty()) why = "U-turn left";
            if (!is_canonical(f, out)) why = "not canonical";
            if (!is_weak_linkage(f.graph(), out)) why = "not a weak linkage";
            if (s.report.segments_after_swollen > s.report.potential_after_swollen) why = "more segments than potential";
            if (!s.report.two_copies_per_segment) why = "a segment uses three copies";
        } catch (const std::exception& e) {
            why = e.what();
        }
        if (!why.empty() && violations++ == 0) first = "seed " + std::to_string(seed - 1) + ": " + why;
        if (!why.empty() && std::getenv("PDP_VERBOSE")) std::fprintf(stderr, "seed %d: %s\n", int(seed - 1), why.c_str());
    }
    return {samples == 200 && violations == 0,
            std::to_string(samples) + " injected linkages (" + std::to_string(attempts) + " tried), " +
                std::to_string(steps) + " stage steps, " + std::to_string(violations) + " violations" +
                (first.empty() ? "" : " (" + first + ")")};
}

// ---------------------------------------------------------------------------

// Tree vertices reachable from `from` in the tree without entering `blocked`.
std::vector<char> tree_side(const SteinerTree& t, VertexId from, const std::vector<char>& blocked) {
    std::vector<char> seen(t.host_vertices(), 0);
    std::vector<VertexId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (EdgeId e : t.incident(v)) {
            const VertexId y = t.other_end(e, v);
            if (seen[y] || blocked[y]) continue;
            seen[y] = 1;
            stack.push_back(y);
        }
    }
    return seen;
}

CriterionResult steiner_pipeline() {
    std::mt19937_64 rng(606);
    int instances = 0, long_paths = 0, multi = 0, violations = 0;
    std::string first;
    auto note = [&](const std::string& why) {
        if (violations++ == 0) first = why;
    };
    for (int rings = 10; rings <= 26; rings += 2)
        for (int spokes = 4; spokes <= 6; ++spokes)
            for (int variant = 0; variant < 3; ++variant) {
                const int last = (rings - 1) * spokes;
                Instance inst{annulus_graph(rings, spokes), {}};
                const auto at = [&](int ring, int pos) { return ring * spokes + (pos % spokes); };
                const int j = static_cast<int>(rng() % spokes);
                inst.pairs.push_back({at(0, j), last + static_cast<int>(rng() % spokes)});
                if (variant >= 1) inst.pairs.push_back({at(rings / 2, j), at(rings / 2, j + 2)});
                if (variant == 2) inst.pairs.push_back({at(0, j + 1), at(rings / 3, j + 1)});
                const int k = static_cast<int>(inst.pairs.size());
                const auto constants = AlgorithmConstants::relaxed(k, 8 + static_cast<int>(rng() % 3), 3);
                const NiceInstance nice = make_nice(inst);
                const RadialCompletion h = radial_completion(nice.instance.graph);
                const BackboneTree b = build_backbone(h, nice.instance, nice.outer_terminal, constants);
                const PlaneGraph& H = h.graph;
                ++instances;
                long_paths += static_cast<int>(b.long_paths.size());
                multi += b.long_paths.size() >= 2;
                const std::string tag = std::to_string(rings) + "x" + std::to_string(spokes) + "/" +
                                        std::to_string(variant) + ": ";

                if (find_detour(H, b.detour_free)) note(tag + "detour left");
                for (const auto& why : check_backbone(h, b, constants)) note(tag + why);
                for (const auto& d : b.long_paths) {
                    if (!induces_cycle(H, d.sep_u) || !induces_cycle(H, d.sep_v)) note(tag + "separator not a cycle");
                    const auto& seq = d.path.vertices;
                    for (int side = 0; side < 2; ++side) {
                        const auto& sep = side == 0 ? d.sep_u : d.sep_v;
                        const int anchor = side == 0 ? d.anchor_u_index : d.anchor_v_index;
                        std::vector<VertexId> stem;
                        for (int i = 0; i <= anchor; ++i) stem.push_back(side == 0 ? seq[i] : seq[seq.size() - 1 - i]);
                        std::vector<char> blocked(H.num_vertices(), 0);
                        for (std::size_t i = 1; i < stem.size(); ++i) blocked[stem[i]] = 1;
                        auto a_side = tree_side(b.tree, stem.front(), blocked);
                        for (VertexId x : stem) a_side[x] = 1;
                        std::vector<char> removed(H.num_vertices(), 0);
                        for (VertexId x : sep) removed[x] = 1;
                        std::vector<VertexId> from, other;
                        for (VertexId x : b.tree.vertices())
                            if (!removed[x]) (a_side[x] ? from : other).push_back(x);
                        const auto reach = component_mask(H, removed, from);
                        for (VertexId x : other)
                            if (reach[x]) {
                                note(tag + "separator does not separate");
                                break;
                            }
                    }
                    for (const auto& q : d.flow.paths)
                        if (crossing_runs(d.replacement, q) > 1) note(tag + "replacement crosses a flow path twice");
                }
                for (std::size_t x = 0; x < b.long_paths.size(); ++x)
                    for (std::size_t y = x + 1; y < b.long_paths.size(); ++y) {
                        std::vector<VertexId> common;
                        std::set_intersection(b.long_paths[x].ring.begin(), b.long_paths[x].ring.end(),
                                              b.long_paths[y].ring.begin(), b.long_paths[y].ring.end(),
                                              std::back_inserter(common));
                        if (!common.empty()) note(tag + "rings share a vertex");
                    }
            }
    return {violations == 0 && long_paths > 0 && multi > 0,
            std::to_string(instances) + " annulus instances, " + std::to_string(long_paths) + " long paths, " +
                std::to_string(multi) + " with several, " + std::to_string(violations) + " violations" +
                (first.empty() ? "" : " (" + first + ")")};
}

// ---------------------------------------------------------------------------

using TemplateKey = std::set<std::tuple<VertexId, EdgeId, EdgeId, int>>;

TemplateKey key_of(const Template& t) {
    TemplateKey key;
    for (const auto& [v, pairs] : t.at)
        for (const auto& [p, count] : pairs)
            key.emplace(v, std::min(p.first, p.second), std::max(p.first, p.second), count);
    return key;
}

// Enumerates capped templates from scratch: own star vertices, own pair
// universe, own crossing test on the tree's incidence order.
std::set<TemplateKey> brute_templates(const SteinerTree& tree, int max_pairs, int max_count) {
    std::vector<VertexId> star;
    for (VertexId v : tree.vertices()) {
        bool keep = tree.degree(v) != 2;
        for (EdgeId e : tree.incident(v)) keep = keep || tree.degree(tree.other_end(e, v)) != 2;
        if (keep) star.push_back(v);
    }
    struct Slot {
        VertexId v;
        int i, j;  // positions in the incidence order
        EdgeId a, b;
    };
    std::vector<Slot> slots;
    for (VertexId v : star) {
        const auto inc = tree.incident(v);
        const int d = static_cast<int>(inc.size());
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j)
                if (i != j || d == 1) slots.push_back({v, i, j, std::min(inc[i], inc[j]), std::max(inc[i], inc[j])});
    }
    const auto crosses = [](const Slot& x, const Slot& y) {
        if (x.v != y.v) return false;
        const auto inside = [&](int p) { return x.i < p && p < x.j; };
        const bool shared = x.i == y.i || x.i == y.j || x.j == y.i || x.j == y.j;
        return !shared && inside(y.i) != inside(y.j);
    };
    std::set<TemplateKey> out;
    std::vector<int> chosen;
    std::function<void(int)> pick = [&](int from) {
        // Every count assignment for the chosen slots.
        std::vector<int> counts(chosen.size(), 1);
        while (true) {
            TemplateKey key;
            for (std::size_t s = 0; s < chosen.size(); ++s) {
                const Slot& sl = slots[chosen[s]];
                key.emplace(sl.v, sl.a, sl.b, counts[s]);
            }
            out.insert(key);
            std::size_t s = 0;
            while (s < counts.size() && counts[s] == max_count) counts[s++] = 1;
            if (s == counts.size()) break;
            ++counts[s];
        }
        if (static_cast<int>(chosen.size()) == max_pairs) return;
        for (int next = from; next < static_cast<int>(slots.size()); ++next) {
            bool ok = true;
            for (int c : chosen) ok = ok && !crosses(slots[c], slots[next]);
            if (!ok) continue;
            chosen.push_back(next);
            pick(next + 1);
            chosen.pop_back();
        }
    };
    if (max_count > 0) pick(0);
    else out.insert({});
    return out;
}

CriterionResult enumeration_soundness() {
    struct Case {
        int rows, cols;
        std::vector<std::vector<VertexId>> branches;
        TerminalPair pair;
        std::vector<VertexId> extra;
    };
    const std::vector<Case> cases{
        {2, 2, {{0, 1}}, {0, 1}, {}},
        {2, 5, {{0, 1, 2, 3, 4}}, {0, 4}, {}},
        {3, 3, {{1, 4, 7}, {4, 5}}, {1, 7}, {5}},
        {3, 3, {{1, 4, 7}, {3, 4, 5}}, {1, 7}, {3, 5}},
        {3, 4, {{0, 1, 2, 3}, {1, 5, 9}}, {0, 3}, {9}},
        {4, 4, {{0, 1, 2, 3}, {1, 5, 9, 13}, {9, 10, 11}}, {0, 3}, {13, 11}},
    };
    int frames = 0, mismatches = 0;
    std::size_t templates = 0;
    const std::vector<TemplateCaps> caps_list{{1, 2}, {2, 2}, {3, 1}};
    auto compare = [&](const TreeFrame& f) {
        ++frames;
        for (const auto& caps : caps_list) {
            std::set<TemplateKey> got;
            const auto listed = enumerate_all(f, caps);
            for (const auto& t : listed) got.insert(key_of(t));
            const std::size_t drawn = listed.size();
            const auto expected = brute_templates(f.tree(), caps.max_pairs, caps.max_count);
            mismatches += got != expected || drawn != got.size();
            if (caps == TemplateCaps{1, 2}) templates += got.size();
        }
    };
    for (const auto& c : cases) {
        const PlaneGraph g = grid_graph(c.rows, c.cols);
        std::set<EdgeId> edges;
        for (const auto& b : c.branches)
            for (EdgeId e : path_edges(g, b)) edges.insert(e);
        std::vector<VertexId> terminals = c.extra;
        terminals.insert(terminals.end(), {c.pair.source, c.pair.target});
        const SteinerTree tree(g, {edges.begin(), edges.end()}, terminals);
        const std::vector<TerminalPair> pairs{c.pair};
        compare(frame_of_tree(g, tree, c.pair.source, pairs, 4));
    }
    for (std::uint64_t seed = 900; seed < 906; ++seed)
        if (const auto fl = planted_frame(seed, 6, 1)) compare(fl->frame);
    return {mismatches == 0 && frames > 0, std::to_string(frames) + " frames, " + std::to_string(templates) +
                                               " templates at caps (1,2), " + std::to_string(mismatches) +
                                               " mismatching sets"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

    int skipped = 0;
    std::optional<std::vector<CorpusLinkage>> corpus;
    const auto get_corpus = [&]() -> const std::vector<CorpusLinkage>& {
        if (!corpus) corpus = simplified_corpus(1000, &skipped);
        return *corpus;
    };

    const std::vector<std::pair<std::string, std::function<CriterionResult()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"round trip", [&] { return round_trip(get_corpus()); }},
        {"homology invariance", homology_invariance},
        {"winding numbers", winding_properties},
        {"simplification measures", simplification_measures},
        {"steiner pipeline", steiner_pipeline},
        {"pairing bound", [&] { return pairing_bound(get_corpus()); }},
        {"enumeration soundness", enumeration_soundness},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!wanted(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && o.pass;
        std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
