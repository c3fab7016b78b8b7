#include <algorithm>
#include <random>

#include "doctest.h"

#include "pdp/corpus.hpp"
#include "pdp/flows.hpp"
#include "pdp/linkage.hpp"

using namespace pdp;

namespace {

Walk grid_walk(const PlaneGraph& g, std::vector<VertexId> verts) { return Walk{verts.front(), path_edges(g, verts)}; }

bool same_homology(const PlaneGraph& g, const WeakLinkage& a, const WeakLinkage& b) {
    return are_homologous(doubled_orientation(g), flow_of_linkage(g, a), flow_of_linkage(g, b));
}

FramedLinkage planted_frame(std::uint64_t seed, int extra, int k) {
    std::mt19937_64 rng(seed);
    const PlantedInstance p = planted_with_paths(extra, k, rng);
    WeakLinkage solution;
    for (const auto& path : p.paths) solution.walks.push_back(Walk{path.front(), path_edges(p.instance.graph, path)});
    return frame_solution(p.instance, solution, AlgorithmConstants::relaxed(k, 1000, 100));
}

}  // namespace

TEST_CASE("crossing walks and touching walks at a grid vertex") {
    const PlaneGraph g = grid_graph(3, 3);
    const WeakLinkage crossing{{grid_walk(g, {3, 4, 5}), grid_walk(g, {1, 4, 7})}};
    const auto found = detect_crossings(g, crossing);
    REQUIRE(found.size() == 1);
    CHECK(found[0].vertex == 4);
    CHECK_FALSE(is_weak_linkage(g, crossing));

    const WeakLinkage touching{{grid_walk(g, {3, 4, 7}), grid_walk(g, {1, 4, 5})}};
    CHECK(detect_crossings(g, touching).empty());
    CHECK(is_weak_linkage(g, touching));

    const WeakLinkage sharing{{grid_walk(g, {3, 4, 5}), grid_walk(g, {4, 5, 8})}};
    CHECK_FALSE(is_weak_linkage(g, sharing));
}

TEST_CASE("face move, pull and push on a grid") {
    const PlaneGraph g = grid_graph(3, 3);
    const FaceId top_left = g.right_face(g.dart_from(path_edges(g, std::vector<VertexId>{0, 1})[0], 0));
    REQUIRE(g.face_darts(top_left).size() == 4);

    const WeakLinkage edge{{grid_walk(g, {0, 1})}};
    const WeakLinkage moved = face_move(g, edge, 0, top_left);
    CHECK(walk_vertices(g, moved.walks[0]) == std::vector<VertexId>{0, 3, 4, 1});
    CHECK(same_homology(g, edge, moved));
    CHECK_THROWS_AS(face_move(g, edge, 0, g.outer_face()), NotApplicable);

    const WeakLinkage loop{{grid_walk(g, {3, 0, 1, 4, 3})}};
    const WeakLinkage pulled = face_pull(g, loop, 0, top_left);
    CHECK(pulled.walks[0].edges.empty());
    CHECK(pulled.walks[0].start == 3);
    CHECK_THROWS_AS(face_move(g, loop, 0, top_left), NotApplicable);

    const WeakLinkage corner{{grid_walk(g, {7, 4, 5})}};
    const WeakLinkage pushed = face_push(g, corner, 0, top_left);
    CHECK(walk_vertices(g, pushed.walks[0]) == std::vector<VertexId>{7, 4, 3, 0, 1, 4, 5});
    CHECK(is_weak_linkage(g, pushed));
    CHECK(same_homology(g, corner, pushed));
    CHECK(face_pull(g, pushed, 0, top_left) == corner);

    // Pushing where the face edges straddle the walk is refused.
    const WeakLinkage straight{{grid_walk(g, {3, 4, 5})}};
    CHECK_THROWS_AS(face_push(g, straight, 0, top_left), NotApplicable);
}

TEST_CASE("cycle moves refuse occupied interiors") {
    const PlaneGraph g = grid_graph(3, 3);
    const auto outer_ring = path_edges(g, std::vector<VertexId>{0, 1, 2, 5, 8, 7, 6, 3, 0});
    const WeakLinkage inside{{grid_walk(g, {0, 1, 2}), grid_walk(g, {3, 4, 5})}};
    CHECK_THROWS_AS(cycle_move(g, inside, 0, outer_ring), NotApplicable);
    const WeakLinkage clear{{grid_walk(g, {0, 1, 2})}};
    const WeakLinkage around = cycle_move(g, clear, 0, outer_ring);
    CHECK(walk_vertices(g, around.walks[0]) == std::vector<VertexId>{0, 3, 6, 7, 8, 5, 2});
    CHECK(same_homology(g, clear, around));
}

TEST_CASE("random face operations keep weak linkages and homology") {
    std::mt19937_64 rng(7);
    const PlaneGraph g = grid_graph(4, 5);
    const WeakLinkage start{{grid_walk(g, {0, 1, 2, 3, 4}), grid_walk(g, {15, 16, 17, 18, 19})}};
    WeakLinkage cur = start;
    int applied = 0;
    for (int step = 0; step < 1000; ++step) {
        const int walk = static_cast<int>(rng() % cur.walks.size());
        const FaceId f = static_cast<FaceId>(rng() % g.num_faces());
        try {
            switch (rng() % 3) {
                case 0: cur = face_move(g, cur, walk, f); break;
                case 1: cur = face_pull(g, cur, walk, f); break;
                default: cur = face_push(g, cur, walk, f); break;
            }
            ++applied;
        } catch (const NotApplicable&) {
            continue;
        }
        REQUIRE(is_weak_linkage(g, cur));
        REQUIRE(walk_end(g, cur.walks[0]) == 4);
        REQUIRE(walk_end(g, cur.walks[1]) == 19);
    }
    CHECK(applied > 50);
    CHECK(same_homology(g, start, cur));
}

TEST_CASE("frame of a planted instance") {
    const FramedLinkage fl = planted_frame(3, 8, 2);
    const TreeFrame& frame = fl.frame;
    CHECK(frame.n() > 0);
    for (EdgeId e : frame.tree().edges()) {
        CHECK(frame.tree_edge(e));
        CHECK(frame.tree_class(frame.classes().copy(e, 1)));
        CHECK_FALSE(frame.tree_edge(frame.classes().copy(e, 1)));
    }
    CHECK(is_sensible(frame, fl.linkage));
    CHECK(is_weak_linkage(frame.graph(), fl.linkage));
    CHECK(is_outer_terminal(frame, fl.linkage));
    CHECK(project_to_base(frame.classes(), fl.linkage).walks.size() == 2);
    const auto seqs = sequences(frame, fl.linkage);
    for (const auto& s : seqs) CHECK(volume(frame, fl.linkage, s) > 0);
    const Segmentation seg = segments(frame, fl.linkage);
    CHECK(seg.potential() >= static_cast<long long>(seg.groups.size()));

    WeakLinkage zero = fl.linkage;
    zero.walks[0].edges[0] = frame.classes().base_of(zero.walks[0].edges[0]);
    if (frame.tree_edge(zero.walks[0].edges[0])) CHECK_THROWS_AS(sequences(frame, zero), ZeroCopyUsed);
}

TEST_CASE("pushing planted solutions onto the tree") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        CAPTURE(seed);
        const FramedLinkage fl = planted_frame(seed, 7, 2);
        const TreeFrame& frame = fl.frame;
        MeasureTrace trace;
        const WeakLinkage pushed = push_onto_tree(frame, fl.linkage, &trace);
        CHECK(is_pushed(frame, pushed));
        CHECK(sequences(frame, pushed).empty());
        CHECK(is_weak_linkage(frame.graph(), pushed));
        CHECK(is_sensible(frame, pushed));
        CHECK(trace.monotone());
        CHECK(trace.values.back() == 0);
        CHECK(same_homology(frame.graph(), fl.linkage, pushed));
    }
}

TEST_CASE("an injected U-turn is pulled back out") {
    const FramedLinkage fl = planted_frame(11, 7, 1);
    const TreeFrame& frame = fl.frame;
    const ParallelClasses& cls = frame.classes();
    const WeakLinkage pushed = push_onto_tree(frame, fl.linkage);
    REQUIRE(u_turns(frame, pushed).empty());

    // Push a free 2-gon beside a used copy into the walk using it.
    std::optional<WeakLinkage> bent;
    for (EdgeId e : pushed.walks[0].edges) {
        const int i = cls.index_of(e);
        const int step = i > 0 ? 1 : -1;
        if (std::abs(i) + 2 > cls.span()) continue;
        const EdgeId a = cls.copy(cls.base_of(e), i + step), b = cls.copy(cls.base_of(e), i + 2 * step);
        for (Dart d : {dart_of(a, false), dart_of(a, true)}) {
            const FaceId f = frame.graph().face(d);
            const auto darts = frame.graph().face_darts(f);
            if (darts.size() != 2 || (edge_of(darts[0]) != b && edge_of(darts[1]) != b)) continue;
            try {
                bent = face_push(frame.graph(), pushed, 0, f);
            } catch (const NotApplicable&) {
            }
        }
        if (bent) break;
    }
    REQUIRE(bent);
    CHECK(is_weak_linkage(frame.graph(), *bent));
    const auto turns = u_turns(frame, *bent);
    REQUIRE_FALSE(turns.empty());
    MeasureTrace trace;
    const WeakLinkage straight = eliminate_u_turns(frame, *bent, UTurnMode::all, &trace);
    CHECK(u_turns(frame, straight).empty());
    CHECK(trace.monotone());
    CHECK(trace.steps() >= 1);
    CHECK(same_homology(frame.graph(), pushed, straight));
}

TEST_CASE("extremal and canonical forms of a pushed linkage") {
    const FramedLinkage fl = planted_frame(5, 8, 2);
    const TreeFrame& frame = fl.frame;
    const WeakLinkage pushed = push_onto_tree(frame, fl.linkage);
    MeasureTrace ext;
    const WeakLinkage extremal = make_extremal(frame, pushed, &ext);
    CHECK(is_extremal(frame, extremal));
    CHECK(ext.monotone());
    CHECK(is_weak_linkage(frame.graph(), extremal));
    MeasureTrace lift, pack;
    const WeakLinkage canonical = make_canonical(frame, extremal, &lift, &pack);
    CHECK(is_canonical(frame, canonical));
    CHECK(lift.monotone());
    CHECK(pack.monotone());
    CHECK(is_weak_linkage(frame.graph(), canonical));
    CHECK(same_homology(frame.graph(), pushed, canonical));
    CHECK(make_canonical(frame, canonical) == canonical);
    CHECK_THROWS_AS(make_extremal(frame, fl.linkage), PreconditionViolation);
}

TEST_CASE("simplification of planted solutions") {
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        CAPTURE(seed);
        const FramedLinkage fl = planted_frame(seed, 8, 2);
        const TreeFrame& frame = fl.frame;
        const Simplified s = simplify(frame, fl.linkage);
        CHECK(is_canonical(frame, s.linkage));
        CHECK(u_turns(frame, s.linkage).empty());
        CHECK(is_weak_linkage(frame.graph(), s.linkage));
        CHECK(is_sensible(frame, s.linkage));
        CHECK(s.report.segments_after_swollen <= s.report.potential_after_swollen);
        CHECK(s.report.two_copies_per_segment);
        for (const auto& t : s.report.traces) {
            CAPTURE(t.stage);
            CHECK(t.monotone());
        }
        CHECK(same_homology(frame.graph(), fl.linkage, s.linkage));
        CHECK(s.report.multiplicity <= frame.classes().span());
    }
}
