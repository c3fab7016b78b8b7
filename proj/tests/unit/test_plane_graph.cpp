#include <random>
#include <set>

#include "doctest.h"
#include "pdp/corpus.hpp"
#include "pdp/io.hpp"
#include "pdp/plane_graph.hpp"

using namespace pdp;

namespace {

PlaneGraph triangle() {
    RotationSystem rs;
    rs.num_vertices = 3;
    rs.edges = {{0, 1}, {1, 2}, {2, 0}};
    rs.rotation = {{0, 2}, {1, 0}, {2, 1}};
    rs.outer_witness = dart_of(0, true);
    return PlaneGraph(rs);
}

PlaneGraph single_edge() {
    RotationSystem rs;
    rs.num_vertices = 2;
    rs.edges = {{0, 1}};
    rs.rotation = {{0}, {0}};
    return PlaneGraph(rs);
}

}  // namespace

TEST_CASE("triangle has an inner and an outer face") {
    PlaneGraph g = triangle();
    CHECK(g.num_faces() == 2);
    CHECK(g.face_darts(g.outer_face()).size() == 3);
    // The outer witness dart 1 -> 0 and the inner darts go opposite ways.
    CHECK(g.right_face(dart_of(0, false)) != g.outer_face());
    CHECK(g.left_face(dart_of(0, false)) == g.outer_face());
}

TEST_CASE("4-cycle with one chord has three faces") {
    RotationSystem rs;
    rs.num_vertices = 4;
    // square 0-1-2-3 drawn clockwise from the top-left corner, chord 0-2
    rs.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
    rs.rotation = {{0, 4, 3}, {1, 0}, {2, 4, 1}, {3, 2}};
    rs.outer_witness = dart_of(0, true);
    PlaneGraph g(rs);
    CHECK(g.num_faces() == 3);
    CHECK(g.face_darts(g.outer_face()).size() == 4);
}

TEST_CASE("an inconsistent rotation is rejected") {
    RotationSystem rs;
    rs.num_vertices = 3;
    rs.edges = {{0, 1}, {1, 2}, {2, 0}};
    rs.rotation = {{0, 2}, {1}, {2, 1}};
    CHECK_THROWS_AS(PlaneGraph{rs}, MalformedRotation);

    rs.rotation = {{0, 2}, {1, 0}, {2, 1}};
    rs.edges[1] = {1, 1};
    CHECK_THROWS_AS(PlaneGraph{rs}, MalformedRotation);
}

TEST_CASE("a rotation of a non-planar embedding fails the Euler check") {
    // K4 with one vertex's rotation reversed gives a torus-like embedding.
    RotationSystem rs;
    rs.num_vertices = 4;
    rs.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 1}};
    rs.rotation = {{0, 1, 2}, {0, 5, 3}, {1, 3, 4}, {2, 4, 5}};
    bool planar = true;
    try {
        PlaneGraph g(rs);
    } catch (const NonPlanarRotation&) {
        planar = false;
    }
    rs.rotation[0] = {0, 2, 1};
    bool planar_flipped = true;
    try {
        PlaneGraph g(rs);
    } catch (const NonPlanarRotation&) {
        planar_flipped = false;
    }
    CHECK(planar != planar_flipped);
}

TEST_CASE("grids and annuli satisfy Euler's formula") {
    for (auto [r, c] : sweep_shapes()) {
        PlaneGraph g = grid_graph(r, c);
        CHECK(g.num_faces() == (r - 1) * (c - 1) + 1);
        CHECK(static_cast<int>(g.face_darts(g.outer_face()).size()) == (r == 1 ? 2 * (c - 1) : 2 * (r + c - 2)));
    }
    PlaneGraph a = annulus_graph(4, 6);
    CHECK(a.num_faces() == 3 * 6 + 2);
    CHECK(a.face_darts(a.outer_face()).size() == 6);
}

TEST_CASE("radial completion of a triangle") {
    RadialCompletion rc = radial_completion(triangle());
    CHECK(rc.graph.num_vertices() == 5);
    CHECK(rc.graph.num_edges() == 9);
    CHECK(is_triangulated(rc.graph));
    CHECK(rc.graph.num_vertices() - rc.graph.num_edges() + rc.graph.num_faces() == 2);
}

TEST_CASE("radial completion of a single edge is a triangle") {
    RadialCompletion rc = radial_completion(single_edge());
    CHECK(rc.graph.num_vertices() == 3);
    CHECK(rc.graph.num_edges() == 3);
    CHECK(is_triangulated(rc.graph));
}

TEST_CASE("radial completion keeps the original drawing and is triangulated on the corpus") {
    std::mt19937_64 rng(7);
    std::vector<PlaneGraph> corpus;
    for (auto [r, c] : sweep_shapes()) corpus.push_back(grid_graph(r, c));
    corpus.push_back(annulus_graph(3, 5));
    for (int i = 0; i < 10; ++i) corpus.push_back(random_sparse_grid(4, 4, 6, rng));
    for (const PlaneGraph& g : corpus) {
        RadialCompletion rc = radial_completion(g);
        CHECK(is_triangulated(rc.graph));
        CHECK(rc.graph.num_vertices() == g.num_vertices() + g.num_faces());
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
            std::vector<EdgeId> kept;
            for (EdgeId e : rc.graph.rotation(v))
                if (rc.is_original_edge(e)) kept.push_back(e);
            CHECK(kept == std::vector<EdgeId>(g.rotation(v).begin(), g.rotation(v).end()));
        }
        // The outer face of the completion touches the outer face vertex of g.
        VertexId outer_vertex = rc.face_vertex(g.outer_face());
        bool touches = false;
        for (Dart d : rc.graph.face_darts(rc.graph.outer_face()))
            touches = touches || rc.graph.tail(d) == outer_vertex;
        CHECK(touches);
    }
}

TEST_CASE("enrich_parallel copies and 2-gon count") {
    RadialCompletion rc = radial_completion(triangle());
    for (int n : {0, 1, 2}) {
        EnrichedGraph eg = enrich_parallel(rc.graph, n);
        CHECK(eg.graph.num_edges() == rc.graph.num_edges() * (4 * n + 1));
        CHECK(eg.graph.num_faces() == rc.graph.num_faces() + rc.graph.num_edges() * 4 * n);
        for (EdgeId e = 0; e < rc.graph.num_edges(); ++e) {
            CHECK(eg.classes.copy(e, 0) == e);
            CHECK(eg.graph.edge(eg.classes.copy(e, 2 * n)) == rc.graph.edge(e));
        }
    }
    // Consecutive copies are adjacent at both endpoints for n = 1.
    EnrichedGraph eg = enrich_parallel(rc.graph, 1);
    for (EdgeId e = 0; e < rc.graph.num_edges(); ++e) {
        for (VertexId x : {rc.graph.edge(e).u, rc.graph.edge(e).v}) {
            for (int i = -2; i < 2; ++i) {
                EdgeId a = eg.classes.copy(e, i), b = eg.classes.copy(e, i + 1);
                EdgeId nxt = eg.graph.rotation_next(x, a), prv = eg.graph.rotation_prev(x, a);
                CHECK((nxt == b || prv == b));
            }
        }
    }
}

TEST_CASE("the outer face of an enriched graph is not a 2-gon") {
    for (const PlaneGraph& g : {triangle(), grid_graph(2, 3), annulus_graph(3, 4)}) {
        const RadialCompletion rc = radial_completion(g);
        const std::size_t outer = rc.graph.face_darts(rc.graph.outer_face()).size();
        for (int n : {1, 2, 3}) {
            const EnrichedGraph eg = enrich_parallel(rc.graph, n);
            CHECK(eg.graph.face_darts(eg.graph.outer_face()).size() == outer);
        }
    }
}

TEST_CASE("orient_edges_order colours trees and agrees on copy order") {
    PlaneGraph g = grid_graph(3, 3);
    RadialCompletion rc = radial_completion(g);
    const int n = 1;
    auto check_tree = [&](std::vector<EdgeId> tree) {
        OrientedEnrichment oe = orient_edges_order(enrich_parallel(rc.graph, n), tree);
        const auto& cls = oe.enriched.classes;
        for (EdgeId e : tree) {
            VertexId a = g.edge(e).u, b = g.edge(e).v;
            CHECK(oe.orders.color[a].has_value());
            CHECK(*oe.orders.color[a] != *oe.orders.color[b]);
            // Copy order read at each endpoint in its own direction is -2n..2n.
            for (VertexId x : {a, b}) {
                std::vector<int> seen;
                for (EdgeId c : oe.orders.order[x])
                    if (cls.base_of(c) == e) seen.push_back(cls.index_of(c));
                std::vector<int> want;
                for (int i = -2 * n; i <= 2 * n; ++i) want.push_back(i);
                CHECK(seen == want);
            }
        }
    };
    check_tree({0});
    check_tree({0, 1});
    // Star around the centre vertex 4: edges to 1, 3, 5, 7.
    std::vector<EdgeId> star;
    for (EdgeId e : g.rotation(4)) star.push_back(e);
    check_tree(star);
    OrientedEnrichment oe = orient_edges_order(enrich_parallel(rc.graph, n), star);
    for (EdgeId e : star) CHECK(*oe.orders.color[g.other_end(e, 4)] != *oe.orders.color[4]);
    CHECK(oe.orders.tree_edge_order[4].size() == 4);
}

TEST_CASE("orient_edges_order rejects cycles") {
    PlaneGraph g = grid_graph(2, 2);
    RadialCompletion rc = radial_completion(g);
    std::vector<EdgeId> cycle{0, 1, 2, 3};
    CHECK_THROWS_AS(orient_edges_order(enrich_parallel(rc.graph, 1), cycle), NotATree);
}

TEST_CASE("dist and rdist") {
    PlaneGraph t = triangle();
    CHECK(dist(t, 0, 0) == 0);
    CHECK(dist(t, 0, 2) == 1);
    CHECK(rdist(t, 0, 2) == 1);
    // Opposite corners of a square face are radially adjacent.
    PlaneGraph sq = grid_graph(2, 2);
    CHECK(dist(sq, 0, 3) == 2);
    CHECK(rdist(sq, 0, 3) == 1);
}

TEST_CASE("dist equals rdist on triangulated graphs up to 60 vertices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        PlaneGraph g = random_triangulation(std::uniform_int_distribution<int>(0, 57)(rng), rng);
        REQUIRE(is_triangulated(g));
        for (VertexId u = 0; u < g.num_vertices(); ++u) {
            auto bfs = bfs_distances(g, u);
            for (VertexId v = 0; v < g.num_vertices(); ++v) CHECK(bfs[v] == rdist(g, u, v));
        }
    }
    for (auto [r, c] : sweep_shapes()) {
        PlaneGraph h = radial_completion(grid_graph(r, c)).graph;
        for (VertexId u = 0; u < h.num_vertices(); ++u)
            for (VertexId v = 0; v < h.num_vertices(); ++v) CHECK(dist(h, u, v) == rdist(h, u, v));
    }
}

TEST_CASE("make_nice adds pendants and keeps k") {
    PlaneGraph g = grid_graph(3, 3);
    Instance inst{g, {{4, 0}}};
    NiceInstance nice = make_nice(inst);
    CHECK(nice.instance.k() == 1);
    for (VertexId v : nice.instance.terminals()) CHECK(nice.instance.graph.degree(v) == 1);
    CHECK(nice.instance.graph.num_vertices() == 11);
    CHECK(nice.origin[nice.instance.pairs[0].source] == 4);
    CHECK(nice.origin[nice.instance.pairs[0].target] == 0);
    // The outer terminal lies on the outer face.
    bool on_outer = false;
    for (Dart d : nice.instance.graph.face_darts(nice.instance.graph.outer_face()))
        on_outer = on_outer || nice.instance.graph.tail(d) == nice.outer_terminal;
    CHECK(on_outer);
    CHECK(nice.outer_terminal == nice.instance.pairs[0].target);
}

TEST_CASE("make_nice re-roots when no target is on the outer face") {
    PlaneGraph g = grid_graph(3, 3);
    Instance inst{g, {{0, 4}}};
    NiceInstance nice = make_nice(inst);
    const PlaneGraph& h = nice.instance.graph;
    bool on_outer = false;
    for (Dart d : h.face_darts(h.outer_face())) on_outer = on_outer || h.tail(d) == nice.outer_terminal;
    CHECK(on_outer);
    CHECK(nice.origin[nice.outer_terminal] == 4);
    RadialCompletion rc = radial_completion(h);
    bool on_outer_radial = false;
    for (Dart d : rc.graph.face_darts(rc.graph.outer_face()))
        on_outer_radial = on_outer_radial || rc.graph.tail(d) == nice.outer_terminal;
    CHECK(on_outer_radial);
}

TEST_CASE("make_nice separates shared terminals") {
    // Vertex 1 is both a source and a target.
    PlaneGraph g = grid_graph(2, 3);
    Instance inst{g, {{1, 5}, {0, 1}}};
    NiceInstance nice = make_nice(inst);
    std::set<VertexId> terms;
    for (const auto& p : nice.instance.pairs) {
        terms.insert(p.source);
        terms.insert(p.target);
    }
    CHECK(terms.size() == 4);
    for (VertexId v : terms) CHECK(nice.instance.graph.degree(v) == 1);
}

TEST_CASE("already nice instance is unchanged apart from the outer face") {
    PlaneGraph g = grid_graph(1, 3);
    Instance inst{g, {{0, 2}}};
    NiceInstance nice = make_nice(inst);
    CHECK(nice.instance.graph.num_vertices() == 3);
    CHECK(nice.instance.pairs == inst.pairs);
}

TEST_CASE("text and JSON formats round trip exactly") {
    std::mt19937_64 rng(3);
    std::vector<Instance> corpus;
    corpus.push_back(Instance{grid_graph(3, 4), {{0, 11}, {3, 8}}});
    corpus.push_back(Instance{annulus_graph(3, 5), {{0, 14}}});
    corpus.push_back(Instance{single_edge(), {}});
    corpus.push_back(planted_instance(20, 2, rng));
    for (const Instance& inst : corpus) {
        std::string text = format_instance_text(inst);
        Instance back = parse_instance_text(text);
        CHECK(back == inst);
        CHECK(format_instance_text(back) == text);
        auto j = instance_to_json(inst);
        Instance from_json = instance_from_json(j);
        CHECK(from_json == inst);
        CHECK(instance_to_json(from_json).dump() == j.dump());
        CHECK(parse_instance(j.dump()) == inst);
    }
}

TEST_CASE("text parser reports malformed input") {
    CHECK_THROWS_AS(parse_instance_text("V 0\nV 2\n"), ParseError);
    CHECK_THROWS_AS(parse_instance_text("V 0\nX 1\n"), ParseError);
    CHECK_THROWS_AS(parse_instance_text("V 0\nV 1\nE 0 0 1\nR 0: 0\nR 1: 0\n"), ParseError);
    Instance ok = parse_instance_text("# tiny\nV 0\nV 1\nE 0 0 1\nR 0: 0\nR 1: 0\nOUTER 0 0\nPAIR 0 1\n");
    CHECK(ok.k() == 1);
}
