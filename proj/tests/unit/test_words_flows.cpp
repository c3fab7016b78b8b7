#include <random>

#include "doctest.h"
#include "pdp/corpus.hpp"
#include "pdp/flows.hpp"
#include "pdp/words.hpp"

using namespace pdp;

namespace {

Word w(std::string_view s) { return Word::parse(s); }

Word random_word(std::mt19937_64& rng, int alphabet, int max_len) {
    std::vector<Letter> raw;
    int len = std::uniform_int_distribution<int>(0, max_len)(rng);
    for (int i = 0; i < len; ++i)
        raw.emplace_back(std::uniform_int_distribution<int>(0, alphabet - 1)(rng),
                         std::uniform_int_distribution<int>(0, 1)(rng) == 1);
    return Word::reduce(raw);
}

// Walk following a vertex sequence of g, taking the first edge found.
Walk walk_through(const PlaneGraph& g, std::vector<VertexId> vs) {
    Walk walk{vs.front(), {}};
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        EdgeId found = -1;
        for (EdgeId e : g.rotation(vs[i]))
            if (g.other_end(e, vs[i]) == vs[i + 1]) found = e;
        REQUIRE(found != -1);
        walk.edges.push_back(found);
    }
    return walk;
}

}  // namespace

TEST_CASE("word products cancel maximally") {
    CHECK((w("t1") * w("t1^-1")).is_identity());
    CHECK(w("t1 t2") * w("t2^-1 t3") == w("t1 t3"));
    CHECK(w("t4 t2") * Word{} == w("t4 t2"));
    CHECK(w("t1 t2").inverse() == w("t2^-1 t1^-1"));
    std::vector<Letter> raw{Letter(5, false), Letter(5, true), Letter(5, false)};
    CHECK(Word::reduce(raw) == w("t5"));
    CHECK(Word{}.to_string().empty());
    CHECK(w("t3 t7^-1").to_string() == "t3 t7^-1");
}

TEST_CASE("parsing rejects letters outside the alphabet") {
    std::set<int> alphabet{1, 2};
    CHECK_NOTHROW(Word::parse("t1 t2^-1", &alphabet));
    CHECK_THROWS_AS(Word::parse("t3", &alphabet), UnknownLetter);
    CHECK_THROWS_AS(Word::parse("x1", nullptr), UnknownLetter);
}

TEST_CASE("word algebra properties on random words") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        Word a = random_word(rng, 3, 8), b = random_word(rng, 3, 8), c = random_word(rng, 3, 8);
        CHECK((a * b) * c == a * (b * c));
        CHECK((a * a.inverse()).is_identity());
        CHECK(a.inverse().inverse() == a);
        // Reduction is idempotent.
        CHECK(Word::reduce(a.letters()) == a);
        // Reduced words never hold a letter next to its inverse.
        for (std::size_t i = 0; i + 1 < (a * b).size(); ++i) CHECK((a * b)[i] != (a * b)[i + 1].inverse());
    }
}

TEST_CASE("doubled orientation of a single edge and a triangle") {
    RotationSystem rs;
    rs.num_vertices = 2;
    rs.edges = {{0, 1}};
    rs.rotation = {{0}, {0}};
    DirectedPlaneGraph d = doubled_orientation(PlaneGraph(rs));
    CHECK(d.num_arcs() == 2);
    CHECK(d.graph.num_faces() == 2);
    CHECK(d.right_face(0) == d.right_face(1));
    CHECK(d.right_face(0) != d.graph.outer_face());

    RotationSystem t;
    t.num_vertices = 3;
    t.edges = {{0, 1}, {1, 2}, {2, 0}};
    t.rotation = {{0, 2}, {1, 0}, {2, 1}};
    t.outer_witness = dart_of(0, true);
    PlaneGraph g(t);
    DirectedPlaneGraph dt = doubled_orientation(g);
    CHECK(dt.num_arcs() == 6);
    CHECK(dt.graph.num_faces() == g.num_faces() + g.num_edges());
    CHECK(dt.graph.face_darts(dt.graph.outer_face()).size() == 3);
    for (EdgeId e = 0; e < 3; ++e) {
        // Both arcs share the 2-gon on their right; their left faces are
        // the two faces that meet along e.
        CHECK(dt.right_face(forward_arc(e)) == dt.right_face(backward_arc(e)));
        CHECK(dt.left_face(forward_arc(e)) != dt.left_face(backward_arc(e)));
        CHECK(dt.graph.face_darts(dt.right_face(forward_arc(e))).size() == 2);
    }
    // Left of the outer-side arc is the outer face exactly once per edge.
    int outer_hits = 0;
    for (ArcId a = 0; a < 6; ++a) outer_hits += dt.left_face(a) == dt.graph.outer_face();
    CHECK(outer_hits == 3);
}

TEST_CASE("flow_check on the identity assignment flags every source") {
    PlaneGraph g = grid_graph(3, 3);
    std::vector<TerminalPair> pairs{{0, 8}, {2, 6}};
    DirectedPlaneGraph d = doubled_orientation(g);
    Flow ones(d.num_arcs());
    auto v = flow_check(d, pairs, ones);
    REQUIRE(v.has_value());
    CHECK(v->vertex == 0);
    // Restricting to each source in turn.
    for (const auto& p : pairs) {
        std::vector<TerminalPair> one{p};
        auto r = flow_check(d, one, ones);
        REQUIRE(r.has_value());
        CHECK(r->vertex == std::min(p.source, p.target));
    }
}

TEST_CASE("flows of linkages pass flow_check and perturbations fail near the edge") {
    PlaneGraph g = grid_graph(3, 3);
    Instance inst{g, {{0, 2}, {6, 8}}};
    WeakLinkage link{{walk_through(g, {0, 1, 2}), walk_through(g, {6, 7, 8})}};
    DirectedPlaneGraph d = doubled_orientation(g);
    Flow phi = flow_of_linkage(g, link);
    CHECK_FALSE(flow_check(d, inst.pairs, phi).has_value());
    int carried = 0;
    for (const Word& x : phi) carried += !x.is_identity();
    CHECK(carried == 4);
    CHECK(phi[arc_along(g, link.walks[0].edges[0], 0)] == Word::of(2));

    for (ArcId a = 0; a < d.num_arcs(); ++a) {
        if (phi[a].is_identity()) continue;
        Flow bad = phi;
        bad[a] = bad[a].inverse();
        auto v = flow_check(d, inst.pairs, bad);
        REQUIRE(v.has_value());
        CHECK((v->vertex == d.tail(a) || v->vertex == d.head(a)));
    }
}

TEST_CASE("homology of a flow with itself has the trivial witness") {
    PlaneGraph g = grid_graph(3, 3);
    WeakLinkage link{{walk_through(g, {0, 1, 4, 5, 8})}};
    DirectedPlaneGraph d = doubled_orientation(g);
    Flow phi = flow_of_linkage(g, link);
    auto r = homologous(d, phi, phi);
    REQUIRE(std::holds_alternative<HomologyWitness>(r));
    for (const Word& x : std::get<HomologyWitness>(r).h) CHECK(x.is_identity());
}

TEST_CASE("moving a walk across one face yields the letter on the enclosed faces") {
    PlaneGraph g = grid_graph(2, 2);
    // Square 0-1-3-2; walk 0->1->3 versus 0->2->3 encloses the inner face.
    Instance inst{g, {{0, 3}}};
    WeakLinkage a{{walk_through(g, {0, 1, 3})}}, b{{walk_through(g, {0, 2, 3})}};
    DirectedPlaneGraph d = doubled_orientation(g);
    Flow pa = flow_of_linkage(g, a), pb = flow_of_linkage(g, b);
    auto r = homologous(d, pa, pb);
    REQUIRE(std::holds_alternative<HomologyWitness>(r));
    const auto& h = std::get<HomologyWitness>(r).h;
    CHECK_FALSE(verify_witness(d, pa, pb, std::get<HomologyWitness>(r)).has_value());
    int t_faces = 0;
    for (FaceId f = 0; f < d.graph.num_faces(); ++f) {
        if (h[f].is_identity()) continue;
        CHECK((h[f] == Word::of(3) || h[f] == Word::of(3, true)));
        ++t_faces;
    }
    // The inner square plus the 2-gons of the arcs the walk leaves behind.
    CHECK(t_faces >= 1);
    CHECK(h[d.graph.outer_face()].is_identity());
}

TEST_CASE("solutions separated by another pair's terminals are not homologous") {
    PlaneGraph g = grid_graph(4, 4);
    // Pair 0 sits inside: 5 -> 6. Pair 1 goes 0 -> 3 above or below it.
    Instance inst{g, {{5, 6}, {0, 3}}};
    WeakLinkage top{{walk_through(g, {5, 6}), walk_through(g, {0, 1, 2, 3})}};
    WeakLinkage bottom{{walk_through(g, {5, 6}), walk_through(g, {0, 4, 8, 9, 10, 11, 7, 3})}};
    WeakLinkage wide{{walk_through(g, {5, 6}), walk_through(g, {0, 4, 8, 12, 13, 14, 15, 11, 7, 3})}};
    CHECK(is_solution(inst, top));
    CHECK(is_solution(inst, bottom));
    DirectedPlaneGraph d = doubled_orientation(g);
    auto r = homologous(d, flow_of_linkage(g, top), flow_of_linkage(g, bottom));
    CHECK(std::holds_alternative<NotHomologous>(r));
    CHECK(are_homologous(d, flow_of_linkage(g, bottom), flow_of_linkage(g, wide)));
}

TEST_CASE("forbidding arcs") {
    PlaneGraph g = grid_graph(3, 3);
    DirectedPlaneGraph d = doubled_orientation(g);
    Flow phi(d.num_arcs());
    phi[4] = Word::of(8);
    auto same = forbid_edges_transform(d, phi, {});
    CHECK(same.graph.graph == d.graph);
    CHECK(same.flow == phi);
    std::vector<ArcId> one{4};
    auto t = forbid_edges_transform(d, phi, one);
    CHECK(t.graph.graph.num_vertices() == d.graph.num_vertices() + 1);
    CHECK(t.graph.num_arcs() == d.num_arcs() + 1);
    CHECK(t.graph.graph.num_faces() == d.graph.num_faces());
    CHECK(t.flow[4] == Word::of(8));
    CHECK(t.flow.back() == Word::of(8, true));
    // The flow on the subdivided arc still conserves at the new sink.
    CHECK(t.graph.head(4) == t.sinks[0]);
    CHECK(t.graph.head(d.num_arcs()) == t.sinks[0]);
}

TEST_CASE("compressed homology agrees with homology on the enriched graph") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        PlaneGraph base = radial_completion(random_sparse_grid(2 + trial % 2, 3, 2, rng)).graph;
        const int n = 1 + trial % 2;
        EnrichedGraph h = enrich_parallel(base, n);
        if (trial % 3 == 0) {
            // Flipped classes must still compress in left-to-right order.
            for (EdgeId e = 0; e < base.num_edges(); e += 2) h.classes.flip(e);
        }
        DirectedPlaneGraph d = doubled_orientation(h.graph);
        DirectedPlaneGraph d0 = as_directed(base);
        Flow phi(d.num_arcs());
        for (ArcId a = 0; a < d.num_arcs(); ++a)
            if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) phi[a] = random_word(rng, 3, 2);
        // A coboundary twist of phi is homologous by construction.
        std::vector<Word> twist(d.graph.num_faces());
        for (FaceId f = 0; f < d.graph.num_faces(); ++f)
            if (f != d.graph.outer_face()) twist[f] = random_word(rng, 3, 2);
        Flow psi(d.num_arcs());
        for (ArcId a = 0; a < d.num_arcs(); ++a)
            psi[a] = twist[d.left_face(a)].inverse() * phi[a] * twist[d.right_face(a)];
        CHECK(are_homologous(d, phi, psi));
        CHECK(are_homologous(d0, compress_parallel_flow(h, phi), compress_parallel_flow(h, psi)));
        Flow broken = psi;
        ArcId victim = std::uniform_int_distribution<ArcId>(0, d.num_arcs() - 1)(rng);
        broken[victim] = broken[victim] * Word::of(2);
        CHECK(are_homologous(d, phi, broken) ==
              are_homologous(d0, compress_parallel_flow(h, phi), compress_parallel_flow(h, broken)));
        CHECK_FALSE(are_homologous(d, phi, broken));
    }
}

TEST_CASE("flow JSON round trip") {
    Flow phi(6);
    phi[1] = Word::parse("t3");
    phi[4] = Word::parse("t3^-1 t5");
    auto j = flow_to_json(phi);
    CHECK(j.size() == 2);
    CHECK(flow_from_json(j, 6) == phi);
    std::set<int> alphabet{3};
    CHECK_THROWS_AS(flow_from_json(j, 6, &alphabet), UnknownLetter);
}
