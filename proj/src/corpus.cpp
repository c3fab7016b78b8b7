#include "pdp/corpus.hpp"

#include <algorithm>
#include <functional>

namespace pdp {

PlaneGraph grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) throw PreconditionViolation("grid needs positive dimensions");
    RotationSystem rs;
    rs.num_vertices = rows * cols;
    auto id = [cols](int i, int j) { return i * cols + j; };
    std::vector<std::vector<EdgeId>> north(rs.num_vertices, std::vector<EdgeId>{}), east = north, south = north,
                                                                                    west = north;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j + 1 < cols; ++j) {
            EdgeId e = static_cast<EdgeId>(rs.edges.size());
            rs.edges.push_back({id(i, j), id(i, j + 1)});
            east[id(i, j)].push_back(e);
            west[id(i, j + 1)].push_back(e);
        }
    for (int i = 0; i + 1 < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            EdgeId e = static_cast<EdgeId>(rs.edges.size());
            rs.edges.push_back({id(i, j), id(i + 1, j)});
            south[id(i, j)].push_back(e);
            north[id(i + 1, j)].push_back(e);
        }
    rs.rotation.assign(rs.num_vertices, {});
    for (VertexId v = 0; v < rs.num_vertices; ++v)
        for (auto* side : {&north, &east, &south, &west})
            for (EdgeId e : (*side)[v]) rs.rotation[v].push_back(e);
    // Edge 0 is the first horizontal edge of the top row when cols > 1,
    // otherwise the first vertical edge; in both cases its reverse dart has
    // the outer face on its right.
    rs.outer_witness = rs.edges.empty() ? 0 : dart_of(0, cols > 1);
    return PlaneGraph(std::move(rs));
}

PlaneGraph annulus_graph(int rings, int spokes) {
    if (rings < 1 || spokes < 3) throw PreconditionViolation("annulus needs rings >= 1 and spokes >= 3");
    RotationSystem rs;
    rs.num_vertices = rings * spokes;
    auto id = [spokes](int i, int j) { return i * spokes + ((j % spokes) + spokes) % spokes; };
    for (int i = 0; i < rings; ++i)
        for (int j = 0; j < spokes; ++j) rs.edges.push_back({id(i, j), id(i, j + 1)});
    for (int i = 0; i + 1 < rings; ++i)
        for (int j = 0; j < spokes; ++j) rs.edges.push_back({id(i, j), id(i + 1, j)});
    auto ring_edge = [spokes](int i, int j) { return i * spokes + ((j % spokes) + spokes) % spokes; };
    auto spoke_edge = [rings, spokes](int i, int j) { return rings * spokes + i * spokes + j; };
    rs.rotation.assign(rs.num_vertices, {});
    for (int i = 0; i < rings; ++i)
        for (int j = 0; j < spokes; ++j) {
            auto& rot = rs.rotation[id(i, j)];
            if (i + 1 < rings) rot.push_back(spoke_edge(i, j));
            rot.push_back(ring_edge(i, j));
            if (i > 0) rot.push_back(spoke_edge(i - 1, j));
            rot.push_back(ring_edge(i, j - 1));
        }
    rs.outer_witness = dart_of(ring_edge(rings - 1, 0), true);
    return PlaneGraph(std::move(rs));
}

RotationSystem insert_face_vertex(const PlaneGraph& g, FaceId f) {
    RotationSystem rs = g.description();
    const VertexId w = rs.num_vertices++;
    rs.rotation.emplace_back();
    for (Dart d : g.face_darts(f)) {
        EdgeId e = static_cast<EdgeId>(rs.edges.size());
        VertexId x = g.head(d);
        rs.edges.push_back({x, w});
        auto& rot = rs.rotation[x];
        rot.insert(std::find(rot.begin(), rot.end(), edge_of(d)), e);
        rs.rotation[w].push_back(e);
    }
    return rs;
}

PlaneGraph random_triangulation(int extra_vertices, std::mt19937_64& rng) {
    RotationSystem rs;
    rs.num_vertices = 3;
    rs.edges = {{0, 1}, {1, 2}, {2, 0}};
    rs.rotation = {{0, 2}, {1, 0}, {2, 1}};
    rs.outer_witness = dart_of(0, true);
    PlaneGraph g(std::move(rs));
    for (int i = 0; i < extra_vertices; ++i) {
        std::uniform_int_distribution<int> pick(0, g.num_faces() - 2);
        FaceId f = pick(rng);
        if (f >= g.outer_face()) ++f;
        g = PlaneGraph(insert_face_vertex(g, f));
    }
    return g;
}

PlaneGraph random_sparse_grid(int rows, int cols, int removals, std::mt19937_64& rng) {
    PlaneGraph g = grid_graph(rows, cols);
    for (int attempt = 0; attempt < removals; ++attempt) {
        if (g.num_edges() <= 1) break;
        std::uniform_int_distribution<EdgeId> pick(1, g.num_edges() - 1);
        EdgeId drop = pick(rng);
        if (edge_of(g.outer_witness()) == drop) continue;
        RotationSystem rs = g.description();
        rs.edges.erase(rs.edges.begin() + drop);
        for (auto& rot : rs.rotation) {
            rot.erase(std::remove(rot.begin(), rot.end(), drop), rot.end());
            for (EdgeId& e : rot)
                if (e > drop) --e;
        }
        EdgeId we = edge_of(rs.outer_witness);
        rs.outer_witness = dart_of(we > drop ? we - 1 : we, rs.outer_witness & 1);
        try {
            g = PlaneGraph(std::move(rs));
        } catch (const MalformedRotation&) {
            // The edge was a bridge; keep the graph as it was.
        }
    }
    return g;
}

std::vector<std::pair<int, int>> sweep_shapes() {
    std::vector<std::pair<int, int>> out;
    for (int r = 1; r <= 4; ++r)
        for (int c = std::max(r, 2); c <= 4; ++c) out.emplace_back(r, c);
    return out;
}

std::vector<Instance> grid_instances(int rows, int cols, int k) {
    const PlaneGraph g = grid_graph(rows, cols);
    const int n = g.num_vertices();
    std::vector<Instance> out;
    std::vector<TerminalPair> pairs;
    std::vector<char> used(n, 0);
    std::function<void(int)> rec = [&](int min_code) {
        if (static_cast<int>(pairs.size()) == k) {
            out.push_back(Instance{g, pairs});
            return;
        }
        for (int code = min_code; code < n * n; ++code) {
            VertexId s = code / n, t = code % n;
            if (s == t || used[s] || used[t]) continue;
            used[s] = used[t] = 1;
            pairs.push_back({s, t});
            rec(code + 1);
            pairs.pop_back();
            used[s] = used[t] = 0;
        }
    };
    rec(0);
    return out;
}

Instance planted_instance(int extra_vertices, int k, std::mt19937_64& rng) {
    return planted_with_paths(extra_vertices, k, rng).instance;
}

PlantedInstance planted_with_paths(int extra_vertices, int k, std::mt19937_64& rng) {
    PlaneGraph g = random_triangulation(extra_vertices, rng);
    const int n = g.num_vertices();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<char> used(n, 0);
        std::vector<TerminalPair> pairs;
        std::vector<std::vector<VertexId>> paths;
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
            std::vector<VertexId> free;
            for (VertexId v = 0; v < n; ++v)
                if (!used[v]) free.push_back(v);
            if (free.empty()) {
                ok = false;
                break;
            }
            VertexId cur = free[std::uniform_int_distribution<size_t>(0, free.size() - 1)(rng)];
            const VertexId start = cur;
            used[cur] = 1;
            std::vector<VertexId> path{cur};
            int steps = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int s = 0; s < steps; ++s) {
                std::vector<VertexId> next;
                for (EdgeId e : g.rotation(cur))
                    if (!used[g.other_end(e, cur)]) next.push_back(g.other_end(e, cur));
                if (next.empty()) break;
                cur = next[std::uniform_int_distribution<size_t>(0, next.size() - 1)(rng)];
                used[cur] = 1;
                path.push_back(cur);
            }
            if (cur == start) ok = false;
            pairs.push_back({start, cur});
            paths.push_back(std::move(path));
        }
        if (ok) return PlantedInstance{Instance{g, pairs}, paths};
    }
    throw PreconditionViolation("could not plant disjoint paths");
}

}  // namespace pdp
