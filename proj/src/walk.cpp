#include "pdp/walk.hpp"

#include <set>

namespace pdp {

std::vector<VertexId> walk_vertices(const PlaneGraph& g, const Walk& w) {
    std::vector<VertexId> out{w.start};
    for (EdgeId e : w.edges) {
        const Edge& ed = g.edge(e);
        VertexId cur = out.back();
        if (ed.u != cur && ed.v != cur)
            throw MalformedRotation("walk leaves " + std::to_string(cur) + " along non-incident edge " +
                                    std::to_string(e));
        out.push_back(g.other_end(e, cur));
    }
    return out;
}

VertexId walk_end(const PlaneGraph& g, const Walk& w) { return walk_vertices(g, w).back(); }

bool is_connected_walk(const PlaneGraph& g, const Walk& w) {
    VertexId cur = w.start;
    for (EdgeId e : w.edges) {
        if (e < 0 || e >= g.num_edges()) return false;
        const Edge& ed = g.edge(e);
        if (ed.u != cur && ed.v != cur) return false;
        cur = g.other_end(e, cur);
    }
    return true;
}

bool is_sensible(const PlaneGraph& g, std::span<const TerminalPair> pairs, const WeakLinkage& w) {
    if (w.walks.size() != pairs.size()) return false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!is_connected_walk(g, w.walks[i])) return false;
        if (w.walks[i].start != pairs[i].source || walk_end(g, w.walks[i]) != pairs[i].target) return false;
    }
    return true;
}

bool is_solution(const Instance& inst, const WeakLinkage& w) {
    if (!is_sensible(inst.graph, inst.pairs, w)) return false;
    std::set<VertexId> used;
    for (const Walk& walk : w.walks)
        for (VertexId v : walk_vertices(inst.graph, walk))
            if (!used.insert(v).second) return false;
    return true;
}

nlohmann::json linkage_to_json(const WeakLinkage& w) {
    nlohmann::json j;
    j["walks"] = nlohmann::json::array();
    for (const Walk& walk : w.walks) j["walks"].push_back({{"start", walk.start}, {"edges", walk.edges}});
    return j;
}

WeakLinkage linkage_from_json(const nlohmann::json& j) {
    try {
        WeakLinkage w;
        for (const auto& walk : j.at("walks"))
            w.walks.push_back(Walk{walk.at("start").get<int>(), walk.at("edges").get<std::vector<int>>()});
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

}  // namespace pdp
