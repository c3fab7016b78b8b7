#include "pdp/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace pdp {

namespace {

struct RawInstance {
    std::map<int, bool> vertices;
    std::map<EdgeId, Edge> edges;
    std::map<VertexId, std::vector<EdgeId>> rotation;
    std::optional<std::pair<EdgeId, int>> outer;
    std::vector<TerminalPair> pairs;
};

Instance assemble(RawInstance raw) {
    RotationSystem rs;
    rs.num_vertices = static_cast<int>(raw.vertices.size());
    int expect = 0;
    for (const auto& [id, unused] : raw.vertices)
        if (id != expect++) throw ParseError("vertex ids are not dense from 0");
    expect = 0;
    for (const auto& [id, e] : raw.edges) {
        if (id != expect++) throw ParseError("edge ids are not dense from 0");
        rs.edges.push_back(e);
    }
    rs.rotation.assign(rs.num_vertices, {});
    for (auto& [v, rot] : raw.rotation) {
        if (v < 0 || v >= rs.num_vertices) throw ParseError("rotation for unknown vertex " + std::to_string(v));
        rs.rotation[v] = std::move(rot);
    }
    if (raw.outer) {
        auto [e, side] = *raw.outer;
        if (e < 0 || e >= static_cast<int>(rs.edges.size()) || (side != 0 && side != 1))
            throw ParseError("bad OUTER record");
        rs.outer_witness = dart_of(e, side == 1);
    } else if (!rs.edges.empty()) {
        throw ParseError("missing OUTER record");
    }
    Instance inst{PlaneGraph(std::move(rs)), std::move(raw.pairs)};
    validate_pairs(inst);
    return inst;
}

int to_int(const std::string& token, int line_no) {
    try {
        size_t used = 0;
        int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" + token + "'");
    }
}

}  // namespace

Instance parse_instance_text(std::string_view text) {
    RawInstance raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ':') c = ' ';
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto need = [&](size_t n) {
            if (tok.size() != n)
                throw ParseError("line " + std::to_string(line_no) + ": wrong field count for " + tok[0]);
        };
        const std::string& kind = tok[0];
        if (kind == "V") {
            need(2);
            if (!raw.vertices.emplace(to_int(tok[1], line_no), true).second)
                throw ParseError("line " + std::to_string(line_no) + ": duplicate vertex");
        } else if (kind == "E") {
            need(4);
            Edge e{to_int(tok[2], line_no), to_int(tok[3], line_no)};
            if (!raw.edges.emplace(to_int(tok[1], line_no), e).second)
                throw ParseError("line " + std::to_string(line_no) + ": duplicate edge");
        } else if (kind == "R") {
            if (tok.size() < 2) need(2);
            std::vector<EdgeId> rot;
            for (size_t i = 2; i < tok.size(); ++i) rot.push_back(to_int(tok[i], line_no));
            if (!raw.rotation.emplace(to_int(tok[1], line_no), std::move(rot)).second)
                throw ParseError("line " + std::to_string(line_no) + ": duplicate rotation");
        } else if (kind == "OUTER") {
            need(3);
            if (raw.outer) throw ParseError("line " + std::to_string(line_no) + ": duplicate OUTER");
            raw.outer = std::pair{to_int(tok[1], line_no), to_int(tok[2], line_no)};
        } else if (kind == "PAIR") {
            need(3);
            raw.pairs.push_back({to_int(tok[1], line_no), to_int(tok[2], line_no)});
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown record '" + kind + "'");
        }
    }
    return assemble(std::move(raw));
}

std::string format_instance_text(const Instance& inst) {
    const RotationSystem& rs = inst.graph.description();
    std::ostringstream out;
    for (VertexId v = 0; v < rs.num_vertices; ++v) out << "V " << v << '\n';
    for (EdgeId e = 0; e < static_cast<EdgeId>(rs.edges.size()); ++e)
        out << "E " << e << ' ' << rs.edges[e].u << ' ' << rs.edges[e].v << '\n';
    for (VertexId v = 0; v < rs.num_vertices; ++v) {
        out << "R " << v << ':';
        for (EdgeId e : rs.rotation[v]) out << ' ' << e;
        out << '\n';
    }
    if (!rs.edges.empty()) out << "OUTER " << edge_of(rs.outer_witness) << ' ' << (rs.outer_witness & 1) << '\n';
    for (const auto& p : inst.pairs) out << "PAIR " << p.source << ' ' << p.target << '\n';
    return out.str();
}

nlohmann::json instance_to_json(const Instance& inst) {
    const RotationSystem& rs = inst.graph.description();
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (VertexId v = 0; v < rs.num_vertices; ++v) j["vertices"].push_back(v);
    j["edges"] = nlohmann::json::array();
    for (EdgeId e = 0; e < static_cast<EdgeId>(rs.edges.size()); ++e)
        j["edges"].push_back({{"id", e}, {"u", rs.edges[e].u}, {"v", rs.edges[e].v}});
    j["rotation"] = nlohmann::json::array();
    for (VertexId v = 0; v < rs.num_vertices; ++v) j["rotation"].push_back({{"vertex", v}, {"edges", rs.rotation[v]}});
    if (!rs.edges.empty()) j["outer"] = {{"edge", edge_of(rs.outer_witness)}, {"side", rs.outer_witness & 1}};
    j["pairs"] = nlohmann::json::array();
    for (const auto& p : inst.pairs) j["pairs"].push_back({{"s", p.source}, {"t", p.target}});
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    try {
        RawInstance raw;
        for (const auto& v : j.at("vertices"))
            if (!raw.vertices.emplace(v.get<int>(), true).second) throw ParseError("duplicate vertex");
        for (const auto& e : j.at("edges"))
            if (!raw.edges.emplace(e.at("id").get<int>(), Edge{e.at("u").get<int>(), e.at("v").get<int>()}).second)
                throw ParseError("duplicate edge");
        for (const auto& r : j.at("rotation"))
            if (!raw.rotation.emplace(r.at("vertex").get<int>(), r.at("edges").get<std::vector<int>>()).second)
                throw ParseError("duplicate rotation");
        if (j.contains("outer"))
            raw.outer = std::pair{j["outer"].at("edge").get<int>(), j["outer"].at("side").get<int>()};
        if (j.contains("pairs"))
            for (const auto& p : j["pairs"]) raw.pairs.push_back({p.at("s").get<int>(), p.at("t").get<int>()});
        return assemble(std::move(raw));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

Instance parse_instance(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        try {
            return instance_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(e.what());
        }
    }
    return parse_instance_text(text);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        out << instance_to_json(inst).dump(2) << '\n';
    else
        out << format_instance_text(inst);
}

}  // namespace pdp
