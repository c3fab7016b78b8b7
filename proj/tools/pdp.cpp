// Command-line front end: solve, inspect the backbone, enumerate templates,
// push and simplify linkages, winding numbers, homology checks, generators.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pdp/corpus.hpp"
#include "pdp/errors.hpp"
#include "pdp/flows.hpp"
#include "pdp/io.hpp"
#include "pdp/linkage.hpp"
#include "pdp/rings.hpp"
#include "pdp/solver.hpp"
#include "pdp/templates.hpp"

using namespace pdp;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

TemplateCaps parse_caps(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ParseError("caps must read P,M");
    try {
        return TemplateCaps{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ParseError("caps must read P,M");
    }
}

struct ConstantsOptions {
    std::int64_t long_path = 0;
    std::int64_t pattern = 0;

    void attach(CLI::App* app) {
        app->add_option("--long", long_path, "Long-path threshold (relaxed constants)");
        app->add_option("--pattern", pattern, "Pattern length (relaxed constants)");
    }
    AlgorithmConstants make(int k) const {
        if (long_path > 0 || pattern > 0)
            return AlgorithmConstants::relaxed(k, long_path > 0 ? long_path : 1000, pattern > 0 ? pattern : 100);
        return AlgorithmConstants::standard(k);
    }
};

json tree_json(const SteinerTree& t) {
    return {{"edges", std::vector<EdgeId>(t.edges().begin(), t.edges().end())},
            {"terminals", std::vector<VertexId>(t.terminals().begin(), t.terminals().end())}};
}

json trace_json(const MeasureTrace& t) {
    return {{"stage", t.stage},        {"measure", t.measure},     {"values", t.values},
            {"potentials", t.potentials}, {"monotone", t.monotone()}};
}

// ---------------------------------------------------------------------------

int run_solve(const std::string& file, const std::string& caps, bool oracle_only, const std::string& report,
              bool parallel, bool full, std::int64_t max_candidates) {
    const Instance inst = load_instance(file);
    SolverConfig cfg;
    if (!caps.empty()) cfg.caps = parse_caps(caps);
    cfg.oracle_only = oracle_only;
    cfg.parallel = parallel;
    cfg.full_stream = full;
    if (max_candidates > 0) cfg.max_candidates = max_candidates;
    cfg.record_traces = !report.empty();
    const SolveResult r = solve(inst, cfg);
    json out = {{"verdict", to_string(r.verdict)}};
    if (r.solution) out["solution"] = linkage_to_json(*r.solution);
    std::cout << out.dump(2) << "\n";
    if (!report.empty()) write_text(report, report_to_json(r.report).dump(2) + "\n");
    return exit_code(r.verdict);
}

int run_steiner(const std::string& file, const ConstantsOptions& opts, const std::string& dot) {
    const Instance inst = load_instance(file);
    const AlgorithmConstants constants = opts.make(inst.k());
    const NiceInstance nice = make_nice(inst);
    const RadialCompletion h = radial_completion(nice.instance.graph);
    const BackboneTree b = build_backbone(h, nice.instance, nice.outer_terminal, constants);
    json out;
    out["radial"] = {{"vertices", h.graph.num_vertices()}, {"edges", h.graph.num_edges()}};
    out["outer_terminal"] = b.outer_terminal;
    out["initial"] = tree_json(b.initial);
    out["detour_free"] = tree_json(b.detour_free);
    out["undetour_steps"] = b.undetour_steps;
    out["backbone"] = tree_json(b.tree);
    out["long_paths"] = json::array();
    for (const LongPathData& p : b.long_paths) {
        json flows = json::array();
        for (const auto& f : p.flow.paths) flows.push_back(f);
        json cycles = json::array();
        for (const auto& c : p.cycles.cycles) cycles.push_back(c);
        out["long_paths"].push_back({{"path", p.path.vertices},
                                     {"u", p.u},
                                     {"v", p.v},
                                     {"separator_u", p.sep_u},
                                     {"separator_v", p.sep_v},
                                     {"anchor_u", p.anchor_u},
                                     {"anchor_v", p.anchor_v},
                                     {"cycles", cycles},
                                     {"flow", flows},
                                     {"flow_cost", p.flow.cost},
                                     {"replacement", p.replacement},
                                     {"ring", p.ring}});
    }
    out["violations"] = check_backbone(h, b, constants);
    std::cout << out.dump(2) << "\n";

    if (!dot.empty()) {
        std::ostringstream g;
        g << "graph backbone {\n";
        for (VertexId v = 0; v < h.graph.num_vertices(); ++v)
            g << "  " << v << (h.is_original_vertex(v) ? "" : " [shape=point]") << ";\n";
        for (EdgeId e = 0; e < h.graph.num_edges(); ++e) {
            const Edge& ends = h.graph.edge(e);
            g << "  " << ends.u << " -- " << ends.v;
            if (b.tree.contains_edge(e))
                g << " [penwidth=3]";
            else if (!h.is_original_edge(e))
                g << " [style=dotted]";
            g << ";\n";
        }
        g << "}\n";
        write_text(dot, g.str());
    }
    return 0;
}

int run_templates(const std::string& file, const std::string& caps_text, std::int64_t limit, bool all,
                  const std::string& resume, const std::string& save_cursor, const std::string& check,
                  const ConstantsOptions& opts) {
    const Instance inst = load_instance(file);
    const SolveFrame sf = build_solve_frame(inst, opts.make(inst.k()));
    const TemplateCaps caps = caps_text.empty() ? TemplateCaps::standard(sf.frame, opts.make(inst.k()))
                                                : parse_caps(caps_text);

    if (!check.empty()) {
        const Template t = template_from_json(read_json(check), &sf.frame);
        json out;
        try {
            const auto w = linkage_of_template(sf.frame, t);
            if (const auto* bad = std::get_if<Invalid>(&w)) {
                out = {{"valid", false}, {"clause", to_string(bad->clause)}, {"vertex", bad->vertex},
                       {"edge", bad->edge}, {"path", bad->path}, {"detail", bad->detail}};
            } else {
                const WeakLinkage& link = std::get<WeakLinkage>(w);
                out = {{"valid", true},
                       {"sensible", is_sensible(sf.frame, link)},
                       {"weak_linkage", is_weak_linkage(sf.frame.graph(), link)},
                       {"linkage", linkage_to_json(link)}};
            }
        } catch (const error& e) {
            out = {{"valid", false}, {"detail", e.what()}};
        }
        std::cout << out.dump(2) << "\n";
        return out["valid"].get<bool>() ? 0 : 1;
    }

    json list = json::array();
    std::int64_t n = 0;
    if (all) {
        TemplateStream stream = resume.empty() ? TemplateStream(sf.frame, caps)
                                               : TemplateStream(sf.frame, caps, cursor_from_json(read_json(resume)));
        while (limit <= 0 || n < limit) {
            auto t = stream.next();
            if (!t) break;
            list.push_back(template_to_json(*t));
            ++n;
        }
        if (!save_cursor.empty()) write_text(save_cursor, cursor_to_json(stream.cursor()).dump() + "\n");
    } else {
        ConsistentTemplateStream stream(sf.frame, caps);
        while (limit <= 0 || n < limit) {
            auto t = stream.next();
            if (!t) break;
            list.push_back(template_to_json(*t));
            ++n;
        }
    }
    std::cout << json{{"caps", {caps.max_pairs, caps.max_count}}, {"count", n}, {"templates", list}}.dump(2) << "\n";
    return 0;
}

// Reads a solution of the input, frames it and pushes or simplifies it.
int run_push(const std::string& file, const std::string& linkage, bool full, const ConstantsOptions& opts) {
    const Instance inst = load_instance(file);
    const WeakLinkage w = linkage_from_json(read_json(linkage));
    if (!is_solution(inst, w)) throw PreconditionViolation("the linkage is not a solution of the instance");
    const FramedLinkage fl = frame_solution(inst, w, opts.make(inst.k()));
    json out;
    if (full) {
        const Simplified s = simplify(fl.frame, fl.linkage);
        out["linkage"] = linkage_to_json(s.linkage);
        out["traces"] = json::array();
        for (const auto& t : s.report.traces) out["traces"].push_back(trace_json(t));
        out["segments_after_swollen"] = s.report.segments_after_swollen;
        out["potential_after_swollen"] = s.report.potential_after_swollen;
        out["two_copies_per_segment"] = s.report.two_copies_per_segment;
        out["multiplicity"] = s.report.multiplicity;
        out["template"] = template_to_json(template_of(fl.frame, s.linkage));
    } else {
        MeasureTrace trace;
        const WeakLinkage pushed = push_onto_tree(fl.frame, fl.linkage, &trace);
        out["linkage"] = linkage_to_json(pushed);
        out["traces"] = json::array({trace_json(trace)});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_winding(const std::string& file, const std::string& linkage, const ConstantsOptions& opts) {
    const Instance inst = load_instance(file);
    WeakLinkage w;
    if (linkage.empty()) {
        auto s = brute_force(inst);
        if (!s) throw PreconditionViolation("the instance has no solution to measure");
        w = *s;
    } else {
        w = linkage_from_json(read_json(linkage));
    }
    const AlgorithmConstants constants = opts.make(inst.k());
    const NiceInstance nice = make_nice(inst);
    const RadialCompletion h = radial_completion(nice.instance.graph);
    const BackboneTree b = build_backbone(h, nice.instance, nice.outer_terminal, constants);
    const WeakLinkage on_nice = solution_on_nice(inst, nice, w);

    json out = json::array();
    for (const LongPathData& p : b.long_paths) {
        const Ring ring = ring_of_long_path(h, p);
        json subpaths = json::array();
        for (std::size_t i = 0; i < on_nice.walks.size(); ++i) {
            const Walk& walk = on_nice.walks[i];
            const auto verts = walk_vertices(h.graph, walk);
            const int len = static_cast<int>(walk.edges.size());
            for (int a = 0; a <= len;) {
                if (!ring.contains(verts[a])) {
                    ++a;
                    continue;
                }
                int e = a;
                while (e < len && ring.contains(verts[e + 1])) ++e;
                if (e > a && ring.on_interface(verts[a]) && ring.on_interface(verts[e])) {
                    const Walk sub{verts[a], std::vector<EdgeId>(walk.edges.begin() + a, walk.edges.begin() + e)};
                    const ClassifiedWalk c = classify(ring, sub);
                    json labels = json::array();
                    for (const LabeledPair& l : label_pairs(ring, c.oriented, ring.reference(), SharedEdges::tolerate))
                        labels.push_back({{"vertex", l.vertex}, {"label", l.label}});
                    subpaths.push_back({{"walk", i},
                                        {"from", verts[a]},
                                        {"to", verts[e]},
                                        {"kind", c.kind == WalkKind::traversing      ? "traversing"
                                                 : c.kind == WalkKind::inner_visitor ? "inner_visitor"
                                                                                     : "outer_visitor"},
                                        {"labels", labels},
                                        {"winding", winding_number(ring, sub, SharedEdges::tolerate)}});
                }
                a = e + 1;
            }
        }
        out.push_back({{"path", p.path.vertices},
                       {"ring_vertices", ring.num_members()},
                       {"subpaths", subpaths},
                       {"max_winding", solution_winding(h, p, on_nice)}});
    }
    std::cout << json{{"long_paths", out}}.dump(2) << "\n";
    return 0;
}

int run_check_homology(const std::string& graph_file, const std::string& a, const std::string& b, bool doubled) {
    const Instance inst = load_instance(graph_file);
    const DirectedPlaneGraph d = doubled ? doubled_orientation(inst.graph) : as_directed(inst.graph);
    std::set<int> alphabet;
    for (VertexId t : inst.terminals()) alphabet.insert(t);
    const Flow phi = flow_from_json(read_json(a), d.num_arcs(), &alphabet);
    const Flow psi = flow_from_json(read_json(b), d.num_arcs(), &alphabet);
    const auto result = homologous(d, phi, psi);
    json out;
    if (const auto* w = std::get_if<HomologyWitness>(&result)) {
        json faces = json::object();
        for (std::size_t f = 0; f < w->h.size(); ++f) faces[std::to_string(f)] = w->h[f].to_string();
        const auto failed = verify_witness(d, phi, psi, *w);
        out = {{"homologous", !failed}, {"witness", faces}};
        if (failed) out["failed_arc"] = *failed;
    } else {
        out = {{"homologous", false}, {"arc", std::get<NotHomologous>(result).arc}};
    }
    std::cout << out.dump(2) << "\n";
    return out["homologous"].get<bool>() ? 0 : 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, sep);) parts.push_back(part);
    return parts;
}

int run_gen(const std::string& shape, const std::vector<std::string>& pairs, bool as_json, const std::string& out) {
    const auto parts = split(shape, ':');
    auto arg = [&](std::size_t i, int fallback) {
        if (i < parts.size()) return std::stoi(parts[i]);
        return fallback;
    };
    Instance inst;
    if (parts.empty()) throw ParseError("empty generator shape string");
    const std::string kind = parts[0];
    if (kind == "grid") {
        inst.graph = grid_graph(arg(1, 3), arg(2, 3));
    } else if (kind == "annulus") {
        inst.graph = annulus_graph(arg(1, 4), arg(2, 8));
    } else if (kind == "triangulation") {
        std::mt19937_64 rng(arg(2, 1));
        inst.graph = random_triangulation(arg(1, 10), rng);
    } else if (kind == "sparse-grid") {
        std::mt19937_64 rng(arg(4, 1));
        inst.graph = random_sparse_grid(arg(1, 4), arg(2, 4), arg(3, 3), rng);
    } else if (kind == "planted") {
        std::mt19937_64 rng(arg(3, 1));
        inst = planted_instance(arg(1, 10), arg(2, 2), rng);
    } else {
        throw ParseError("unknown generator '" + kind + "' (grid, annulus, triangulation, sparse-grid, planted)");
    }
    for (const std::string& p : pairs) {
        const auto st = split(p, ',');
        if (st.size() != 2) throw ParseError("pairs read s,t");
        inst.pairs.push_back({std::stoi(st[0]), std::stoi(st[1])});
    }
    write_text(out, as_json ? instance_to_json(inst).dump(2) + "\n" : format_instance_text(inst));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar disjoint paths: solver and inspection tools"};
    app.require_subcommand(1);

    std::string file, caps, report, dot, linkage, resume, save_cursor, check, flow_a, flow_b, shape, out;
    bool oracle_only = false, parallel = false, full = false, all = false, doubled = false, as_json = false;
    std::int64_t max_candidates = 0, limit = 20;
    std::vector<std::string> pairs;
    ConstantsOptions constants;

    auto* solve_cmd = app.add_subcommand("solve", "Decide an instance; exit 0 feasible, 1 infeasible, 2 within caps");
    solve_cmd->add_option("file", file, "Instance (text or JSON)")->required();
    solve_cmd->add_option("--caps", caps, "Template caps P,M (max pairs, max count)");
    solve_cmd->add_flag("--oracle-only", oracle_only, "Skip candidates and answer from the oracle");
    solve_cmd->add_option("--report", report, "Write the run report as JSON");
    solve_cmd->add_flag("--parallel", parallel, "Evaluate candidate batches with OpenMP");
    solve_cmd->add_flag("--full-stream", full, "Draw from the unfiltered template stream");
    solve_cmd->add_option("--max-candidates", max_candidates, "Stop after this many candidates");

    auto* steiner_cmd = app.add_subcommand("steiner", "Backbone tree, separators, rings and flows as JSON");
    steiner_cmd->add_option("file", file)->required();
    steiner_cmd->add_option("--dot", dot, "Also write the radial completion with the backbone as DOT");
    constants.attach(steiner_cmd);

    auto* templates_cmd = app.add_subcommand("templates", "List, validate or reconstruct candidate templates");
    templates_cmd->add_option("file", file)->required();
    templates_cmd->add_option("--caps", caps, "Template caps P,M");
    templates_cmd->add_option("--limit", limit, "Templates to list (0: all)");
    templates_cmd->add_flag("--all", all, "List the full stream rather than the consistent one");
    templates_cmd->add_option("--resume", resume, "Cursor JSON to resume the full stream from");
    templates_cmd->add_option("--save-cursor", save_cursor, "Write the full stream's cursor after listing");
    templates_cmd->add_option("--check", check, "Template JSON to validate and reconstruct");
    constants.attach(templates_cmd);

    auto* push_cmd = app.add_subcommand("push", "Push a solution onto the backbone");
    push_cmd->add_option("file", file)->required();
    push_cmd->add_option("linkage", linkage, "Solution JSON")->required();
    constants.attach(push_cmd);

    auto* simplify_cmd = app.add_subcommand("simplify", "Push and simplify a solution, print its template");
    simplify_cmd->add_option("file", file)->required();
    simplify_cmd->add_option("linkage", linkage, "Solution JSON")->required();
    constants.attach(simplify_cmd);

    auto* winding_cmd = app.add_subcommand("winding", "Winding numbers of a solution in the rings of long paths");
    winding_cmd->add_option("file", file)->required();
    winding_cmd->add_option("--solution", linkage, "Solution JSON (default: the oracle's first)");
    constants.attach(winding_cmd);

    auto* homology_cmd = app.add_subcommand("check-homology", "Test two flows for homology");
    homology_cmd->add_option("graph", file, "Instance giving the graph and terminals")->required();
    homology_cmd->add_option("flow_a", flow_a)->required();
    homology_cmd->add_option("flow_b", flow_b)->required();
    homology_cmd->add_flag("--doubled", doubled, "Flows live on the doubled orientation");

    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance");
    gen_cmd->add_option("shape", shape,
                        "grid:R:C | annulus:RINGS:SPOKES | triangulation:N:SEED | sparse-grid:R:C:DEL:SEED | "
                        "planted:N:K:SEED")
        ->required();
    gen_cmd->add_option("--pair", pairs, "Terminal pair s,t (repeatable)");
    gen_cmd->add_flag("--json", as_json, "Write JSON instead of text");
    gen_cmd->add_option("-o,--out", out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    try {
        if (*solve_cmd) return run_solve(file, caps, oracle_only, report, parallel, full, max_candidates);
        if (*steiner_cmd) return run_steiner(file, constants, dot);
        if (*templates_cmd) return run_templates(file, caps, limit, all, resume, save_cursor, check, constants);
        if (*push_cmd) return run_push(file, linkage, false, constants);
        if (*simplify_cmd) return run_push(file, linkage, true, constants);
        if (*winding_cmd) return run_winding(file, linkage, constants);
        if (*homology_cmd) return run_check_homology(file, flow_a, flow_b, doubled);
        if (*gen_cmd) return run_gen(shape, pairs, as_json, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 3;
}
