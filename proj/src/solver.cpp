#include "pdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <set>

#include "pdp/errors.hpp"

namespace pdp {

namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Depth-first search over self-avoiding path tuples. Pair i is routed
// completely before pair i+1 starts; every partial state is pruned unless the
// current head still reaches its target and every later pair is still
// connected through free vertices.
class PathSearch {
public:
    PathSearch(const Instance& inst, const std::function<bool(const WeakLinkage&)>& visit)
        : g_(inst.graph), pairs_(inst.pairs), visit_(visit), owner_(g_.num_vertices(), -1),
          used_(g_.num_vertices(), 0), comp_(g_.num_vertices(), -1), edges_(pairs_.size()) {
        for (int i = 0; i < static_cast<int>(pairs_.size()); ++i) {
            owner_[pairs_[i].source] = i;
            owner_[pairs_[i].target] = i;
        }
    }

    std::int64_t run() {
        route(0);
        return found_;
    }

private:
    bool free(VertexId v) const { return !used_[v] && owner_[v] < 0; }

    void label_components() {
        std::fill(comp_.begin(), comp_.end(), -1);
        int next = 0;
        std::vector<VertexId> stack;
        for (VertexId v = 0; v < g_.num_vertices(); ++v) {
            if (!free(v) || comp_[v] >= 0) continue;
            comp_[v] = next;
            stack.push_back(v);
            while (!stack.empty()) {
                const VertexId x = stack.back();
                stack.pop_back();
                for (EdgeId e : g_.rotation(x)) {
                    const VertexId y = g_.other_end(e, x);
                    if (free(y) && comp_[y] < 0) {
                        comp_[y] = next;
                        stack.push_back(y);
                    }
                }
            }
            ++next;
        }
    }

    // a and b are joined by an edge or by a run of free vertices.
    bool linked(VertexId a, VertexId b) const {
        for (EdgeId e : g_.rotation(a)) {
            const VertexId x = g_.other_end(e, a);
            if (x == b) return true;
            if (comp_[x] < 0) continue;
            for (EdgeId f : g_.rotation(b))
                if (comp_[g_.other_end(f, b)] == comp_[x]) return true;
        }
        return false;
    }

    bool promising(int pair, VertexId head) {
        label_components();
        if (pair < static_cast<int>(pairs_.size()) && !linked(head, pairs_[pair].target)) return false;
        for (std::size_t j = pair + 1; j < pairs_.size(); ++j)
            if (!linked(pairs_[j].source, pairs_[j].target)) return false;
        return true;
    }

    bool route(int pair) {
        if (pair == static_cast<int>(pairs_.size())) {
            WeakLinkage w;
            for (std::size_t i = 0; i < pairs_.size(); ++i) w.walks.push_back(Walk{pairs_[i].source, edges_[i]});
            ++found_;
            return visit_(w);
        }
        const VertexId s = pairs_[pair].source;
        used_[s] = 1;
        const bool go = !promising(pair, s) || extend(pair, s);
        used_[s] = 0;
        return go;
    }

    bool extend(int pair, VertexId v) {
        const VertexId target = pairs_[pair].target;
        for (EdgeId e : g_.rotation(v)) {
            const VertexId u = g_.other_end(e, v);
            if (u == v) continue;
            const bool last = u == target;
            if (!last && !free(u)) continue;
            used_[u] = 1;
            edges_[pair].push_back(e);
            bool go = true;
            if (last) {
                go = route(pair + 1);
            } else if (promising(pair, u)) {
                go = extend(pair, u);
            }
            edges_[pair].pop_back();
            used_[u] = 0;
            if (!go) return false;
        }
        return true;
    }

    const PlaneGraph& g_;
    const std::vector<TerminalPair>& pairs_;
    const std::function<bool(const WeakLinkage&)>& visit_;
    std::vector<int> owner_;
    std::vector<char> used_;
    std::vector<int> comp_;
    std::vector<std::vector<EdgeId>> edges_;
    std::int64_t found_ = 0;
};

}  // namespace

std::int64_t for_each_solution(const Instance& inst, const std::function<bool(const WeakLinkage&)>& visit,
                               int max_vertices) {
    if (inst.graph.num_vertices() > max_vertices)
        throw TooLarge(std::to_string(inst.graph.num_vertices()) + " vertices, the oracle takes at most " +
                       std::to_string(max_vertices));
    std::set<VertexId> seen;
    for (const TerminalPair& p : inst.pairs)
        if (p.source == p.target || !seen.insert(p.source).second || !seen.insert(p.target).second)
            throw PreconditionViolation("terminals must be distinct vertices");
    if (inst.pairs.empty()) {
        visit(WeakLinkage{});
        return 1;
    }
    return PathSearch(inst, visit).run();
}

std::optional<WeakLinkage> brute_force(const Instance& inst, int max_vertices) {
    std::optional<WeakLinkage> out;
    for_each_solution(
        inst,
        [&](const WeakLinkage& w) {
            out = w;
            return false;
        },
        max_vertices);
    return out;
}

std::vector<WeakLinkage> brute_force_all(const Instance& inst, int max_vertices) {
    std::vector<WeakLinkage> out;
    for_each_solution(
        inst,
        [&](const WeakLinkage& w) {
            out.push_back(w);
            return true;
        },
        max_vertices);
    return out;
}

// ---------------------------------------------------------------------------
// Frames and classes

SolveFrame build_solve_frame(const Instance& inst, const AlgorithmConstants& constants, int copies) {
    NiceInstance nice = make_nice(inst);
    RadialCompletion radial = radial_completion(nice.instance.graph);
    BackboneTree backbone = build_backbone(radial, nice.instance, nice.outer_terminal, constants);
    TreeFrame frame = frame_of_backbone(radial, backbone, nice.instance.pairs,
                                        copies > 0 ? copies : nice.instance.graph.num_vertices());
    DirectedPlaneGraph base = as_directed(radial.graph);
    return SolveFrame{std::move(nice), std::move(radial), std::move(backbone), std::move(frame), std::move(base)};
}

Flow solution_flow(const Instance& input, const SolveFrame& sf, const WeakLinkage& solution) {
    const WeakLinkage lifted = lift_to_copies(sf.frame.classes(), solution_on_nice(input, sf.nice, solution), 1);
    return compressed_flow_of_linkage(sf.frame.enriched(), lifted);
}

SolutionClasses::SolutionClasses(const Instance& input, const SolveFrame& sf, int max_vertices)
    : input_(&input), sf_(&sf), max_vertices_(max_vertices) {}

bool SolutionClasses::add(const WeakLinkage& s) {
    ++seen_;
    Flow phi = solution_flow(*input_, *sf_, s);
    if (match(phi)) return false;
    reps_.push_back(s);
    flows_.push_back(std::move(phi));
    return true;
}

void SolutionClasses::seed(const WeakLinkage& first) {
    if (!reps_.empty()) return;
    add(first);
}

void SolutionClasses::complete() {
    if (completed_) return;
    seen_ = 0;
    for_each_solution(
        *input_,
        [&](const WeakLinkage& s) {
            // A seeded solution is met again here; it matches its own class.
            add(s);
            return true;
        },
        max_vertices_);
    completed_ = true;
}

std::optional<int> SolutionClasses::match(const Flow& phi) const {
    for (std::size_t c = 0; c < flows_.size(); ++c)
        if (flows_[c] == phi || are_homologous(sf_->base, phi, flows_[c])) return static_cast<int>(c);
    return std::nullopt;
}

std::optional<WeakLinkage> class_feasible(const Instance& input, const SolveFrame& sf, const WeakLinkage& w,
                                          int max_vertices) {
    if (!is_pushed(sf.frame, w)) throw NotPushed("class_feasible expects a linkage on copies of tree edges");
    const Flow phi = compressed_flow_of_linkage(sf.frame.enriched(), w);
    std::optional<WeakLinkage> out;
    for_each_solution(
        input,
        [&](const WeakLinkage& s) {
            const Flow psi = solution_flow(input, sf, s);
            if (psi == phi || are_homologous(sf.base, phi, psi)) {
                out = s;
                return false;
            }
            return true;
        },
        max_vertices);
    return out;
}

// ---------------------------------------------------------------------------
// Candidates

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::feasible: return "feasible";
        case Verdict::infeasible: return "infeasible";
        case Verdict::infeasible_within_caps: return "infeasible within caps";
    }
    return "unknown";
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::feasible: return 0;
        case Verdict::infeasible: return 1;
        case Verdict::infeasible_within_caps: return 2;
    }
    return 3;
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::invalid: return "invalid";
        case Outcome::broken_trace: return "broken_trace";
        case Outcome::not_sensible: return "not_sensible";
        case Outcome::not_weak: return "not_weak";
        case Outcome::no_match: return "no_match";
        case Outcome::match: return "match";
    }
    return "unknown";
}

CandidateResult evaluate_candidate(const SolveFrame& sf, const SolutionClasses& classes, const Template& t) {
    const TreeFrame& frame = sf.frame;
    CandidateResult r;
    Checked<WeakLinkage> linked = WeakLinkage{};
    try {
        linked = linkage_of_template(frame, t);
    } catch (const NonterminatingTrace& e) {
        r.outcome = Outcome::broken_trace;
        r.detail = e.what();
        return r;
    } catch (const UnmatchedTerminals& e) {
        r.outcome = Outcome::broken_trace;
        r.detail = e.what();
        return r;
    }
    if (const auto* bad = std::get_if<Invalid>(&linked)) {
        r.outcome = Outcome::invalid;
        r.detail = to_string(bad->clause);
        return r;
    }
    const WeakLinkage& w = std::get<WeakLinkage>(linked);
    if (!is_sensible(frame, w)) {
        r.outcome = Outcome::not_sensible;
        return r;
    }
    if (!is_weak_linkage(frame.graph(), w)) {
        r.outcome = Outcome::not_weak;
        return r;
    }
    r.flow = compressed_flow_of_linkage(frame.enriched(), w);
    if (const auto c = classes.match(r.flow)) {
        r.outcome = Outcome::match;
        r.solution_class = *c;
    } else {
        r.outcome = Outcome::no_match;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Solve

namespace {

class CandidateSource {
public:
    CandidateSource(const TreeFrame& frame, TemplateCaps caps, bool full) {
        if (full)
            full_.emplace(frame, caps);
        else
            consistent_.emplace(frame, caps);
    }
    std::optional<Template> next() { return full_ ? full_->next() : consistent_->next(); }

private:
    std::optional<TemplateStream> full_;
    std::optional<ConsistentTemplateStream> consistent_;
};

bool covers_bounds(const TemplateCaps& caps, const TreeFrame& frame, const AlgorithmConstants& constants) {
    const std::int64_t count_bound = std::min<std::int64_t>(constants.multiplicity(), frame.classes().span());
    return caps.max_pairs >= constants.npair() && caps.max_count >= count_bound;
}

}  // namespace

SolveResult solve(const Instance& inst, const SolverConfig& config) {
    SolveResult out;
    RunReport& rep = out.report;
    Stopwatch clock;

    const std::optional<WeakLinkage> first = brute_force(inst, config.max_vertices);
    rep.timings.emplace_back("oracle", clock.lap());
    rep.oracle_solutions = first ? 1 : 0;
    if (!first) {
        // No solution at all: every class check fails, whatever the candidate.
        out.verdict = Verdict::infeasible;
        return out;
    }
    if (config.oracle_only || inst.k() == 0) {
        out.verdict = Verdict::feasible;
        out.solution = first;
        return out;
    }

    const AlgorithmConstants constants = config.constants.value_or(AlgorithmConstants::standard(inst.k()));
    const SolveFrame sf = build_solve_frame(inst, constants, config.copies);
    rep.timings.emplace_back("frame", clock.lap());
    rep.caps = config.caps.value_or(TemplateCaps::standard(sf.frame, constants));
    rep.caps_exhaustive = covers_bounds(rep.caps, sf.frame, constants);

    SolutionClasses classes(inst, sf, config.max_vertices);
    classes.seed(*first);
    if (config.record_traces) {
        const WeakLinkage lifted =
            lift_to_copies(sf.frame.classes(), solution_on_nice(inst, sf.nice, *first), 1);
        Simplified simple = simplify(sf.frame, lifted);
        rep.traces = std::move(simple.report.traces);
        rep.reference_template = template_of(sf.frame, simple.linkage);
        rep.timings.emplace_back("reference", clock.lap());
    }

    CandidateSource source(sf.frame, rep.caps, config.full_stream);
    struct Pending {
        Template t;
        Flow flow;
    };
    std::vector<Pending> pending;
    std::optional<int> hit_class;
    const int batch_size = std::max(1, config.batch);
    bool exhausted = false;

    while (!hit_class && !exhausted) {
        std::vector<Template> batch;
        while (static_cast<int>(batch.size()) < batch_size) {
            if (config.max_candidates && rep.candidates + static_cast<std::int64_t>(batch.size()) >= *config.max_candidates) {
                rep.budget_hit = true;
                break;
            }
            auto t = source.next();
            if (!t) {
                exhausted = true;
                break;
            }
            batch.push_back(std::move(*t));
        }
        if (batch.empty()) break;

        std::vector<CandidateResult> results(batch.size());
        std::vector<std::exception_ptr> errors(batch.size());
        const long n = static_cast<long>(batch.size());
#pragma omp parallel for schedule(dynamic) if (config.parallel)
        for (long i = 0; i < n; ++i) {
            try {
                results[i] = evaluate_candidate(sf, classes, batch[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }

        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (errors[i]) std::rethrow_exception(errors[i]);
            CandidateResult& r = results[i];
            ++rep.outcomes[r.outcome];
            if (static_cast<int>(rep.verdicts.size()) < config.verdict_log)
                rep.verdicts.push_back({rep.candidates, batch[i].mass(), r.outcome, r.detail});
            ++rep.candidates;
            if (r.outcome == Outcome::match) {
                hit_class = r.solution_class;
                rep.accepted = batch[i];
                break;
            }
            if (r.outcome == Outcome::no_match) pending.push_back({std::move(batch[i]), std::move(r.flow)});
        }
        if (rep.budget_hit) break;
    }
    rep.timings.emplace_back("candidates", clock.lap());

    if (!hit_class) {
        // Candidates so far were only compared with the classes seen early;
        // compare them with every class before giving up.
        classes.complete();
        rep.recheck_used = true;
        for (Pending& p : pending)
            if (const auto c = classes.match(p.flow)) {
                hit_class = c;
                rep.accepted = std::move(p.t);
                break;
            }
        rep.timings.emplace_back("recheck", clock.lap());
    }
    rep.oracle_solutions = classes.completed() ? classes.solutions_seen() : rep.oracle_solutions;
    rep.oracle_classes = classes.classes();

    if (hit_class) {
        out.verdict = Verdict::feasible;
        out.solution = classes.representative(*hit_class);
        if (!is_solution(inst, *out.solution)) throw InvariantViolation("accepted solution fails the validator");
    } else {
        out.verdict = rep.caps_exhaustive && !rep.budget_hit ? Verdict::infeasible : Verdict::infeasible_within_caps;
    }
    return out;
}

nlohmann::json report_to_json(const RunReport& r) {
    nlohmann::json j;
    j["timings"] = nlohmann::json::object();
    for (const auto& [stage, s] : r.timings) j["timings"][stage] = s;
    j["caps"] = {{"max_pairs", r.caps.max_pairs}, {"max_count", r.caps.max_count}};
    j["caps_exhaustive"] = r.caps_exhaustive;
    j["candidates"] = r.candidates;
    j["outcomes"] = nlohmann::json::object();
    for (const auto& [o, n] : r.outcomes) j["outcomes"][to_string(o)] = n;
    j["verdicts"] = nlohmann::json::array();
    for (const CandidateVerdict& v : r.verdicts) {
        nlohmann::json e = {{"index", v.index}, {"mass", v.mass}, {"outcome", to_string(v.outcome)}};
        if (!v.detail.empty()) e["detail"] = v.detail;
        j["verdicts"].push_back(std::move(e));
    }
    j["oracle_solutions"] = r.oracle_solutions;
    j["oracle_classes"] = r.oracle_classes;
    j["recheck_used"] = r.recheck_used;
    j["budget_hit"] = r.budget_hit;
    if (r.accepted) j["accepted"] = template_to_json(*r.accepted);
    if (r.reference_template) j["reference_template"] = template_to_json(*r.reference_template);
    j["traces"] = nlohmann::json::array();
    for (const MeasureTrace& t : r.traces)
        j["traces"].push_back({{"stage", t.stage}, {"measure", t.measure}, {"values", t.values}, {"monotone", t.monotone()}});
    return j;
}

// ---------------------------------------------------------------------------
// Sweep

SweepSummary sweep(std::span<const Instance> instances, const SolverConfig& config, bool parallel) {
    SweepSummary out;
    out.entries.resize(instances.size());
    SolverConfig inner = config;
    if (parallel) inner.parallel = false;
    Stopwatch total;
    const long n = static_cast<long>(instances.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        SweepEntry& e = out.entries[i];
        Stopwatch clock;
        try {
            e.oracle_feasible = brute_force(instances[i], inner.max_vertices).has_value();
            const SolveResult r = solve(instances[i], inner);
            e.verdict = r.verdict;
            e.candidates = r.report.candidates;
            e.solution_valid = !r.solution || is_solution(instances[i], *r.solution);
            e.agree = e.solution_valid && e.oracle_feasible == (r.verdict == Verdict::feasible);
        } catch (const std::exception& ex) {
            e.error = ex.what();
            e.agree = false;
        }
        e.seconds = clock.lap();
    }
    out.seconds = total.lap();
    for (const SweepEntry& e : out.entries) {
        (e.agree ? out.agreements : out.disagreements) += 1;
        out.feasible += e.oracle_feasible;
    }
    return out;
}

}  // namespace pdp
