#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pdp/flows.hpp"
#include "pdp/linkage.hpp"
#include "pdp/templates.hpp"

namespace pdp {

// Instances above this many vertices are refused by the oracle.
inline constexpr int default_oracle_limit = 40;

// Calls `visit` on every solution (walk i from pairs[i].source), in a fixed
// order, until it returns false. Returns the number of solutions visited.
// Throws TooLarge above `max_vertices`.
std::int64_t for_each_solution(const Instance& inst, const std::function<bool(const WeakLinkage&)>& visit,
                               int max_vertices = default_oracle_limit);
std::optional<WeakLinkage> brute_force(const Instance& inst, int max_vertices = default_oracle_limit);
std::vector<WeakLinkage> brute_force_all(const Instance& inst, int max_vertices = default_oracle_limit);

// Everything solve builds for one instance before looking at candidates.
struct SolveFrame {
    NiceInstance nice;
    RadialCompletion radial;
    BackboneTree backbone;
    TreeFrame frame;
    DirectedPlaneGraph base;  // the radial completion read as arcs u -> v
};
SolveFrame build_solve_frame(const Instance& inst, const AlgorithmConstants& constants, int copies = 0);

// Flow on the base of a solution of the input instance, carried onto the
// nice instance and its enrichment.
Flow solution_flow(const Instance& input, const SolveFrame& sf, const WeakLinkage& solution);

// Oracle solutions of the input grouped into homology classes of their flows
// on the radial completion. Grows on demand and is read-only between calls
// to complete(), so matching can run concurrently.
class SolutionClasses {
public:
    SolutionClasses(const Instance& input, const SolveFrame& sf, int max_vertices = default_oracle_limit);

    // Starts from one known solution instead of running the oracle.
    void seed(const WeakLinkage& first);
    // Adds every remaining solution; repeated calls are no-ops.
    void complete();
    bool completed() const { return completed_; }

    // Index of the class whose flow is homologous to phi.
    std::optional<int> match(const Flow& phi) const;
    const WeakLinkage& representative(int cls) const { return reps_[cls]; }
    int classes() const { return static_cast<int>(reps_.size()); }
    std::int64_t solutions_seen() const { return seen_; }

private:
    bool add(const WeakLinkage& s);

    const Instance* input_;
    const SolveFrame* sf_;
    int max_vertices_;
    std::vector<WeakLinkage> reps_;
    std::vector<Flow> flows_;
    std::int64_t seen_ = 0;
    bool completed_ = false;
};

// An oracle solution of the input whose flow is homologous to that of the
// pushed candidate w, or none.
std::optional<WeakLinkage> class_feasible(const Instance& input, const SolveFrame& sf, const WeakLinkage& w,
                                          int max_vertices = default_oracle_limit);

enum class Verdict { feasible, infeasible, infeasible_within_caps };
std::string to_string(Verdict v);
int exit_code(Verdict v);

enum class Outcome { invalid, broken_trace, not_sensible, not_weak, no_match, match };
std::string to_string(Outcome o);

struct CandidateResult {
    Outcome outcome = Outcome::invalid;
    std::string detail;
    int solution_class = -1;
    Flow flow;  // set for no_match and match
};

// extend, stitch, reconstruct, sensibility and weak-linkage checks, then the
// class lookup. Pure in its inputs.
CandidateResult evaluate_candidate(const SolveFrame& sf, const SolutionClasses& classes, const Template& t);

struct SolverConfig {
    std::optional<TemplateCaps> caps;  // standard caps when unset
    bool oracle_only = false;
    bool parallel = false;   // evaluate candidate batches with OpenMP
    int batch = 64;
    bool full_stream = false;  // draw from TemplateStream and filter, instead of the consistent stream
    std::optional<std::int64_t> max_candidates;
    int max_vertices = default_oracle_limit;
    std::optional<AlgorithmConstants> constants;  // standard(k) when unset
    int copies = 0;           // 0: vertices of the nice instance
    bool record_traces = false;
    int verdict_log = 200;    // per-candidate verdicts kept in the report
};

struct CandidateVerdict {
    std::int64_t index = 0;
    long long mass = 0;
    Outcome outcome = Outcome::invalid;
    std::string detail;
};

struct RunReport {
    std::vector<std::pair<std::string, double>> timings;  // seconds per stage
    TemplateCaps caps;
    bool caps_exhaustive = false;
    std::int64_t candidates = 0;
    std::map<Outcome, std::int64_t> outcomes;
    std::vector<CandidateVerdict> verdicts;
    std::int64_t oracle_solutions = 0;
    int oracle_classes = 0;
    std::optional<Template> accepted;
    bool recheck_used = false;
    bool budget_hit = false;
    std::vector<MeasureTrace> traces;  // simplification of the oracle's first solution
    std::optional<Template> reference_template;  // its template
};
nlohmann::json report_to_json(const RunReport& r);

struct SolveResult {
    Verdict verdict = Verdict::infeasible;
    std::optional<WeakLinkage> solution;  // a verified solution of the input
    RunReport report;
};

SolveResult solve(const Instance& inst, const SolverConfig& config = {});

struct SweepEntry {
    bool oracle_feasible = false;
    Verdict verdict = Verdict::infeasible;
    bool solution_valid = true;
    bool agree = false;
    double seconds = 0;
    std::int64_t candidates = 0;
    std::string error;
};

struct SweepSummary {
    std::vector<SweepEntry> entries;
    std::int64_t agreements = 0;
    std::int64_t disagreements = 0;
    std::int64_t feasible = 0;
    double seconds = 0;
};

// solve against brute_force on every instance. With `parallel` the instances
// are spread over OpenMP threads; entries stay in input order.
SweepSummary sweep(std::span<const Instance> instances, const SolverConfig& config, bool parallel);

}  // namespace pdp
