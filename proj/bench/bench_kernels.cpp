#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "pdp/corpus.hpp"
#include "pdp/flows.hpp"
#include "pdp/solver.hpp"

using namespace pdp;

namespace {

// The 3x4 two-pair instance (among a fixed sample) on which solve evaluates
// the most candidates before accepting.
const Instance& busy_instance() {
    static const Instance picked = [] {
        const auto all = grid_instances(3, 4, 2);
        std::size_t best = 0;
        std::int64_t most = -1;
        for (std::size_t i = 0; i < all.size(); i += 61) {
            const SolveResult r = solve(all[i]);
            if (r.report.candidates > most) {
                most = r.report.candidates;
                best = i;
            }
        }
        return all[best];
    }();
    return picked;
}

const std::vector<Instance>& sweep_sample() {
    static const std::vector<Instance> sample = [] {
        const auto all = grid_instances(3, 3, 2);
        std::vector<Instance> out;
        for (std::size_t i = 0; i < all.size(); i += 7) out.push_back(all[i]);
        return out;
    }();
    return sample;
}

void candidate_evaluation(benchmark::State& state) {
    const Instance& inst = busy_instance();
    SolverConfig cfg;
    cfg.parallel = state.range(0) != 0;
    std::int64_t candidates = 0;
    for (auto _ : state) {
        const SolveResult r = solve(inst, cfg);
        candidates += r.report.candidates;
        benchmark::DoNotOptimize(r.verdict);
    }
    state.counters["candidates/s"] = benchmark::Counter(static_cast<double>(candidates), benchmark::Counter::kIsRate);
}
BENCHMARK(candidate_evaluation)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void corpus_sweep(benchmark::State& state) {
    const auto& sample = sweep_sample();
    for (auto _ : state) {
        const SweepSummary s = sweep(sample, SolverConfig{}, state.range(0) != 0);
        benchmark::DoNotOptimize(s.agreements);
    }
    state.counters["instances/s"] = benchmark::Counter(static_cast<double>(sample.size() * state.iterations()),
                                                       benchmark::Counter::kIsRate);
}
BENCHMARK(corpus_sweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void homology_check(benchmark::State& state) {
    std::mt19937_64 rng(5);
    const PlantedInstance p = planted_with_paths(static_cast<int>(state.range(0)), 2, rng);
    const PlaneGraph& g = p.instance.graph;
    WeakLinkage w;
    for (const auto& path : p.paths) w.walks.push_back(Walk{path.front(), path_edges(g, path)});
    const DirectedPlaneGraph d = doubled_orientation(g);
    const Flow phi = flow_of_linkage(g, w);
    for (auto _ : state) benchmark::DoNotOptimize(are_homologous(d, phi, phi));
}
BENCHMARK(homology_check)->ArgName("extra")->Arg(20)->Arg(80);

}  // namespace

BENCHMARK_MAIN();
