#include <benchmark/benchmark.h>

#include "qucbvi/agents.hpp"
#include "qucbvi/environments.hpp"
#include "qucbvi/quantum_mean.hpp"

using namespace qucbvi;

namespace {

AgentConfig bench_config(Algorithm algo) {
    AgentConfig c;
    c.algorithm = algo;
    c.episodes = 10000;
    c.horizon = kDefaultHorizon;
    c.delta = default_delta(c.episodes, c.horizon);
    return c;
}

// Counts after a short warm-up so the planner sees visited rows.
CountTables warm_counts(const TabularMDP& mdp, std::size_t episodes) {
    Agent agent(mdp, bench_config(Algorithm::ucbvi));
    for (std::size_t k = 0; k < episodes; ++k) agent.run_episode();
    return agent.counts();
}

}  // namespace

static void BM_SubGaussEstimate(benchmark::State& state) {
    const IndicatorDistribution d(0.3);
    Rng rng(1);
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_subgauss_estimate(d, n, 1e-4, rng));
}
BENCHMARK(BM_SubGaussEstimate)->Arg(10)->Arg(1000)->Arg(100000);

static void BM_ExactValueIteration(benchmark::State& state) {
    const auto env = make_environment(state.range(0) == 0 ? "riverswim6" : "gridworld");
    for (auto _ : state) benchmark::DoNotOptimize(exact_value_iteration(env.mdp));
}
BENCHMARK(BM_ExactValueIteration)->Arg(0)->Arg(1);

static void BM_QuantumModelEstimate(benchmark::State& state) {
    const auto mdp = make_riverswim(6, kDefaultHorizon);
    const auto counts = warm_counts(mdp, 200);
    const auto config = bench_config(Algorithm::qucbvi);
    Rng rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_model_quantum(counts, mdp, config, rng));
}
BENCHMARK(BM_QuantumModelEstimate);

static void BM_PlanEpisode(benchmark::State& state) {
    const auto mdp = make_riverswim(6, kDefaultHorizon);
    const auto counts = warm_counts(mdp, 200);
    const auto model = estimate_model_classical(counts);
    const auto bonus = compute_bonus(counts, 6, 2, kDefaultHorizon, 10000, 5e-6,
                                     BonusMode::paper_literal);
    for (auto _ : state) benchmark::DoNotOptimize(plan_episode(model, bonus, mdp));
}
BENCHMARK(BM_PlanEpisode);

static void BM_AgentEpisode(benchmark::State& state) {
    const auto mdp = make_riverswim(6, kDefaultHorizon);
    auto config = bench_config(state.range(0) == 0 ? Algorithm::qucbvi : Algorithm::ucbvi);
    config.bonus_mode = BonusMode::paper_literal;
    Agent agent(mdp, config);
    for (auto _ : state) benchmark::DoNotOptimize(agent.run_episode());
}
BENCHMARK(BM_AgentEpisode)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
