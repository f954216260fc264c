// Command-line driver: `run` executes seeded experiment batches and writes
// CSV/JSON results, `plan` solves an environment exactly.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qucbvi/agents.hpp"
#include "qucbvi/environments.hpp"
#include "qucbvi/harness.hpp"
#include "qucbvi/mdp.hpp"

namespace {

struct RunOptions {
    std::string env;
    std::string algorithm = "qucbvi";
    std::size_t episodes = 10000;
    std::optional<std::size_t> horizon;
    std::optional<double> delta;
    std::size_t runs = 20;
    std::uint64_t seed = 0;
    std::string bonus_mode = "optimism";
    std::string per_call_delta = "top_level";
    bool inject_failure = false;
    std::size_t threads = 0;
    std::string out;
};

struct PlanOptions {
    std::string env;
    std::optional<std::size_t> horizon;
    bool print_vstar = false;
};

const std::map<std::string, qucbvi::Algorithm> kAlgorithms{
    {"qucbvi", qucbvi::Algorithm::qucbvi}, {"ucbvi", qucbvi::Algorithm::ucbvi}};
const std::map<std::string, qucbvi::BonusMode> kBonusModes{
    {"paper", qucbvi::BonusMode::paper_literal},
    {"optimism", qucbvi::BonusMode::optimism_guaranteed}};
const std::map<std::string, qucbvi::PerCallDelta> kCallDeltas{
    {"top_level", qucbvi::PerCallDelta::top_level},
    {"union_bound", qucbvi::PerCallDelta::union_bound}};

template <typename Map>
std::vector<std::string> keys(const Map& m) {
    std::vector<std::string> out;
    for (const auto& [k, v] : m) out.push_back(k);
    return out;
}

int do_run(const RunOptions& opt) {
    const qucbvi::EnvironmentSpec env = qucbvi::make_environment(opt.env, opt.horizon);

    qucbvi::AgentConfig config;
    config.algorithm = kAlgorithms.at(opt.algorithm);
    config.episodes = opt.episodes;
    config.horizon = env.horizon;
    config.delta = opt.delta.value_or(qucbvi::default_delta(opt.episodes, env.horizon));
    config.bonus_mode = kBonusModes.at(opt.bonus_mode);
    config.per_call_delta = kCallDeltas.at(opt.per_call_delta);
    config.inject_failure = opt.inject_failure;
    config.seed = opt.seed;

    const qucbvi::BatchResult batch =
        qucbvi::run_batch(env, config, opt.runs, opt.seed, opt.threads);
    qucbvi::write_results(batch, opt.out);

    std::cout << env.name << " " << qucbvi::to_string(config.algorithm) << ": V*(s0)="
              << qucbvi::format_double(batch.optimal_value)
              << " final mean cumulative regret="
              << qucbvi::format_double(batch.mean_cumulative_regret.back()) << " (std "
              << qucbvi::format_double(batch.std_cumulative_regret.back()) << ") over "
              << opt.runs << " runs in " << batch.wall_clock_seconds << " s\n";
    std::cout << "wrote " << opt.out << "/{runs.csv,aggregate.csv,summary.json}\n";
    return EXIT_SUCCESS;
}

int do_plan(const PlanOptions& opt) {
    const qucbvi::EnvironmentSpec env = qucbvi::make_environment(opt.env, opt.horizon);
    const auto solved = qucbvi::exact_value_iteration(env.mdp);
    const std::size_t s0 = env.mdp.start_state();

    if (opt.print_vstar) {
        std::cout << qucbvi::format_double(solved.values(0, s0)) << "\n";
        return EXIT_SUCCESS;
    }
    std::cout << env.name << ": S=" << env.mdp.num_states() << " A=" << env.mdp.num_actions()
              << " H=" << env.mdp.horizon() << " s0=" << s0 << "\n";
    std::cout << "V*(s0) = " << qucbvi::format_double(solved.values(0, s0)) << "\n";
    std::cout << "state  V*_0(s)  pi*_0(s)\n";
    for (std::size_t s = 0; s < env.mdp.num_states(); ++s) {
        std::cout << s << "  " << qucbvi::format_double(solved.values(0, s)) << "  "
                  << solved.policy.action(0, s) << "\n";
    }
    return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular episodic RL with simulated quantum mean estimation"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run a seeded batch of agent runs");
    run_cmd->add_option("--env", run.env, "riverswim6 | riverswim12 | gridworld | file:<path>")
        ->required();
    run_cmd->add_option("--algo", run.algorithm, "qucbvi | ucbvi")
        ->transform(CLI::IsMember(keys(kAlgorithms)));
    run_cmd->add_option("--episodes", run.episodes, "Episodes K per run")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--horizon", run.horizon, "Horizon H (default 20, or the file's H)");
    run_cmd->add_option("--delta", run.delta, "Confidence delta (default 1/(K*H))")
        ->check(CLI::Bound(0.0, 1.0));
    run_cmd->add_option("--runs", run.runs, "Independent runs")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Base seed; run i uses seed+i");
    run_cmd->add_option("--bonus-mode", run.bonus_mode, "paper | optimism")
        ->transform(CLI::IsMember(keys(kBonusModes)));
    run_cmd->add_option("--per-call-delta", run.per_call_delta, "top_level | union_bound")
        ->transform(CLI::IsMember(keys(kCallDeltas)));
    run_cmd->add_flag("--inject-failure", run.inject_failure,
                      "Let the estimator fail with probability delta");
    run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
    run_cmd->add_option("--out", run.out, "Output directory")->required();

    PlanOptions plan;
    auto* plan_cmd = app.add_subcommand("plan", "Solve an environment with exact backward induction");
    plan_cmd->add_option("--env", plan.env, "riverswim6 | riverswim12 | gridworld | file:<path>")
        ->required();
    plan_cmd->add_option("--horizon", plan.horizon, "Horizon H (default 20, or the file's H)");
    plan_cmd->add_flag("--print-vstar", plan.print_vstar, "Print only V*(s0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return do_run(run);
        if (*plan_cmd) return do_plan(plan);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return EXIT_FAILURE;
}
