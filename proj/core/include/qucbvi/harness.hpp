#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qucbvi/agents.hpp"
#include "qucbvi/environments.hpp"
#include "qucbvi/regret.hpp"

namespace qucbvi {

/// Header of the per-run CSV.
inline constexpr std::string_view kRunsCsvHeader =
    "run,episode,realized_return,expected_value,regret_increment,cumulative_regret,"
    "quantum_experiments";
/// Header of the aggregate CSV.
inline constexpr std::string_view kAggregateCsvHeader =
    "episode,mean_cum_regret,std_cum_regret";

struct BatchResult {
    std::string environment;
    AgentConfig config;  ///< seed field holds the base seed
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> seeds;
    double optimal_value = 0.0;
    std::vector<RegretLog> logs;  ///< indexed by run
    /// Per-episode mean and sample standard deviation (n - 1 denominator, 0
    /// for a single run) of the cumulative expected regret across runs.
    std::vector<double> mean_cumulative_regret;
    std::vector<double> std_cumulative_regret;
    double wall_clock_seconds = 0.0;
};

/// Mean and sample standard deviation per episode over the runs' cumulative regret.
void aggregate_regret(const std::vector<RegretLog>& logs, std::vector<double>& mean,
                      std::vector<double>& stddev);

/**
 * Runs `runs` independent agents; run i uses seed base_seed + i. V*(s0) is
 * computed once for the environment. Runs are spread over `threads` workers
 * (0 picks the hardware concurrency); results do not depend on the thread
 * count. If any run throws, the exception propagates and no result is built.
 */
BatchResult run_batch(const EnvironmentSpec& env, const AgentConfig& config, std::size_t runs,
                      std::uint64_t base_seed, std::size_t threads = 0);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

std::string runs_csv(const BatchResult& batch);
std::string aggregate_csv(const BatchResult& batch);
std::string summary_json(const BatchResult& batch);

/// Writes runs.csv, aggregate.csv and summary.json into out_dir (created if
/// needed). Each file is written to a temporary name and renamed into place.
/// Throws std::runtime_error naming the path on I/O failure.
void write_results(const BatchResult& batch, const std::filesystem::path& out_dir);

}  // namespace qucbvi
