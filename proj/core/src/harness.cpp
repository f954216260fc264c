#include "qucbvi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace qucbvi {

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

}  // namespace

void aggregate_regret(const std::vector<RegretLog>& logs, std::vector<double>& mean,
                      std::vector<double>& stddev) {
    mean.clear();
    stddev.clear();
    if (logs.empty()) return;
    const std::size_t episodes = logs.front().rows.size();
    for (const auto& log : logs) {
        if (log.rows.size() != episodes) {
            throw std::invalid_argument("regret logs have different episode counts");
        }
    }
    const double runs = static_cast<double>(logs.size());
    mean.resize(episodes);
    stddev.resize(episodes);
    for (std::size_t k = 0; k < episodes; ++k) {
        double sum = 0.0;
        for (const auto& log : logs) sum += log.rows[k].cumulative_regret;
        const double m = sum / runs;
        double ss = 0.0;
        for (const auto& log : logs) {
            const double d = log.rows[k].cumulative_regret - m;
            ss += d * d;
        }
        mean[k] = m;
        stddev[k] = logs.size() > 1 ? std::sqrt(ss / (runs - 1.0)) : 0.0;
    }
}

BatchResult run_batch(const EnvironmentSpec& env, const AgentConfig& config, std::size_t runs,
                      std::uint64_t base_seed, std::size_t threads) {
    if (runs == 0) throw std::invalid_argument("batch needs at least one run");
    config.validate();

    const auto started = std::chrono::steady_clock::now();

    BatchResult batch;
    batch.environment = env.name;
    batch.config = config;
    batch.config.seed = base_seed;
    batch.base_seed = base_seed;
    batch.optimal_value = exact_value_iteration(env.mdp).values(0, env.mdp.start_state());
    batch.seeds.resize(runs);
    for (std::size_t i = 0; i < runs; ++i) batch.seeds[i] = base_seed + i;
    batch.logs.resize(runs);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, runs);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            try {
                AgentConfig run_config = config;
                run_config.seed = batch.seeds[i];
                batch.logs[i] = run_agent(env.mdp, run_config, batch.optimal_value);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    aggregate_regret(batch.logs, batch.mean_cumulative_regret, batch.std_cumulative_regret);
    batch.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return batch;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string runs_csv(const BatchResult& batch) {
    std::string out(kRunsCsvHeader);
    out += '\n';
    for (std::size_t run = 0; run < batch.logs.size(); ++run) {
        for (const auto& row : batch.logs[run].rows) {
            out += std::to_string(run);
            out += ',';
            out += std::to_string(row.episode);
            out += ',';
            out += format_double(row.realized_return);
            out += ',';
            out += format_double(row.expected_value);
            out += ',';
            out += format_double(row.regret_increment);
            out += ',';
            out += format_double(row.cumulative_regret);
            out += ',';
            out += std::to_string(row.cumulative_quantum_experiments);
            out += '\n';
        }
    }
    return out;
}

std::string aggregate_csv(const BatchResult& batch) {
    std::string out(kAggregateCsvHeader);
    out += '\n';
    for (std::size_t k = 0; k < batch.mean_cumulative_regret.size(); ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_double(batch.mean_cumulative_regret[k]);
        out += ',';
        out += format_double(batch.std_cumulative_regret[k]);
        out += '\n';
    }
    return out;
}

std::string summary_json(const BatchResult& batch) {
    using nlohmann::ordered_json;
    std::uint64_t quantum_total = 0;
    for (const auto& log : batch.logs) {
        if (!log.rows.empty()) quantum_total += log.rows.back().cumulative_quantum_experiments;
    }
    const bool has_rows = !batch.mean_cumulative_regret.empty();

    ordered_json doc;
    doc["environment"] = batch.environment;
    doc["optimal_value"] = batch.optimal_value;
    doc["runs"] = batch.logs.size();
    doc["episodes"] = batch.config.episodes;
    doc["final_mean_cumulative_regret"] = has_rows ? batch.mean_cumulative_regret.back() : 0.0;
    doc["final_std_cumulative_regret"] = has_rows ? batch.std_cumulative_regret.back() : 0.0;
    doc["total_quantum_experiments"] = quantum_total;
    doc["config"] = {{"algorithm", std::string(to_string(batch.config.algorithm))},
                     {"episodes", batch.config.episodes},
                     {"horizon", batch.config.horizon},
                     {"delta", batch.config.delta},
                     {"bonus_mode", std::string(to_string(batch.config.bonus_mode))},
                     {"per_call_delta", std::string(to_string(batch.config.per_call_delta))},
                     {"inject_failure", batch.config.inject_failure},
                     {"base_seed", batch.base_seed}};
    doc["seeds"] = batch.seeds;
    doc["wall_clock_seconds"] = batch.wall_clock_seconds;
    return doc.dump(2) + "\n";
}

void write_results(const BatchResult& batch, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());
    }
    write_atomically(out_dir / "runs.csv", runs_csv(batch));
    write_atomically(out_dir / "aggregate.csv", aggregate_csv(batch));
    write_atomically(out_dir / "summary.json", summary_json(batch));
}

}  // namespace qucbvi
