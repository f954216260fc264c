#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qucbvi/mdp.hpp"
#include "qucbvi/random.hpp"
#include "qucbvi/regret.hpp"

namespace qucbvi {

enum class Algorithm { qucbvi, ucbvi };

/// paper_literal: b = L / N. optimism_guaranteed: b = H * S * L / N, the size
/// the optimism argument needs. Ignored by the classical agent.
enum class BonusMode { paper_literal, optimism_guaranteed };

/// Confidence handed to each estimator call: delta itself, or delta / (SAHK).
enum class PerCallDelta { top_level, union_bound };

std::string_view to_string(Algorithm algorithm) noexcept;
std::string_view to_string(BonusMode mode) noexcept;
std::string_view to_string(PerCallDelta mode) noexcept;

/// delta = 1 / (K * H).
double default_delta(std::size_t episodes, std::size_t horizon);

struct AgentConfig {
    Algorithm algorithm = Algorithm::qucbvi;
    std::size_t episodes = 10000;
    std::size_t horizon = 20;
    double delta = 5e-6;
    BonusMode bonus_mode = BonusMode::optimism_guaranteed;
    PerCallDelta per_call_delta = PerCallDelta::top_level;
    bool inject_failure = false;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on K = 0, H = 0 or delta outside (0, 1).
    void validate() const;
};

/// Visit counts N(h,s,a) and transition counts M(h,s,a,s').
class CountTables {
public:
    CountTables(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }

    std::uint64_t visits(std::size_t h, std::size_t s, std::size_t a) const {
        return visits_[index(h, s, a)];
    }
    std::span<const std::uint64_t> transitions(std::size_t h, std::size_t s,
                                               std::size_t a) const {
        return {transitions_.data() + index(h, s, a) * states_, states_};
    }

    void record(std::size_t h, std::size_t s, std::size_t a, std::size_t next);
    void record(const Trajectory& trajectory);

    friend bool operator==(const CountTables&, const CountTables&) = default;

private:
    std::size_t index(std::size_t h, std::size_t s, std::size_t a) const noexcept {
        return (h * states_ + s) * actions_ + a;
    }

    std::size_t horizon_;
    std::size_t states_;
    std::size_t actions_;
    std::vector<std::uint64_t> visits_;
    std::vector<std::uint64_t> transitions_;
};

/// Per-entry transition estimate. Rows need not sum to one.
class EstimatedModel {
public:
    EstimatedModel(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                   std::size_t episode = 0);

    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }

    std::size_t episode = 0;
    /// Quantum experiments charged while building this model.
    std::uint64_t quantum_experiments = 0;

    std::span<const double> row(std::size_t h, std::size_t s, std::size_t a) const {
        return {probs_.data() + index(h, s, a) * states_, states_};
    }
    std::span<double> row(std::size_t h, std::size_t s, std::size_t a) {
        return {probs_.data() + index(h, s, a) * states_, states_};
    }

private:
    std::size_t index(std::size_t h, std::size_t s, std::size_t a) const noexcept {
        return (h * states_ + s) * actions_ + a;
    }

    std::size_t horizon_;
    std::size_t states_;
    std::size_t actions_;
    std::vector<double> probs_;
};

/// Exploration bonus per (h,s,a). Unvisited pairs hold the sentinel, which
/// forces the optimistic Q-value to H.
class BonusTable {
public:
    BonusTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

    double operator()(std::size_t h, std::size_t s, std::size_t a) const {
        return bonus_[index(h, s, a)];
    }
    double& operator()(std::size_t h, std::size_t s, std::size_t a) {
        return bonus_[index(h, s, a)];
    }
    bool is_sentinel(std::size_t h, std::size_t s, std::size_t a) const;

    /// Log term L = ln(SAHK / delta) the bonuses were built from.
    double log_term = 0.0;

    static double sentinel() noexcept;

private:
    std::size_t index(std::size_t h, std::size_t s, std::size_t a) const noexcept {
        return (h * states_ + s) * actions_ + a;
    }

    std::size_t states_;
    std::size_t actions_;
    std::vector<double> bonus_;
};

/// L = ln(S * A * H * K / delta).
double confidence_log_term(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                           std::size_t episodes, double delta);

/// P-hat from the simulated quantum estimator, one call per (h,s,a,s') with
/// N(h,s,a) >= 1. Unvisited rows are 1/S.
EstimatedModel estimate_model_quantum(const CountTables& counts, const TabularMDP& mdp,
                                      const AgentConfig& config, Rng& rng,
                                      std::size_t episode = 0);

/// Empirical model M / N. Unvisited rows are 1/S.
EstimatedModel estimate_model_classical(const CountTables& counts, std::size_t episode = 0);

BonusTable compute_bonus(const CountTables& counts, std::size_t num_states,
                         std::size_t num_actions, std::size_t horizon, std::size_t episodes,
                         double delta, BonusMode bonus_mode,
                         Algorithm algorithm = Algorithm::qucbvi);

/// Optimistic backward sweep Q = min(H, r + <V_{h+1}, P-hat> + b), V = max_a Q,
/// greedy policy with lowest-index ties.
PlanningResult plan_episode(const EstimatedModel& model, const BonusTable& bonus,
                            const TabularMDP& mdp);

struct EpisodeRecord {
    std::size_t episode = 0;  ///< 1-based
    Trajectory trajectory;
    double realized_return = 0.0;
    double expected_value = 0.0;    ///< V^{pi_k}_0(s0) under the true dynamics
    double optimistic_value = 0.0;  ///< V-hat_0(s0)
    /// sum_h 1 / max(1, N_h(s_h, a_h)) with the counts the episode planned with.
    double inverse_count_sum = 0.0;
    std::uint64_t quantum_experiments = 0;
};

/**
 * Episode-by-episode learner. Each call to run_episode() re-estimates the
 * model from the current counts, computes bonuses, plans optimistically,
 * rolls out the greedy policy on the true MDP and then records the
 * trajectory into the counts.
 *
 * last_model(), last_bonus() and last_plan() describe the most recent
 * episode and are empty before the first one.
 */
class Agent {
public:
    Agent(TabularMDP mdp, AgentConfig config);

    EpisodeRecord run_episode();

    std::size_t episodes_completed() const noexcept { return completed_; }
    const TabularMDP& mdp() const noexcept { return mdp_; }
    const AgentConfig& config() const noexcept { return config_; }
    const CountTables& counts() const noexcept { return counts_; }
    const std::optional<EstimatedModel>& last_model() const noexcept { return model_; }
    const std::optional<BonusTable>& last_bonus() const noexcept { return bonus_; }
    const std::optional<PlanningResult>& last_plan() const noexcept { return plan_; }

private:
    TabularMDP mdp_;
    AgentConfig config_;
    CountTables counts_;
    Rng rng_;
    std::size_t completed_ = 0;
    std::optional<EstimatedModel> model_;
    std::optional<BonusTable> bonus_;
    std::optional<PlanningResult> plan_;
};

/// Runs config.episodes episodes and logs regret against `optimal_value`
/// (computed with exact_value_iteration when not supplied).
RegretLog run_agent(const TabularMDP& mdp, const AgentConfig& config,
                    std::optional<double> optimal_value = std::nullopt);

}  // namespace qucbvi
