#include "qucbvi/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qucbvi/quantum_mean.hpp"

namespace qucbvi {

std::string_view to_string(Algorithm algorithm) noexcept {
    return algorithm == Algorithm::qucbvi ? "qucbvi" : "ucbvi";
}

std::string_view to_string(BonusMode mode) noexcept {
    return mode == BonusMode::paper_literal ? "paper" : "optimism";
}

std::string_view to_string(PerCallDelta mode) noexcept {
    return mode == PerCallDelta::top_level ? "top_level" : "union_bound";
}

double default_delta(std::size_t episodes, std::size_t horizon) {
    return 1.0 / (static_cast<double>(episodes) * static_cast<double>(horizon));
}

void AgentConfig::validate() const {
    if (episodes == 0) throw std::invalid_argument("number of episodes K must be >= 1");
    if (horizon == 0) throw std::invalid_argument("horizon H must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("confidence delta must lie in (0,1)");
    }
}

// ---------------------------------------------------------------------------
// Counts, models, bonuses

CountTables::CountTables(std::size_t horizon, std::size_t num_states, std::size_t num_actions)
    : horizon_(horizon), states_(num_states), actions_(num_actions),
      visits_(horizon * num_states * num_actions, 0),
      transitions_(horizon * num_states * num_actions * num_states, 0) {}

void CountTables::record(std::size_t h, std::size_t s, std::size_t a, std::size_t next) {
    const std::size_t idx = index(h, s, a);
    ++visits_[idx];
    ++transitions_[idx * states_ + next];
}

void CountTables::record(const Trajectory& trajectory) {
    for (std::size_t h = 0; h < trajectory.steps.size(); ++h) {
        const auto& step = trajectory.steps[h];
        record(h, step.state, step.action, step.next_state);
    }
}

EstimatedModel::EstimatedModel(std::size_t horizon, std::size_t num_states,
                               std::size_t num_actions, std::size_t episode_index)
    : episode(episode_index), horizon_(horizon), states_(num_states), actions_(num_actions),
      probs_(horizon * num_states * num_actions * num_states,
             1.0 / static_cast<double>(num_states)) {}

BonusTable::BonusTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions)
    : states_(num_states), actions_(num_actions),
      bonus_(horizon * num_states * num_actions, sentinel()) {}

double BonusTable::sentinel() noexcept { return std::numeric_limits<double>::infinity(); }

bool BonusTable::is_sentinel(std::size_t h, std::size_t s, std::size_t a) const {
    return std::isinf(bonus_[index(h, s, a)]);
}

double confidence_log_term(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                           std::size_t episodes, double delta) {
    const double sahk = static_cast<double>(num_states) * static_cast<double>(num_actions) *
                        static_cast<double>(horizon) * static_cast<double>(episodes);
    return std::log(sahk / delta);
}

EstimatedModel estimate_model_quantum(const CountTables& counts, const TabularMDP& mdp,
                                      const AgentConfig& config, Rng& rng,
                                      std::size_t episode) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    const std::size_t H = mdp.horizon();

    double call_delta = config.delta;
    if (config.per_call_delta == PerCallDelta::union_bound) {
        call_delta /= static_cast<double>(S) * static_cast<double>(A) *
                      static_cast<double>(H) * static_cast<double>(config.episodes);
    }

    EstimatedModel model(H, S, A, episode);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                const std::uint64_t n = counts.visits(h, s, a);
                if (n == 0) continue;
                const auto truth = mdp.transition(h, s, a);
                auto row = model.row(h, s, a);
                for (std::size_t next = 0; next < S; ++next) {
                    const auto result = simulate_subgauss_estimate(
                        IndicatorDistribution(truth[next]), n, call_delta, rng,
                        config.inject_failure);
                    row[next] = result.estimate;
                    model.quantum_experiments += result.quantum_experiments;
                }
            }
        }
    }
    return model;
}

EstimatedModel estimate_model_classical(const CountTables& counts, std::size_t episode) {
    const std::size_t S = counts.num_states();
    EstimatedModel model(counts.horizon(), S, counts.num_actions(), episode);
    for (std::size_t h = 0; h < counts.horizon(); ++h) {
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < counts.num_actions(); ++a) {
                const std::uint64_t n = counts.visits(h, s, a);
                if (n == 0) continue;
                const auto m = counts.transitions(h, s, a);
                auto row = model.row(h, s, a);
                for (std::size_t next = 0; next < S; ++next) row[next] = classical_mean(m[next], n);
            }
        }
    }
    return model;
}

BonusTable compute_bonus(const CountTables& counts, std::size_t num_states,
                         std::size_t num_actions, std::size_t horizon, std::size_t episodes,
                         double delta, BonusMode bonus_mode, Algorithm algorithm) {
    const double L = confidence_log_term(num_states, num_actions, horizon, episodes, delta);
    const double H = static_cast<double>(horizon);
    const double S = static_cast<double>(num_states);

    BonusTable bonus(horizon, num_states, num_actions);
    bonus.log_term = L;
    for (std::size_t h = 0; h < horizon; ++h) {
        for (std::size_t s = 0; s < num_states; ++s) {
            for (std::size_t a = 0; a < num_actions; ++a) {
                const std::uint64_t count = counts.visits(h, s, a);
                if (count == 0) continue;
                const double n = static_cast<double>(count);
                double b = 0.0;
                if (algorithm == Algorithm::ucbvi) {
                    b = H * std::sqrt(L / n);
                } else if (bonus_mode == BonusMode::optimism_guaranteed) {
                    b = H * S * L / n;
                } else {
                    b = L / n;
                }
                bonus(h, s, a) = b;
            }
        }
    }
    return bonus;
}

PlanningResult plan_episode(const EstimatedModel& model, const BonusTable& bonus,
                            const TabularMDP& mdp) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    const std::size_t Hn = mdp.horizon();
    const double H = static_cast<double>(Hn);

    PlanningResult out{ValueTable(Hn, S), QTable(Hn, S, A), PolicyTable(Hn, S)};
    for (std::size_t h = Hn; h-- > 0;) {
        const auto next = out.values.stage(h + 1);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                if (bonus.is_sentinel(h, s, a)) {
                    out.q(h, s, a) = H;
                    continue;
                }
                const auto row = model.row(h, s, a);
                double q = mdp.reward(h, s, a) + bonus(h, s, a);
                for (std::size_t n = 0; n < S; ++n) q += row[n] * next[n];
                out.q(h, s, a) = std::min(H, q);
            }
            const std::size_t best = greedy_action(out.q.row(h, s));
            out.policy.set_action(h, s, best);
            out.values(h, s) = out.q(h, s, best);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Agent

Agent::Agent(TabularMDP mdp, AgentConfig config)
    : mdp_(std::move(mdp)), config_(config),
      counts_(mdp_.horizon(), mdp_.num_states(), mdp_.num_actions()), rng_(config.seed) {
    config_.validate();
    if (config_.horizon != mdp_.horizon()) {
        throw std::invalid_argument("agent horizon " + std::to_string(config_.horizon) +
                                    " does not match MDP horizon " +
                                    std::to_string(mdp_.horizon()));
    }
}

EpisodeRecord Agent::run_episode() {
    EpisodeRecord record;
    record.episode = completed_ + 1;

    if (config_.algorithm == Algorithm::qucbvi) {
        model_ = estimate_model_quantum(counts_, mdp_, config_, rng_, record.episode);
    } else {
        model_ = estimate_model_classical(counts_, record.episode);
    }
    bonus_ = compute_bonus(counts_, mdp_.num_states(), mdp_.num_actions(), mdp_.horizon(),
                           config_.episodes, config_.delta, config_.bonus_mode,
                           config_.algorithm);
    plan_ = plan_episode(*model_, *bonus_, mdp_);

    record.optimistic_value = plan_->values(0, mdp_.start_state());
    record.expected_value = evaluate_policy(mdp_, plan_->policy)(0, mdp_.start_state());
    record.trajectory = rollout(mdp_, plan_->policy, rng_, record.episode);
    record.realized_return = record.trajectory.total_reward();
    record.quantum_experiments = model_->quantum_experiments;

    for (std::size_t h = 0; h < record.trajectory.steps.size(); ++h) {
        const auto& step = record.trajectory.steps[h];
        const auto n = counts_.visits(h, step.state, step.action);
        record.inverse_count_sum += 1.0 / static_cast<double>(std::max<std::uint64_t>(1, n));
    }

    counts_.record(record.trajectory);
    ++completed_;
    return record;
}

RegretLog run_agent(const TabularMDP& mdp, const AgentConfig& config,
                    std::optional<double> optimal_value) {
    RegretLog log;
    log.optimal_value = optimal_value
                            ? *optimal_value
                            : exact_value_iteration(mdp).values(0, mdp.start_state());
    log.rows.reserve(config.episodes);

    Agent agent(mdp, config);
    double cumulative = 0.0;
    std::uint64_t quantum = 0;
    for (std::size_t k = 0; k < config.episodes; ++k) {
        const EpisodeRecord ep = agent.run_episode();
        RegretRow row;
        row.episode = ep.episode;
        row.realized_return = ep.realized_return;
        row.expected_value = ep.expected_value;
        // V^pi <= V*; the clamp only absorbs last-bit rounding.
        row.regret_increment = std::max(0.0, log.optimal_value - ep.expected_value);
        cumulative += row.regret_increment;
        quantum += ep.quantum_experiments;
        row.cumulative_regret = cumulative;
        row.cumulative_quantum_experiments = quantum;
        log.rows.push_back(row);
    }
    return log;
}

std::vector<double> RegretLog::realized_cumulative_regret() const {
    std::vector<double> out;
    out.reserve(rows.size());
    double total = 0.0;
    for (const auto& row : rows) {
        total += optimal_value - row.realized_return;
        out.push_back(total);
    }
    return out;
}

}  // namespace qucbvi
