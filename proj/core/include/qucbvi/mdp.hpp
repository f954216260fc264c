#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qucbvi/random.hpp"

namespace qucbvi {

/// Tolerance for the transition row-sum check.
inline constexpr double kRowSumTolerance = 1e-9;

/**
 * Finite-horizon tabular MDP with stage-dependent dynamics and a fixed start
 * state.
 *
 * Transitions are stored densely as [h][s][a][s'] and rewards as [h][s][a].
 * A stochastic start distribution can be reduced to this form by adding a
 * dummy start state whose single action draws from that distribution (and
 * increasing the horizon by one).
 *
 * The constructor validates every row. A row whose sum is within
 * kRowSumTolerance of 1 is renormalized; anything else throws
 * std::invalid_argument naming the (h, s, a) coordinates.
 */
class TabularMDP {
public:
    TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
               std::size_t start_state, std::vector<double> transitions,
               std::vector<double> rewards);

    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }
    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t start_state() const noexcept { return start_; }

    std::span<const double> transition(std::size_t h, std::size_t s, std::size_t a) const {
        return {transitions_.data() + sa_index(h, s, a) * states_, states_};
    }
    double transition(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
        return transitions_[sa_index(h, s, a) * states_ + next];
    }
    double reward(std::size_t h, std::size_t s, std::size_t a) const {
        return rewards_[sa_index(h, s, a)];
    }

    /// Flat [h][s][a][s'] table.
    const std::vector<double>& transition_table() const noexcept { return transitions_; }
    /// Flat [h][s][a] table.
    const std::vector<double>& reward_table() const noexcept { return rewards_; }

    std::size_t sa_index(std::size_t h, std::size_t s, std::size_t a) const noexcept {
        return (h * states_ + s) * actions_ + a;
    }

    friend bool operator==(const TabularMDP&, const TabularMDP&) = default;

private:
    std::size_t states_;
    std::size_t actions_;
    std::size_t horizon_;
    std::size_t start_;
    std::vector<double> transitions_;
    std::vector<double> rewards_;
};

/// Deterministic Markov policy, one action per (h, s) with h in [0, H).
class PolicyTable {
public:
    PolicyTable(std::size_t horizon, std::size_t num_states, std::size_t fill_action = 0)
        : horizon_(horizon), states_(num_states), actions_(horizon * num_states, fill_action) {}

    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t num_states() const noexcept { return states_; }

    std::size_t action(std::size_t h, std::size_t s) const { return actions_[h * states_ + s]; }
    void set_action(std::size_t h, std::size_t s, std::size_t a) { actions_[h * states_ + s] = a; }

    friend bool operator==(const PolicyTable&, const PolicyTable&) = default;

private:
    std::size_t horizon_;
    std::size_t states_;
    std::vector<std::size_t> actions_;
};

/// V(h, s) for h in [0, H]; row H is the terminal boundary and stays 0.
class ValueTable {
public:
    ValueTable(std::size_t horizon, std::size_t num_states)
        : horizon_(horizon), states_(num_states), values_((horizon + 1) * num_states, 0.0) {}

    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t num_states() const noexcept { return states_; }

    double operator()(std::size_t h, std::size_t s) const { return values_[h * states_ + s]; }
    double& operator()(std::size_t h, std::size_t s) { return values_[h * states_ + s]; }

    std::span<const double> stage(std::size_t h) const {
        return {values_.data() + h * states_, states_};
    }

    friend bool operator==(const ValueTable&, const ValueTable&) = default;

private:
    std::size_t horizon_;
    std::size_t states_;
    std::vector<double> values_;
};

/// Q(h, s, a) for h in [0, H).
class QTable {
public:
    QTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions)
        : horizon_(horizon), states_(num_states), actions_(num_actions),
          values_(horizon * num_states * num_actions, 0.0) {}

    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }

    double operator()(std::size_t h, std::size_t s, std::size_t a) const {
        return values_[(h * states_ + s) * actions_ + a];
    }
    double& operator()(std::size_t h, std::size_t s, std::size_t a) {
        return values_[(h * states_ + s) * actions_ + a];
    }

    std::span<const double> row(std::size_t h, std::size_t s) const {
        return {values_.data() + (h * states_ + s) * actions_, actions_};
    }

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t horizon_;
    std::size_t states_;
    std::size_t actions_;
    std::vector<double> values_;
};

struct TrajectoryStep {
    std::size_t state;
    std::size_t action;
    double reward;
    std::size_t next_state;

    friend bool operator==(const TrajectoryStep&, const TrajectoryStep&) = default;
};

struct Trajectory {
    std::size_t episode = 0;
    std::vector<TrajectoryStep> steps;

    double total_reward() const noexcept;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct PlanningResult {
    ValueTable values;
    QTable q;
    PolicyTable policy;
};

/// Index of the largest entry; ties go to the lowest index.
std::size_t greedy_action(std::span<const double> q_row) noexcept;

/// Inverse-CDF draw of a next state from a probability row.
std::size_t sample_next_state(std::span<const double> probabilities, Rng& rng);

/// Backward induction with the true dynamics: V*, Q* and the greedy policy.
PlanningResult exact_value_iteration(const TabularMDP& mdp);

/// Exact value of a fixed policy by backward induction.
ValueTable evaluate_policy(const TabularMDP& mdp, const PolicyTable& policy);

/// One episode of H steps from the start state following `policy`.
Trajectory rollout(const TabularMDP& mdp, const PolicyTable& policy, Rng& rng,
                   std::size_t episode = 0);

}  // namespace qucbvi
