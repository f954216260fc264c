#include "qucbvi/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qucbvi {

namespace {

// Rows already this close to 1 are left untouched so that a table which went
// through normalization once reloads bit-for-bit.
constexpr double kRenormalizeThreshold = 1e-14;

std::string coords(std::size_t h, std::size_t s, std::size_t a) {
    std::ostringstream out;
    out << "(h=" << h << ", s=" << s << ", a=" << a << ")";
    return out.str();
}

void check_policy(const TabularMDP& mdp, const PolicyTable& policy) {
    if (policy.horizon() != mdp.horizon() || policy.num_states() != mdp.num_states()) {
        throw std::invalid_argument("policy shape does not match the MDP");
    }
    for (std::size_t h = 0; h < mdp.horizon(); ++h) {
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
            if (policy.action(h, s) >= mdp.num_actions()) {
                std::ostringstream out;
                out << "policy action out of range at (h=" << h << ", s=" << s << ")";
                throw std::invalid_argument(out.str());
            }
        }
    }
}

}  // namespace

TabularMDP::TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                       std::size_t start_state, std::vector<double> transitions,
                       std::vector<double> rewards)
    : states_(num_states), actions_(num_actions), horizon_(horizon), start_(start_state),
      transitions_(std::move(transitions)), rewards_(std::move(rewards)) {
    if (states_ == 0 || actions_ == 0 || horizon_ == 0) {
        throw std::invalid_argument("MDP dimensions S, A, H must be positive");
    }
    if (start_ >= states_) {
        throw std::invalid_argument("start state " + std::to_string(start_) +
                                    " is not a valid state index");
    }
    const std::size_t pairs = horizon_ * states_ * actions_;
    if (rewards_.size() != pairs) {
        throw std::invalid_argument("reward table has " + std::to_string(rewards_.size()) +
                                    " entries, expected " + std::to_string(pairs));
    }
    if (transitions_.size() != pairs * states_) {
        throw std::invalid_argument("transition table has " +
                                    std::to_string(transitions_.size()) + " entries, expected " +
                                    std::to_string(pairs * states_));
    }

    for (std::size_t h = 0; h < horizon_; ++h) {
        for (std::size_t s = 0; s < states_; ++s) {
            for (std::size_t a = 0; a < actions_; ++a) {
                const std::size_t idx = sa_index(h, s, a);
                const double r = rewards_[idx];
                if (!(r >= 0.0 && r <= 1.0)) {
                    throw std::invalid_argument("reward outside [0,1] at " + coords(h, s, a));
                }
                double* row = transitions_.data() + idx * states_;
                double sum = 0.0;
                for (std::size_t n = 0; n < states_; ++n) {
                    if (!(row[n] >= 0.0 && row[n] <= 1.0)) {
                        throw std::invalid_argument("transition probability outside [0,1] at " +
                                                    coords(h, s, a));
                    }
                    sum += row[n];
                }
                const double gap = std::abs(sum - 1.0);
                if (gap > kRowSumTolerance) {
                    std::ostringstream out;
                    out << "transition row at " << coords(h, s, a) << " sums to " << sum;
                    throw std::invalid_argument(out.str());
                }
                if (gap > kRenormalizeThreshold) {
                    for (std::size_t n = 0; n < states_; ++n) row[n] /= sum;
                }
            }
        }
    }
}

double Trajectory::total_reward() const noexcept {
    double total = 0.0;
    for (const auto& step : steps) total += step.reward;
    return total;
}

std::size_t greedy_action(std::span<const double> q_row) noexcept {
    std::size_t best = 0;
    for (std::size_t a = 1; a < q_row.size(); ++a) {
        if (q_row[a] > q_row[best]) best = a;
    }
    return best;
}

std::size_t sample_next_state(std::span<const double> probabilities, Rng& rng) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t n = 0; n < probabilities.size(); ++n) {
        if (probabilities[n] <= 0.0) continue;
        cumulative += probabilities[n];
        last_positive = n;
        if (u < cumulative) return n;
    }
    // Rounding left u above the final partial sum.
    return last_positive;
}

PlanningResult exact_value_iteration(const TabularMDP& mdp) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    const std::size_t H = mdp.horizon();

    PlanningResult out{ValueTable(H, S), QTable(H, S, A), PolicyTable(H, S)};
    for (std::size_t h = H; h-- > 0;) {
        const auto next = out.values.stage(h + 1);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                const auto row = mdp.transition(h, s, a);
                double q = mdp.reward(h, s, a);
                for (std::size_t n = 0; n < S; ++n) q += row[n] * next[n];
                out.q(h, s, a) = q;
            }
            const std::size_t best = greedy_action(out.q.row(h, s));
            out.policy.set_action(h, s, best);
            out.values(h, s) = out.q(h, s, best);
        }
    }
    return out;
}

ValueTable evaluate_policy(const TabularMDP& mdp, const PolicyTable& policy) {
    check_policy(mdp, policy);
    const std::size_t S = mdp.num_states();
    const std::size_t H = mdp.horizon();

    ValueTable values(H, S);
    for (std::size_t h = H; h-- > 0;) {
        const auto next = values.stage(h + 1);
        for (std::size_t s = 0; s < S; ++s) {
            const std::size_t a = policy.action(h, s);
            const auto row = mdp.transition(h, s, a);
            double v = mdp.reward(h, s, a);
            for (std::size_t n = 0; n < S; ++n) v += row[n] * next[n];
            values(h, s) = v;
        }
    }
    return values;
}

Trajectory rollout(const TabularMDP& mdp, const PolicyTable& policy, Rng& rng,
                   std::size_t episode) {
    check_policy(mdp, policy);
    Trajectory traj;
    traj.episode = episode;
    traj.steps.reserve(mdp.horizon());

    std::size_t s = mdp.start_state();
    for (std::size_t h = 0; h < mdp.horizon(); ++h) {
        const std::size_t a = policy.action(h, s);
        const std::size_t next = sample_next_state(mdp.transition(h, s, a), rng);
        traj.steps.push_back({s, a, mdp.reward(h, s, a), next});
        s = next;
    }
    return traj;
}

}  // namespace qucbvi
