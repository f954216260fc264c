#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qucbvi {

struct RegretRow {
    std::size_t episode = 0;          ///< 1-based
    double realized_return = 0.0;     ///< sum of rewards collected in the episode
    double expected_value = 0.0;      ///< V^{pi_k}_0(s0)
    double regret_increment = 0.0;    ///< V*_0(s0) - V^{pi_k}_0(s0)
    double cumulative_regret = 0.0;
    std::uint64_t cumulative_quantum_experiments = 0;

    friend bool operator==(const RegretRow&, const RegretRow&) = default;
};

/// One row per episode of a single agent run.
struct RegretLog {
    double optimal_value = 0.0;  ///< V*_0(s0)
    std::vector<RegretRow> rows;

    /// Cumulative realized regret k * V* - sum of realized returns, per episode.
    std::vector<double> realized_cumulative_regret() const;

    friend bool operator==(const RegretLog&, const RegretLog&) = default;
};

}  // namespace qucbvi
