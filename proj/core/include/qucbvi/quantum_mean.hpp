#pragma once

#include <cstdint>

#include "qucbvi/random.hpp"

namespace qucbvi {

/// Bernoulli law of an indicator variable 1[next state == s'].
class IndicatorDistribution {
public:
    /// Throws std::invalid_argument unless 0 <= p_true <= 1.
    explicit IndicatorDistribution(double p_true);

    double p_true() const noexcept { return p_; }
    double stddev() const noexcept;

private:
    double p_;
};

struct EstimateResult {
    double estimate = 0.5;
    double window = 1.0;  ///< guaranteed error half-width
    std::uint64_t samples_used = 0;
    std::uint64_t quantum_experiments = 0;

    friend bool operator==(const EstimateResult&, const EstimateResult&) = default;
};

/// Error half-width of the sub-Gaussian quantum mean estimator after n samples:
/// min(1, sigma * ln(1/delta) / n). Returns 1 for n = 0.
double subgauss_window(double sigma, std::uint64_t n, double delta);

/**
 * Classical stand-in for the quantum sub-Gaussian mean estimator.
 *
 * The estimate is drawn uniformly from [p - w, p + w] with
 * w = subgauss_window(sqrt(p(1-p)), n, delta) and then clipped to [0, 1], so
 * the estimator's success event always holds. With `inject_failure`, the
 * estimator instead returns a uniform [0, 1] value with probability delta.
 *
 * n = 0 returns the uninformative result {0.5, window 1}.
 * Throws std::invalid_argument if delta is not in (0, 1).
 */
EstimateResult simulate_subgauss_estimate(const IndicatorDistribution& dist, std::uint64_t n,
                                          double delta, Rng& rng, bool inject_failure = false);

/// successes / n, or 0 when n = 0. Throws if successes > n.
double classical_mean(std::uint64_t successes, std::uint64_t n);

/// Quantum experiments charged for one estimator call on n samples:
/// ceil(n * max(1, ln n)^{3/2} * max(1, ln ln n)), and n itself for n <= 3.
std::uint64_t quantum_experiment_cost(std::uint64_t n);

}  // namespace qucbvi
