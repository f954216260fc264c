#include "qucbvi/quantum_mean.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qucbvi {

IndicatorDistribution::IndicatorDistribution(double p_true) : p_(p_true) {
    if (!(p_true >= 0.0 && p_true <= 1.0)) {
        throw std::invalid_argument("indicator mean must lie in [0,1]");
    }
}

double IndicatorDistribution::stddev() const noexcept { return std::sqrt(p_ * (1.0 - p_)); }

double subgauss_window(double sigma, std::uint64_t n, double delta) {
    if (n == 0) return 1.0;
    return std::min(1.0, sigma * std::log(1.0 / delta) / static_cast<double>(n));
}

EstimateResult simulate_subgauss_estimate(const IndicatorDistribution& dist, std::uint64_t n,
                                          double delta, Rng& rng, bool inject_failure) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("estimator confidence delta must lie in (0,1)");
    }
    EstimateResult result;
    result.samples_used = n;
    result.quantum_experiments = quantum_experiment_cost(n);
    if (n == 0) return result;

    const double p = dist.p_true();
    const double w = subgauss_window(dist.stddev(), n, delta);
    result.window = w;

    if (inject_failure && uniform01(rng) < delta) {
        result.estimate = uniform01(rng);
        return result;
    }
    if (w == 0.0) {
        result.estimate = p;
        return result;
    }

    double est = p + w * (2.0 * uniform01(rng) - 1.0);
    // p + x can round to one ulp outside the window.
    while (std::abs(est - p) > w) est = std::nextafter(est, p);
    result.estimate = std::clamp(est, 0.0, 1.0);
    return result;
}

double classical_mean(std::uint64_t successes, std::uint64_t n) {
    if (successes > n) {
        throw std::invalid_argument("success count exceeds sample count");
    }
    if (n == 0) return 0.0;
    return static_cast<double>(successes) / static_cast<double>(n);
}

std::uint64_t quantum_experiment_cost(std::uint64_t n) {
    if (n <= 3) return n;
    const double x = static_cast<double>(n);
    const double log_n = std::max(1.0, std::log(x));
    const double log_log_n = std::max(1.0, std::log(std::log(x)));
    return static_cast<std::uint64_t>(std::ceil(x * std::pow(log_n, 1.5) * log_log_n));
}

}  // namespace qucbvi
