#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qucbvi/quantum_mean.hpp"

using namespace qucbvi;

TEST_SUITE("quantum_mean") {

TEST_CASE("degenerate indicators are estimated exactly") {
    Rng rng(1);
    for (std::uint64_t n : {1u, 2u, 17u, 1000u}) {
        CHECK(simulate_subgauss_estimate(IndicatorDistribution(0.0), n, 0.05, rng).estimate == 0.0);
        CHECK(simulate_subgauss_estimate(IndicatorDistribution(1.0), n, 0.05, rng).estimate == 1.0);
    }
}

TEST_CASE("window for p = 0.5, n = 100, delta = 0.01") {
    Rng rng(2);
    // 0.5 * ln(100) / 100
    constexpr double kWindow = 0.02302585092994046;
    for (int i = 0; i < 200; ++i) {
        const auto res = simulate_subgauss_estimate(IndicatorDistribution(0.5), 100, 0.01, rng);
        CHECK(res.window == doctest::Approx(kWindow).epsilon(1e-12));
        CHECK(res.estimate >= 0.5 - kWindow);
        CHECK(res.estimate <= 0.5 + kWindow);
        CHECK(res.samples_used == 100);
        CHECK(res.quantum_experiments == quantum_experiment_cost(100));
    }
}

TEST_CASE("n = 0 is uninformative") {
    Rng rng(3);
    const auto res = simulate_subgauss_estimate(IndicatorDistribution(0.2), 0, 0.1, rng);
    CHECK(res.estimate == 0.5);
    CHECK(res.window == 1.0);
    CHECK(res.quantum_experiments == 0);
}

TEST_CASE("small n: window capped at 1 and estimate clipped to [0,1]") {
    Rng rng(4);
    // ln(1/1e-6) ~ 13.8 > n, so the raw window exceeds 1 for p = 0.5.
    for (int i = 0; i < 100; ++i) {
        const auto res = simulate_subgauss_estimate(IndicatorDistribution(0.5), 2, 1e-6, rng);
        CHECK(res.window == 1.0);
        CHECK(res.estimate >= 0.0);
        CHECK(res.estimate <= 1.0);
    }
}

TEST_CASE("argument validation") {
    Rng rng(5);
    const IndicatorDistribution d(0.4);
    CHECK_THROWS_AS(simulate_subgauss_estimate(d, 10, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate_subgauss_estimate(d, 10, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate_subgauss_estimate(d, 10, -0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(IndicatorDistribution(1.5), std::invalid_argument);
    CHECK_THROWS_AS(IndicatorDistribution(-0.01), std::invalid_argument);
}

TEST_CASE("window soundness over random triples") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> count(1, 100000);
    Rng rng(7);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const double p = unit(gen);
        const std::uint64_t n = count(gen);
        const double delta = std::max(1e-12, unit(gen));
        const auto res = simulate_subgauss_estimate(IndicatorDistribution(p), n, delta, rng);
        const double bound = std::sqrt(p * (1.0 - p)) * std::log(1.0 / delta) / static_cast<double>(n);
        if (std::abs(res.estimate - p) > bound) ++violations;
        if (res.estimate < 0.0 || res.estimate > 1.0) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("quantum window shrinks as 1/n, classical as 1/sqrt(n)") {
    constexpr double delta = 0.01;
    const double sigma = 0.5;
    const double ref = subgauss_window(sigma, 1000, delta) * 1000.0;
    for (std::uint64_t n : {1000u, 4000u, 16000u, 64000u}) {
        const double nd = static_cast<double>(n);
        CHECK(subgauss_window(sigma, n, delta) * nd == doctest::Approx(ref).epsilon(1e-12));
        const double hoeffding = std::sqrt(std::log(2.0 / delta) / (2.0 * nd));
        CHECK(hoeffding * std::sqrt(nd) ==
              doctest::Approx(std::sqrt(std::log(2.0 / delta) / 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("determinism") {
    const IndicatorDistribution d(0.37);
    Rng a(99), b(99);
    for (int i = 0; i < 50; ++i) {
        CHECK(simulate_subgauss_estimate(d, 50 + i, 0.01, a) ==
              simulate_subgauss_estimate(d, 50 + i, 0.01, b));
    }
}

TEST_CASE("failure injection leaves the window with probability about delta") {
    const IndicatorDistribution d(0.5);
    constexpr double delta = 0.3;
    Rng rng(10);
    int outside = 0;
    int outside_clean = 0;
    constexpr int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
        const auto res = simulate_subgauss_estimate(d, 1000, delta, rng, true);
        outside += std::abs(res.estimate - 0.5) > res.window;
        const auto clean = simulate_subgauss_estimate(d, 1000, delta, rng, false);
        outside_clean += std::abs(clean.estimate - 0.5) > clean.window;
    }
    // Window ~6e-4, so a failed draw lands outside it with probability ~0.999.
    const double rate = static_cast<double>(outside) / kDraws;
    CHECK(rate > 0.27);
    CHECK(rate < 0.33);
    CHECK(outside_clean == 0);
}

TEST_CASE("classical_mean") {
    CHECK(classical_mean(0, 10) == 0.0);
    CHECK(classical_mean(10, 10) == 1.0);
    CHECK(classical_mean(3, 12) == 0.25);
    CHECK(classical_mean(0, 0) == 0.0);
    CHECK_THROWS_AS(classical_mean(4, 3), std::invalid_argument);
}

TEST_CASE("quantum_experiment_cost") {
    CHECK(quantum_experiment_cost(0) == 0);
    CHECK(quantum_experiment_cost(1) == 1);
    CHECK(quantum_experiment_cost(2) == 2);
    CHECK(quantum_experiment_cost(3) == 3);
    // ceil(16 * ln(16)^1.5 * ln(ln(16))) = ceil(75.32)
    CHECK(quantum_experiment_cost(16) == 76);

    std::uint64_t prev = 0;
    bool monotone = true;
    for (std::uint64_t n = 0; n <= 200000; ++n) {
        const std::uint64_t c = quantum_experiment_cost(n);
        if (c < prev) monotone = false;
        prev = c;
    }
    CHECK(monotone);
}

}  // TEST_SUITE
