#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qucbvi/mdp.hpp"
#include "support/oracles.hpp"

using namespace qucbvi;

namespace {

TabularMDP constant_reward_mdp(std::size_t S, std::size_t A, std::size_t H, double reward) {
    std::vector<double> P(H * S * A * S, 1.0 / static_cast<double>(S));
    std::vector<double> r(H * S * A, reward);
    return TabularMDP(S, A, H, 0, std::move(P), std::move(r));
}

TabularMDP with_rewards(const TabularMDP& mdp, std::vector<double> rewards) {
    return TabularMDP(mdp.num_states(), mdp.num_actions(), mdp.horizon(), mdp.start_state(),
                      mdp.transition_table(), std::move(rewards));
}

// Two states, one action; from state 0 go to state 1 w.p. p.
TabularMDP two_state_chain(double p, std::size_t H) {
    std::vector<double> P;
    for (std::size_t h = 0; h < H; ++h) {
        P.insert(P.end(), {1.0 - p, p, 0.0, 1.0});
    }
    return TabularMDP(2, 1, H, 0, std::move(P), std::vector<double>(2 * H, 0.0));
}

}  // namespace

TEST_SUITE("mdp_core") {

TEST_CASE("constructor validation") {
    SUBCASE("row summing to 0.9 is rejected with coordinates") {
        std::vector<double> P{1.0, 0.0, 0.5, 0.4};
        try {
            TabularMDP(2, 1, 1, 0, P, {0.0, 0.0});
            FAIL("expected rejection");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("(h=0, s=1, a=0)") != std::string::npos);
        }
    }
    SUBCASE("reward outside [0,1]") {
        CHECK_THROWS_AS(TabularMDP(1, 1, 1, 0, {1.0}, {1.5}), std::invalid_argument);
        CHECK_THROWS_AS(TabularMDP(1, 1, 1, 0, {1.0}, {-0.1}), std::invalid_argument);
    }
    SUBCASE("negative probability") {
        CHECK_THROWS_AS(TabularMDP(2, 1, 1, 0, {1.2, -0.2, 0.0, 1.0}, {0.0, 0.0}),
                        std::invalid_argument);
    }
    SUBCASE("bad start state and shapes") {
        CHECK_THROWS_AS(TabularMDP(1, 1, 1, 1, {1.0}, {0.0}), std::invalid_argument);
        CHECK_THROWS_AS(TabularMDP(1, 1, 1, 0, {1.0, 0.0}, {0.0}), std::invalid_argument);
        CHECK_THROWS_AS(TabularMDP(0, 1, 1, 0, {}, {}), std::invalid_argument);
    }
    SUBCASE("rows within tolerance are renormalized") {
        TabularMDP mdp(2, 1, 1, 0, {0.5 + 4e-10, 0.5, 0.0, 1.0}, {0.0, 0.0});
        const auto row = mdp.transition(0, 0, 0);
        CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(row[0] > row[1]);
    }
}

TEST_CASE("exact_value_iteration closed forms") {
    SUBCASE("single state, reward one: V* = H") {
        for (std::size_t H : {1u, 5u, 20u}) {
            const auto mdp = constant_reward_mdp(1, 1, H, 1.0);
            const auto out = exact_value_iteration(mdp);
            CHECK(out.values(0, 0) == doctest::Approx(static_cast<double>(H)));
        }
    }
    SUBCASE("zero rewards: V* and Q* vanish") {
        const auto mdp = constant_reward_mdp(3, 2, 4, 0.0);
        const auto out = exact_value_iteration(mdp);
        for (std::size_t h = 0; h <= 4; ++h)
            for (std::size_t s = 0; s < 3; ++s) CHECK(out.values(h, s) == 0.0);
        for (std::size_t h = 0; h < 4; ++h)
            for (std::size_t s = 0; s < 3; ++s)
                for (std::size_t a = 0; a < 2; ++a) CHECK(out.q(h, s, a) == 0.0);
    }
    SUBCASE("ties go to the lowest action index") {
        const auto mdp = constant_reward_mdp(2, 3, 2, 0.5);
        const auto out = exact_value_iteration(mdp);
        for (std::size_t h = 0; h < 2; ++h)
            for (std::size_t s = 0; s < 2; ++s) CHECK(out.policy.action(h, s) == 0);
    }
}

TEST_CASE("exact_value_iteration matches brute-force policy enumeration") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto mdp = testing::random_mdp(2, 2, 2, rng);
        const auto out = exact_value_iteration(mdp);
        CHECK(out.values(0, mdp.start_state()) ==
              doctest::Approx(testing::brute_force_optimal_value(mdp)).epsilon(1e-12));
    }
    // A slightly larger instance: 2^(3*3) = 512 policies.
    const auto mdp = testing::random_mdp(3, 2, 3, rng);
    CHECK(exact_value_iteration(mdp).values(0, 0) ==
          doctest::Approx(testing::brute_force_optimal_value(mdp)).epsilon(1e-12));
}

TEST_CASE("evaluate_policy") {
    std::mt19937_64 rng(3);
    const auto mdp = testing::random_mdp(4, 3, 5, rng);
    const auto opt = exact_value_iteration(mdp);

    SUBCASE("optimal policy reproduces V*") {
        const auto v = evaluate_policy(mdp, opt.policy);
        for (std::size_t h = 0; h <= 5; ++h)
            for (std::size_t s = 0; s < 4; ++s)
                CHECK(v(h, s) == doctest::Approx(opt.values(h, s)).epsilon(1e-9));
    }
    SUBCASE("zero rewards") {
        const auto zero = with_rewards(mdp, std::vector<double>(5 * 4 * 3, 0.0));
        const auto v = evaluate_policy(zero, testing::random_policy(zero, rng));
        for (std::size_t s = 0; s < 4; ++s) CHECK(v(0, s) == 0.0);
    }
    SUBCASE("agrees with path enumeration") {
        const auto policy = testing::random_policy(mdp, rng);
        const auto v = evaluate_policy(mdp, policy);
        for (std::size_t s = 0; s < 4; ++s)
            CHECK(v(0, s) == doctest::Approx(testing::path_value(mdp, policy, 0, s)));
    }
    SUBCASE("rejects out-of-range actions and shape mismatch") {
        PolicyTable bad(5, 4, 3);
        CHECK_THROWS_AS(evaluate_policy(mdp, bad), std::invalid_argument);
        CHECK_THROWS_AS(evaluate_policy(mdp, PolicyTable(4, 4)), std::invalid_argument);
    }
}

TEST_CASE("evaluate_policy matches Monte-Carlo rollouts") {
    std::mt19937_64 gen(19);
    const auto mdp = testing::random_mdp(2, 2, 3, gen);
    const auto policy = testing::random_policy(mdp, gen);
    const double exact = evaluate_policy(mdp, policy)(0, 0);

    Rng rng(1234);
    constexpr int kEpisodes = 1'000'000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < kEpisodes; ++i) {
        const double g = rollout(mdp, policy, rng).total_reward();
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / kEpisodes;
    const double var = sum_sq / kEpisodes - mean * mean;
    const double se = std::sqrt(var / kEpisodes);
    CHECK(std::abs(mean - exact) <= 3.0 * se);
}

TEST_CASE("rollout") {
    SUBCASE("deterministic dynamics give the unique path for any seed") {
        // Chain 0 -> 1 -> 2 -> 2 under the single action.
        std::vector<double> P;
        for (int h = 0; h < 4; ++h) P.insert(P.end(), {0, 1, 0, 0, 0, 1, 0, 0, 1});
        std::vector<double> r(12, 0.25);
        const TabularMDP mdp(3, 1, 4, 0, P, r);
        const PolicyTable policy(4, 3);
        for (std::uint64_t seed : {1u, 99u, 123456u}) {
            Rng rng(seed);
            const auto traj = rollout(mdp, policy, rng);
            REQUIRE(traj.steps.size() == 4);
            CHECK(traj.steps[0].state == 0);
            CHECK(traj.steps[0].next_state == 1);
            CHECK(traj.steps[1].next_state == 2);
            CHECK(traj.steps[3].next_state == 2);
            CHECK(traj.steps[2].reward == 0.25);
        }
    }
    SUBCASE("same seed, same trajectory") {
        std::mt19937_64 gen(5);
        const auto mdp = testing::random_mdp(5, 2, 10, gen);
        const auto policy = testing::random_policy(mdp, gen);
        Rng a(42), b(42);
        CHECK(rollout(mdp, policy, a, 7) == rollout(mdp, policy, b, 7));
    }
    SUBCASE("trajectory shape and rewards follow the MDP") {
        std::mt19937_64 gen(8);
        const auto mdp = testing::random_mdp(4, 3, 6, gen);
        const auto policy = testing::random_policy(mdp, gen);
        Rng rng(1);
        const auto traj = rollout(mdp, policy, rng, 3);
        CHECK(traj.episode == 3);
        REQUIRE(traj.steps.size() == 6);
        CHECK(traj.steps.front().state == mdp.start_state());
        for (std::size_t h = 0; h < 6; ++h) {
            const auto& st = traj.steps[h];
            CHECK(st.action == policy.action(h, st.state));
            CHECK(st.reward == mdp.reward(h, st.state, st.action));
            if (h + 1 < 6) CHECK(traj.steps[h + 1].state == st.next_state);
        }
    }
    SUBCASE("empirical transition frequency") {
        const auto mdp = two_state_chain(0.3, 1);
        const PolicyTable policy(1, 2);
        Rng rng(2024);
        constexpr int kDraws = 100'000;
        int hits = 0;
        for (int i = 0; i < kDraws; ++i) hits += rollout(mdp, policy, rng).steps[0].next_state == 1;
        CHECK(std::abs(static_cast<double>(hits) / kDraws - 0.3) <= 0.005);
    }
}

TEST_CASE("planner properties over random MDPs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t S = 2 + trial % 4;
        const std::size_t A = 1 + trial % 3;
        const std::size_t H = 1 + trial % 6;
        const auto mdp = testing::random_mdp(S, A, H, rng, 0.5);
        const auto opt = exact_value_iteration(mdp);
        const double Hd = static_cast<double>(H);

        // Terminal boundary and value range.
        for (std::size_t s = 0; s < S; ++s) CHECK(opt.values(H, s) == 0.0);
        for (std::size_t h = 0; h < H; ++h)
            for (std::size_t s = 0; s < S; ++s) {
                CHECK(opt.values(h, s) >= 0.0);
                CHECK(opt.values(h, s) <= Hd);
            }

        // Shift by c: V*(0, s0) grows by exactly c * H.
        constexpr double c = 0.5;
        auto shifted = mdp.reward_table();
        for (auto& r : shifted) r += c;
        const auto shifted_opt = exact_value_iteration(with_rewards(mdp, shifted));
        CHECK(shifted_opt.values(0, 0) == doctest::Approx(opt.values(0, 0) + c * Hd));

        // Scaling by lambda keeps the greedy policy.
        constexpr double lambda = 1.7;
        auto scaled = mdp.reward_table();
        for (auto& r : scaled) r *= lambda;
        CHECK(exact_value_iteration(with_rewards(mdp, scaled)).policy == opt.policy);

        // V^pi <= V* pointwise.
        for (int p = 0; p < 10; ++p) {
            const auto v = evaluate_policy(mdp, testing::random_policy(mdp, rng));
            for (std::size_t h = 0; h <= H; ++h)
                for (std::size_t s = 0; s < S; ++s) CHECK(v(h, s) <= opt.values(h, s) + 1e-12);
            for (std::size_t s = 0; s < S; ++s) CHECK(v(H, s) == 0.0);
        }
    }
}

}  // TEST_SUITE
