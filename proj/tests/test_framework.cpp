// Copyright 2026 The qagent Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "qagent/framework.hpp"
#include "qagent/tasks/games.hpp"
#include "qagent/tasks/qft.hpp"

using namespace qagent;
using namespace qagent::tasks;

namespace {

std::vector<Op> random_prep(std::size_t lo, std::size_t hi, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> a(-kPi, kPi);
    std::vector<Op> ops;
    for (std::size_t q = lo; q < hi; ++q) {
        ops.emplace_back(FixedGateOp{GateKind::U, {q, 0}, {a(rng), a(rng), 0.0}, false});
    }
    for (std::size_t q = lo; q + 1 < hi; ++q) {
        ops.emplace_back(FixedGateOp{GateKind::CRY, {q, q + 1}, {a(rng), 0.0, 0.0}, false});
    }
    return ops;
}

} // namespace

TEST_CASE("identity policies leave the prepared state alone", "[framework]") {
    std::mt19937_64 rng(3);
    const RegisterLayout l{2, 1, 2};
    const auto a = build_policy(3, kStandardBlock, {}, {0, 1, 2});
    const auto b = build_policy(3, kStandardBlock, {}, {2, 3, 4});
    const InteractionSpec spec(l, {RoundPolicies{TrainablePolicy{a}, TrainablePolicy{b}}});
    REQUIRE(spec.num_params() == a.num_params() + b.num_params());
    const std::vector<double> zero(spec.num_params(), 0.0);
    for (std::uint64_t x = 0; x < 32; x += 5) {
        InteractionInput in{"", x, random_prep(0, 5, rng), 0, BasisReadout{}};
        StateVector want = StateVector::basis(5, x);
        for (const auto &op : in.prep) {
            apply_op(op, {}, want);
        }
        const auto got = run_interaction(spec, in, zero);
        CHECK((oracle::to_eigen(got) - oracle::to_eigen(want)).norm() < 1e-12);
    }
}

TEST_CASE("a swap layer at theta = pi hands the private state to the message register",
          "[framework]") {
    std::mt19937_64 rng(4);
    const RegisterLayout l{2, 2, 0};
    const auto swap = build_policy(4, {LayerKind::SwapLayer}, PolicyOptions{2});
    const InteractionSpec spec(l, {RoundPolicies{TrainablePolicy{swap}, NoPolicy{}}});
    const std::vector<double> pi(spec.num_params(), kPi);
    for (int trial = 0; trial < 10; ++trial) {
        const auto prep = random_prep(0, 2, rng);
        StateVector phi(2);
        for (const auto &op : prep) {
            apply_op(op, {}, phi);
        }
        const auto got = run_interaction(spec, InteractionInput{"", 0, prep, 0, BasisReadout{}}, pi);
        // |0>_A (x) phi_M
        const StateVector want = tensor(StateVector(2), phi);
        CHECK((oracle::to_eigen(got) - oracle::to_eigen(want)).norm() < 1e-12);
    }
}

TEST_CASE("policies outside their registers are rejected", "[framework][property]") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> sz(1, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const RegisterLayout l{sz(rng), sz(rng), sz(rng)};
        const std::size_t total = l.total();
        std::uniform_int_distribution<std::size_t> pos(0, total - 2);
        const std::size_t q = pos(rng);
        const auto c = build_policy(2, {LayerKind::MatchgatePyramid}, {}, {q, q + 1});
        const bool a_ok = l.a_may_touch(q) && l.a_may_touch(q + 1);
        const bool b_ok = l.b_may_touch(q) && l.b_may_touch(q + 1);
        // A owns R_A and R_M, B owns R_M and R_B
        CHECK(a_ok == (q + 1 < l.n_a + l.n_m));
        CHECK(b_ok == (q >= l.n_a));
        auto make_a = [&] { return InteractionSpec(l, {RoundPolicies{TrainablePolicy{c}, NoPolicy{}}}); };
        auto make_b = [&] { return InteractionSpec(l, {RoundPolicies{NoPolicy{}, FixedPolicy{c, std::vector<double>(c.num_params(), 0.0)}}}); };
        if (a_ok) {
            CHECK_NOTHROW(make_a());
        } else {
            CHECK_THROWS_AS(make_a(), ConfigurationError);
        }
        if (b_ok) {
            CHECK_NOTHROW(make_b());
        } else {
            CHECK_THROWS_AS(make_b(), ConfigurationError);
        }
    }
}

TEST_CASE("input-dependent operations are confined when lowered", "[framework]") {
    const RegisterLayout l{1, 1, 1};
    InputPolicy bad{"peek", [](const InteractionInput &) {
                        return std::vector<Op>{PhaseFlipOp{{0}, 1}};
                    }};
    const InteractionSpec spec(l, {RoundPolicies{NoPolicy{}, bad}});
    CHECK_THROWS_AS(run_interaction(spec, InteractionInput{}, {}), ConfigurationError);
    const FixedOpsPolicy fixed{"reach", {FixedGateOp{GateKind::U, {2, 0}, {1, 0, 0}, false}}};
    CHECK_THROWS_AS(InteractionSpec(l, {RoundPolicies{fixed, NoPolicy{}}}), ConfigurationError);
}

TEST_CASE("malformed specs are rejected", "[framework]") {
    CHECK_THROWS_AS(InteractionSpec(RegisterLayout{0, 0, 0}, {RoundPolicies{}}),
                    ConfigurationError);
    CHECK_THROWS_AS(InteractionSpec(RegisterLayout{1, 0, 0}, {}), ConfigurationError);
    EpisodeSpec ep;
    ep.interaction = InteractionSpec(RegisterLayout{1, 0, 0}, {RoundPolicies{}});
    ep.utility = linear_utility({});
    CHECK_THROWS_AS(compile(ep), ConfigurationError);
    const auto c = build_policy(1, {LayerKind::RYPhaseShift});
    const InteractionSpec spec(RegisterLayout{1, 0, 0}, {RoundPolicies{TrainablePolicy{c}, NoPolicy{}}});
    CHECK_THROWS_AS(run_interaction(spec, InteractionInput{}, std::vector<double>{1.0}),
                    ArgumentError);
    CHECK_THROWS_AS(RegisterLayout({1, 1, 1}).b(1), ArgumentError);
}

TEST_CASE("parameter blocks follow round and agent order", "[framework]") {
    const RegisterLayout l{1, 2, 1};
    const auto a = build_policy(2, kStandardBlock, {}, {0, 1});
    const auto b = build_policy(2, {LayerKind::RYPhaseShift}, {}, {2, 3});
    const InteractionSpec spec(l, {RoundPolicies{TrainablePolicy{a}, TrainablePolicy{b}},
                                   RoundPolicies{NoPolicy{}, TrainablePolicy{b}}});
    const auto &bl = spec.blocks();
    REQUIRE(bl.size() == 3);
    CHECK(bl[0].offset == 0);
    CHECK(bl[1].offset == a.num_params());
    CHECK(bl[2].offset == a.num_params() + b.num_params());
    CHECK(bl[2].round == 1);
    CHECK(bl[2].agent == Agent::B);
    CHECK(spec.num_params() == a.num_params() + 2 * b.num_params());
}

TEST_CASE("episode sizes and the trivial reward", "[framework]") {
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto ep = tasks::qft_episode(tasks::QftTask{n}, tasks::default_qft_policy(n));
        CHECK(ep.inputs.size() == (std::size_t{1} << n));
    }
    const auto chsh = game_episode(GameTask::chsh(), trainable_game_policies());
    CHECK(chsh.inputs.size() == 4);

    EpisodeSpec ep;
    const auto c = build_policy(3, kFullBlock);
    ep.interaction = InteractionSpec(RegisterLayout{0, 3, 0}, {RoundPolicies{TrainablePolicy{c}, NoPolicy{}}});
    ep.inputs.push_back(InteractionInput{});
    ReadoutValues w(8, 0.0);
    w[0] = 1.0;
    ep.utility = linear_utility({w});
    // the swap layer is RBS(0), which is the identity
    CHECK(run_episode(ep, std::vector<double>(c.num_params(), 0.0)) ==
          Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("interactions act linearly on superpositions", "[framework][property]") {
    std::mt19937_64 rng(99);
    const RegisterLayout l{1, 2, 1};
    const auto a = build_policy(3, kFullBlock, PolicyOptions{1}, {0, 1, 2});
    const auto b = build_policy(3, kStandardBlock, {}, {1, 2, 3});
    const InteractionSpec spec(l, {RoundPolicies{TrainablePolicy{a}, TrainablePolicy{b}},
                                   RoundPolicies{TrainablePolicy{a}, NoPolicy{}}});
    const auto p = oracle::random_params(spec.num_params(), rng);
    std::vector<oracle::Vec> columns;
    for (std::uint64_t x = 0; x < 16; ++x) {
        columns.push_back(oracle::to_eigen(run_interaction(spec, InteractionInput{"", x, {}, 0, BasisReadout{}}, p)));
    }
    const auto ops = spec.ops(InteractionInput{});
    for (int trial = 0; trial < 100; ++trial) {
        StateVector psi = oracle::random_state(4, rng);
        oracle::Vec want = oracle::Vec::Zero(16);
        for (std::size_t x = 0; x < 16; ++x) {
            want += psi[x] * columns[x];
        }
        for (const auto &op : ops) {
            apply_op(op, p, psi);
        }
        CHECK((oracle::to_eigen(psi) - want).norm() < 1e-12);
    }
}

TEST_CASE("episodes are deterministic", "[framework]") {
    std::mt19937_64 rng(1);
    const auto ep = game_episode(GameTask::conflicting_interest(), trainable_game_policies());
    const auto p = oracle::random_params(ep.num_params(), rng);
    const double r1 = run_episode(ep, p);
    const double r2 = run_episode(ep, p);
    CHECK(r1 == r2);
    const auto g1 = value_and_gradient(compile(ep), p);
    const auto g2 = value_and_gradient(compile(ep), p);
    CHECK(g1.gradient == g2.gradient);
}
