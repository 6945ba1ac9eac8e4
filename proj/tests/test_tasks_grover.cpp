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

#include "oracle.hpp"
#include "qagent/tasks/grover.hpp"

using namespace qagent;
using namespace qagent::tasks;

namespace {

// mean over w of |<w| (D O_w)^k H^n |0>|^2 with dense matrices
double oracle_grover(std::size_t n, std::size_t k) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
    oracle::Mat h = oracle::Mat::Identity(d, d);
    for (std::size_t q = 0; q < n; ++q) {
        h = (oracle::embed(n, {q}, oracle::hadamard()) * h).eval();
    }
    const oracle::Mat diff =
        oracle::Mat::Constant(d, d, 2.0 / static_cast<double>(d)) - oracle::Mat::Identity(d, d);
    double acc = 0.0;
    for (Eigen::Index w = 0; w < d; ++w) {
        oracle::Mat o = oracle::Mat::Identity(d, d);
        o(w, w) = -1.0;
        oracle::Vec s = h.col(0);
        for (std::size_t j = 0; j < k; ++j) {
            s = (diff * (o * s)).eval();
        }
        acc += std::norm(s(w));
    }
    return acc / static_cast<double>(d);
}

} // namespace

TEST_CASE("textbook Grover values", "[grover]") {
    CHECK(grover_reward(GroverTask{2, 1}, canonical_grover_policies(GroverTask{2, 1}), {}) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(grover_reward(GroverTask{3, 1}, canonical_grover_policies(GroverTask{3, 1}), {}) ==
          Catch::Approx(0.78125).margin(1e-12));
    CHECK(grover_reward(GroverTask{3, 2}, canonical_grover_policies(GroverTask{3, 2}), {}) ==
          Catch::Approx(0.9453125).margin(1e-12));
}

TEST_CASE("Grover matches the closed form and the dense oracle", "[grover][property]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t k = 1; k <= 3; ++k) {
            const GroverTask t{n, k};
            const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(1U << n)));
            const double closed = std::pow(std::sin((2.0 * static_cast<double>(k) + 1.0) * theta), 2);
            const double got = grover_reward(t, canonical_grover_policies(t), {});
            INFO("n=" << n << " k=" << k);
            CHECK(std::abs(got - closed) < 1e-12);
            CHECK(std::abs(got - oracle_grover(n, k)) < 1e-12);
            CHECK(std::abs(t.canonical_value() - closed) < 1e-12);
        }
    }
}

TEST_CASE("an identity agent guesses the first element", "[grover]") {
    const GroverTask t{2, 1};
    const auto pol = trainable_grover_policies(t, 2);
    const auto ep = grover_episode(t, pol);
    CHECK(ep.inputs.size() == 4);
    CHECK(run_episode(ep, std::vector<double>(ep.num_params(), 0.0)) ==
          Catch::Approx(0.25).margin(1e-14));
    const GroverPolicies none{NoPolicy{}, {NoPolicy{}}};
    CHECK(grover_reward(t, none, {}) == Catch::Approx(0.25).margin(1e-14));
}

TEST_CASE("Grover policy shapes", "[grover]") {
    const GroverTask t{3, 2};
    const auto pol = trainable_grover_policies(t, 3);
    const std::size_t block = build_policy(3, kStandardBlock).num_params();
    CHECK(grover_prefix_params(pol, 0) == 3 * block);
    CHECK(grover_prefix_params(pol, 1) == 6 * block);
    CHECK(grover_prefix_params(pol, 2) == 9 * block);
    CHECK(grover_episode(t, pol).num_params() == 9 * block);
    CHECK(default_grover_depth(2) == 2);
    CHECK_THROWS_AS(grover_episode(t, GroverPolicies{NoPolicy{}, {NoPolicy{}}}), ArgumentError);
    CHECK_THROWS_AS(GroverTask({3, 0}).validate(), ArgumentError);
    CHECK(GroverTask{3, 1}.reward_ceiling() == GroverTask{3, 1}.canonical_value());
    CHECK(GroverTask{3, 2}.reward_ceiling() == 1.0);
}
