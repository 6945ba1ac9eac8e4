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
/**
 * @file
 * Learning unstructured search. The environment marks w in each interaction
 * and answers queries with the phase oracle I - 2|w><w|; A acts before the
 * first query and after each one, and is scored by P(measure w).
 */
#pragma once

#include "../analysis.hpp"
#include "../circuit.hpp"
#include "../framework.hpp"

namespace qagent::tasks {

struct GroverTask {
    std::size_t n{2};
    std::size_t queries{1};

    void validate() const {
        if (n < 1 || n > 20) {
            throw ArgumentError("Grover task needs 1 <= n <= 20");
        }
        if (queries < 1) {
            throw ArgumentError("Grover task needs at least one query");
        }
    }
    [[nodiscard]] std::size_t database_size() const noexcept {
        return std::size_t{1} << n;
    }
    /// Success probability of the textbook algorithm.
    [[nodiscard]] double canonical_value() const { return grover_closed_form(n, queries); }
    /// Upper bound used to sanity-check training. The textbook value is tight
    /// for one query; with more queries other algorithms beat it at small N
    /// (N = 8, k = 2 reaches 1), so only the trivial bound is used.
    [[nodiscard]] double reward_ceiling() const {
        return queries == 1 ? canonical_value() : 1.0;
    }
};

/// A's operations: one before the first query, one after each query.
struct GroverPolicies {
    PolicySlot pre{NoPolicy{}};
    std::vector<PolicySlot> post;
};

[[nodiscard]] inline InputPolicy grover_oracle(std::size_t n) {
    return InputPolicy{"oracle", [qs = first_qubits(n)](const InteractionInput &in) {
                           return std::vector<Op>{PhaseFlipOp{qs, in.tag}};
                       }};
}

/// Stacked blocks used by default: one per qubit. N = 4 needs two.
[[nodiscard]] constexpr std::size_t default_grover_depth(std::size_t n) noexcept {
    return n < 1 ? 1 : n;
}

/// Trainable policies; `depth` stacks the standard block.
[[nodiscard]] inline GroverPolicies trainable_grover_policies(const GroverTask &task,
                                                              std::size_t depth = 1) {
    task.validate();
    const ParamCircuit block = stack(build_policy(task.n, kStandardBlock), depth);
    GroverPolicies p{TrainablePolicy{block}, {}};
    for (std::size_t k = 0; k < task.queries; ++k) {
        p.post.emplace_back(TrainablePolicy{block});
    }
    return p;
}

/// Hadamard wall before, diffusion after every query.
[[nodiscard]] inline GroverPolicies canonical_grover_policies(const GroverTask &task) {
    task.validate();
    const auto qs = first_qubits(task.n);
    GroverPolicies p{FixedOpsPolicy{"hadamard", hadamard_wall(qs)}, {}};
    for (std::size_t k = 0; k < task.queries; ++k) {
        p.post.emplace_back(FixedOpsPolicy{"diffusion", {DiffusionOp{qs}}});
    }
    return p;
}

/// Layout (0, n, 0); rounds are (pre, oracle), (post_1, oracle), ...,
/// (post_k, -). One interaction per marked element.
[[nodiscard]] inline EpisodeSpec grover_episode(const GroverTask &task,
                                                const GroverPolicies &pol) {
    task.validate();
    if (pol.post.size() != task.queries) {
        throw ArgumentError("Grover episode needs one post policy per query");
    }
    std::vector<RoundPolicies> rounds;
    rounds.push_back(RoundPolicies{pol.pre, grover_oracle(task.n)});
    for (std::size_t k = 0; k < task.queries; ++k) {
        PolicySlot b = NoPolicy{};
        if (k + 1 < task.queries) {
            b = grover_oracle(task.n);
        }
        rounds.push_back(RoundPolicies{pol.post[k], std::move(b)});
    }
    EpisodeSpec ep;
    ep.interaction = InteractionSpec(RegisterLayout{0, task.n, 0}, std::move(rounds));
    const std::size_t dim = task.database_size();
    const double w = 1.0 / static_cast<double>(dim);
    std::vector<ReadoutValues> weights;
    for (std::uint64_t m = 0; m < dim; ++m) {
        ep.inputs.push_back(
            InteractionInput{"w=" + std::to_string(m), 0, {}, m, BasisReadout{}});
        ReadoutValues wk(dim, 0.0);
        wk[m] = w;
        weights.push_back(std::move(wk));
    }
    ep.utility = linear_utility(std::move(weights));
    return ep;
}

[[nodiscard]] inline double grover_reward(const GroverTask &task,
                                          const GroverPolicies &pol,
                                          std::span<const double> params) {
    return run_episode(grover_episode(task, pol), params);
}

/// Number of trainable parameters of the pre policy and the first `k` post
/// policies, i.e. the prefix a transfer from a k-query run can freeze.
[[nodiscard]] inline std::size_t grover_prefix_params(const GroverPolicies &pol,
                                                      std::size_t k) {
    auto count = [](const PolicySlot &s) -> std::size_t {
        if (const auto *t = std::get_if<TrainablePolicy>(&s)) {
            return t->circuit.num_params();
        }
        return 0;
    };
    std::size_t total = count(pol.pre);
    for (std::size_t j = 0; j < k && j < pol.post.size(); ++j) {
        total += count(pol.post[j]);
    }
    return total;
}

} // namespace qagent::tasks
