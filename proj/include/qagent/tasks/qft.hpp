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
 * Learning the quantum Fourier transform. Each interaction starts in |x>
 * and is scored by the fidelity of A's output with QFT|x>.
 */
#pragma once

#include <cmath>
#include <numbers>

#include "../analysis.hpp"
#include "../circuit.hpp"
#include "../framework.hpp"
#include "../statevec.hpp"

namespace qagent::tasks {

struct QftTask {
    std::size_t n{4};

    void validate() const {
        if (n < 1 || n > kMaxDenseQubits) {
            throw ArgumentError("QFT task needs 1 <= n <= " +
                                std::to_string(kMaxDenseQubits));
        }
    }
    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << n; }
    /// Analytic optimum of the reward.
    [[nodiscard]] static constexpr double optimum() noexcept { return 1.0; }
};

/// (1/sqrt(2^n)) sum_k e^{2 pi i x k / 2^n} |k>.
[[nodiscard]] inline StateVector qft_target(std::size_t n, std::uint64_t x) {
    const std::size_t dim = std::size_t{1} << n;
    if (x >= dim) {
        throw ArgumentError("qft_target: x out of range");
    }
    std::vector<cplx> amps(dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        // reduce mod dim first so the phase stays accurate
        const auto r = static_cast<double>((x * k) % dim);
        amps[k] = std::polar(norm, 2.0 * std::numbers::pi * r / static_cast<double>(dim));
    }
    return StateVector::from_amplitudes(std::move(amps));
}

/// The pyramid alone can express the QFT and, unlike the full block, does not
/// get caught by the Hadamard-wall local optima of the other layers.
inline const std::vector<LayerKind> kQftDefaultLayers{LayerKind::MatchgatePyramid};

[[nodiscard]] inline ParamCircuit default_qft_policy(std::size_t n) {
    return build_policy(n, kQftDefaultLayers);
}

/// Episode with layout (0, n, 0), one round and 2^n interactions.
[[nodiscard]] inline EpisodeSpec qft_episode(const QftTask &task,
                                             const ParamCircuit &policy) {
    task.validate();
    if (policy.n_qubits() != task.n) {
        throw ConfigurationError("QFT policy must act on all n qubits");
    }
    EpisodeSpec ep;
    ep.interaction = InteractionSpec(RegisterLayout{0, task.n, 0},
                                     {RoundPolicies{TrainablePolicy{policy}, NoPolicy{}}});
    const double w = 1.0 / static_cast<double>(task.dim());
    std::vector<ReadoutValues> weights;
    for (std::uint64_t x = 0; x < task.dim(); ++x) {
        ep.inputs.push_back(InteractionInput{"x=" + std::to_string(x), x, {}, x,
                                             TargetReadout{qft_target(task.n, x)}});
        weights.push_back({w});
    }
    ep.utility = linear_utility(std::move(weights));
    return ep;
}

/// Same reward, scored as the average probability of reading all zeros after
/// the environment undoes the QFT and the preparation of |x>.
[[nodiscard]] inline EpisodeSpec qft_episode_all_zero(const QftTask &task,
                                                      const ParamCircuit &policy) {
    task.validate();
    if (policy.n_qubits() != task.n) {
        throw ConfigurationError("QFT policy must act on all n qubits");
    }
    const std::size_t n = task.n;
    const DenseUnitary inv = qft_matrix(n).adjoint();
    std::vector<std::size_t> all = first_qubits(n);
    InputPolicy undo{"inverse QFT and preparation", [n, inv, all](const InteractionInput &in) {
                         std::vector<Op> ops;
                         const auto e = inv.entries();
                         ops.emplace_back(DenseOp{"QFT_dg", all, {e.begin(), e.end()}});
                         for (std::size_t q = 0; q < n; ++q) {
                             if ((in.tag >> (n - 1 - q)) & 1U) {
                                 // X = U(pi, pi)
                                 ops.emplace_back(FixedGateOp{
                                     GateKind::U, {q, 0}, {kPi, kPi, 0.0}, false});
                             }
                         }
                         return ops;
                     }};
    EpisodeSpec ep;
    ep.interaction = InteractionSpec(RegisterLayout{0, n, 0},
                                     {RoundPolicies{TrainablePolicy{policy}, undo}});
    const double w = 1.0 / static_cast<double>(task.dim());
    std::vector<ReadoutValues> weights;
    for (std::uint64_t x = 0; x < task.dim(); ++x) {
        ep.inputs.push_back(InteractionInput{"x=" + std::to_string(x), x, {}, x,
                                             BasisReadout{}});
        ReadoutValues wk(task.dim(), 0.0);
        wk[0] = w;
        weights.push_back(std::move(wk));
    }
    ep.utility = linear_utility(std::move(weights));
    return ep;
}

[[nodiscard]] inline double qft_reward(const QftTask &task, const ParamCircuit &policy,
                                       std::span<const double> params) {
    return run_episode(qft_episode(task, policy), params);
}

} // namespace qagent::tasks
