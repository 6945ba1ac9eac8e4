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
 * Strong coin flipping with qutrit pairs. Alice holds coin a, Bob holds b,
 * the outcome is c = a xor b.
 *
 * Register layout (12 qubits, qubit 0 first):
 *
 *   R_A = a0 a1 a2 a3   a0: Alice's coin, a1: Bob's announced bit as Alice
 *                       saw it, (a2, a3): Alice's qutrit
 *   R_M = m0 m1 m2 m3   (m0, m1): qutrit in transit, m2: Bob's announced
 *                       bit, m3: Alice's revealed coin
 *   R_B = b0 b1 b2 b3   b0: Bob's coin, b1: unused, (b2, b3): Bob's copy of
 *                       the qutrit he received
 *
 * Qutrits use two qubits: |0> -> |10>, |1> -> |01>, |2> -> |00>.
 *
 * Honest protocol:
 *   A1  controlled on a0, prepare |psi_a> = (|aa> + |22>)/sqrt(2) on
 *       (a2 a3 | m0 m1)
 *   B1  swap (m0, m1) into (b2, b3); copy b0 into m2
 *   A2  copy m2 into a1; copy a0 into m3; swap (a2, a3) into (m0, m1)
 *   B2  controlled on m3, undo the preparation on (m0 m1 | b2 b3); Bob
 *       accepts iff these four qubits read 0
 *
 * Alice reads the outcome as a0 xor a1, Bob as m3 xor b0.
 */
#pragma once

#include <array>
#include <cmath>

#include "../analysis.hpp"
#include "../circuit.hpp"
#include "../framework.hpp"

namespace qagent::tasks {

enum class Party { Alice, Bob };

[[nodiscard]] inline std::string_view party_name(Party p) noexcept {
    return p == Party::Alice ? "alice" : "bob";
}

namespace coinflip {

inline constexpr std::size_t kRegisterSize = 4;

// Register-local positions.
inline constexpr std::size_t kCoinA = 0;      // a0
inline constexpr std::size_t kSeenB = 1;      // a1
inline constexpr std::size_t kQutritA = 2;    // a2, a3
inline constexpr std::size_t kTransit = 0;    // m0, m1
inline constexpr std::size_t kAnnounceB = 2;  // m2
inline constexpr std::size_t kRevealA = 3;    // m3
inline constexpr std::size_t kCoinB = 0;      // b0
inline constexpr std::size_t kQutritB = 2;    // b2, b3

/// Two-qubit code of a qutrit basis state.
[[nodiscard]] constexpr std::array<int, 2> encode_qutrit(int t) {
    if (t == 0) {
        return {1, 0};
    }
    if (t == 1) {
        return {0, 1};
    }
    return {0, 0};
}

inline std::vector<cplx> cnot_matrix() {
    std::vector<cplx> m(16, cplx{});
    m[0 * 4 + 0] = m[1 * 4 + 1] = m[2 * 4 + 3] = m[3 * 4 + 2] = 1.0;
    return m;
}

inline std::vector<cplx> swap_matrix() {
    std::vector<cplx> m(16, cplx{});
    m[0 * 4 + 0] = m[1 * 4 + 2] = m[2 * 4 + 1] = m[3 * 4 + 3] = 1.0;
    return m;
}

[[nodiscard]] inline Op cnot(std::size_t control, std::size_t target) {
    return DenseOp{"CNOT", {control, target}, cnot_matrix()};
}

[[nodiscard]] inline Op swap(std::size_t a, std::size_t b) {
    return DenseOp{"SWAP", {a, b}, swap_matrix()};
}

/// 16x16 unitary P_a on a qutrit pair with P_a |0000> = |psi_a>: RY(pi/2) on
/// the first code qubit of qutrit 1, then CNOT onto the same code qubit of
/// qutrit 2 (a = 0 uses code qubit 0, a = 1 code qubit 1).
[[nodiscard]] inline DenseUnitary prep_unitary(int a) {
    if (a != 0 && a != 1) {
        throw ArgumentError("coin value must be 0 or 1");
    }
    const auto k = static_cast<std::size_t>(a);
    const std::vector<Op> ops{
        FixedGateOp{GateKind::U, {k, 0}, {kPi / 2, 0.0, 0.0}, false},
        cnot(k, k + 2)};
    return reconstruct(ops, {}, 4);
}

/// Block-diagonal diag(P_0, P_1) on (control, q0..q3).
[[nodiscard]] inline std::vector<cplx> controlled_prep(bool adjoint) {
    std::array<DenseUnitary, 2> p{prep_unitary(0), prep_unitary(1)};
    if (adjoint) {
        p = {p[0].adjoint(), p[1].adjoint()};
    }
    std::vector<cplx> m(32 * 32, cplx{});
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t r = 0; r < 16; ++r) {
            for (std::size_t k = 0; k < 16; ++k) {
                m[(c * 16 + r) * 32 + c * 16 + k] = p[c](r, k);
            }
        }
    }
    return m;
}

/// (|aa> + |22>)/sqrt(2) in the two-qubit-per-qutrit code.
[[nodiscard]] inline StateVector qutrit_pair_state(int a) {
    return prep_unitary(a).column(0);
}

} // namespace coinflip

struct CoinFlipTask {
    Party cheater{Party::Alice};
    /// Outcome the cheater tries to force.
    int desired_outcome{0};
    /// Extra private qubit for the cheater, prepared in |+>.
    bool ancilla{false};

    void validate() const {
        if (desired_outcome != 0 && desired_outcome != 1) {
            throw ArgumentError("desired outcome must be 0 or 1");
        }
    }
    [[nodiscard]] RegisterLayout layout() const {
        const std::size_t extra = ancilla ? 1 : 0;
        return cheater == Party::Alice
                   ? RegisterLayout{coinflip::kRegisterSize + extra,
                                    coinflip::kRegisterSize, coinflip::kRegisterSize}
                   : RegisterLayout{coinflip::kRegisterSize, coinflip::kRegisterSize,
                                    coinflip::kRegisterSize + extra};
    }
    [[nodiscard]] static constexpr double optimum() noexcept { return 0.75; }
};

namespace coinflip {

[[nodiscard]] inline std::vector<Op> honest_a1(const RegisterLayout &l) {
    return {DenseOp{"ctrl-prep",
                    {l.a(kCoinA), l.a(kQutritA), l.a(kQutritA + 1), l.m(kTransit),
                     l.m(kTransit + 1)},
                    controlled_prep(false)}};
}

[[nodiscard]] inline std::vector<Op> honest_b1(const RegisterLayout &l) {
    return {swap(l.m(kTransit), l.b(kQutritB)), swap(l.m(kTransit + 1), l.b(kQutritB + 1)),
            cnot(l.b(kCoinB), l.m(kAnnounceB))};
}

[[nodiscard]] inline std::vector<Op> honest_a2(const RegisterLayout &l) {
    return {cnot(l.m(kAnnounceB), l.a(kSeenB)), cnot(l.a(kCoinA), l.m(kRevealA)),
            swap(l.a(kQutritA), l.m(kTransit)), swap(l.a(kQutritA + 1), l.m(kTransit + 1))};
}

[[nodiscard]] inline std::vector<Op> honest_b2(const RegisterLayout &l) {
    return {DenseOp{"ctrl-prep-dg",
                    {l.m(kRevealA), l.m(kTransit), l.m(kTransit + 1), l.b(kQutritB),
                     l.b(kQutritB + 1)},
                    controlled_prep(true)}};
}

/// Qubits Bob projects onto zero when verifying.
[[nodiscard]] inline std::array<std::size_t, 4> check_qubits(const RegisterLayout &l) {
    return {l.m(kTransit), l.m(kTransit + 1), l.b(kQutritB), l.b(kQutritB + 1)};
}

[[nodiscard]] inline bool bit(std::size_t n, std::size_t idx, std::size_t q) {
    return ((idx >> (n - 1 - q)) & 1U) != 0;
}

[[nodiscard]] inline std::uint64_t with_bit(std::size_t n, std::size_t q) {
    return std::uint64_t{1} << (n - 1 - q);
}

/// Weight 1 on every basis index where Bob accepts and reads `outcome`.
[[nodiscard]] inline ReadoutValues bob_view_indicator(const RegisterLayout &l,
                                                      int outcome) {
    const std::size_t n = l.total();
    ReadoutValues w(std::size_t{1} << n, 0.0);
    const auto chk = check_qubits(l);
    for (std::size_t i = 0; i < w.size(); ++i) {
        bool pass = true;
        for (auto q : chk) {
            pass = pass && !bit(n, i, q);
        }
        const int c = static_cast<int>(bit(n, i, l.m(kRevealA)) != bit(n, i, l.b(kCoinB)));
        w[i] = pass && c == outcome ? 1.0 : 0.0;
    }
    return w;
}

/// Weight 1 where Alice reads `outcome`; she never aborts.
[[nodiscard]] inline ReadoutValues alice_view_indicator(const RegisterLayout &l,
                                                        int outcome) {
    const std::size_t n = l.total();
    ReadoutValues w(std::size_t{1} << n, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const int c = static_cast<int>(bit(n, i, l.a(kCoinA)) != bit(n, i, l.a(kSeenB)));
        w[i] = c == outcome ? 1.0 : 0.0;
    }
    return w;
}

} // namespace coinflip

/// Honest preparation on R_A (x) R_M: |a> on a0 and |psi_a> on
/// (a2 a3 | m0 m1), all other qubits zero. Qubit order a0..a3, m0..m3.
[[nodiscard]] inline StateVector honest_coinflip_prep(int a) {
    if (a != 0 && a != 1) {
        throw ArgumentError("coin value must be 0 or 1");
    }
    const RegisterLayout l{4, 4, 0};
    StateVector s = StateVector::basis(8, a == 1 ? coinflip::with_bit(8, 0) : 0);
    for (const auto &op : coinflip::honest_a1(l)) {
        apply_op(op, {}, s);
    }
    return s;
}

struct HonestStats {
    /// P(c = 0), P(c = 1) and P(abort), averaged over the four coin pairs.
    double p0{0.0};
    double p1{0.0};
    double abort{0.0};
    /// Largest probability that Alice's and Bob's readings disagree.
    double disagreement{0.0};
};

/// Both parties honest, exact outcome statistics.
[[nodiscard]] inline HonestStats honest_coinflip_stats() {
    const RegisterLayout l{4, 4, 4};
    const InteractionSpec spec(
        l, {RoundPolicies{FixedOpsPolicy{"A1", coinflip::honest_a1(l)},
                          FixedOpsPolicy{"B1", coinflip::honest_b1(l)}},
            RoundPolicies{FixedOpsPolicy{"A2", coinflip::honest_a2(l)},
                          FixedOpsPolicy{"B2", coinflip::honest_b2(l)}}});
    const auto bob0 = coinflip::bob_view_indicator(l, 0);
    const auto bob1 = coinflip::bob_view_indicator(l, 1);
    const auto alice0 = coinflip::alice_view_indicator(l, 0);
    HonestStats out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            std::uint64_t init = 0;
            if (a == 1) {
                init |= coinflip::with_bit(l.total(), l.a(coinflip::kCoinA));
            }
            if (b == 1) {
                init |= coinflip::with_bit(l.total(), l.b(coinflip::kCoinB));
            }
            const auto probs = probabilities(run_interaction(spec, InteractionInput{"", init, {}, 0, BasisReadout{}}, {}));
            double q0 = 0.0;
            double q1 = 0.0;
            double mismatch = 0.0;
            for (std::size_t i = 0; i < probs.size(); ++i) {
                q0 += bob0[i] * probs[i];
                q1 += bob1[i] * probs[i];
                const bool bob_says_0 = bob0[i] > 0.0;
                const bool bob_says_1 = bob1[i] > 0.0;
                if ((bob_says_0 && alice0[i] == 0.0) || (bob_says_1 && alice0[i] > 0.0)) {
                    mismatch += probs[i];
                }
            }
            out.p0 += 0.25 * q0;
            out.p1 += 0.25 * q1;
            out.abort += 0.25 * (1.0 - q0 - q1);
            out.disagreement = std::max(out.disagreement, mismatch);
        }
    }
    return out;
}

/// Full block with the swap layer on the cheater's window.
[[nodiscard]] inline ParamCircuit default_cheat_policy(const CoinFlipTask &task) {
    const RegisterLayout l = task.layout();
    if (task.cheater == Party::Alice) {
        return build_policy(l.n_a + l.n_m, kFullBlock, PolicyOptions{l.n_a},
                            first_qubits(l.n_a + l.n_m));
    }
    std::vector<std::size_t> window;
    for (std::size_t q = l.m_begin(); q < l.total(); ++q) {
        window.push_back(q);
    }
    return build_policy(l.n_m + l.n_b, kFullBlock, PolicyOptions{l.n_m},
                        std::move(window));
}

/// Two-round episode with the honest side frozen. The environment supplies
/// the honest party's coin; the reward averages over it.
[[nodiscard]] inline EpisodeSpec coinflip_cheat_episode(const CoinFlipTask &task,
                                                        const ParamCircuit &round1,
                                                        const ParamCircuit &round2) {
    task.validate();
    const RegisterLayout l = task.layout();
    std::vector<RoundPolicies> rounds;
    if (task.cheater == Party::Alice) {
        rounds = {RoundPolicies{TrainablePolicy{round1},
                                FixedOpsPolicy{"B1", coinflip::honest_b1(l)}},
                  RoundPolicies{TrainablePolicy{round2},
                                FixedOpsPolicy{"B2", coinflip::honest_b2(l)}}};
    } else {
        rounds = {RoundPolicies{FixedOpsPolicy{"A1", coinflip::honest_a1(l)},
                                TrainablePolicy{round1}},
                  RoundPolicies{FixedOpsPolicy{"A2", coinflip::honest_a2(l)},
                                TrainablePolicy{round2}}};
    }
    EpisodeSpec ep;
    ep.interaction = InteractionSpec(l, std::move(rounds));

    std::vector<Op> prep;
    if (task.ancilla) {
        const std::size_t anc =
            task.cheater == Party::Alice ? l.a(l.n_a - 1) : l.b(l.n_b - 1);
        prep.emplace_back(FixedGateOp{GateKind::U, {anc, 0}, {kPi / 2, kPi, 0.0}, false});
    }
    const auto win = task.cheater == Party::Alice
                         ? coinflip::bob_view_indicator(l, task.desired_outcome)
                         : coinflip::alice_view_indicator(l, task.desired_outcome);
    std::vector<ReadoutValues> weights;
    for (int coin = 0; coin < 2; ++coin) {
        std::uint64_t init = 0;
        if (coin == 1) {
            const std::size_t q = task.cheater == Party::Alice ? l.b(coinflip::kCoinB)
                                                               : l.a(coinflip::kCoinA);
            init = coinflip::with_bit(l.total(), q);
        }
        ep.inputs.push_back(InteractionInput{
            std::string(task.cheater == Party::Alice ? "b=" : "a=") + std::to_string(coin),
            init, prep, static_cast<std::uint64_t>(coin), BasisReadout{}});
        ReadoutValues w = win;
        for (auto &x : w) {
            x *= 0.5;
        }
        weights.push_back(std::move(w));
    }
    ep.utility = linear_utility(std::move(weights));
    return ep;
}

[[nodiscard]] inline EpisodeSpec coinflip_cheat_episode(const CoinFlipTask &task) {
    const ParamCircuit c = default_cheat_policy(task);
    return coinflip_cheat_episode(task, c, c);
}

[[nodiscard]] inline double coinflip_cheat_reward(const CoinFlipTask &task,
                                                  const ParamCircuit &round1,
                                                  const ParamCircuit &round2,
                                                  std::span<const double> params) {
    return run_episode(coinflip_cheat_episode(task, round1, round2), params);
}

/// (|00> + |11> + 2|22>)/sqrt(6) in the qutrit code.
[[nodiscard]] inline StateVector alice_cheat_state() {
    std::vector<cplx> amps(16, cplx{});
    auto idx = [](int t1, int t2) {
        const auto c1 = coinflip::encode_qutrit(t1);
        const auto c2 = coinflip::encode_qutrit(t2);
        return static_cast<std::size_t>(c1[0] * 8 + c1[1] * 4 + c2[0] * 2 + c2[1]);
    };
    const double s = 1.0 / std::sqrt(6.0);
    amps[idx(0, 0)] = s;
    amps[idx(1, 1)] = s;
    amps[idx(2, 2)] = 2.0 * s;
    return StateVector::from_amplitudes(std::move(amps));
}

/// Density matrix of the qutrit Bob receives, on its two code qubits.
[[nodiscard]] inline ComplexMatrix bob_received_state(int a) {
    const std::array<std::size_t, 2> keep{2, 3};
    return reduced_density_matrix(coinflip::qutrit_pair_state(a), keep);
}

/// 1/2 + ||rho_0 - rho_1||_1 / 4.
[[nodiscard]] inline double bob_cheat_bound() {
    return 0.5 + trace_norm(bob_received_state(0) - bob_received_state(1)) / 4.0;
}

} // namespace qagent::tasks
