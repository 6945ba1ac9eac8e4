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
 * Two-player nonlocal games with inputs x_A, x_B and outputs y_A, y_B.
 *
 * Register layout (4 qubits): q0 = x_A (R_A), q1 q2 = shared pair (R_M),
 * q3 = x_B (R_B). Round 1: A prepares the pair on {q1, q2} without seeing
 * x_A. Round 2: A acts on {q0, q1}, B on {q2, q3}. y_A is read from q1 and
 * y_B from q2.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "../circuit.hpp"
#include "../framework.hpp"

namespace qagent::tasks {

enum class GameKind { CHSH, ConflictingInterest, Custom };

[[nodiscard]] inline std::string_view game_name(GameKind g) noexcept {
    switch (g) {
    case GameKind::CHSH:
        return "chsh";
    case GameKind::ConflictingInterest:
        return "conflicting";
    case GameKind::Custom:
        return "custom";
    }
    return "?";
}

/// u[(xa, xb, ya, yb)] flattened as 8 xa + 4 xb + 2 ya + yb.
using PayoffTable = std::array<double, 16>;

[[nodiscard]] constexpr std::size_t payoff_index(int xa, int xb, int ya, int yb) {
    return static_cast<std::size_t>(8 * xa + 4 * xb + 2 * ya + yb);
}

struct GameTask {
    GameKind game{GameKind::CHSH};
    PayoffTable u_a{};
    PayoffTable u_b{};

    [[nodiscard]] static GameTask chsh() {
        GameTask t{GameKind::CHSH, {}, {}};
        for (int xa = 0; xa < 2; ++xa) {
            for (int xb = 0; xb < 2; ++xb) {
                for (int ya = 0; ya < 2; ++ya) {
                    for (int yb = 0; yb < 2; ++yb) {
                        const double win = (ya ^ yb) == (xa & xb) ? 1.0 : 0.0;
                        t.u_a[payoff_index(xa, xb, ya, yb)] = win;
                        t.u_b[payoff_index(xa, xb, ya, yb)] = win;
                    }
                }
            }
        }
        return t;
    }

    /// CHSH combined with Battle of the Sexes.
    [[nodiscard]] static GameTask conflicting_interest() {
        GameTask t{GameKind::ConflictingInterest, {}, {}};
        for (int xa = 0; xa < 2; ++xa) {
            for (int xb = 0; xb < 2; ++xb) {
                const auto i00 = payoff_index(xa, xb, 0, 0);
                const auto i01 = payoff_index(xa, xb, 0, 1);
                const auto i10 = payoff_index(xa, xb, 1, 0);
                const auto i11 = payoff_index(xa, xb, 1, 1);
                if ((xa & xb) == 0) {
                    t.u_a[i00] = 1.0;
                    t.u_b[i00] = 0.5;
                    t.u_a[i11] = 0.5;
                    t.u_b[i11] = 1.0;
                } else {
                    t.u_a[i01] = t.u_b[i01] = 0.75;
                    t.u_a[i10] = t.u_b[i10] = 0.75;
                }
            }
        }
        return t;
    }

    [[nodiscard]] static GameTask custom(PayoffTable a, PayoffTable b) {
        return GameTask{GameKind::Custom, a, b};
    }

    /// Best quantum value of the training objective (F_A + F_B) / 2, where
    /// known.
    [[nodiscard]] std::optional<double> optimum() const {
        const double tsirelson = std::pow(std::cos(std::numbers::pi / 8), 2);
        if (game == GameKind::CHSH) {
            return tsirelson;
        }
        if (game == GameKind::ConflictingInterest) {
            return 0.75 * tsirelson;
        }
        return std::nullopt;
    }
};

namespace games {
inline constexpr std::size_t kInputA = 0;
inline constexpr std::size_t kOutputA = 1;
inline constexpr std::size_t kOutputB = 2;
inline constexpr std::size_t kInputB = 3;
inline const RegisterLayout kLayout{1, 2, 1};
} // namespace games

/// Shared preparation and the two local policies.
struct GamePolicies {
    PolicySlot shared_prep{NoPolicy{}};
    PolicySlot a_local{NoPolicy{}};
    PolicySlot b_local{NoPolicy{}};
};

[[nodiscard]] inline ParamCircuit game_prep_circuit(
    const std::vector<LayerKind> &layers = kStandardBlock) {
    return build_policy(2, layers, {}, {games::kOutputA, games::kOutputB});
}
[[nodiscard]] inline ParamCircuit game_a_circuit(
    const std::vector<LayerKind> &layers = kStandardBlock) {
    return build_policy(2, layers, {}, {games::kInputA, games::kOutputA});
}
[[nodiscard]] inline ParamCircuit game_b_circuit(
    const std::vector<LayerKind> &layers = kStandardBlock) {
    return build_policy(2, layers, {}, {games::kOutputB, games::kInputB});
}

[[nodiscard]] inline GamePolicies trainable_game_policies(
    const std::vector<LayerKind> &layers = kStandardBlock) {
    return {TrainablePolicy{game_prep_circuit(layers)}, TrainablePolicy{game_a_circuit(layers)},
            TrainablePolicy{game_b_circuit(layers)}};
}

namespace games {

[[nodiscard]] inline std::uint64_t input_state(int xa, int xb) {
    return (static_cast<std::uint64_t>(xa) << 3) | static_cast<std::uint64_t>(xb);
}

/// Per-basis-index payoff for inputs (xa, xb), weighted by `ca` for A and
/// `cb` for B.
[[nodiscard]] inline ReadoutValues payoff_weights(const GameTask &t, int xa, int xb,
                                                  double ca, double cb) {
    ReadoutValues w(16, 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
        const int ya = static_cast<int>((i >> (3 - kOutputA)) & 1U);
        const int yb = static_cast<int>((i >> (3 - kOutputB)) & 1U);
        const auto k = payoff_index(xa, xb, ya, yb);
        w[i] = ca * t.u_a[k] + cb * t.u_b[k];
    }
    return w;
}

} // namespace games

/// Four interactions, one per input pair, with uniform P(x). The reward is
/// (F_A + F_B) / 2 by default; `ca`, `cb` weight F_A and F_B otherwise.
[[nodiscard]] inline EpisodeSpec game_episode(const GameTask &task,
                                              const GamePolicies &pol, double ca = 0.5,
                                              double cb = 0.5) {
    EpisodeSpec ep;
    ep.interaction = InteractionSpec(games::kLayout,
                                     {RoundPolicies{pol.shared_prep, NoPolicy{}},
                                      RoundPolicies{pol.a_local, pol.b_local}});
    std::vector<ReadoutValues> weights;
    for (int xa = 0; xa < 2; ++xa) {
        for (int xb = 0; xb < 2; ++xb) {
            ep.inputs.push_back(InteractionInput{
                "x=" + std::to_string(xa) + std::to_string(xb), games::input_state(xa, xb),
                {}, static_cast<std::uint64_t>(2 * xa + xb), BasisReadout{}});
            weights.push_back(games::payoff_weights(task, xa, xb, 0.25 * ca, 0.25 * cb));
        }
    }
    ep.utility = linear_utility(std::move(weights));
    return ep;
}

struct GameValues {
    double f_a{0.0};
    double f_b{0.0};
    [[nodiscard]] double mean() const noexcept { return 0.5 * (f_a + f_b); }
};

/// Exact average payoffs F_A and F_B.
[[nodiscard]] inline GameValues game_reward(const GameTask &task, const GamePolicies &pol,
                                            std::span<const double> params) {
    return {run_episode(game_episode(task, pol, 1.0, 0.0), params),
            run_episode(game_episode(task, pol, 0.0, 1.0), params)};
}

/// Textbook optimal strategy as fixed operations: |Phi+> on the pair, A
/// rotates by CRY(-pi/2) on input 1, B rotates by -pi/4 then CRY(pi/2) on
/// input 1.
[[nodiscard]] inline GamePolicies optimal_game_policies() {
    using games::kInputA, games::kInputB, games::kOutputA, games::kOutputB;
    GamePolicies p;
    p.shared_prep = FixedOpsPolicy{
        "bell", {FixedGateOp{GateKind::U, {kOutputA, 0}, {kPi / 2, kPi, 0.0}, false},
                 FixedGateOp{GateKind::CRY, {kOutputA, kOutputB}, {kPi, 0.0, 0.0}, false}}};
    p.a_local = FixedOpsPolicy{
        "alice", {FixedGateOp{GateKind::CRY, {kInputA, kOutputA}, {-kPi / 2, 0.0, 0.0}, false}}};
    p.b_local = FixedOpsPolicy{
        "bob", {FixedGateOp{GateKind::U, {kOutputB, 0}, {-kPi / 4, 0.0, 0.0}, false},
                FixedGateOp{GateKind::CRY, {kInputB, kOutputB}, {kPi / 2, 0.0, 0.0}, false}}};
    return p;
}

namespace games {

/// (F_A, F_B) of deterministic strategies y_A = fa(x_A), y_B = fb(x_B); a
/// strategy is encoded as the pair (f(0), f(1)) in two bits.
[[nodiscard]] inline GameValues deterministic_value(const GameTask &t, int fa, int fb) {
    GameValues v;
    for (int xa = 0; xa < 2; ++xa) {
        for (int xb = 0; xb < 2; ++xb) {
            const int ya = (fa >> xa) & 1;
            const int yb = (fb >> xb) & 1;
            v.f_a += 0.25 * t.u_a[payoff_index(xa, xb, ya, yb)];
            v.f_b += 0.25 * t.u_b[payoff_index(xa, xb, ya, yb)];
        }
    }
    return v;
}

} // namespace games

/// Best classical value by exhaustive enumeration of deterministic
/// strategies. Identical payoffs give max F. Otherwise shared randomness is
/// allowed and the symmetric value max min(F_A, F_B) over the convex hull of
/// deterministic payoff pairs is returned.
[[nodiscard]] inline double classical_game_bound(const GameTask &t) {
    std::vector<GameValues> pts;
    for (int fa = 0; fa < 4; ++fa) {
        for (int fb = 0; fb < 4; ++fb) {
            pts.push_back(games::deterministic_value(t, fa, fb));
        }
    }
    if (t.u_a == t.u_b) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto &p : pts) {
            best = std::max(best, p.f_a);
        }
        return best;
    }
    // max of min over a 2-d polytope is attained on a segment between two
    // vertices, either at an end or where F_A = F_B
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best = std::max(best, std::min(pts[i].f_a, pts[i].f_b));
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double di = pts[i].f_a - pts[i].f_b;
            const double dj = pts[j].f_a - pts[j].f_b;
            if ((di < 0.0) == (dj < 0.0) || di == dj) {
                continue;
            }
            const double s = di / (di - dj);
            best = std::max(best, pts[i].f_a + s * (pts[j].f_a - pts[i].f_a));
        }
    }
    return best;
}

} // namespace qagent::tasks
