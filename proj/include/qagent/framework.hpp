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
 * Agent-environment interactions. A register of N = n_a + n_m + n_b qubits is
 * split into A's private register, the shared message register and B's (or
 * the environment's) private register, in that order from qubit 0. An
 * interaction prepares a basis state, runs T rounds of (A unitary on
 * R_A (x) R_M, B unitary on R_M (x) R_B), and is read out exactly. An episode
 * is K interactions with varying inputs, scored by one utility.
 */
#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "program.hpp"
#include "statevec.hpp"

namespace qagent {

struct RegisterLayout {
    std::size_t n_a{0};
    std::size_t n_m{0};
    std::size_t n_b{0};

    [[nodiscard]] std::size_t total() const noexcept { return n_a + n_m + n_b; }
    [[nodiscard]] std::size_t a_begin() const noexcept { return 0; }
    [[nodiscard]] std::size_t m_begin() const noexcept { return n_a; }
    [[nodiscard]] std::size_t b_begin() const noexcept { return n_a + n_m; }

    /// Global index of qubit `i` of each register.
    [[nodiscard]] std::size_t a(std::size_t i) const { return checked(i, n_a, 0); }
    [[nodiscard]] std::size_t m(std::size_t i) const { return checked(i, n_m, n_a); }
    [[nodiscard]] std::size_t b(std::size_t i) const {
        return checked(i, n_b, n_a + n_m);
    }

    [[nodiscard]] bool a_may_touch(std::size_t q) const noexcept {
        return q < n_a + n_m;
    }
    [[nodiscard]] bool b_may_touch(std::size_t q) const noexcept {
        return q >= n_a && q < total();
    }

    friend bool operator==(const RegisterLayout &, const RegisterLayout &) = default;

  private:
    static std::size_t checked(std::size_t i, std::size_t size, std::size_t base) {
        if (i >= size) {
            throw ArgumentError("register index out of range");
        }
        return base + i;
    }
};

enum class Agent { A, B };

/// Per-interaction inputs chosen by the environment.
struct InteractionInput {
    std::string label;
    /// Initial computational-basis state of the whole register.
    std::uint64_t basis_state{0};
    /// Further fixed preparation applied after the basis state.
    std::vector<Op> prep;
    /// Task-specific payload, e.g. the marked element of an oracle.
    std::uint64_t tag{0};
    Readout readout{BasisReadout{}};
};

struct NoPolicy {};

/// Circuit whose parameters are learned.
struct TrainablePolicy {
    ParamCircuit circuit;
};

/// Circuit with frozen angles.
struct FixedPolicy {
    ParamCircuit circuit;
    std::vector<double> params;
};

/// Fixed operations, e.g. an honest protocol step.
struct FixedOpsPolicy {
    std::string name;
    std::vector<Op> ops;
};

/// Operations chosen from the interaction input, e.g. an oracle.
struct InputPolicy {
    std::string name;
    std::function<std::vector<Op>(const InteractionInput &)> ops;
};

using PolicySlot =
    std::variant<NoPolicy, TrainablePolicy, FixedPolicy, FixedOpsPolicy, InputPolicy>;

struct RoundPolicies {
    PolicySlot a{NoPolicy{}};
    PolicySlot b{NoPolicy{}};
};

/// Location of one trainable policy's parameters in the flat array.
struct ParamBlock {
    std::size_t round{0};
    Agent agent{Agent::A};
    std::size_t offset{0};
    std::size_t count{0};
};

class InteractionSpec {
  public:
    InteractionSpec() = default;

    InteractionSpec(RegisterLayout layout, std::vector<RoundPolicies> rounds)
        : layout_(layout), rounds_(std::move(rounds)) {
        if (layout_.total() == 0) {
            throw ConfigurationError("register layout has no qubits");
        }
        if (rounds_.empty()) {
            throw ConfigurationError("an interaction needs at least one round");
        }
        for (std::size_t t = 0; t < rounds_.size(); ++t) {
            register_slot(t, Agent::A, rounds_[t].a);
            register_slot(t, Agent::B, rounds_[t].b);
        }
    }

    [[nodiscard]] const RegisterLayout &layout() const noexcept { return layout_; }
    [[nodiscard]] const std::vector<RoundPolicies> &rounds() const noexcept {
        return rounds_;
    }
    [[nodiscard]] const std::vector<ParamBlock> &blocks() const noexcept {
        return blocks_;
    }
    [[nodiscard]] std::size_t num_params() const noexcept { return num_params_; }

    /// Full operation list for one interaction: preparation then all rounds.
    [[nodiscard]] std::vector<Op> ops(const InteractionInput &input) const {
        std::vector<Op> out;
        for (const auto &op : input.prep) {
            out.push_back(op);
        }
        std::size_t block = 0;
        for (std::size_t t = 0; t < rounds_.size(); ++t) {
            lower(rounds_[t].a, Agent::A, t, input, out, block);
            lower(rounds_[t].b, Agent::B, t, input, out, block);
        }
        return out;
    }

  private:
    void check_confined(std::span<const std::size_t> qubits, Agent who,
                        std::size_t round) const {
        for (auto q : qubits) {
            const bool ok = who == Agent::A ? layout_.a_may_touch(q)
                                            : layout_.b_may_touch(q);
            if (!ok) {
                throw ConfigurationError(
                    std::string(who == Agent::A ? "A" : "B") + " policy in round " +
                    std::to_string(round + 1) + " touches qubit " +
                    std::to_string(q) + " outside its registers");
            }
        }
    }

    void check_op(const Op &op, Agent who, std::size_t round) const {
        const auto q = touched_qubits(op);
        check_confined(q, who, round);
    }

    void register_slot(std::size_t t, Agent who, const PolicySlot &slot) {
        if (const auto *p = std::get_if<TrainablePolicy>(&slot)) {
            check_confined(p->circuit.window(), who, t);
            blocks_.push_back(ParamBlock{t, who, num_params_, p->circuit.num_params()});
            num_params_ += p->circuit.num_params();
        } else if (const auto *f = std::get_if<FixedPolicy>(&slot)) {
            check_confined(f->circuit.window(), who, t);
            if (f->params.size() != f->circuit.num_params()) {
                throw ConfigurationError("fixed policy parameter count mismatch");
            }
        } else if (const auto *o = std::get_if<FixedOpsPolicy>(&slot)) {
            for (const auto &op : o->ops) {
                check_op(op, who, t);
            }
        }
    }

    void lower(const PolicySlot &slot, Agent who, std::size_t t,
               const InteractionInput &input, std::vector<Op> &out,
               std::size_t &block) const {
        std::visit(
            [&](const auto &p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, TrainablePolicy>) {
                    append_circuit(out, p.circuit, blocks_[block++].offset);
                } else if constexpr (std::is_same_v<T, FixedPolicy>) {
                    append_fixed_circuit(out, p.circuit, p.params);
                } else if constexpr (std::is_same_v<T, FixedOpsPolicy>) {
                    out.insert(out.end(), p.ops.begin(), p.ops.end());
                } else if constexpr (std::is_same_v<T, InputPolicy>) {
                    for (auto &op : p.ops(input)) {
                        check_op(op, who, t);
                        out.push_back(std::move(op));
                    }
                }
            },
            slot);
    }

    RegisterLayout layout_{};
    std::vector<RoundPolicies> rounds_;
    std::vector<ParamBlock> blocks_;
    std::size_t num_params_{0};
};

/// Final state of one interaction.
[[nodiscard]] inline StateVector run_interaction(const InteractionSpec &spec,
                                                 const InteractionInput &input,
                                                 std::span<const double> params) {
    if (params.size() != spec.num_params()) {
        throw ArgumentError("interaction expects " + std::to_string(spec.num_params()) +
                            " parameters, got " + std::to_string(params.size()));
    }
    StateVector s = StateVector::basis(spec.layout().total(), input.basis_state);
    for (const auto &op : spec.ops(input)) {
        apply_op(op, params, s);
    }
    return s;
}

struct EpisodeSpec {
    InteractionSpec interaction;
    std::vector<InteractionInput> inputs;
    Utility utility;

    [[nodiscard]] std::size_t num_params() const noexcept {
        return interaction.num_params();
    }
};

/// Differentiable objective equivalent to the episode.
[[nodiscard]] inline Objective compile(const EpisodeSpec &ep) {
    if (ep.inputs.empty()) {
        throw ConfigurationError("an episode needs at least one interaction");
    }
    Objective obj;
    obj.num_params = ep.num_params();
    obj.utility = ep.utility;
    obj.interactions.reserve(ep.inputs.size());
    for (const auto &in : ep.inputs) {
        obj.interactions.push_back(Interaction{
            StateVector::basis(ep.interaction.layout().total(), in.basis_state),
            ep.interaction.ops(in), in.readout});
    }
    return obj;
}

[[nodiscard]] inline double run_episode(const EpisodeSpec &ep,
                                        std::span<const double> params) {
    return evaluate(compile(ep), params);
}

} // namespace qagent
