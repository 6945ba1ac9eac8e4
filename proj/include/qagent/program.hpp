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
 * Differentiable programs: sequences of operations on a register, scored by
 * a utility of their exact readouts, with reverse-mode (adjoint) gradients.
 *
 * A reward is U(r_1, ..., r_K) where r_k is the readout of interaction k:
 * either the full computational-basis distribution of its final state or the
 * fidelity of that state to a target. For a parameter theta inside gate G_j,
 *
 *     dR/dtheta = sum_k 2 Re <lambda_k^(j) | dG_j/dtheta | psi_k^(j-1)>,
 *
 * where lambda_k is seeded at the end of the program with the readout
 * observable weighted by dU/dr_k and swept backwards with G^dagger.
 */
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "gates.hpp"
#include "statevec.hpp"

namespace qagent {

/// Gate reading its angles from the program's parameter array.
struct ParamGateOp {
    GateKind kind{GateKind::U};
    std::array<std::size_t, 2> qubits{};
    std::size_t param_offset{0};
    bool adjoint{false};
};

/// Gate with frozen angles.
struct FixedGateOp {
    GateKind kind{GateKind::U};
    std::array<std::size_t, 2> qubits{};
    std::array<double, 3> angles{};
    bool adjoint{false};
};

/// Sign flip of every amplitude whose `qubits` pattern equals `marked`.
struct PhaseFlipOp {
    std::vector<std::size_t> qubits;
    std::uint64_t marked{0};
};

/// 2|s><s| - I on `qubits`.
struct DiffusionOp {
    std::vector<std::size_t> qubits;
};

/// Fixed unitary given densely on an ordered qubit list (first = MSB).
struct DenseOp {
    std::string name;
    std::vector<std::size_t> qubits;
    std::vector<cplx> matrix;
};

/// Forward-only transformation. Programs containing one can be evaluated but
/// not differentiated.
struct OpaqueOp {
    std::string name;
    std::vector<std::size_t> qubits;
    std::function<void(StateVector &)> forward;
};

using Op = std::variant<ParamGateOp, FixedGateOp, PhaseFlipOp, DiffusionOp,
                        DenseOp, OpaqueOp>;

namespace detail {

inline std::span<const std::size_t> op_qubits(const std::array<std::size_t, 2> &q,
                                              GateKind kind) {
    return {q.data(), arity(kind)};
}

inline void apply_small(StateVector &s, const SmallMatrix &m,
                        std::span<const std::size_t> q) {
    for (auto x : q) {
        if (x >= s.n_qubits()) {
            throw ArgumentError("operation qubit " + std::to_string(x) +
                                " exceeds the register");
        }
    }
    s.apply_matrix(m, q);
}

inline std::vector<cplx> dense_adjoint(const DenseOp &op) {
    const std::size_t d = std::size_t{1} << op.qubits.size();
    std::vector<cplx> out(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            out[r * d + c] = std::conj(op.matrix[c * d + r]);
        }
    }
    return out;
}

inline void apply_dense_op(StateVector &s, std::span<const std::size_t> qubits,
                           std::span<const cplx> matrix) {
    detail::check_distinct(s.n_qubits(), qubits);
    const std::size_t d = std::size_t{1} << qubits.size();
    if (matrix.size() != d * d) {
        throw ArgumentError("dense operation has the wrong matrix size");
    }
    kernels::apply_dense(s.data(), s.n_qubits(), qubits, matrix);
}

} // namespace detail

[[nodiscard]] inline SmallMatrix op_matrix(const ParamGateOp &op,
                                           std::span<const double> params) {
    auto m = gate_matrix(op.kind, params.subspan(op.param_offset, param_count(op.kind)));
    return op.adjoint ? m.adjoint() : m;
}

[[nodiscard]] inline SmallMatrix op_matrix(const FixedGateOp &op) {
    auto m = gate_matrix(op.kind, op.angles);
    return op.adjoint ? m.adjoint() : m;
}

/// Applies `op` to `state` in place.
inline void apply_op(const Op &op, std::span<const double> params,
                     StateVector &state) {
    std::visit(
        [&](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ParamGateOp>) {
                if (o.param_offset + param_count(o.kind) > params.size()) {
                    throw ArgumentError("gate reads past the parameter array");
                }
                detail::apply_small(state, op_matrix(o, params),
                                    detail::op_qubits(o.qubits, o.kind));
            } else if constexpr (std::is_same_v<T, FixedGateOp>) {
                detail::apply_small(state, op_matrix(o),
                                    detail::op_qubits(o.qubits, o.kind));
            } else if constexpr (std::is_same_v<T, PhaseFlipOp>) {
                phase_flip_inplace(state, o.qubits, o.marked);
            } else if constexpr (std::is_same_v<T, DiffusionOp>) {
                diffusion_inplace(state, o.qubits);
            } else if constexpr (std::is_same_v<T, DenseOp>) {
                detail::apply_dense_op(state, o.qubits, o.matrix);
            } else {
                o.forward(state);
            }
        },
        op);
}

/// Applies the inverse of `op`; OpaqueOp has none.
inline void apply_op_adjoint(const Op &op, std::span<const double> params,
                             StateVector &state) {
    std::visit(
        [&](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ParamGateOp>) {
                detail::apply_small(state, op_matrix(o, params).adjoint(),
                                    detail::op_qubits(o.qubits, o.kind));
            } else if constexpr (std::is_same_v<T, FixedGateOp>) {
                detail::apply_small(state, op_matrix(o).adjoint(),
                                    detail::op_qubits(o.qubits, o.kind));
            } else if constexpr (std::is_same_v<T, PhaseFlipOp>) {
                phase_flip_inplace(state, o.qubits, o.marked);
            } else if constexpr (std::is_same_v<T, DiffusionOp>) {
                diffusion_inplace(state, o.qubits);
            } else if constexpr (std::is_same_v<T, DenseOp>) {
                detail::apply_dense_op(state, o.qubits, detail::dense_adjoint(o));
            } else {
                throw UnsupportedOperation("operation '" + o.name +
                                           "' has no adjoint and cannot be "
                                           "differentiated");
            }
        },
        op);
}

/// Register qubits an operation may touch.
[[nodiscard]] inline std::vector<std::size_t> touched_qubits(const Op &op) {
    return std::visit(
        [](const auto &o) -> std::vector<std::size_t> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ParamGateOp> ||
                          std::is_same_v<T, FixedGateOp>) {
                return {o.qubits.begin(), o.qubits.begin() + arity(o.kind)};
            } else {
                return o.qubits;
            }
        },
        op);
}

/// Lowers a circuit onto global ops; its parameters start at `offset` in the
/// program's array.
inline void append_circuit(std::vector<Op> &ops, const ParamCircuit &c,
                           std::size_t offset) {
    for (const auto &g : c.gates()) {
        ParamGateOp op;
        op.kind = g.kind;
        op.qubits = {c.global_qubit(g.qubits[0]),
                     g.arity() == 2 ? c.global_qubit(g.qubits[1]) : 0};
        op.param_offset = offset + g.param_offset;
        op.adjoint = g.adjoint;
        ops.emplace_back(op);
    }
}

/// Lowers a circuit with frozen angles.
inline void append_fixed_circuit(std::vector<Op> &ops, const ParamCircuit &c,
                                 std::span<const double> params) {
    if (params.size() != c.num_params()) {
        throw ArgumentError("fixed circuit parameter count mismatch");
    }
    for (const auto &g : c.gates()) {
        FixedGateOp op;
        op.kind = g.kind;
        op.qubits = {c.global_qubit(g.qubits[0]),
                     g.arity() == 2 ? c.global_qubit(g.qubits[1]) : 0};
        for (std::size_t j = 0; j < param_count(g.kind); ++j) {
            op.angles[j] = params[g.param_offset + j];
        }
        op.adjoint = g.adjoint;
        ops.emplace_back(op);
    }
}

struct BasisReadout {};

struct TargetReadout {
    StateVector target;
};

using Readout = std::variant<BasisReadout, TargetReadout>;

/// Readout values: the full distribution, or a single fidelity.
using ReadoutValues = std::vector<double>;

[[nodiscard]] inline ReadoutValues read_out(const Readout &r,
                                            const StateVector &state) {
    if (const auto *t = std::get_if<TargetReadout>(&r)) {
        return {fidelity(t->target, state)};
    }
    return probabilities(state);
}

struct Interaction {
    StateVector initial;
    std::vector<Op> ops;
    Readout readout{BasisReadout{}};
};

/// Scalar utility of all readouts, with its gradient in the readout values.
struct Utility {
    std::function<double(std::span<const ReadoutValues>)> value;
    std::function<std::vector<ReadoutValues>(std::span<const ReadoutValues>)> gradient;
};

/// sum_k sum_i w_k[i] r_k[i].
[[nodiscard]] inline Utility linear_utility(std::vector<ReadoutValues> weights) {
    Utility u;
    u.value = [weights](std::span<const ReadoutValues> r) {
        if (r.size() != weights.size()) {
            throw ArgumentError("utility: readout count mismatch");
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].size() != weights[k].size()) {
                throw ArgumentError("utility: readout size mismatch");
            }
            for (std::size_t i = 0; i < r[k].size(); ++i) {
                acc += weights[k][i] * r[k][i];
            }
        }
        return acc;
    };
    u.gradient = [weights](std::span<const ReadoutValues>) { return weights; };
    return u;
}

/// A differentiable reward: K interactions sharing one parameter array.
struct Objective {
    std::vector<Interaction> interactions;
    Utility utility;
    std::size_t num_params{0};
};

namespace detail {
inline void check_params(const Objective &obj, std::span<const double> params) {
    if (params.size() != obj.num_params) {
        throw ArgumentError("objective expects " + std::to_string(obj.num_params) +
                            " parameters, got " + std::to_string(params.size()));
    }
}
} // namespace detail

[[nodiscard]] inline StateVector run_ops(const Interaction &it,
                                         std::span<const double> params) {
    StateVector s = it.initial;
    for (const auto &op : it.ops) {
        apply_op(op, params, s);
    }
    return s;
}

[[nodiscard]] inline std::vector<ReadoutValues>
readouts(const Objective &obj, std::span<const double> params) {
    detail::check_params(obj, params);
    std::vector<ReadoutValues> out;
    out.reserve(obj.interactions.size());
    for (const auto &it : obj.interactions) {
        out.push_back(read_out(it.readout, run_ops(it, params)));
    }
    return out;
}

[[nodiscard]] inline double evaluate(const Objective &obj,
                                     std::span<const double> params) {
    const auto r = readouts(obj, params);
    return obj.utility.value(r);
}

struct ValueAndGradient {
    double value{0.0};
    std::vector<double> gradient;
};

/// Reward and its exact gradient by one forward and one adjoint sweep per
/// interaction.
[[nodiscard]] inline ValueAndGradient value_and_gradient(const Objective &obj,
                                                         std::span<const double> params) {
    detail::check_params(obj, params);
    const std::size_t k_count = obj.interactions.size();
    std::vector<StateVector> finals;
    std::vector<ReadoutValues> r;
    finals.reserve(k_count);
    r.reserve(k_count);
    for (const auto &it : obj.interactions) {
        finals.push_back(run_ops(it, params));
        r.push_back(read_out(it.readout, finals.back()));
    }
    ValueAndGradient out;
    out.value = obj.utility.value(r);
    out.gradient.assign(params.size(), 0.0);
    const auto weights = obj.utility.gradient(r);

    for (std::size_t k = 0; k < k_count; ++k) {
        const auto &it = obj.interactions[k];
        StateVector psi = std::move(finals[k]);
        StateVector lambda = psi;
        auto lam = lambda.data();
        if (const auto *t = std::get_if<TargetReadout>(&it.readout)) {
            const cplx amp = overlap(t->target, psi) * weights[k][0];
            const auto tgt = t->target.amplitudes();
            for (std::size_t i = 0; i < lam.size(); ++i) {
                lam[i] = amp * tgt[i];
            }
        } else {
            for (std::size_t i = 0; i < lam.size(); ++i) {
                lam[i] *= weights[k][i];
            }
        }
        for (auto op = it.ops.rbegin(); op != it.ops.rend(); ++op) {
            apply_op_adjoint(*op, params, psi);
            if (const auto *g = std::get_if<ParamGateOp>(&*op)) {
                const auto a = params.subspan(g->param_offset, param_count(g->kind));
                for (std::size_t j = 0; j < param_count(g->kind); ++j) {
                    auto d = gate_derivative(g->kind, a, j);
                    if (g->adjoint) {
                        d = d.adjoint();
                    }
                    const cplx v =
                        arity(g->kind) == 1
                            ? kernels::braket_1q(lambda.amplitudes(), psi.amplitudes(),
                                                 psi.n_qubits(), g->qubits[0], d)
                            : kernels::braket_2q(lambda.amplitudes(), psi.amplitudes(),
                                                 psi.n_qubits(), g->qubits[0],
                                                 g->qubits[1], d);
                    out.gradient[g->param_offset + j] += 2.0 * v.real();
                }
            }
            apply_op_adjoint(*op, params, lambda);
        }
    }
    return out;
}

[[nodiscard]] inline std::vector<double> gradient(const Objective &obj,
                                                  std::span<const double> params) {
    return value_and_gradient(obj, params).gradient;
}

/// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h.
[[nodiscard]] inline std::vector<double>
finite_difference(const std::function<double(std::span<const double>)> &f,
                  std::span<const double> params, double h = 1e-5) {
    if (!(h > 0.0)) {
        throw ArgumentError("finite-difference step must be positive");
    }
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double keep = p[i];
        p[i] = keep + h;
        const double up = f(p);
        p[i] = keep - h;
        const double down = f(p);
        p[i] = keep;
        out[i] = (up - down) / (2.0 * h);
    }
    return out;
}

[[nodiscard]] inline std::vector<double>
finite_difference(const Objective &obj, std::span<const double> params,
                  double h = 1e-5) {
    return finite_difference(
        [&obj](std::span<const double> p) { return evaluate(obj, p); }, params, h);
}

struct GradientCheck {
    double max_abs_error{0.0};
    std::size_t worst_index{0};
    bool ok{true};

    [[nodiscard]] std::string report() const {
        std::ostringstream os;
        os << (ok ? "gradient check passed" : "gradient check FAILED")
           << ": max abs error " << max_abs_error << " at parameter "
           << worst_index;
        return os.str();
    }
};

[[nodiscard]] inline GradientCheck compare_gradients(std::span<const double> analytic,
                                                     std::span<const double> numeric,
                                                     double tol) {
    if (analytic.size() != numeric.size()) {
        throw ArgumentError("gradient lengths differ");
    }
    GradientCheck c;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double e = std::abs(analytic[i] - numeric[i]);
        if (!(e <= c.max_abs_error)) {
            c.max_abs_error = e;
            c.worst_index = i;
        }
    }
    c.ok = c.max_abs_error < tol;
    return c;
}

} // namespace qagent
