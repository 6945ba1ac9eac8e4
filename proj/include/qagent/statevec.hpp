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
 * Dense complex state-vector simulation.
 *
 * Qubit 0 is the most significant bit of a basis index: for n qubits, qubit q
 * is bit (n - 1 - q). This matches the top-to-bottom wire order of circuit
 * diagrams and is used everywhere in qagent.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "gates.hpp"

namespace qagent {

namespace kernels {

[[nodiscard]] inline std::size_t bit_mask(std::size_t n_qubits,
                                          std::size_t qubit) noexcept {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

inline void apply_1q(std::span<cplx> amps, std::size_t n_qubits,
                     std::size_t q, const SmallMatrix &g) {
    const std::size_t m = bit_mask(n_qubits, q);
    const cplx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
    for (std::size_t hi = 0; hi < amps.size(); hi += 2 * m) {
        for (std::size_t i0 = hi; i0 < hi + m; ++i0) {
            const std::size_t i1 = i0 | m;
            const cplx a0 = amps[i0];
            const cplx a1 = amps[i1];
            amps[i0] = g00 * a0 + g01 * a1;
            amps[i1] = g10 * a0 + g11 * a1;
        }
    }
}

/// Generic 4x4 action; `qa` is the high qubit of the matrix basis.
inline void apply_2q(std::span<cplx> amps, std::size_t n_qubits,
                     std::size_t qa, std::size_t qb, const SmallMatrix &g) {
    const std::size_t ma = bit_mask(n_qubits, qa);
    const std::size_t mb = bit_mask(n_qubits, qb);
    const std::size_t both = ma | mb;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & both) != 0) {
            continue;
        }
        const std::array<std::size_t, 4> idx{i, i | mb, i | ma, i | ma | mb};
        std::array<cplx, 4> in{amps[idx[0]], amps[idx[1]], amps[idx[2]],
                               amps[idx[3]]};
        for (std::size_t r = 0; r < 4; ++r) {
            cplx acc{};
            for (std::size_t c = 0; c < 4; ++c) {
                acc += g(r, c) * in[c];
            }
            amps[idx[r]] = acc;
        }
    }
}

/// Sum_i conj(bra_i) * (G ket)_i for a single-qubit G.
[[nodiscard]] inline cplx braket_1q(std::span<const cplx> bra,
                                    std::span<const cplx> ket,
                                    std::size_t n_qubits, std::size_t q,
                                    const SmallMatrix &g) {
    const std::size_t m = bit_mask(n_qubits, q);
    cplx acc{};
    for (std::size_t hi = 0; hi < ket.size(); hi += 2 * m) {
        for (std::size_t i0 = hi; i0 < hi + m; ++i0) {
            const std::size_t i1 = i0 | m;
            acc += std::conj(bra[i0]) * (g(0, 0) * ket[i0] + g(0, 1) * ket[i1]);
            acc += std::conj(bra[i1]) * (g(1, 0) * ket[i0] + g(1, 1) * ket[i1]);
        }
    }
    return acc;
}

[[nodiscard]] inline cplx braket_2q(std::span<const cplx> bra,
                                    std::span<const cplx> ket,
                                    std::size_t n_qubits, std::size_t qa,
                                    std::size_t qb, const SmallMatrix &g) {
    const std::size_t ma = bit_mask(n_qubits, qa);
    const std::size_t mb = bit_mask(n_qubits, qb);
    const std::size_t both = ma | mb;
    cplx acc{};
    for (std::size_t i = 0; i < ket.size(); ++i) {
        if ((i & both) != 0) {
            continue;
        }
        const std::array<std::size_t, 4> idx{i, i | mb, i | ma, i | ma | mb};
        for (std::size_t r = 0; r < 4; ++r) {
            cplx row{};
            for (std::size_t c = 0; c < 4; ++c) {
                row += g(r, c) * ket[idx[c]];
            }
            acc += std::conj(bra[idx[r]]) * row;
        }
    }
    return acc;
}

/// Dense 2^k x 2^k row-major matrix on an ordered qubit list (first = MSB).
inline void apply_dense(std::span<cplx> amps, std::size_t n_qubits,
                        std::span<const std::size_t> qubits,
                        std::span<const cplx> matrix) {
    const std::size_t k = qubits.size();
    const std::size_t sub = std::size_t{1} << k;
    std::vector<std::size_t> offsets(sub, 0);
    std::size_t window_mask = 0;
    for (std::size_t j = 0; j < sub; ++j) {
        for (std::size_t b = 0; b < k; ++b) {
            if ((j >> (k - 1 - b)) & 1U) {
                offsets[j] |= bit_mask(n_qubits, qubits[b]);
            }
        }
    }
    for (auto q : qubits) {
        window_mask |= bit_mask(n_qubits, q);
    }
    std::vector<cplx> in(sub);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if ((base & window_mask) != 0) {
            continue;
        }
        for (std::size_t j = 0; j < sub; ++j) {
            in[j] = amps[base | offsets[j]];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc{};
            const cplx *row = matrix.data() + r * sub;
            for (std::size_t c = 0; c < sub; ++c) {
                acc += row[c] * in[c];
            }
            amps[base | offsets[r]] = acc;
        }
    }
}

} // namespace kernels

/// Normalized pure state of n qubits.
class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits.
    explicit StateVector(std::size_t n_qubits = 1)
        : n_qubits_(checked_size(n_qubits)),
          amps_(std::size_t{1} << n_qubits, cplx{}) {
        amps_[0] = 1.0;
    }

    [[nodiscard]] static StateVector basis(std::size_t n_qubits,
                                           std::uint64_t index) {
        StateVector s(n_qubits);
        if (index >= s.dim()) {
            throw ArgumentError("basis index " + std::to_string(index) +
                                " out of range for " +
                                std::to_string(n_qubits) + " qubits");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    /// Takes ownership of `amps`; the length must be a power of two and the
    /// norm 1 within `tol`.
    [[nodiscard]] static StateVector from_amplitudes(std::vector<cplx> amps,
                                                     double tol = 1e-10) {
        const std::size_t len = amps.size();
        if (len < 2 || (len & (len - 1)) != 0) {
            throw ArgumentError("amplitude count must be a power of two >= 2");
        }
        StateVector s(static_cast<std::size_t>(std::countr_zero(len)));
        s.amps_ = std::move(amps);
        if (std::abs(s.norm() - 1.0) > tol) {
            throw ArgumentError("amplitudes are not normalized");
        }
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] const cplx &operator[](std::size_t i) const {
        return amps_[i];
    }

    [[nodiscard]] double norm() const {
        double acc = 0.0;
        for (const auto &a : amps_) {
            acc += std::norm(a);
        }
        return std::sqrt(acc);
    }

    // In-place mutation, used by the circuit and gradient engines on their
    // own copies.
    [[nodiscard]] std::span<cplx> data() noexcept { return amps_; }

    void apply_gate(GateKind kind, std::span<const std::size_t> qubits,
                    std::span<const double> angles) {
        check_qubits(kind, qubits);
        const SmallMatrix g = gate_matrix(kind, angles);
        apply_matrix(g, qubits);
    }

    void apply_matrix(const SmallMatrix &g,
                      std::span<const std::size_t> qubits) {
        if (qubits.size() != (g.dim == 2 ? 1U : 2U)) {
            throw ArgumentError("matrix size does not match the qubit count");
        }
        if (qubits.size() == 1) {
            kernels::apply_1q(amps_, n_qubits_, qubits[0], g);
        } else {
            kernels::apply_2q(amps_, n_qubits_, qubits[0], qubits[1], g);
        }
    }

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    static std::size_t checked_size(std::size_t n) {
        if (n == 0 || n > 30) {
            throw ArgumentError("qubit count must be in [1, 30]");
        }
        return n;
    }

    void check_qubits(GateKind kind, std::span<const std::size_t> qubits) const {
        if (qubits.size() != arity(kind)) {
            throw ArgumentError(std::string(gate_name(kind)) +
                                ": wrong number of qubits");
        }
        for (auto q : qubits) {
            if (q >= n_qubits_) {
                throw ArgumentError(std::string(gate_name(kind)) + ": qubit " +
                                    std::to_string(q) + " out of range");
            }
        }
        if (qubits.size() == 2 && qubits[0] == qubits[1]) {
            throw ArgumentError(std::string(gate_name(kind)) +
                                ": qubits must differ");
        }
    }

    std::size_t n_qubits_;
    std::vector<cplx> amps_;
};

[[nodiscard]] inline StateVector apply_u(StateVector state, std::size_t qubit,
                                         double theta, double phi) {
    const std::array<std::size_t, 1> q{qubit};
    const std::array<double, 2> a{theta, phi};
    state.apply_gate(GateKind::U, q, a);
    return state;
}

/// Matchgate on the nearest-neighbour pair (q_low, q_low + 1).
[[nodiscard]] inline StateVector apply_matchgate(StateVector state,
                                                 std::size_t q_low,
                                                 double theta, double phi1,
                                                 double phi2) {
    if (q_low + 1 >= state.n_qubits()) {
        throw ArgumentError("matchgate pair (" + std::to_string(q_low) + "," +
                            std::to_string(q_low + 1) + ") out of range");
    }
    const std::array<std::size_t, 2> q{q_low, q_low + 1};
    const std::array<double, 3> a{theta, phi1, phi2};
    state.apply_gate(GateKind::M, q, a);
    return state;
}

/// CRY with explicit roles; control may sit above or below the target.
[[nodiscard]] inline StateVector apply_cry(StateVector state,
                                           std::size_t control,
                                           std::size_t target, double theta) {
    if (control == target) {
        throw ArgumentError("CRY control and target coincide");
    }
    const std::array<std::size_t, 2> q{control, target};
    const std::array<double, 1> a{theta};
    state.apply_gate(GateKind::CRY, q, a);
    return state;
}

namespace detail {
inline std::size_t window_mask(std::size_t n, std::span<const std::size_t> qs) {
    std::size_t m = 0;
    for (auto q : qs) {
        m |= kernels::bit_mask(n, q);
    }
    return m;
}

/// Pattern bits of `value` (over |qs| bits, first = MSB) placed on qs.
inline std::size_t scatter(std::size_t n, std::span<const std::size_t> qs,
                           std::size_t value) {
    std::size_t out = 0;
    const std::size_t k = qs.size();
    for (std::size_t b = 0; b < k; ++b) {
        if ((value >> (k - 1 - b)) & 1U) {
            out |= kernels::bit_mask(n, qs[b]);
        }
    }
    return out;
}

inline std::size_t gather(std::size_t n, std::span<const std::size_t> qs,
                          std::size_t index) {
    std::size_t out = 0;
    for (auto q : qs) {
        out = (out << 1) | ((index & kernels::bit_mask(n, q)) ? 1U : 0U);
    }
    return out;
}

inline void check_distinct(std::size_t n, std::span<const std::size_t> qs) {
    std::vector<bool> seen(n, false);
    for (auto q : qs) {
        if (q >= n) {
            throw ArgumentError("qubit " + std::to_string(q) +
                                " out of range");
        }
        if (seen[q]) {
            throw ArgumentError("duplicate qubit index " + std::to_string(q));
        }
        seen[q] = true;
    }
}
} // namespace detail

/// In place: amplitudes whose `qubits` pattern equals `marked` change sign.
inline void phase_flip_inplace(StateVector &state,
                               std::span<const std::size_t> qubits,
                               std::uint64_t marked) {
    const std::size_t n = state.n_qubits();
    detail::check_distinct(n, qubits);
    if (qubits.size() < 64 && marked >= (std::uint64_t{1} << qubits.size())) {
        throw ArgumentError("marked element out of range");
    }
    const std::size_t mask = detail::window_mask(n, qubits);
    const std::size_t pattern = detail::scatter(n, qubits, marked);
    auto amps = state.data();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == pattern) {
            amps[i] = -amps[i];
        }
    }
}

/// Phase oracle |x> -> (-1)^{[x == marked]} |x> on the whole register.
[[nodiscard]] inline StateVector apply_phase_oracle(StateVector state,
                                                    std::uint64_t marked) {
    if (marked >= state.dim()) {
        throw ArgumentError("marked element out of range");
    }
    std::vector<std::size_t> all(state.n_qubits());
    std::iota(all.begin(), all.end(), std::size_t{0});
    phase_flip_inplace(state, all, marked);
    return state;
}

/// In place: 2|s><s| - I on the listed qubits, |s> their uniform superposition.
inline void diffusion_inplace(StateVector &state,
                              std::span<const std::size_t> qubits) {
    const std::size_t n = state.n_qubits();
    detail::check_distinct(n, qubits);
    const std::size_t mask = detail::window_mask(n, qubits);
    const double scale = 2.0 / static_cast<double>(std::size_t{1} << qubits.size());
    auto amps = state.data();
    // group by the bits outside the window; within a group apply 2|s><s| - I
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if ((base & mask) != 0) {
            continue;
        }
        cplx total{};
        std::size_t sub = 0;
        do {
            total += amps[base | sub];
            sub = ((sub | ~mask) + 1) & mask;
        } while (sub != 0);
        const cplx mean_term = scale * total;
        sub = 0;
        do {
            amps[base | sub] = mean_term - amps[base | sub];
            sub = ((sub | ~mask) + 1) & mask;
        } while (sub != 0);
    }
}

/// Marginal Born distribution over `qubits` (first listed = MSB of outcome).
[[nodiscard]] inline std::vector<double>
probabilities(const StateVector &state, std::span<const std::size_t> qubits) {
    const std::size_t n = state.n_qubits();
    detail::check_distinct(n, qubits);
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        out[detail::gather(n, qubits, i)] += std::norm(amps[i]);
    }
    return out;
}

/// Full-register distribution.
[[nodiscard]] inline std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> out(state.dim());
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        out[i] = std::norm(amps[i]);
    }
    return out;
}

/// Marginalize a full-register distribution over n qubits onto `qubits`.
[[nodiscard]] inline std::vector<double>
marginal(std::span<const double> dist, std::size_t n_qubits,
         std::span<const std::size_t> qubits) {
    detail::check_distinct(n_qubits, qubits);
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out[detail::gather(n_qubits, qubits, i)] += dist[i];
    }
    return out;
}

/// <a|b>.
[[nodiscard]] inline cplx overlap(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ArgumentError("overlap: qubit counts differ");
    }
    cplx acc{};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

[[nodiscard]] inline double fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(overlap(a, b));
}

/// |a> (x) |b>, with a's qubits first.
[[nodiscard]] inline StateVector tensor(const StateVector &a,
                                        const StateVector &b) {
    std::vector<cplx> out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector::from_amplitudes(std::move(out), 1e-9);
}

} // namespace qagent
