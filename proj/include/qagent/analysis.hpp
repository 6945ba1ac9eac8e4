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
 * Post-training analysis: dense unitary reconstruction, phase-insensitive
 * comparison, diagonal phase factoring, and the reference nearest-neighbour
 * QFT and Grover constructions.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "program.hpp"
#include "statevec.hpp"

namespace qagent {

/// Largest register for which dense matrices are built.
inline constexpr std::size_t kMaxDenseQubits = 10;

/// Row-major 2^n x 2^n complex matrix.
class DenseUnitary {
  public:
    DenseUnitary() = default;

    explicit DenseUnitary(std::size_t n_qubits)
        : n_qubits_(n_qubits), dim_(std::size_t{1} << n_qubits),
          entries_(dim_ * dim_, cplx{}) {
        if (n_qubits > kMaxDenseQubits) {
            throw ArgumentError("dense matrices are limited to " +
                                std::to_string(kMaxDenseQubits) + " qubits");
        }
    }

    [[nodiscard]] static DenseUnitary identity(std::size_t n_qubits) {
        DenseUnitary u(n_qubits);
        for (std::size_t i = 0; i < u.dim(); ++i) {
            u(i, i) = 1.0;
        }
        return u;
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] cplx &operator()(std::size_t r, std::size_t c) {
        return entries_[r * dim_ + c];
    }
    [[nodiscard]] const cplx &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * dim_ + c];
    }
    [[nodiscard]] std::span<const cplx> entries() const noexcept { return entries_; }

    [[nodiscard]] DenseUnitary adjoint() const {
        DenseUnitary out(n_qubits_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                out(r, c) = std::conj((*this)(c, r));
            }
        }
        return out;
    }

    friend DenseUnitary operator*(const DenseUnitary &a, const DenseUnitary &b) {
        if (a.dim_ != b.dim_) {
            throw ArgumentError("matrix dimensions differ");
        }
        DenseUnitary out(a.n_qubits_);
        for (std::size_t r = 0; r < a.dim_; ++r) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const cplx x = a(r, k);
                if (x == cplx{}) {
                    continue;
                }
                for (std::size_t c = 0; c < a.dim_; ++c) {
                    out(r, c) += x * b(k, c);
                }
            }
        }
        return out;
    }

    /// max |(U^dagger U - I)_{rc}|.
    [[nodiscard]] double unitarity_error() const {
        const DenseUnitary p = adjoint() * (*this);
        double worst = 0.0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                const cplx expect = r == c ? cplx{1.0} : cplx{};
                worst = std::max(worst, std::abs(p(r, c) - expect));
            }
        }
        return worst;
    }

    /// Column `c` as a state.
    [[nodiscard]] StateVector column(std::size_t c) const {
        std::vector<cplx> v(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            v[r] = (*this)(r, c);
        }
        return StateVector::from_amplitudes(std::move(v), 1e-8);
    }

  private:
    std::size_t n_qubits_{0};
    std::size_t dim_{1};
    std::vector<cplx> entries_{cplx{1.0}};
};

/// Unitary of an operation list on an n-qubit register.
[[nodiscard]] inline DenseUnitary reconstruct(const std::vector<Op> &ops,
                                              std::span<const double> params,
                                              std::size_t n_qubits) {
    DenseUnitary u(n_qubits);
    for (std::size_t c = 0; c < u.dim(); ++c) {
        StateVector s = StateVector::basis(n_qubits, c);
        for (const auto &op : ops) {
            apply_op(op, params, s);
        }
        for (std::size_t r = 0; r < u.dim(); ++r) {
            u(r, c) = s[r];
        }
    }
    return u;
}

/// Unitary of a circuit on its own window (window qubit i -> qubit i).
[[nodiscard]] inline DenseUnitary reconstruct(const ParamCircuit &c,
                                              std::span<const double> params) {
    if (c.n_qubits() > kMaxDenseQubits) {
        throw ArgumentError("circuit too large to reconstruct densely");
    }
    if (params.size() != c.num_params()) {
        throw ArgumentError("parameter count does not match circuit");
    }
    std::vector<Op> ops;
    append_circuit(ops, c.with_window({}), 0);
    return reconstruct(ops, params, c.n_qubits());
}

/// |tr(U^dagger V)|^2 / d^2.
[[nodiscard]] inline double phase_invariant_fidelity(const DenseUnitary &u,
                                                     const DenseUnitary &v) {
    if (u.dim() != v.dim()) {
        throw ArgumentError("phase_invariant_fidelity: dimensions differ");
    }
    cplx tr{};
    for (std::size_t r = 0; r < u.dim(); ++r) {
        for (std::size_t c = 0; c < u.dim(); ++c) {
            tr += std::conj(u(r, c)) * v(r, c);
        }
    }
    const double d = static_cast<double>(u.dim());
    return std::norm(tr) / (d * d);
}

struct DiagonalFactor {
    /// Unit-modulus diagonal D minimizing ||U - V D||_F.
    std::vector<cplx> phases;
    /// |(V^dagger U)_{jj}|; all ones when U equals V up to diagonal phases.
    std::vector<double> magnitudes;
    /// phase_invariant_fidelity(U, V D).
    double fidelity{0.0};
};

[[nodiscard]] inline DiagonalFactor diagonal_phase_factor(const DenseUnitary &u,
                                                          const DenseUnitary &v) {
    if (u.dim() != v.dim()) {
        throw ArgumentError("diagonal_phase_factor: dimensions differ");
    }
    const DenseUnitary m = v.adjoint() * u;
    DiagonalFactor out;
    DenseUnitary vd = v;
    for (std::size_t j = 0; j < u.dim(); ++j) {
        const double mag = std::abs(m(j, j));
        const cplx phase = mag > 1e-14 ? m(j, j) / mag : cplx{1.0};
        out.phases.push_back(phase);
        out.magnitudes.push_back(mag);
        for (std::size_t r = 0; r < u.dim(); ++r) {
            vd(r, j) *= phase;
        }
    }
    out.fidelity = phase_invariant_fidelity(u, vd);
    return out;
}

/// QFT_{2^n}: entry (k, x) = exp(2 pi i x k / 2^n) / sqrt(2^n).
[[nodiscard]] inline DenseUnitary qft_matrix(std::size_t n) {
    DenseUnitary u(n);
    const double d = static_cast<double>(u.dim());
    for (std::size_t k = 0; k < u.dim(); ++k) {
        for (std::size_t x = 0; x < u.dim(); ++x) {
            const auto e = static_cast<double>((x * k) % u.dim());
            u(k, x) = std::polar(1.0 / std::sqrt(d), 2.0 * kPi * e / d);
        }
    }
    return u;
}

/// 2|s><s| - I on n qubits.
[[nodiscard]] inline DenseUnitary diffusion_matrix(std::size_t n) {
    DenseUnitary u(n);
    const double two_over_n = 2.0 / static_cast<double>(u.dim());
    for (std::size_t r = 0; r < u.dim(); ++r) {
        for (std::size_t c = 0; c < u.dim(); ++c) {
            u(r, c) = two_over_n - (r == c ? 1.0 : 0.0);
        }
    }
    return u;
}

/// Diagonal unitary with the given entries.
[[nodiscard]] inline DenseUnitary diagonal_matrix(std::span<const cplx> d) {
    const auto n = static_cast<std::size_t>(std::countr_zero(d.size()));
    DenseUnitary u(n);
    for (std::size_t i = 0; i < d.size(); ++i) {
        u(i, i) = d[i];
    }
    return u;
}

/// Nearest-neighbour QFT from the gate set. Pass d applies H = U(pi/2, pi)
/// to qubit 0, then for j = 0 .. n-2-d a controlled phase M(0, 0, pi/2^(j+1))
/// on (j, j+1) followed by SWAP = M(pi, pi, 0) on (j, j+1). Each pass carries
/// its qubit to the bottom of the still-active range, so the output comes out
/// in standard order (qubit 0 most significant) with no trailing reversal.
[[nodiscard]] inline BoundCircuit general_qft_circuit(std::size_t n) {
    ParamCircuit c(n);
    std::vector<double> p;
    for (std::size_t d = 0; d < n; ++d) {
        c.add_gate(GateKind::U, 0);
        p.insert(p.end(), {kPi / 2, kPi});
        for (std::size_t j = 0; j + 1 + d < n; ++j) {
            c.add_gate(GateKind::M, j, j + 1);
            p.insert(p.end(), {0.0, 0.0, kPi / std::pow(2.0, static_cast<double>(j + 1))});
            c.add_gate(GateKind::M, j, j + 1);
            p.insert(p.end(), {kPi, kPi, 0.0});
        }
    }
    return {std::move(c), std::move(p)};
}

struct QftGateCounts {
    std::size_t controlled_rotations{0};
    std::size_t swaps{0};
    std::size_t single_qubit{0};
};

/// Classifies matchgates as controlled phases (theta = 0, phi1 = 0) or
/// SWAPs (theta = pi, phi1 = pi, phi2 = 0).
[[nodiscard]] inline QftGateCounts count_qft_gates(const BoundCircuit &b) {
    QftGateCounts out;
    for (const auto &g : b.circuit.gates()) {
        const double *a = b.params.data() + g.param_offset;
        if (g.arity() == 1) {
            ++out.single_qubit;
        } else if (g.kind == GateKind::M && a[0] == 0.0 && a[1] == 0.0) {
            ++out.controlled_rotations;
        } else if (g.kind == GateKind::M && a[0] == kPi && a[1] == kPi && a[2] == 0.0) {
            ++out.swaps;
        }
    }
    return out;
}

/// Hadamard on every listed qubit, as fixed U(pi/2, pi) gates.
[[nodiscard]] inline std::vector<Op> hadamard_wall(std::span<const std::size_t> qubits) {
    std::vector<Op> ops;
    for (auto q : qubits) {
        ops.emplace_back(FixedGateOp{GateKind::U, {q, 0}, {kPi / 2, kPi, 0.0}, false});
    }
    return ops;
}

[[nodiscard]] inline std::vector<std::size_t> first_qubits(std::size_t n) {
    std::vector<std::size_t> q(n);
    std::iota(q.begin(), q.end(), std::size_t{0});
    return q;
}

/// Textbook Grover on n qubits with `queries` oracle calls for one marked
/// element: Hadamard wall, then (oracle, diffusion) per query.
[[nodiscard]] inline std::vector<Op> canonical_grover(std::size_t n, std::size_t queries,
                                                      std::uint64_t marked) {
    const auto qs = first_qubits(n);
    std::vector<Op> ops = hadamard_wall(qs);
    for (std::size_t k = 0; k < queries; ++k) {
        ops.emplace_back(PhaseFlipOp{qs, marked});
        ops.emplace_back(DiffusionOp{qs});
    }
    return ops;
}

/// sin^2((2k + 1) asin(1/sqrt(N))).
[[nodiscard]] inline double grover_closed_form(std::size_t n, std::size_t queries) {
    const double theta =
        std::asin(1.0 / std::sqrt(static_cast<double>(std::size_t{1} << n)));
    const double s = std::sin((2.0 * static_cast<double>(queries) + 1.0) * theta);
    return s * s;
}

/// Square complex matrix used for reduced density matrices.
using ComplexMatrix = Eigen::MatrixXcd;

/// Reduced density matrix of `state` on `keep` (first listed = MSB).
[[nodiscard]] inline ComplexMatrix reduced_density_matrix(const StateVector &state,
                                                          std::span<const std::size_t> keep) {
    const std::size_t n = state.n_qubits();
    detail::check_distinct(n, keep);
    const std::size_t kd = std::size_t{1} << keep.size();
    const std::size_t keep_mask = detail::window_mask(n, keep);
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(kd),
                                            static_cast<Eigen::Index>(kd));
    const auto a = state.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == cplx{}) {
            continue;
        }
        const std::size_t ri = detail::gather(n, keep, i);
        const std::size_t rest = i & ~keep_mask;
        for (std::size_t c = 0; c < kd; ++c) {
            const std::size_t j = rest | detail::scatter(n, keep, c);
            rho(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(c)) +=
                a[i] * std::conj(a[j]);
        }
    }
    return rho;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
[[nodiscard]] inline double trace_norm(const ComplexMatrix &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

/// Plain-text dump: header "unitary <dim>" then one row per line of
/// space-separated "re,im" pairs.
inline void write_matrix(std::ostream &os, const DenseUnitary &u, int precision = 17) {
    os << "unitary " << u.dim() << '\n' << std::setprecision(precision);
    for (std::size_t r = 0; r < u.dim(); ++r) {
        for (std::size_t c = 0; c < u.dim(); ++c) {
            os << (c ? " " : "") << u(r, c).real() << ',' << u(r, c).imag();
        }
        os << '\n';
    }
}

[[nodiscard]] inline DenseUnitary read_matrix(std::istream &is) {
    std::string tag;
    std::size_t dim = 0;
    if (!(is >> tag >> dim) || tag != "unitary" || dim == 0 || (dim & (dim - 1)) != 0) {
        throw ParseError(1, "expected 'unitary <dim>' header");
    }
    DenseUnitary u(static_cast<std::size_t>(std::countr_zero(dim)));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            double re = 0.0;
            double im = 0.0;
            char comma = 0;
            if (!(is >> re >> comma >> im) || comma != ',') {
                throw ParseError(r + 2, "malformed matrix entry");
            }
            u(r, c) = {re, im};
        }
    }
    return u;
}

} // namespace qagent
