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
 * The parameterized gate set: single-qubit rotation-with-phase U(theta, phi)
 * and its adjoint, the two-qubit matchgate M(theta, phi1, phi2), the
 * controlled Y rotation CRY(theta), and the one-parameter beam-splitter
 * matchgate RBS(theta) = M(theta, pi, 0) used by swap layers.
 *
 * Matrices are row-major. Two-qubit matrices are written in the
 * |q_first q_second> basis {|00>, |01>, |10>, |11>}, where q_first is the
 * first qubit named by the gate (the control, for CRY).
 *
 * U(theta, phi) is taken verbatim as
 *
 *     [ cos(t/2)   -e^{i phi} sin(t/2) ]
 *     [ sin(t/2)    e^{i phi} cos(t/2) ]
 *
 * i.e. RY(theta) * PhaseShift(phi) with RY(t) = [[c, -s], [s, c]]. With this
 * convention U(pi/2, pi) = H, U(pi, pi) = X, U(t, 0) = RY(t) and
 * U(0, phi) = PhaseShift(phi) hold exactly.
 */
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string_view>

#include "common.hpp"

namespace qagent {

enum class GateKind { U, UDag, M, CRY, RBS };

[[nodiscard]] constexpr std::size_t param_count(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::U:
    case GateKind::UDag:
        return 2;
    case GateKind::M:
        return 3;
    case GateKind::CRY:
    case GateKind::RBS:
        return 1;
    }
    return 0;
}

[[nodiscard]] constexpr std::size_t arity(GateKind kind) noexcept {
    return (kind == GateKind::U || kind == GateKind::UDag) ? 1 : 2;
}

[[nodiscard]] constexpr std::string_view gate_name(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::U:
        return "U";
    case GateKind::UDag:
        return "UDG";
    case GateKind::M:
        return "M";
    case GateKind::CRY:
        return "CRY";
    case GateKind::RBS:
        return "RBS";
    }
    return "?";
}

/// Inverse of gate_name; throws ArgumentError on an unknown name.
[[nodiscard]] inline GateKind gate_kind_from_name(std::string_view name) {
    for (auto k : {GateKind::U, GateKind::UDag, GateKind::M, GateKind::CRY,
                   GateKind::RBS}) {
        if (gate_name(k) == name) {
            return k;
        }
    }
    throw ArgumentError("unknown gate kind '" + std::string(name) + "'");
}

/// Up to 4x4 complex matrix stored row-major; dim is 2 or 4.
struct SmallMatrix {
    std::size_t dim{2};
    std::array<cplx, 16> m{};

    [[nodiscard]] cplx &operator()(std::size_t r, std::size_t c) {
        return m[r * dim + c];
    }
    [[nodiscard]] const cplx &operator()(std::size_t r, std::size_t c) const {
        return m[r * dim + c];
    }

    [[nodiscard]] SmallMatrix adjoint() const {
        SmallMatrix out{dim, {}};
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                out(r, c) = std::conj((*this)(c, r));
            }
        }
        return out;
    }
};

namespace gates {

[[nodiscard]] inline SmallMatrix u(double theta, double phi) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const cplx e = std::polar(1.0, phi);
    SmallMatrix g{2, {}};
    g(0, 0) = c;
    g(0, 1) = -e * s;
    g(1, 0) = s;
    g(1, 1) = e * c;
    return g;
}

[[nodiscard]] inline SmallMatrix u_dagger(double theta, double phi) {
    return u(theta, phi).adjoint();
}

[[nodiscard]] inline SmallMatrix matchgate(double theta, double phi1,
                                           double phi2) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const cplx e1 = std::polar(1.0, phi1);
    SmallMatrix g{4, {}};
    g(0, 0) = 1.0;
    g(1, 1) = c;
    g(1, 2) = -e1 * s;
    g(2, 1) = s;
    g(2, 2) = e1 * c;
    g(3, 3) = std::polar(1.0, phi2);
    return g;
}

[[nodiscard]] inline SmallMatrix cry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    SmallMatrix g{4, {}};
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    g(2, 2) = c;
    g(2, 3) = -s;
    g(3, 2) = s;
    g(3, 3) = c;
    return g;
}

[[nodiscard]] inline SmallMatrix rbs(double theta) {
    return matchgate(theta, kPi, 0.0);
}

} // namespace gates

/// Matrix of `kind` at the given angles (only the first param_count used).
[[nodiscard]] inline SmallMatrix gate_matrix(GateKind kind,
                                             std::span<const double> a) {
    switch (kind) {
    case GateKind::U:
        return gates::u(a[0], a[1]);
    case GateKind::UDag:
        return gates::u_dagger(a[0], a[1]);
    case GateKind::M:
        return gates::matchgate(a[0], a[1], a[2]);
    case GateKind::CRY:
        return gates::cry(a[0]);
    case GateKind::RBS:
        return gates::rbs(a[0]);
    }
    throw ArgumentError("unknown gate kind");
}

/// Partial derivative of the gate matrix with respect to angle `which`.
[[nodiscard]] inline SmallMatrix gate_derivative(GateKind kind,
                                                 std::span<const double> a,
                                                 std::size_t which) {
    if (which >= param_count(kind)) {
        throw ArgumentError("derivative index out of range");
    }
    const double c = std::cos(a[0] / 2);
    const double s = std::sin(a[0] / 2);
    const cplx i{0.0, 1.0};
    switch (kind) {
    case GateKind::U: {
        const cplx e = std::polar(1.0, a[1]);
        SmallMatrix d{2, {}};
        if (which == 0) {
            d(0, 0) = -s / 2;
            d(0, 1) = -e * c / 2.0;
            d(1, 0) = c / 2;
            d(1, 1) = -e * s / 2.0;
        } else {
            d(0, 1) = -i * e * s;
            d(1, 1) = i * e * c;
        }
        return d;
    }
    case GateKind::UDag: {
        // adjoint of the U derivative, since d(A^dagger) = (dA)^dagger
        return gate_derivative(GateKind::U, a, which).adjoint();
    }
    case GateKind::M:
    case GateKind::RBS: {
        const double phi1 = kind == GateKind::M ? a[1] : kPi;
        const double phi2 = kind == GateKind::M ? a[2] : 0.0;
        const cplx e1 = std::polar(1.0, phi1);
        SmallMatrix d{4, {}};
        if (which == 0) {
            d(1, 1) = -s / 2;
            d(1, 2) = -e1 * c / 2.0;
            d(2, 1) = c / 2;
            d(2, 2) = -e1 * s / 2.0;
        } else if (which == 1) {
            d(1, 2) = -i * e1 * s;
            d(2, 2) = i * e1 * c;
        } else {
            d(3, 3) = i * std::polar(1.0, phi2);
        }
        return d;
    }
    case GateKind::CRY: {
        SmallMatrix d{4, {}};
        d(2, 2) = -s / 2;
        d(2, 3) = -c / 2;
        d(3, 2) = c / 2;
        d(3, 3) = -s / 2;
        return d;
    }
    }
    throw ArgumentError("unknown gate kind");
}

} // namespace qagent
