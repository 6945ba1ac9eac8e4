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
 * Pruning of trained circuits: drop gates that sit at an identity setting,
 * snap near-special angles, and check the result against the original
 * unitary.
 *
 * Identity settings (all comparisons within tol, modulo the gate's period):
 *
 *   U, UDG   theta = 0 (mod 2 pi) and phi = 0 (mod 2 pi)   (+-I, a global phase)
 *   CRY      theta = 0 (mod 4 pi)
 *   M        theta = 0 (mod 4 pi), phi1 = 0 and phi2 = 0 (mod 2 pi)
 *   RBS      never; RBS(0) is diag(1, 1, -1, 1)
 *
 * phi1 has to vanish too: M(0, phi1, phi2) = diag(1, 1, e^{i phi1}, e^{i phi2}).
 */
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "analysis.hpp"
#include "circuit.hpp"
#include "common.hpp"

namespace qagent {

struct PruneResult {
    ParamCircuit circuit;
    std::vector<double> params;
    std::size_t removed_gates{0};
    std::size_t snapped_params{0};
    /// Tolerance that passed the fidelity check (tol, tol/2, ...).
    double tol_used{0.0};
    /// phase_invariant_fidelity(original, pruned).
    double fidelity{1.0};
};

namespace detail {

/// Distance of x to the nearest multiple of `period`.
inline double periodic_distance(double x, double period) {
    const double r = std::remainder(x, period);
    return std::abs(r);
}

inline bool at_identity(GateKind kind, std::span<const double> a, double tol) {
    const double two_pi = 2 * kPi;
    switch (kind) {
    case GateKind::U:
    case GateKind::UDag:
        return periodic_distance(a[0], two_pi) <= tol &&
               periodic_distance(a[1], two_pi) <= tol;
    case GateKind::CRY:
        return periodic_distance(a[0], 2 * two_pi) <= tol;
    case GateKind::M:
        return periodic_distance(a[0], 2 * two_pi) <= tol &&
               periodic_distance(a[1], two_pi) <= tol &&
               periodic_distance(a[2], two_pi) <= tol;
    case GateKind::RBS:
        return false;
    }
    return false;
}

/// Snaps x to k pi/2 when within tol; returns true if it moved.
inline bool snap(double &x, double tol) {
    const double q = kPi / 2;
    const double k = std::round(x / q);
    if (std::abs(x - k * q) <= tol && x != k * q) {
        x = k * q;
        return true;
    }
    return false;
}

inline PruneResult prune_once(const ParamCircuit &c, std::span<const double> params,
                              double tol) {
    PruneResult out;
    out.circuit = ParamCircuit(c.n_qubits(), c.window());
    out.tol_used = tol;
    std::size_t current = kNoLayer;
    for (const auto &g : c.gates()) {
        const auto a = params.subspan(g.param_offset, param_count(g.kind));
        if (at_identity(g.kind, a, tol)) {
            ++out.removed_gates;
            continue;
        }
        if (g.layer != current) {
            current = g.layer;
            if (current == kNoLayer) {
                out.circuit.end_layer();
            } else {
                out.circuit.begin_layer(c.layers()[current].kind);
            }
        }
        Gate copy = g;
        copy.param_offset = out.params.size();
        for (double x : a) {
            out.snapped_params += snap(x, tol) ? 1 : 0;
            out.params.push_back(x);
        }
        out.circuit.add_gate_at(copy);
    }
    out.circuit.end_layer();
    return out;
}

} // namespace detail

/// Pruned copy of (c, params). The new circuit has fresh consecutive
/// parameter offsets and keeps only non-empty layers. If the unitary moved by
/// more than 10 tol in phase-invariant fidelity the pass is retried with
/// tol/2 until it passes. tol = 0 returns the circuit unchanged.
[[nodiscard]] inline PruneResult prune(const ParamCircuit &c,
                                       std::span<const double> params, double tol) {
    if (!(tol >= 0.0)) {
        throw ArgumentError("prune tolerance must be non-negative");
    }
    if (params.size() != c.num_params()) {
        throw ArgumentError("parameter count does not match circuit");
    }
    if (tol == 0.0) {
        return PruneResult{c, {params.begin(), params.end()}, 0, 0, 0.0, 1.0};
    }
    const DenseUnitary original = reconstruct(c, params);
    for (double t = tol; t > 1e-15; t /= 2) {
        auto r = detail::prune_once(c, params, t);
        if (r.removed_gates == 0 && r.snapped_params == 0) {
            r.fidelity = 1.0;
            return r;
        }
        r.fidelity =
            phase_invariant_fidelity(original, reconstruct(r.circuit, r.params));
        if (r.fidelity >= 1.0 - 10.0 * t) {
            return r;
        }
    }
    return PruneResult{c, {params.begin(), params.end()}, 0, 0, 0.0, 1.0};
}

/// Layer kinds that still hold at least one gate.
[[nodiscard]] inline std::vector<LayerKind> surviving_layers(const ParamCircuit &c) {
    std::vector<LayerKind> out;
    for (const auto &l : c.layers()) {
        if (l.gate_count > 0) {
            out.push_back(l.kind);
        }
    }
    return out;
}

} // namespace qagent
