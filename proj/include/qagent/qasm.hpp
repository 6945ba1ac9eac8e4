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
 * OpenQASM 2.0 export using only qelib1.inc gates. Expansions (each exact,
 * no global phase):
 *
 *     U(t, p)        u1(p) q; ry(t) q;
 *     UDG(t, p)      ry(-t) q; u1(-p) q;
 *     CRY(t) c,x     cu3(t,0,0) c,x;
 *     M(t, p1, p2)   u1(p1) a; cu1(p2-p1) a,b; cx a,b; cu3(t,0,0) b,a; cx a,b;
 *     RBS(t)         M(t, pi, 0)
 *
 * M is G(t) D with D = diag(1, 1, e^{i p1}, e^{i p2}) and G(t) the real
 * rotation on span{|01>, |10>}; the cx pair maps that span onto b = 1 so a
 * single controlled RY does the rotation. Adjoint gates are emitted as the
 * reversed expansion with negated angles. Qubit q[i] is global qubit i of
 * the circuit's window.
 */
#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"

namespace qagent {

namespace detail {

struct QasmLine {
    std::string gate;
    std::vector<double> args;
    std::vector<std::size_t> qubits;
};

inline std::vector<QasmLine> expand(GateKind kind, std::span<const double> a,
                                    std::size_t q0, std::size_t q1, bool adjoint) {
    std::vector<QasmLine> out;
    switch (kind) {
    case GateKind::U:
    case GateKind::UDag: {
        const bool flip = (kind == GateKind::UDag) != adjoint;
        if (!flip) {
            out = {{"u1", {a[1]}, {q0}}, {"ry", {a[0]}, {q0}}};
        } else {
            out = {{"ry", {-a[0]}, {q0}}, {"u1", {-a[1]}, {q0}}};
        }
        return out;
    }
    case GateKind::CRY:
        return {{"cu3", {adjoint ? -a[0] : a[0], 0.0, 0.0}, {q0, q1}}};
    case GateKind::M:
    case GateKind::RBS: {
        const double t = a[0];
        const double p1 = kind == GateKind::M ? a[1] : kPi;
        const double p2 = kind == GateKind::M ? a[2] : 0.0;
        if (!adjoint) {
            return {{"u1", {p1}, {q0}},
                    {"cu1", {p2 - p1}, {q0, q1}},
                    {"cx", {}, {q0, q1}},
                    {"cu3", {t, 0.0, 0.0}, {q1, q0}},
                    {"cx", {}, {q0, q1}}};
        }
        return {{"cx", {}, {q0, q1}},
                {"cu3", {-t, 0.0, 0.0}, {q1, q0}},
                {"cx", {}, {q0, q1}},
                {"cu1", {p1 - p2}, {q0, q1}},
                {"u1", {-p1}, {q0}}};
    }
    }
    return out;
}

} // namespace detail

/// OpenQASM 2.0 program for (c, params).
[[nodiscard]] inline std::string to_qasm(const ParamCircuit &c,
                                         std::span<const double> params,
                                         int precision = 17) {
    if (params.size() != c.num_params()) {
        throw ArgumentError("parameter count does not match circuit");
    }
    std::size_t width = 0;
    for (auto q : c.window()) {
        width = std::max(width, q + 1);
    }
    std::ostringstream os;
    os << std::setprecision(precision);
    os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << width << "];\n";
    for (const auto &g : c.gates()) {
        const auto a = params.subspan(g.param_offset, param_count(g.kind));
        const auto q0 = c.global_qubit(g.qubits[0]);
        const auto q1 = g.arity() == 2 ? c.global_qubit(g.qubits[1]) : 0;
        for (const auto &l : detail::expand(g.kind, a, q0, q1, g.adjoint)) {
            os << l.gate;
            if (!l.args.empty()) {
                os << '(';
                for (std::size_t i = 0; i < l.args.size(); ++i) {
                    os << (i ? "," : "") << l.args[i];
                }
                os << ')';
            }
            for (std::size_t i = 0; i < l.qubits.size(); ++i) {
                os << (i ? "," : " ") << "q[" << l.qubits[i] << ']';
            }
            os << ";\n";
        }
    }
    return os.str();
}

} // namespace qagent
