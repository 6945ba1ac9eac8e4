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
 * Parameterized policy circuits: an ordered list of gates on a qubit window,
 * grouped into typed layers, reading their angles from a flat parameter
 * array.
 */
#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "gates.hpp"
#include "statevec.hpp"

namespace qagent {

enum class LayerKind {
    RYPhaseShift,
    CRYDownLadder,
    MatchgatePyramid,
    CRYUpLadder,
    RYPhaseShiftAdjoint,
    SwapLayer,
};

inline constexpr std::array<LayerKind, 6> kAllLayerKinds{
    LayerKind::RYPhaseShift,     LayerKind::CRYDownLadder,
    LayerKind::MatchgatePyramid, LayerKind::CRYUpLadder,
    LayerKind::RYPhaseShiftAdjoint, LayerKind::SwapLayer};

/// The five-layer block without the optional swap layer.
inline const std::vector<LayerKind> kStandardBlock{
    LayerKind::RYPhaseShift, LayerKind::CRYDownLadder,
    LayerKind::MatchgatePyramid, LayerKind::CRYUpLadder,
    LayerKind::RYPhaseShiftAdjoint};

/// All six layers.
inline const std::vector<LayerKind> kFullBlock{
    LayerKind::RYPhaseShift,     LayerKind::CRYDownLadder,
    LayerKind::MatchgatePyramid, LayerKind::CRYUpLadder,
    LayerKind::RYPhaseShiftAdjoint, LayerKind::SwapLayer};

[[nodiscard]] constexpr std::string_view layer_name(LayerKind k) noexcept {
    switch (k) {
    case LayerKind::RYPhaseShift:
        return "RYPhaseShift";
    case LayerKind::CRYDownLadder:
        return "CRYDownLadder";
    case LayerKind::MatchgatePyramid:
        return "MatchgatePyramid";
    case LayerKind::CRYUpLadder:
        return "CRYUpLadder";
    case LayerKind::RYPhaseShiftAdjoint:
        return "RYPhaseShiftAdjoint";
    case LayerKind::SwapLayer:
        return "SwapLayer";
    }
    return "?";
}

[[nodiscard]] inline LayerKind layer_kind_from_name(std::string_view name) {
    for (auto k : kAllLayerKinds) {
        if (layer_name(k) == name) {
            return k;
        }
    }
    throw ArgumentError("unknown layer kind '" + std::string(name) + "'");
}

inline constexpr std::size_t kNoLayer = std::numeric_limits<std::size_t>::max();

struct Gate {
    GateKind kind{GateKind::U};
    /// Window-local qubits; for CRY qubits[0] is the control.
    std::array<std::size_t, 2> qubits{};
    std::size_t param_offset{0};
    std::size_t layer{kNoLayer};
    /// Apply the conjugate transpose of the gate matrix.
    bool adjoint{false};

    [[nodiscard]] std::size_t arity() const noexcept {
        return qagent::arity(kind);
    }

    friend bool operator==(const Gate &, const Gate &) = default;
};

struct Layer {
    LayerKind kind;
    std::size_t first_gate;
    std::size_t gate_count;

    friend bool operator==(const Layer &, const Layer &) = default;
};

/// Effective matrix of `gate` given the full parameter array.
[[nodiscard]] inline SmallMatrix effective_matrix(const Gate &gate,
                                                  std::span<const double> params) {
    auto m = gate_matrix(gate.kind,
                         params.subspan(gate.param_offset, param_count(gate.kind)));
    return gate.adjoint ? m.adjoint() : m;
}

class ParamCircuit {
  public:
    ParamCircuit() = default;

    /// Circuit on `n_qubits` window qubits mapped to `window` in a larger
    /// register (identity mapping when empty).
    explicit ParamCircuit(std::size_t n_qubits,
                          std::vector<std::size_t> window = {})
        : n_qubits_(n_qubits), window_(std::move(window)) {
        if (n_qubits == 0) {
            throw ArgumentError("circuit needs at least one qubit");
        }
        if (window_.empty()) {
            window_.resize(n_qubits);
            std::iota(window_.begin(), window_.end(), std::size_t{0});
        }
        if (window_.size() != n_qubits) {
            throw ArgumentError("window size does not match qubit count");
        }
        std::vector<std::size_t> sorted = window_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ArgumentError("window has duplicate qubits");
        }
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<std::size_t> &window() const noexcept {
        return window_;
    }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept {
        return gates_;
    }
    [[nodiscard]] const std::vector<Layer> &layers() const noexcept {
        return layers_;
    }
    [[nodiscard]] std::size_t num_params() const noexcept { return num_params_; }

    /// Subsequent gates belong to a new layer of kind `kind`.
    void begin_layer(LayerKind kind) {
        layers_.push_back(Layer{kind, gates_.size(), 0});
        open_layer_ = true;
    }

    /// Ends the current layer; later gates are ungrouped.
    void end_layer() noexcept { open_layer_ = false; }

    /// Appends a gate reading fresh parameters; returns its index. Two-qubit
    /// gates must act on window-adjacent qubits.
    std::size_t add_gate(GateKind kind, std::size_t q0,
                         std::size_t q1 = kNoLayer, bool adjoint = false) {
        Gate g;
        g.kind = kind;
        g.qubits = {q0, arity(kind) == 2 ? q1 : 0};
        g.param_offset = num_params_;
        g.adjoint = adjoint;
        return push(g, true);
    }

    /// Appends a gate that reads an existing parameter offset; used by parsers
    /// and transformations that keep a caller-chosen layout.
    std::size_t add_gate_at(Gate g) { return push(g, false); }

    /// Same gates on a different window of equal size.
    [[nodiscard]] ParamCircuit with_window(std::vector<std::size_t> window) const {
        ParamCircuit out(n_qubits_, std::move(window));
        out.gates_ = gates_;
        out.layers_ = layers_;
        out.num_params_ = num_params_;
        return out;
    }

    [[nodiscard]] std::size_t global_qubit(std::size_t local) const {
        return window_.at(local);
    }

    /// Number of gates of each kind, indexed by GateKind.
    [[nodiscard]] std::array<std::size_t, 5> gate_counts() const {
        std::array<std::size_t, 5> c{};
        for (const auto &g : gates_) {
            ++c[static_cast<std::size_t>(g.kind)];
        }
        return c;
    }

    friend bool operator==(const ParamCircuit &, const ParamCircuit &) = default;

  private:
    std::size_t push(Gate g, bool fresh_params) {
        check_gate(g);
        if (open_layer_ && !layers_.empty()) {
            g.layer = layers_.size() - 1;
            ++layers_.back().gate_count;
        } else {
            g.layer = kNoLayer;
        }
        if (fresh_params) {
            num_params_ += param_count(g.kind);
        } else {
            num_params_ = std::max(num_params_, g.param_offset + param_count(g.kind));
        }
        gates_.push_back(g);
        return gates_.size() - 1;
    }

    void check_gate(const Gate &g) const {
        if (g.qubits[0] >= n_qubits_) {
            throw ArgumentError(std::string(gate_name(g.kind)) + ": qubit " +
                                std::to_string(g.qubits[0]) +
                                " outside the circuit window");
        }
        if (g.arity() == 2) {
            const auto a = g.qubits[0];
            const auto b = g.qubits[1];
            if (b >= n_qubits_) {
                throw ArgumentError(std::string(gate_name(g.kind)) + ": qubit " +
                                    std::to_string(b) +
                                    " outside the circuit window");
            }
            if ((a > b ? a - b : b - a) != 1) {
                throw ArgumentError(std::string(gate_name(g.kind)) +
                                    ": qubits " + std::to_string(a) + "," +
                                    std::to_string(b) +
                                    " are not nearest neighbours");
            }
            if (g.kind != GateKind::CRY && b != a + 1) {
                throw ArgumentError(std::string(gate_name(g.kind)) +
                                    ": matchgates are written (q, q+1)");
            }
        }
    }

    std::size_t n_qubits_{1};
    std::vector<std::size_t> window_{0};
    std::vector<Gate> gates_;
    std::vector<Layer> layers_;
    std::size_t num_params_{0};
    bool open_layer_{false};
};

/// A circuit together with its angles.
struct BoundCircuit {
    ParamCircuit circuit;
    std::vector<double> params;
};

struct PolicyOptions {
    /// Size of the upper block exchanged by a swap layer; 0 means n / 2.
    std::size_t swap_split{0};
};

namespace detail {

/// Adjacent transpositions that move the upper `split` qubits below the
/// remaining ones, keeping the order inside each block. Pairs are emitted in
/// parallel rounds (the diamond pattern), lowest pair first in a round.
inline std::vector<std::size_t> block_exchange_pairs(std::size_t n,
                                                     std::size_t split) {
    std::vector<int> label(n, 1);
    for (std::size_t i = split; i < n; ++i) {
        label[i] = 0;
    }
    std::vector<std::size_t> out;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::size_t> round;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (label[i] == 1 && label[i + 1] == 0 &&
                (round.empty() || round.back() + 1 < i)) {
                round.push_back(i);
            }
        }
        for (auto i : round) {
            std::swap(label[i], label[i + 1]);
            out.push_back(i);
            changed = true;
        }
    }
    return out;
}

} // namespace detail

/// Appends one layer of kind `kind` on all n window qubits.
inline void append_layer(ParamCircuit &c, LayerKind kind,
                         const PolicyOptions &options = {}) {
    const std::size_t n = c.n_qubits();
    c.begin_layer(kind);
    switch (kind) {
    case LayerKind::RYPhaseShift:
        for (std::size_t q = 0; q < n; ++q) {
            c.add_gate(GateKind::U, q);
        }
        break;
    case LayerKind::CRYDownLadder:
        for (std::size_t q = 0; q + 1 < n; ++q) {
            c.add_gate(GateKind::CRY, q, q + 1);
        }
        break;
    case LayerKind::MatchgatePyramid:
        // pass p: U on the first qubit, then matchgates (0,1) ... (n-2-p, n-1-p)
        for (std::size_t p = 0; p < n; ++p) {
            c.add_gate(GateKind::U, 0);
            for (std::size_t q = 0; q + 1 + p < n; ++q) {
                c.add_gate(GateKind::M, q, q + 1);
            }
        }
        break;
    case LayerKind::CRYUpLadder:
        for (std::size_t q = n - 1; q >= 1; --q) {
            c.add_gate(GateKind::CRY, q, q - 1);
        }
        break;
    case LayerKind::RYPhaseShiftAdjoint:
        for (std::size_t q = 0; q < n; ++q) {
            c.add_gate(GateKind::UDag, q);
        }
        break;
    case LayerKind::SwapLayer: {
        const std::size_t split = options.swap_split == 0 ? n / 2 : options.swap_split;
        if (split >= n) {
            throw ArgumentError("swap split must be smaller than the window");
        }
        for (auto q : detail::block_exchange_pairs(n, split)) {
            c.add_gate(GateKind::RBS, q, q + 1);
        }
        break;
    }
    }
    c.end_layer();
}

/// Policy circuit with the given layers, in order, on `n` qubits.
[[nodiscard]] inline ParamCircuit build_policy(std::size_t n,
                                               const std::vector<LayerKind> &layers,
                                               const PolicyOptions &options = {},
                                               std::vector<std::size_t> window = {}) {
    if (layers.empty()) {
        throw ArgumentError("policy needs at least one layer");
    }
    ParamCircuit c(n, std::move(window));
    for (auto k : layers) {
        append_layer(c, k, options);
    }
    return c;
}

/// `depth` copies of `c` back to back, each with its own parameters.
[[nodiscard]] inline ParamCircuit stack(const ParamCircuit &c, std::size_t depth) {
    if (depth == 0) {
        throw ArgumentError("stack depth must be at least 1");
    }
    ParamCircuit out(c.n_qubits(), c.window());
    for (std::size_t d = 0; d < depth; ++d) {
        const std::size_t shift = d * c.num_params();
        std::size_t current = kNoLayer;
        for (const auto &g : c.gates()) {
            if (g.layer != current) {
                current = g.layer;
                if (current == kNoLayer) {
                    out.end_layer();
                } else {
                    out.begin_layer(c.layers()[current].kind);
                }
            }
            Gate copy = g;
            copy.param_offset += shift;
            out.add_gate_at(copy);
        }
        out.end_layer();
    }
    return out;
}

/// Reversed circuit with every gate conjugate-transposed; same parameter
/// layout, so apply(adjoint(c), p) undoes apply(c, p).
[[nodiscard]] inline ParamCircuit adjoint(const ParamCircuit &c) {
    ParamCircuit out(c.n_qubits(), c.window());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        Gate g = *it;
        g.adjoint = !g.adjoint;
        out.add_gate_at(g);
    }
    return out;
}

/// In place on a register that contains the circuit's window.
inline void apply_inplace(const ParamCircuit &c, std::span<const double> params,
                          StateVector &state) {
    if (params.size() != c.num_params()) {
        throw ArgumentError("parameter count " + std::to_string(params.size()) +
                            " does not match circuit (" +
                            std::to_string(c.num_params()) + ")");
    }
    for (auto q : c.window()) {
        if (q >= state.n_qubits()) {
            throw ArgumentError("circuit window exceeds the register");
        }
    }
    for (const auto &g : c.gates()) {
        const auto m = effective_matrix(g, params);
        const std::array<std::size_t, 2> q{c.global_qubit(g.qubits[0]),
                                           g.arity() == 2
                                               ? c.global_qubit(g.qubits[1])
                                               : 0};
        state.apply_matrix(m, std::span<const std::size_t>(q.data(), g.arity()));
    }
}

[[nodiscard]] inline StateVector apply(const ParamCircuit &c,
                                       std::span<const double> params,
                                       StateVector state) {
    apply_inplace(c, params, state);
    return state;
}

} // namespace qagent
