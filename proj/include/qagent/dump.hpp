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
 * Text forms of a bound circuit.
 *
 * render() draws one wire per window qubit, in the style of printed circuit
 * listings:
 *
 *     # qagent circuit qubits=3 window=0,1,2
 *     # layers RYPhaseShift:3 CRYDownLadder:2
 *      0: --RYPhase(0.10,3.14)--||--/o--------------
 *      1: --RYPhase(1.57,0.00)--||--\RY(0.50)--/o---
 *      2: --RYPhase(0.00,0.00)--||-------------\RY(1.00)-
 *
 * Tokens: RYPhase(t,p), RYPhaseDag(t,p), /M(t,p1,p2) over \M(..),
 * /RBS(t) over \RBS(t), and a CRY drawn /o over \RY(t) (control above) or
 * /RY(t) over \o (control below). A trailing ' on the name marks a gate
 * applied as its adjoint. "||" separates layers. Gates sharing a column
 * commute and are read top to bottom, which is also their order in the
 * circuit. Angles are printed with a fixed number of decimals (2 by
 * default, like the listings); parse() only reproduces angles to that
 * precision.
 *
 * The circuit file is the lossless, line-oriented form:
 *
 *     qagent-circuit 1
 *     qubits <n>
 *     window <q0> <q1> ...
 *     layer <LayerKind>          opens a layer; "end" closes it
 *     gate <KIND> <q0> [<q1>] @<offset> [adj]
 *     end
 *     params <count>
 *     <value>                    count lines, 17 significant digits
 *
 * Blank lines and lines starting with '#' are ignored everywhere.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"

namespace qagent {

struct RenderOptions {
    /// Decimals per angle.
    int precision{2};
    /// Emit the two '#' lines parse() uses for the window and layers.
    bool header{true};
};

namespace detail {

inline std::string fmt_angles(std::span<const double> a, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << '(';
    for (std::size_t i = 0; i < a.size(); ++i) {
        os << (i ? "," : "") << a[i];
    }
    os << ')';
    return os.str();
}

/// Runs of consecutive gates with the same layer index.
struct LayerRun {
    std::size_t layer;
    std::size_t count;
};

inline std::vector<LayerRun> layer_runs(const ParamCircuit &c) {
    std::vector<LayerRun> runs;
    for (const auto &g : c.gates()) {
        if (runs.empty() || runs.back().layer != g.layer) {
            runs.push_back({g.layer, 0});
        }
        ++runs.back().count;
    }
    return runs;
}

/// (top row, bottom row) text for gate g.
inline std::pair<std::string, std::string> gate_cells(const Gate &g,
                                                      std::span<const double> a,
                                                      int precision) {
    const std::string adj = g.adjoint ? "'" : "";
    const std::string ang = fmt_angles(a, precision);
    switch (g.kind) {
    case GateKind::U:
        return {"RYPhase" + adj + ang, {}};
    case GateKind::UDag:
        return {"RYPhaseDag" + adj + ang, {}};
    case GateKind::M:
        return {"/M" + adj + ang, "\\M" + adj + ang};
    case GateKind::RBS:
        return {"/RBS" + adj + ang, "\\RBS" + adj + ang};
    case GateKind::CRY:
        if (g.qubits[0] < g.qubits[1]) {
            return {"/o", "\\RY" + adj + ang};
        }
        return {"/RY" + adj + ang, "\\o"};
    }
    return {};
}

} // namespace detail

/// Wire diagram of (c, params).
[[nodiscard]] inline std::string render(const ParamCircuit &c,
                                        std::span<const double> params,
                                        const RenderOptions &opt = {}) {
    if (params.size() != c.num_params()) {
        throw ArgumentError("parameter count does not match circuit");
    }
    const std::size_t n = c.n_qubits();
    // columns[k][row]; a column with barrier = true is drawn as "||"
    struct Column {
        std::vector<std::string> cells;
        bool barrier{false};
    };
    std::vector<Column> cols;
    std::vector<std::size_t> next_free(n, 0);
    std::size_t prev_col = 0;
    std::size_t prev_top = 0;
    bool first = true;
    std::size_t current_layer = kNoLayer;

    for (const auto &g : c.gates()) {
        if (!first && g.layer != current_layer) {
            cols.push_back(Column{std::vector<std::string>(n), true});
            std::fill(next_free.begin(), next_free.end(), cols.size());
            prev_col = cols.size();
            prev_top = 0;
        }
        current_layer = g.layer;
        const std::size_t top =
            g.arity() == 2 ? std::min(g.qubits[0], g.qubits[1]) : g.qubits[0];
        std::size_t col = next_free[top];
        if (g.arity() == 2) {
            col = std::max(col, next_free[top + 1]);
        }
        col = std::max(col, prev_col);
        if (!first && col == prev_col && top <= prev_top) {
            ++col;
        }
        while (cols.size() <= col) {
            cols.push_back(Column{std::vector<std::string>(n), false});
        }
        auto [upper, lower] = detail::gate_cells(
            g, params.subspan(g.param_offset, param_count(g.kind)), opt.precision);
        cols[col].cells[top] = std::move(upper);
        next_free[top] = col + 1;
        if (g.arity() == 2) {
            cols[col].cells[top + 1] = std::move(lower);
            next_free[top + 1] = col + 1;
        }
        prev_col = col;
        prev_top = top;
        first = false;
    }

    std::ostringstream os;
    if (opt.header) {
        os << "# qagent circuit qubits=" << n << " window=";
        for (std::size_t i = 0; i < n; ++i) {
            os << (i ? "," : "") << c.window()[i];
        }
        os << "\n# layers";
        for (const auto &r : detail::layer_runs(c)) {
            os << ' '
               << (r.layer == kNoLayer ? std::string("-")
                                       : std::string(layer_name(c.layers()[r.layer].kind)))
               << ':' << r.count;
        }
        os << '\n';
    }
    const int label_width = n > 10 ? 2 : 1;
    std::vector<std::string> rows(n, "-");
    for (const auto &col : cols) {
        if (col.barrier) {
            for (auto &r : rows) {
                r += "-||-";
            }
            continue;
        }
        std::size_t w = 0;
        for (const auto &cell : col.cells) {
            w = std::max(w, cell.size());
        }
        for (std::size_t q = 0; q < n; ++q) {
            rows[q] += '-';
            rows[q] += col.cells[q];
            rows[q].append(w - col.cells[q].size() + 1, '-');
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        os << std::setw(label_width + 1) << q << ": " << rows[q] << "-\n";
    }
    return os.str();
}

namespace detail {

struct Token {
    std::string name; // without the slash and the adjoint mark
    char side{0};     // '/', '\\' or 0
    bool adjoint{false};
    std::vector<double> angles;
};

inline std::vector<double> parse_angles(std::string_view s, std::size_t line) {
    std::vector<double> out;
    std::string buf(s);
    std::size_t pos = 0;
    while (pos <= buf.size()) {
        const auto comma = buf.find(',', pos);
        const std::string item =
            buf.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        char *end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size()) {
            throw ParseError(line, "bad angle '" + item + "'");
        }
        out.push_back(v);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

/// Reads one token starting at row[p]; returns one past its end.
inline std::size_t read_token(const std::string &row, std::size_t p, std::size_t line,
                              Token &tok) {
    std::size_t i = p;
    if (row[i] == '/' || row[i] == '\\') {
        tok.side = row[i++];
    }
    const std::size_t name_begin = i;
    while (i < row.size() && std::isalpha(static_cast<unsigned char>(row[i]))) {
        ++i;
    }
    tok.name = row.substr(name_begin, i - name_begin);
    if (tok.name.empty()) {
        throw ParseError(line, "unexpected character '" + std::string(1, row[p]) +
                                   "' at column " + std::to_string(p + 1));
    }
    if (i < row.size() && row[i] == '\'') {
        tok.adjoint = true;
        ++i;
    }
    if (tok.name == "o") {
        return i;
    }
    if (i >= row.size() || row[i] != '(') {
        throw ParseError(line, "missing '(' after " + tok.name);
    }
    const auto close = row.find(')', i);
    if (close == std::string::npos) {
        throw ParseError(line, "unterminated angle list");
    }
    tok.angles = parse_angles(std::string_view(row).substr(i + 1, close - i - 1), line);
    return close + 1;
}

inline std::size_t expect_angles(const Token &t, std::size_t n, std::size_t line) {
    if (t.angles.size() != n) {
        throw ParseError(line, t.name + " takes " + std::to_string(n) + " angle(s), got " +
                                   std::to_string(t.angles.size()));
    }
    return n;
}

} // namespace detail

/// Inverse of render(). Without a header the window is 0..n-1 and no layers
/// are recorded.
[[nodiscard]] inline BoundCircuit parse_dump(std::string_view text) {
    std::vector<std::string> rows;
    std::vector<std::size_t> row_line;
    std::vector<std::size_t> window;
    std::vector<std::pair<std::string, std::size_t>> runs;
    bool have_runs = false;
    std::size_t layers_line = 0;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(' ');
        if (first == std::string::npos) {
            continue;
        }
        if (line[first] == '#') {
            std::istringstream hs(line.substr(first + 1));
            std::string word;
            hs >> word;
            if (word == "qagent") {
                while (hs >> word) {
                    if (word.rfind("window=", 0) == 0) {
                        std::istringstream ws(word.substr(7));
                        std::string q;
                        while (std::getline(ws, q, ',')) {
                            char *end = nullptr;
                            const auto v = std::strtoull(q.c_str(), &end, 10);
                            if (q.empty() || *end != '\0') {
                                throw ParseError(ln, "bad window entry '" + q + "'");
                            }
                            window.push_back(static_cast<std::size_t>(v));
                        }
                    }
                }
            } else if (word == "layers") {
                have_runs = true;
                layers_line = ln;
                while (hs >> word) {
                    const auto colon = word.rfind(':');
                    if (colon == std::string::npos) {
                        throw ParseError(ln, "layer run '" + word + "' lacks a count");
                    }
                    char *end = nullptr;
                    const auto count = std::strtoull(word.c_str() + colon + 1, &end, 10);
                    if (*end != '\0' || count == 0) {
                        throw ParseError(ln, "bad layer run '" + word + "'");
                    }
                    runs.emplace_back(word.substr(0, colon), count);
                }
            }
            continue;
        }
        const auto colon = line.find(": ", first);
        if (colon == std::string::npos) {
            throw ParseError(ln, "expected '<qubit>: <wire>'");
        }
        char *end = nullptr;
        const std::string label = line.substr(first, colon - first);
        const auto q = std::strtoull(label.c_str(), &end, 10);
        if (label.empty() || *end != '\0' || q != rows.size()) {
            throw ParseError(ln, "expected wire " + std::to_string(rows.size()));
        }
        rows.push_back(line.substr(colon + 2));
        row_line.push_back(ln);
    }
    if (rows.empty()) {
        throw ParseError(ln, "no wires in dump");
    }
    const std::size_t n = rows.size();
    if (!window.empty() && window.size() != n) {
        throw ParseError(1, "window lists " + std::to_string(window.size()) +
                                " qubits but the dump has " + std::to_string(n) + " wires");
    }
    std::size_t width = 0;
    for (const auto &r : rows) {
        width = std::max(width, r.size());
    }
    for (auto &r : rows) {
        r.resize(width, '-');
    }

    BoundCircuit out{ParamCircuit(n, window), {}};
    std::vector<Gate> gates;
    std::vector<std::vector<double>> angles;
    auto push = [&](GateKind kind, std::size_t q0, std::size_t q1, bool adj,
                    std::vector<double> a) {
        Gate g;
        g.kind = kind;
        g.qubits = {q0, q1};
        g.adjoint = adj;
        gates.push_back(g);
        angles.push_back(std::move(a));
    };

    std::size_t p = 0;
    while (p < width) {
        bool any = false;
        bool barrier = true;
        for (const auto &r : rows) {
            any = any || r[p] != '-';
            barrier = barrier && r[p] == '|';
        }
        if (!any) {
            ++p;
            continue;
        }
        if (barrier) {
            p += 1;
            continue;
        }
        std::vector<detail::Token> toks(n);
        std::vector<bool> has(n, false);
        std::size_t next = p + 1;
        for (std::size_t q = 0; q < n; ++q) {
            if (rows[q][p] == '-') {
                continue;
            }
            if (rows[q][p] == '|') {
                throw ParseError(row_line[q], "layer separator is not on every wire");
            }
            next = std::max(next, detail::read_token(rows[q], p, row_line[q], toks[q]));
            has[q] = true;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (!has[q]) {
                continue;
            }
            const auto &t = toks[q];
            const auto l = row_line[q];
            if (t.side == 0) {
                if (t.name == "RYPhase" || t.name == "RYPhaseDag") {
                    detail::expect_angles(t, 2, l);
                    push(t.name == "RYPhase" ? GateKind::U : GateKind::UDag, q, 0,
                         t.adjoint, t.angles);
                    continue;
                }
                throw ParseError(l, "unknown gate '" + t.name + "'");
            }
            if (t.side != '/') {
                throw ParseError(l, "'\\" + t.name + "' has no upper half");
            }
            if (q + 1 >= n || !has[q + 1] || toks[q + 1].side != '\\') {
                throw ParseError(l, "'/" + t.name + "' has no lower half on the next wire");
            }
            const auto &b = toks[q + 1];
            if (t.name == "o" && b.name == "RY") {
                detail::expect_angles(b, 1, row_line[q + 1]);
                push(GateKind::CRY, q, q + 1, b.adjoint, b.angles);
            } else if (t.name == "RY" && b.name == "o") {
                detail::expect_angles(t, 1, l);
                push(GateKind::CRY, q + 1, q, t.adjoint, t.angles);
            } else if ((t.name == "M" || t.name == "RBS") && t.name == b.name) {
                if (t.angles != b.angles || t.adjoint != b.adjoint) {
                    throw ParseError(row_line[q + 1],
                                     "halves of " + t.name + " disagree");
                }
                const bool m = t.name == "M";
                detail::expect_angles(t, m ? 3 : 1, l);
                push(m ? GateKind::M : GateKind::RBS, q, q + 1, t.adjoint, t.angles);
            } else {
                throw ParseError(l, "cannot pair '/" + t.name + "' with '\\" + b.name + "'");
            }
            ++q;
        }
        p = next;
    }

    std::size_t gi = 0;
    auto add_all = [&](std::size_t count) {
        for (std::size_t k = 0; k < count; ++k, ++gi) {
            Gate g = gates[gi];
            g.param_offset = out.params.size();
            out.params.insert(out.params.end(), angles[gi].begin(), angles[gi].end());
            try {
                out.circuit.add_gate_at(g);
            } catch (const ArgumentError &e) {
                throw ParseError(row_line[g.qubits[0]], e.what());
            }
        }
    };
    if (have_runs) {
        std::size_t total = 0;
        for (const auto &r : runs) {
            total += r.second;
        }
        if (total != gates.size()) {
            throw ParseError(layers_line, "layer runs cover " + std::to_string(total) +
                                              " gates but the wires hold " +
                                              std::to_string(gates.size()));
        }
        for (const auto &[name, count] : runs) {
            if (name == "-") {
                out.circuit.end_layer();
            } else {
                try {
                    out.circuit.begin_layer(layer_kind_from_name(name));
                } catch (const ArgumentError &e) {
                    throw ParseError(layers_line, e.what());
                }
            }
            add_all(count);
        }
        out.circuit.end_layer();
    } else {
        add_all(gates.size());
    }
    return out;
}

/// Lossless circuit file; see the file comment for the grammar.
inline void write_circuit_file(std::ostream &os, const ParamCircuit &c,
                               std::span<const double> params) {
    if (params.size() != c.num_params()) {
        throw ArgumentError("parameter count does not match circuit");
    }
    os << "qagent-circuit 1\nqubits " << c.n_qubits() << "\nwindow";
    for (auto q : c.window()) {
        os << ' ' << q;
    }
    os << '\n';
    std::size_t current = kNoLayer;
    for (const auto &g : c.gates()) {
        if (g.layer != current) {
            if (current != kNoLayer) {
                os << "end\n";
            }
            if (g.layer != kNoLayer) {
                os << "layer " << layer_name(c.layers()[g.layer].kind) << '\n';
            }
            current = g.layer;
        }
        os << "gate " << gate_name(g.kind) << ' ' << g.qubits[0];
        if (g.arity() == 2) {
            os << ' ' << g.qubits[1];
        }
        os << " @" << g.param_offset << (g.adjoint ? " adj" : "") << '\n';
    }
    if (current != kNoLayer) {
        os << "end\n";
    }
    os << "params " << params.size() << '\n' << std::setprecision(17);
    for (double v : params) {
        os << v << '\n';
    }
}

[[nodiscard]] inline BoundCircuit read_circuit_file(std::istream &is) {
    std::string line;
    std::size_t ln = 0;
    auto next = [&](std::istringstream &ls) {
        while (std::getline(is, line)) {
            ++ln;
            const auto f = line.find_first_not_of(" \t\r");
            if (f == std::string::npos || line[f] == '#') {
                continue;
            }
            ls = std::istringstream(line);
            return true;
        }
        return false;
    };
    std::istringstream ls;
    std::string word;
    if (!next(ls) || !(ls >> word) || word != "qagent-circuit") {
        throw ParseError(ln, "missing 'qagent-circuit' header");
    }
    int version = 0;
    if (!(ls >> version) || version != 1) {
        throw ParseError(ln, "unsupported circuit file version");
    }
    std::size_t n = 0;
    if (!next(ls) || !(ls >> word >> n) || word != "qubits" || n == 0) {
        throw ParseError(ln, "expected 'qubits <n>'");
    }
    std::vector<std::size_t> window;
    if (!next(ls) || !(ls >> word) || word != "window") {
        throw ParseError(ln, "expected 'window ...'");
    }
    for (std::size_t q; ls >> q;) {
        window.push_back(q);
    }
    BoundCircuit out;
    try {
        out.circuit = ParamCircuit(n, window);
    } catch (const ArgumentError &e) {
        throw ParseError(ln, e.what());
    }
    bool open = false;
    std::size_t count = 0;
    bool have_params = false;
    while (next(ls)) {
        ls >> word;
        if (word == "layer") {
            std::string name;
            ls >> name;
            if (open) {
                throw ParseError(ln, "layer opened inside another layer");
            }
            try {
                out.circuit.begin_layer(layer_kind_from_name(name));
            } catch (const ArgumentError &e) {
                throw ParseError(ln, e.what());
            }
            open = true;
        } else if (word == "end") {
            if (!open) {
                throw ParseError(ln, "'end' without an open layer");
            }
            out.circuit.end_layer();
            open = false;
        } else if (word == "gate") {
            std::string kind_name;
            ls >> kind_name;
            Gate g;
            try {
                g.kind = gate_kind_from_name(kind_name);
            } catch (const ArgumentError &e) {
                throw ParseError(ln, e.what());
            }
            std::vector<std::string> rest;
            for (std::string w; ls >> w;) {
                rest.push_back(w);
            }
            const std::size_t nq = g.arity();
            if (rest.size() < nq + 1) {
                throw ParseError(ln, "gate needs " + std::to_string(nq) +
                                         " qubit(s) and an @offset");
            }
            try {
                for (std::size_t k = 0; k < nq; ++k) {
                    std::size_t used = 0;
                    g.qubits[k] = std::stoul(rest[k], &used);
                    if (used != rest[k].size()) {
                        throw std::invalid_argument(rest[k]);
                    }
                }
                if (rest[nq].empty() || rest[nq][0] != '@') {
                    throw std::invalid_argument(rest[nq]);
                }
                std::size_t used = 0;
                g.param_offset = std::stoul(rest[nq].substr(1), &used);
                if (used + 1 != rest[nq].size()) {
                    throw std::invalid_argument(rest[nq]);
                }
            } catch (const std::logic_error &) {
                throw ParseError(ln, "malformed gate record");
            }
            if (rest.size() == nq + 2 && rest[nq + 1] == "adj") {
                g.adjoint = true;
            } else if (rest.size() != nq + 1) {
                throw ParseError(ln, "trailing text after gate record");
            }
            try {
                out.circuit.add_gate_at(g);
            } catch (const ArgumentError &e) {
                throw ParseError(ln, e.what());
            }
        } else if (word == "params") {
            if (!(ls >> count)) {
                throw ParseError(ln, "expected 'params <count>'");
            }
            have_params = true;
            break;
        } else {
            throw ParseError(ln, "unknown record '" + word + "'");
        }
    }
    if (open) {
        throw ParseError(ln, "layer not closed");
    }
    if (!have_params) {
        throw ParseError(ln, "missing 'params' section");
    }
    if (count != out.circuit.num_params()) {
        throw ParseError(ln, "circuit reads " + std::to_string(out.circuit.num_params()) +
                                 " parameters but the file lists " + std::to_string(count));
    }
    for (std::size_t k = 0; k < count; ++k) {
        double v = 0;
        if (!next(ls) || !(ls >> v)) {
            throw ParseError(ln, "expected parameter " + std::to_string(k));
        }
        out.params.push_back(v);
    }
    return out;
}

} // namespace qagent
