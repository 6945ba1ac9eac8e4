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
// qagent command-line tool: train, eval, report, analyze, defaults.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "qagent/analysis.hpp"
#include "qagent/dump.hpp"
#include "qagent/prune.hpp"
#include "qagent/qasm.hpp"
#include "qagent/run.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// one --<key> option per config key; values land in `values`
void add_config_options(CLI::App *cmd, std::map<std::string, std::string> &values) {
    for (const auto &key : qagent::kConfigKeys) {
        cmd->add_option("--" + key, values[key], "config key '" + key + "'");
    }
}

qagent::RunConfig resolve_config(const std::string &file,
                                 std::map<std::string, std::string> &values,
                                 CLI::App *cmd, bool require_task) {
    qagent::RunConfig cfg;
    bool any = false;
    if (!file.empty()) {
        std::ifstream f(file);
        if (!f) {
            throw UsageError("cannot read config file " + file);
        }
        try {
            qagent::parse_config(f, cfg);
        } catch (const qagent::ParseError &e) {
            throw UsageError(file + ": " + e.what());
        }
        any = true;
    }
    for (const auto &key : qagent::kConfigKeys) {
        if (cmd->count("--" + key) > 0) {
            try {
                qagent::set_option(cfg, key, values[key]);
            } catch (const qagent::ArgumentError &e) {
                throw UsageError("--" + key + ": " + e.what());
            }
            any = true;
        }
    }
    if (require_task && !any) {
        throw UsageError("empty configuration: give --config FILE or at least --task");
    }
    try {
        qagent::validate(cfg);
    } catch (const qagent::ArgumentError &e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int cmd_train(const qagent::RunConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = qagent::execute(cfg);
    const auto dir = qagent::write_run(r);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %s = %.9f", r.info.label.c_str(), r.info.metric.c_str(), r.learned);
    if (r.info.optimum) {
        std::printf(" (optimal %.9f)", *r.info.optimum);
    }
    std::printf("\n");
    if (r.game) {
        std::printf("F_A = %.9f  F_B = %.9f\n", r.game->f_a, r.game->f_b);
    }
    for (const auto &s : r.seeds) {
        std::printf("seed %llu: reward %.9f (%.1fs)\n",
                    static_cast<unsigned long long>(s.seed), s.final_reward, s.seconds);
    }
    std::printf("wrote %s (%.1fs)\n", dir.string().c_str(), secs);
    return 0;
}

int cmd_eval(const qagent::RunConfig &cfg, const std::vector<std::string> &files) {
    std::vector<qagent::BoundCircuit> bound;
    for (const auto &f : files) {
        bound.push_back(qagent::load_circuit(f));
    }
    const double v = qagent::evaluate_circuits(cfg, bound);
    std::printf("%.12f\n", v);
    return 0;
}

int cmd_report(const std::string &dir) {
    qagent::write_report(std::cout, qagent::collect_report(dir));
    return 0;
}

struct AnalyzeArgs {
    std::string circuit;
    double tol{1e-3};
    std::string compare;
    std::string qasm;
    std::string matrix;
    int precision{2};
};

qagent::DenseUnitary compare_target(const std::string &what, std::size_t n) {
    if (what == "qft") {
        return qagent::qft_matrix(n);
    }
    if (what == "diffusion") {
        return qagent::diffusion_matrix(n);
    }
    if (what == "identity") {
        return qagent::DenseUnitary::identity(n);
    }
    const auto b = qagent::load_circuit(what);
    if (b.circuit.n_qubits() != n) {
        throw qagent::ArgumentError("comparison circuit has a different qubit count");
    }
    return qagent::reconstruct(b.circuit, b.params);
}

int cmd_analyze(const AnalyzeArgs &a) {
    const auto b = qagent::load_circuit(a.circuit);
    const auto &c = b.circuit;
    const auto counts = c.gate_counts();
    std::printf("qubits %zu, gates %zu, parameters %zu\n", c.n_qubits(), c.gates().size(),
                c.num_params());
    for (auto k : {qagent::GateKind::U, qagent::GateKind::UDag, qagent::GateKind::M,
                   qagent::GateKind::CRY, qagent::GateKind::RBS}) {
        std::printf("  %-4s %zu\n", std::string(qagent::gate_name(k)).c_str(),
                    counts[static_cast<std::size_t>(k)]);
    }
    const auto u = qagent::reconstruct(c, b.params);
    const auto pr = qagent::prune(c, b.params, a.tol);
    std::printf("prune tol %.3g: removed %zu gates, snapped %zu angles, fidelity %.12f\n",
                pr.tol_used, pr.removed_gates, pr.snapped_params, pr.fidelity);
    std::printf("surviving layers:");
    for (auto k : qagent::surviving_layers(pr.circuit)) {
        std::printf(" %s", std::string(qagent::layer_name(k)).c_str());
    }
    std::printf("\n%s", qagent::render(pr.circuit, pr.params, {a.precision, false}).c_str());
    if (!a.compare.empty()) {
        const auto v = compare_target(a.compare, c.n_qubits());
        const auto d = qagent::diagonal_phase_factor(u, v);
        double min_mag = 1.0;
        for (double m : d.magnitudes) {
            min_mag = std::min(min_mag, m);
        }
        std::printf("fidelity vs %s: %.12f\n", a.compare.c_str(),
                    qagent::phase_invariant_fidelity(u, v));
        std::printf("up to diagonal phases: %.12f (smallest |diag| %.6f)\n", d.fidelity,
                    min_mag);
    }
    if (!a.qasm.empty()) {
        std::ofstream f(a.qasm);
        f << qagent::to_qasm(c, b.params);
    }
    if (!a.matrix.empty()) {
        std::ofstream f(a.matrix);
        qagent::write_matrix(f, u);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qagent: train and inspect agent policy circuits"};
    app.require_subcommand(1);

    std::map<std::string, std::string> train_values;
    std::string train_config;
    auto *train = app.add_subcommand("train", "train a task and write a run directory");
    train->add_option("--config", train_config, "key=value config file");
    add_config_options(train, train_values);

    std::map<std::string, std::string> eval_values;
    std::string eval_config;
    std::vector<std::string> eval_files;
    auto *eval = app.add_subcommand("eval", "score circuit files on a task without training");
    eval->add_option("--config", eval_config, "key=value config file");
    eval->add_option("--circuit", eval_files, "circuit file per trainable policy, or one for all")
        ->required();
    add_config_options(eval, eval_values);

    std::string report_dir = "runs";
    auto *report = app.add_subcommand("report", "summary table of the run directories");
    report->add_option("--dir", report_dir, "directory holding run directories");

    AnalyzeArgs an;
    auto *analyze = app.add_subcommand("analyze", "prune, reconstruct and compare a circuit");
    analyze->add_option("--circuit", an.circuit, "circuit file or wire drawing")->required();
    analyze->add_option("--tol", an.tol, "pruning tolerance in radians");
    analyze->add_option("--compare", an.compare, "qft, diffusion, identity or a circuit file");
    analyze->add_option("--qasm", an.qasm, "write OpenQASM 2.0 here");
    analyze->add_option("--matrix", an.matrix, "write the dense unitary here");
    analyze->add_option("--precision", an.precision, "decimals in the drawing");

    auto *defaults = app.add_subcommand("defaults", "print every config key with its default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (train->parsed()) {
            return cmd_train(resolve_config(train_config, train_values, train, true));
        }
        if (eval->parsed()) {
            return cmd_eval(resolve_config(eval_config, eval_values, eval, false), eval_files);
        }
        if (report->parsed()) {
            return cmd_report(report_dir);
        }
        if (analyze->parsed()) {
            return cmd_analyze(an);
        }
        if (defaults->parsed()) {
            qagent::write_config(std::cout, qagent::RunConfig{});
            return 0;
        }
    } catch (const UsageError &e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
