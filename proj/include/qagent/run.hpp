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
 * Batch runs: a flat key=value configuration, the episode each task trains
 * on, the files a run leaves behind, and the summary table built from them.
 *
 * A run directory holds
 *
 *     config.txt        effective configuration, one key=value per line
 *     epochs.log        epoch=<i> reward=<r> gnorm=<g>
 *     policy_<k>.circuit  lossless circuit file of trainable policy k
 *     circuit.txt       wire drawing of every trainable policy
 *     summary.txt       task, metric, learned and optimal values
 *     seeds.txt         per-seed rewards (multi-seed runs only)
 *
 * None of them carries timings, so reruns overwrite them byte for byte.
 */
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "circuit.hpp"
#include "common.hpp"
#include "dump.hpp"
#include "framework.hpp"
#include "tasks/coinflip.hpp"
#include "tasks/games.hpp"
#include "tasks/grover.hpp"
#include "tasks/qft.hpp"
#include "trainer.hpp"

namespace qagent {

enum class TaskKind { Qft, Grover, CoinFlip, Chsh, Conflicting };

[[nodiscard]] constexpr std::string_view task_name(TaskKind t) noexcept {
    switch (t) {
    case TaskKind::Qft:
        return "qft";
    case TaskKind::Grover:
        return "grover";
    case TaskKind::CoinFlip:
        return "coinflip";
    case TaskKind::Chsh:
        return "chsh";
    case TaskKind::Conflicting:
        return "conflicting";
    }
    return "?";
}

struct RunConfig {
    TaskKind task{TaskKind::Qft};
    /// Qubits for qft and grover; 0 picks the task default (4 and 2).
    std::size_t n{0};
    std::size_t queries{1};
    tasks::Party cheater{tasks::Party::Alice};
    int outcome{0};
    bool ancilla{false};
    /// Empty: the task's default layers.
    std::vector<LayerKind> layers;
    /// Stacked blocks per Grover policy; 0 means n.
    std::size_t depth{0};
    /// Grover with several queries: train 1, 2, ... queries in turn, each
    /// stage warm-started from the previous one.
    bool staged{true};
    TrainConfig train;
    std::size_t seeds{1};
    std::string out{"runs"};

    [[nodiscard]] std::size_t qubits() const noexcept {
        if (n != 0) {
            return n;
        }
        return task == TaskKind::Qft ? 4 : 2;
    }
};

namespace detail {

inline bool parse_bool(const std::string &v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ArgumentError("expected a boolean, got '" + v + "'");
}

inline double parse_double(const std::string &v) {
    char *end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(x)) {
        throw ArgumentError("expected a number, got '" + v + "'");
    }
    return x;
}

inline std::uint64_t parse_uint(const std::string &v) {
    char *end = nullptr;
    if (v.empty() || v[0] == '-') {
        throw ArgumentError("expected a non-negative integer, got '" + v + "'");
    }
    const auto x = std::strtoull(v.c_str(), &end, 10);
    if (*end != '\0') {
        throw ArgumentError("expected a non-negative integer, got '" + v + "'");
    }
    return x;
}

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), r.ptr};
}

} // namespace detail

/// Every recognised key, in the order `defaults` prints them.
inline const std::vector<std::string> kConfigKeys{
    "task",  "n",          "queries",       "cheater",     "outcome",   "ancilla",
    "layers", "depth",     "staged",        "epochs",      "learning_rate", "seed",
    "seeds", "init",       "init_range",    "init_center", "optimizer", "beta1",
    "beta2", "epsilon",    "keep_best",     "out"};

/// Sets one key; throws ArgumentError on unknown keys or bad values.
inline void set_option(RunConfig &c, const std::string &key, const std::string &raw) {
    const std::string v = detail::trim(raw);
    if (key == "task") {
        if (v == "qft") {
            c.task = TaskKind::Qft;
        } else if (v == "grover") {
            c.task = TaskKind::Grover;
        } else if (v == "coinflip") {
            c.task = TaskKind::CoinFlip;
        } else if (v == "chsh") {
            c.task = TaskKind::Chsh;
        } else if (v == "conflicting") {
            c.task = TaskKind::Conflicting;
        } else {
            throw ArgumentError("unknown task '" + v + "'");
        }
    } else if (key == "n") {
        c.n = detail::parse_uint(v);
    } else if (key == "queries") {
        c.queries = detail::parse_uint(v);
    } else if (key == "cheater") {
        if (v == "alice") {
            c.cheater = tasks::Party::Alice;
        } else if (v == "bob") {
            c.cheater = tasks::Party::Bob;
        } else {
            throw ArgumentError("cheater must be alice or bob");
        }
    } else if (key == "outcome") {
        c.outcome = static_cast<int>(detail::parse_uint(v));
    } else if (key == "ancilla") {
        c.ancilla = detail::parse_bool(v);
    } else if (key == "layers") {
        c.layers.clear();
        if (v != "default") {
            std::istringstream ls(v);
            std::string item;
            while (std::getline(ls, item, ',')) {
                c.layers.push_back(layer_kind_from_name(detail::trim(item)));
            }
            if (c.layers.empty()) {
                throw ArgumentError("layers list is empty");
            }
        }
    } else if (key == "depth") {
        c.depth = detail::parse_uint(v);
    } else if (key == "staged") {
        c.staged = detail::parse_bool(v);
    } else if (key == "epochs") {
        c.train.epochs = detail::parse_uint(v);
    } else if (key == "learning_rate") {
        c.train.learning_rate = detail::parse_double(v);
    } else if (key == "seed") {
        c.train.seed = detail::parse_uint(v);
    } else if (key == "seeds") {
        c.seeds = detail::parse_uint(v);
    } else if (key == "init") {
        if (v == "uniform") {
            c.train.init = InitKind::Uniform;
        } else if (v == "zeros") {
            c.train.init = InitKind::Zeros;
        } else {
            throw ArgumentError("init must be uniform or zeros");
        }
    } else if (key == "init_range") {
        c.train.init_range = detail::parse_double(v);
    } else if (key == "init_center") {
        c.train.init_center = detail::parse_double(v);
    } else if (key == "optimizer") {
        if (v == "adam") {
            c.train.optimizer = Optimizer::Adam;
        } else if (v == "sgd") {
            c.train.optimizer = Optimizer::GradientAscent;
        } else {
            throw ArgumentError("optimizer must be adam or sgd");
        }
    } else if (key == "beta1") {
        c.train.beta1 = detail::parse_double(v);
    } else if (key == "beta2") {
        c.train.beta2 = detail::parse_double(v);
    } else if (key == "epsilon") {
        c.train.epsilon = detail::parse_double(v);
    } else if (key == "keep_best") {
        c.train.keep_best = detail::parse_bool(v);
    } else if (key == "out") {
        c.out = v;
    } else {
        throw ArgumentError("unknown key '" + key + "'");
    }
}

/// Reads key=value lines into `c`; '#' starts a comment.
inline void parse_config(std::istream &is, RunConfig &c) {
    std::string line;
    std::size_t ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(ln, "expected key=value");
        }
        try {
            set_option(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ArgumentError &e) {
            throw ParseError(ln, e.what());
        }
    }
}

[[nodiscard]] inline std::string option_value(const RunConfig &c, const std::string &key) {
    if (key == "task") {
        return std::string(task_name(c.task));
    }
    if (key == "n") {
        return std::to_string(c.n);
    }
    if (key == "queries") {
        return std::to_string(c.queries);
    }
    if (key == "cheater") {
        return c.cheater == tasks::Party::Alice ? "alice" : "bob";
    }
    if (key == "outcome") {
        return std::to_string(c.outcome);
    }
    if (key == "ancilla") {
        return c.ancilla ? "true" : "false";
    }
    if (key == "layers") {
        if (c.layers.empty()) {
            return "default";
        }
        std::string s;
        for (auto k : c.layers) {
            s += (s.empty() ? "" : ",") + std::string(layer_name(k));
        }
        return s;
    }
    if (key == "depth") {
        return std::to_string(c.depth);
    }
    if (key == "staged") {
        return c.staged ? "true" : "false";
    }
    if (key == "epochs") {
        return std::to_string(c.train.epochs);
    }
    if (key == "learning_rate") {
        return detail::format_double(c.train.learning_rate);
    }
    if (key == "seed") {
        return std::to_string(c.train.seed);
    }
    if (key == "seeds") {
        return std::to_string(c.seeds);
    }
    if (key == "init") {
        return c.train.init == InitKind::Uniform ? "uniform" : "zeros";
    }
    if (key == "init_range") {
        return detail::format_double(c.train.init_range);
    }
    if (key == "init_center") {
        return detail::format_double(c.train.init_center);
    }
    if (key == "optimizer") {
        return c.train.optimizer == Optimizer::Adam ? "adam" : "sgd";
    }
    if (key == "beta1") {
        return detail::format_double(c.train.beta1);
    }
    if (key == "beta2") {
        return detail::format_double(c.train.beta2);
    }
    if (key == "epsilon") {
        return detail::format_double(c.train.epsilon);
    }
    if (key == "keep_best") {
        return c.train.keep_best ? "true" : "false";
    }
    if (key == "out") {
        return c.out;
    }
    throw ArgumentError("unknown key '" + key + "'");
}

inline void write_config(std::ostream &os, const RunConfig &c) {
    for (const auto &k : kConfigKeys) {
        os << k << " = " << option_value(c, k) << '\n';
    }
}

/// Range checks on every field; throws ArgumentError.
inline void validate(const RunConfig &c) {
    const std::size_t n = c.qubits();
    if (c.task == TaskKind::Qft && (n < 1 || n > kMaxDenseQubits)) {
        throw ArgumentError("qft needs 1 <= n <= " + std::to_string(kMaxDenseQubits));
    }
    if (c.task == TaskKind::Grover) {
        if (n < 1 || n > kMaxDenseQubits) {
            throw ArgumentError("grover needs 1 <= n <= " + std::to_string(kMaxDenseQubits));
        }
        if (c.queries < 1) {
            throw ArgumentError("grover needs at least one query");
        }
    }
    if (c.outcome != 0 && c.outcome != 1) {
        throw ArgumentError("outcome must be 0 or 1");
    }
    if (c.seeds < 1) {
        throw ArgumentError("seeds must be at least 1");
    }
    if (c.out.empty()) {
        throw ArgumentError("out must name a directory");
    }
    detail::validate(c.train, 1);
}

/// Trainable circuit k of an episode with its parameter offset.
struct PolicyView {
    std::string label;
    ParamCircuit circuit;
    std::size_t offset{0};
};

[[nodiscard]] inline std::vector<PolicyView> trainable_policies(const InteractionSpec &spec) {
    std::vector<PolicyView> out;
    std::size_t block = 0;
    for (std::size_t t = 0; t < spec.rounds().size(); ++t) {
        for (auto who : {Agent::A, Agent::B}) {
            const auto &slot = who == Agent::A ? spec.rounds()[t].a : spec.rounds()[t].b;
            if (const auto *p = std::get_if<TrainablePolicy>(&slot)) {
                out.push_back({"round " + std::to_string(t + 1) +
                                   (who == Agent::A ? " A" : " B"),
                               p->circuit, spec.blocks()[block++].offset});
            }
        }
    }
    return out;
}

/// Same episode with its trainable circuits replaced, in order. A single
/// replacement is used for every slot. Each replacement must have the
/// slot's qubit count and is moved onto the slot's window.
[[nodiscard]] inline EpisodeSpec with_policies(const EpisodeSpec &ep,
                                               const std::vector<ParamCircuit> &circuits) {
    const auto views = trainable_policies(ep.interaction);
    if (circuits.size() != 1 && circuits.size() != views.size()) {
        throw ArgumentError("task has " + std::to_string(views.size()) +
                            " trainable policies, got " + std::to_string(circuits.size()) +
                            " circuits");
    }
    auto rounds = ep.interaction.rounds();
    std::size_t k = 0;
    for (auto &r : rounds) {
        for (auto *slot : {&r.a, &r.b}) {
            if (auto *p = std::get_if<TrainablePolicy>(slot)) {
                const auto &c = circuits[circuits.size() == 1 ? 0 : k];
                if (c.n_qubits() != p->circuit.n_qubits()) {
                    throw ArgumentError(views[k].label + " acts on " +
                                        std::to_string(p->circuit.n_qubits()) +
                                        " qubits, circuit has " +
                                        std::to_string(c.n_qubits()));
                }
                p->circuit = c.with_window(p->circuit.window());
                ++k;
            }
        }
    }
    EpisodeSpec out = ep;
    out.interaction = InteractionSpec(ep.interaction.layout(), std::move(rounds));
    return out;
}

/// Row label, metric name and analytic optimum of a configured task.
struct TaskInfo {
    std::string label;
    std::string metric;
    std::optional<double> optimum;
    /// Upper bound enforced during training.
    std::optional<double> ceiling;
    /// Position in the summary table.
    int rank{100};
};

[[nodiscard]] inline TaskInfo task_info(const RunConfig &c) {
    const auto n = c.qubits();
    switch (c.task) {
    case TaskKind::Qft:
        return {"QFT (n=" + std::to_string(n) + ")", "Fidelity", 1.0, 1.0,
                n == 4 ? 0 : (n == 6 ? 1 : 10)};
    case TaskKind::CoinFlip:
        return {c.cheater == tasks::Party::Alice ? "Coin Flip (Alice)" : "Coin Flip (Bob)",
                "P*", tasks::CoinFlipTask::optimum(), tasks::CoinFlipTask::optimum(),
                c.cheater == tasks::Party::Alice ? 2 : 3};
    case TaskKind::Chsh: {
        const auto opt = tasks::GameTask::chsh().optimum();
        return {"CHSH", "F", opt, opt, 4};
    }
    case TaskKind::Conflicting:
        // optimum of the symmetric strategy; not a proven bound on the mean
        return {"Conflicting-Interest", "F", tasks::GameTask::conflicting_interest().optimum(),
                std::nullopt, 5};
    case TaskKind::Grover: {
        const tasks::GroverTask t{n, c.queries};
        int rank = 20;
        if (n == 2 && c.queries == 1) {
            rank = 6;
        } else if (n == 3 && c.queries == 1) {
            rank = 7;
        } else if (n == 3 && c.queries == 2) {
            rank = 8;
        }
        return {"Grover (N=" + std::to_string(t.database_size()) + ", " +
                    std::to_string(c.queries) + (c.queries == 1 ? " query)" : " queries)"),
                "P_success", t.canonical_value(), t.reward_ceiling(), rank};
    }
    }
    return {};
}

[[nodiscard]] inline std::string run_name(const RunConfig &c) {
    switch (c.task) {
    case TaskKind::Qft:
        return "qft_n" + std::to_string(c.qubits());
    case TaskKind::Grover:
        return "grover_n" + std::to_string(c.qubits()) + "_k" + std::to_string(c.queries);
    case TaskKind::CoinFlip:
        return std::string("coinflip_") +
               (c.cheater == tasks::Party::Alice ? "alice" : "bob");
    case TaskKind::Chsh:
        return "chsh";
    case TaskKind::Conflicting:
        return "conflicting";
    }
    return "run";
}

/// Episode for `c` with `queries` overriding the Grover query count.
[[nodiscard]] inline EpisodeSpec build_episode(const RunConfig &c,
                                               std::optional<std::size_t> queries = {}) {
    const auto n = c.qubits();
    switch (c.task) {
    case TaskKind::Qft: {
        const tasks::QftTask t{n};
        return tasks::qft_episode(
            t, c.layers.empty() ? tasks::default_qft_policy(n) : build_policy(n, c.layers));
    }
    case TaskKind::Grover: {
        const tasks::GroverTask t{n, queries.value_or(c.queries)};
        const auto depth = c.depth == 0 ? tasks::default_grover_depth(n) : c.depth;
        auto pol = tasks::trainable_grover_policies(t, depth);
        if (!c.layers.empty()) {
            const auto block = stack(build_policy(n, c.layers), depth);
            pol.pre = TrainablePolicy{block};
            for (auto &p : pol.post) {
                p = TrainablePolicy{block};
            }
        }
        return tasks::grover_episode(t, pol);
    }
    case TaskKind::CoinFlip: {
        const tasks::CoinFlipTask t{c.cheater, c.outcome, c.ancilla};
        if (c.layers.empty()) {
            return tasks::coinflip_cheat_episode(t);
        }
        auto base = tasks::default_cheat_policy(t);
        const auto l = t.layout();
        const std::size_t split = c.cheater == tasks::Party::Alice ? l.n_a : l.n_m;
        const auto circ =
            build_policy(base.n_qubits(), c.layers, PolicyOptions{split}, base.window());
        return tasks::coinflip_cheat_episode(t, circ, circ);
    }
    case TaskKind::Chsh:
    case TaskKind::Conflicting: {
        const auto t = c.task == TaskKind::Chsh ? tasks::GameTask::chsh()
                                                : tasks::GameTask::conflicting_interest();
        return tasks::game_episode(
            t, tasks::trainable_game_policies(c.layers.empty() ? kStandardBlock : c.layers));
    }
    }
    throw ArgumentError("unknown task");
}

struct RunResult {
    RunConfig config;
    TaskInfo info;
    EpisodeSpec episode;
    TrainRecord record;
    std::vector<SeedSummary> seeds;
    /// F_A and F_B for the games.
    std::optional<tasks::GameValues> game;
    /// Value reported in the summary table.
    double learned{0.0};
};

/// Reported value for trained parameters (the mean F for games).
[[nodiscard]] inline double learned_value(const RunConfig &c, const EpisodeSpec &ep,
                                          std::span<const double> params,
                                          std::optional<tasks::GameValues> *game = nullptr) {
    if (c.task == TaskKind::Chsh || c.task == TaskKind::Conflicting) {
        const auto t = c.task == TaskKind::Chsh ? tasks::GameTask::chsh()
                                                : tasks::GameTask::conflicting_interest();
        const auto rounds = ep.interaction.rounds();
        const tasks::GamePolicies pol{rounds[0].a, rounds[1].a, rounds[1].b};
        const auto v = tasks::game_reward(t, pol, params);
        if (game != nullptr) {
            *game = v;
        }
        return v.mean();
    }
    return run_episode(ep, params);
}

namespace detail {

inline MultiSeedResult train_seeds(const EpisodeSpec &ep, const TrainConfig &cfg,
                                   std::size_t seeds) {
    return multi_seed(ep, cfg, seeds);
}

} // namespace detail

/// Trains the configured task. Grover with several queries and `staged`
/// trains 1, 2, ..., k queries; stage j keeps the first j policies of stage
/// j-1 frozen and starts the new post-query policy from the previous one.
[[nodiscard]] inline RunResult execute(const RunConfig &c) {
    validate(c);
    RunResult r;
    r.config = c;
    r.info = task_info(c);
    TrainConfig cfg = c.train;
    cfg.reward_ceiling = r.info.ceiling;

    if (c.task == TaskKind::Grover && c.staged && c.queries > 1) {
        std::optional<TrainRecord> prev;
        for (std::size_t k = 1; k <= c.queries; ++k) {
            RunConfig stage = c;
            stage.queries = k;
            TrainConfig sc = cfg;
            sc.reward_ceiling = task_info(stage).ceiling;
            const EpisodeSpec ep = build_episode(c, k);
            if (prev) {
                const auto views = trainable_policies(ep.interaction);
                const std::size_t block = views.back().circuit.num_params();
                const std::size_t kept = views.back().offset;
                sc = transfer(*prev, ep,
                              {ParamRange{0, 0, kept, true},
                               ParamRange{kept, kept - block, block, false}},
                              sc);
            }
            auto ms = detail::train_seeds(ep, sc, c.seeds);
            prev = ms.best;
            if (k == c.queries) {
                r.episode = ep;
                r.record = std::move(ms.best);
                r.seeds = std::move(ms.summary);
            }
        }
    } else {
        r.episode = build_episode(c);
        auto ms = detail::train_seeds(r.episode, cfg, c.seeds);
        r.record = std::move(ms.best);
        r.seeds = std::move(ms.summary);
    }
    r.learned = learned_value(c, r.episode, r.record.final_params, &r.game);
    return r;
}

inline void write_summary(std::ostream &os, const RunResult &r) {
    os << std::setprecision(17);
    os << "task = " << task_name(r.config.task) << '\n'
       << "label = " << r.info.label << '\n'
       << "metric = " << r.info.metric << '\n'
       << "rank = " << r.info.rank << '\n'
       << "learned = " << r.learned << '\n';
    if (r.info.optimum) {
        os << "optimal = " << *r.info.optimum << '\n';
    }
    if (r.game) {
        os << "f_a = " << r.game->f_a << '\n' << "f_b = " << r.game->f_b << '\n';
    }
    os << "reward = " << r.record.final_reward << '\n'
       << "seed = " << r.record.config.seed << '\n'
       << "best_epoch = " << r.record.best_epoch << '\n'
       << "num_params = " << r.record.final_params.size() << '\n';
}

/// Writes the run directory `<out>/<run_name>`; returns its path.
inline std::filesystem::path write_run(const RunResult &r) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(r.config.out) / run_name(r.config);
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "config.txt");
        write_config(f, r.config);
    }
    {
        std::ofstream f(dir / "epochs.log");
        write_epoch_log(f, r.record);
    }
    {
        std::ofstream f(dir / "summary.txt");
        write_summary(f, r);
    }
    std::ofstream drawing(dir / "circuit.txt");
    const auto views = trainable_policies(r.episode.interaction);
    for (std::size_t k = 0; k < views.size(); ++k) {
        const auto &v = views[k];
        const std::span<const double> p(r.record.final_params.data() + v.offset,
                                        v.circuit.num_params());
        std::ofstream f(dir / ("policy_" + std::to_string(k) + ".circuit"));
        write_circuit_file(f, v.circuit, p);
        drawing << "## policy " << k << ": " << v.label << '\n' << render(v.circuit, p) << '\n';
    }
    if (r.seeds.size() > 1) {
        std::ofstream f(dir / "seeds.txt");
        f << std::setprecision(17);
        for (const auto &s : r.seeds) {
            f << "seed=" << s.seed << " reward=" << s.final_reward << '\n';
        }
    }
    return dir;
}

struct ReportRow {
    std::string label;
    std::string metric;
    double learned{0.0};
    std::optional<double> optimal;
    int rank{100};
};

/// Reads key = value lines.
[[nodiscard]] inline std::map<std::string, std::string> read_key_values(std::istream &is) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(ln, "expected key = value");
        }
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

/// One row per run directory under `root` holding a summary.txt, ordered
/// like the published summary table.
[[nodiscard]] inline std::vector<ReportRow> collect_report(const std::filesystem::path &root) {
    namespace fs = std::filesystem;
    std::vector<ReportRow> rows;
    if (!fs::exists(root)) {
        return rows;
    }
    std::vector<fs::path> dirs;
    for (const auto &e : fs::directory_iterator(root)) {
        if (e.is_directory() && fs::exists(e.path() / "summary.txt")) {
            dirs.push_back(e.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto &d : dirs) {
        std::ifstream f(d / "summary.txt");
        std::map<std::string, std::string> kv;
        try {
            kv = read_key_values(f);
        } catch (const ParseError &e) {
            throw ParseError(e.line(), (d / "summary.txt").string() + ": " + e.what());
        }
        ReportRow row;
        row.label = kv["label"];
        row.metric = kv["metric"];
        row.learned = detail::parse_double(kv["learned"]);
        if (kv.count("optimal")) {
            row.optimal = detail::parse_double(kv["optimal"]);
        }
        if (kv.count("rank")) {
            row.rank = static_cast<int>(detail::parse_uint(kv["rank"]));
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow &a, const ReportRow &b) { return a.rank < b.rank; });
    return rows;
}

inline void write_report(std::ostream &os, const std::vector<ReportRow> &rows) {
    std::size_t w = 4;
    for (const auto &r : rows) {
        w = std::max(w, r.label.size());
    }
    os << std::left << std::setw(static_cast<int>(w)) << "Task" << "  " << std::setw(10)
       << "Metric" << "  " << std::setw(9) << "Learned" << "  Optimal\n";
    for (const auto &r : rows) {
        os << std::left << std::setw(static_cast<int>(w)) << r.label << "  " << std::setw(10)
           << r.metric << "  " << std::fixed << std::setprecision(6) << r.learned << "  ";
        if (r.optimal) {
            os << *r.optimal;
        } else {
            os << "-";
        }
        os << '\n' << std::defaultfloat;
    }
}

/// Reads a circuit file, or a wire drawing when the header is absent.
[[nodiscard]] inline BoundCircuit load_circuit(const std::filesystem::path &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 14, "qagent-circuit") == 0) {
        std::istringstream is(text);
        return read_circuit_file(is);
    }
    return parse_dump(text);
}

/// Reward of an episode whose trainable slots are filled from `bound`.
[[nodiscard]] inline double evaluate_circuits(const RunConfig &c,
                                              const std::vector<BoundCircuit> &bound) {
    validate(c);
    if (bound.empty()) {
        throw ArgumentError("no circuits to evaluate");
    }
    std::vector<ParamCircuit> circuits;
    for (const auto &b : bound) {
        circuits.push_back(b.circuit);
    }
    const EpisodeSpec ep = with_policies(build_episode(c), circuits);
    const auto views = trainable_policies(ep.interaction);
    std::vector<double> params;
    for (std::size_t k = 0; k < views.size(); ++k) {
        const auto &p = bound[bound.size() == 1 ? 0 : k].params;
        params.insert(params.end(), p.begin(), p.end());
    }
    return learned_value(c, ep, params);
}

} // namespace qagent
