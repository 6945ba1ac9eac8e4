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
 * Episodic direct policy search: gradient ascent on the exact episode reward.
 */
#pragma once

#include <chrono>
#include <cstdio>
#include <cmath>
#include <iomanip>
#include <limits>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "framework.hpp"
#include "program.hpp"

namespace qagent {

enum class Optimizer { GradientAscent, Adam };
enum class InitKind { Zeros, Uniform };

[[nodiscard]] inline std::string_view optimizer_name(Optimizer o) noexcept {
    return o == Optimizer::Adam ? "adam" : "sgd";
}
[[nodiscard]] inline std::string_view init_name(InitKind k) noexcept {
    return k == InitKind::Zeros ? "zeros" : "uniform";
}

struct TrainConfig {
    std::size_t epochs{300};
    double learning_rate{0.05};
    std::uint64_t seed{0};
    InitKind init{InitKind::Uniform};
    /// Uniform initialization draws from [center - r, center + r].
    double init_range{0.1};
    double init_center{0.0};
    Optimizer optimizer{Optimizer::Adam};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
    /// Per-parameter freeze flags; empty means nothing frozen.
    std::vector<bool> frozen_mask;
    /// Per-parameter starting values; empty entries are drawn from `init`.
    std::vector<std::optional<double>> initial_values;
    /// Known optimum of the reward; exceeding it by more than 1e-6 aborts.
    std::optional<double> reward_ceiling;
    /// Return the best parameters seen at any epoch rather than the last
    /// iterate. Adam at a fixed rate keeps oscillating near an optimum.
    bool keep_best{true};
};

struct EpochStat {
    std::size_t epoch{0};
    double reward{0.0};
    double gnorm{0.0};
};

struct TrainRecord {
    /// One entry per epoch, taken before that epoch's update.
    std::vector<EpochStat> history;
    std::vector<double> final_params;
    double final_reward{0.0};
    /// Epoch whose parameters are returned; `epochs` means after the last
    /// update.
    std::size_t best_epoch{0};
    TrainConfig config;
    double seconds{0.0};
};

namespace detail {

inline void validate(const TrainConfig &cfg, std::size_t n) {
    if (cfg.epochs == 0) {
        throw ArgumentError("epochs must be at least 1");
    }
    if (!(cfg.learning_rate > 0.0)) {
        throw ArgumentError("learning rate must be positive");
    }
    if (!(cfg.init_range >= 0.0) || !std::isfinite(cfg.init_center)) {
        throw ArgumentError("init range must be non-negative and the centre finite");
    }
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
        throw ArgumentError("Adam betas must lie in [0, 1)");
    }
    if (!(cfg.epsilon > 0.0)) {
        throw ArgumentError("epsilon must be positive");
    }
    if (n == 0) {
        throw ArgumentError("nothing to train: the episode has no parameters");
    }
    if (!cfg.frozen_mask.empty() && cfg.frozen_mask.size() != n) {
        throw ArgumentError("frozen mask length does not match parameter count");
    }
    if (!cfg.initial_values.empty() && cfg.initial_values.size() != n) {
        throw ArgumentError("initial values length does not match parameter count");
    }
}

inline std::vector<double> initial_params(const TrainConfig &cfg, std::size_t n) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(cfg.init_center - cfg.init_range,
                                                cfg.init_center + cfg.init_range);
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        // always draw, so the stream does not depend on which slots are set
        const double r = dist(rng);
        p[i] = cfg.init == InitKind::Uniform ? r : 0.0;
        if (!cfg.initial_values.empty() && cfg.initial_values[i]) {
            p[i] = *cfg.initial_values[i];
        }
    }
    return p;
}

inline void check_finite(double reward, std::span<const double> grad,
                         std::size_t epoch) {
    if (!std::isfinite(reward)) {
        throw TrainingError("non-finite reward at epoch " + std::to_string(epoch));
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i])) {
            throw TrainingError("non-finite gradient at epoch " +
                                std::to_string(epoch) + ", parameter " +
                                std::to_string(i));
        }
    }
}

inline void check_ceiling(const TrainConfig &cfg, double reward, std::size_t epoch) {
    if (cfg.reward_ceiling && reward > *cfg.reward_ceiling + 1e-6) {
        std::ostringstream os;
        os << std::setprecision(12) << "reward " << reward << " at epoch " << epoch
           << " exceeds the analytic optimum " << *cfg.reward_ceiling;
        throw TrainingError(os.str());
    }
}

} // namespace detail

/// Maximizes the objective for cfg.epochs epochs; deterministic given cfg.
[[nodiscard]] inline TrainRecord train(const Objective &obj, const TrainConfig &cfg) {
    const std::size_t n = obj.num_params;
    detail::validate(cfg, n);
    const auto start = std::chrono::steady_clock::now();

    TrainRecord rec;
    rec.config = cfg;
    rec.history.reserve(cfg.epochs);
    std::vector<double> p = detail::initial_params(cfg, n);
    std::vector<double> m(n, 0.0);
    std::vector<double> v(n, 0.0);
    double b1t = 1.0;
    double b2t = 1.0;
    std::vector<double> best = p;
    double best_reward = -std::numeric_limits<double>::infinity();

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto [reward, grad] = value_and_gradient(obj, p);
        detail::check_finite(reward, grad, epoch);
        detail::check_ceiling(cfg, reward, epoch);
        double g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!cfg.frozen_mask.empty() && cfg.frozen_mask[i]) {
                grad[i] = 0.0;
            }
            g2 += grad[i] * grad[i];
        }
        rec.history.push_back({epoch, reward, std::sqrt(g2)});
        if (cfg.keep_best && reward > best_reward) {
            best_reward = reward;
            best = p;
            rec.best_epoch = epoch;
        }

        if (cfg.optimizer == Optimizer::GradientAscent) {
            for (std::size_t i = 0; i < n; ++i) {
                p[i] += cfg.learning_rate * grad[i];
            }
            continue;
        }
        b1t *= cfg.beta1;
        b2t *= cfg.beta2;
        for (std::size_t i = 0; i < n; ++i) {
            if (!cfg.frozen_mask.empty() && cfg.frozen_mask[i]) {
                continue;
            }
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
            const double mhat = m[i] / (1.0 - b1t);
            const double vhat = v[i] / (1.0 - b2t);
            p[i] += cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
    }
    rec.final_reward = evaluate(obj, p);
    detail::check_finite(rec.final_reward, {}, cfg.epochs);
    detail::check_ceiling(cfg, rec.final_reward, cfg.epochs);
    rec.final_params = std::move(p);
    if (cfg.keep_best && best_reward > rec.final_reward) {
        rec.final_reward = best_reward;
        rec.final_params = std::move(best);
    } else {
        rec.best_epoch = cfg.epochs;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    return rec;
}

[[nodiscard]] inline TrainRecord train(const EpisodeSpec &ep, const TrainConfig &cfg) {
    return train(compile(ep), cfg);
}

/// Copy `count` trained values from `src_begin` into `dst_begin`. Frozen
/// ranges stay fixed; the others are only a warm start.
struct ParamRange {
    std::size_t dst_begin{0};
    std::size_t src_begin{0};
    std::size_t count{0};
    bool freeze{true};
};

/// Config for a new episode of `new_num_params` parameters that starts the
/// given ranges at `record`'s trained values.
[[nodiscard]] inline TrainConfig transfer(const TrainRecord &record,
                                          std::size_t new_num_params,
                                          const std::vector<ParamRange> &ranges,
                                          TrainConfig base = {}) {
    base.frozen_mask.assign(new_num_params, false);
    base.initial_values.assign(new_num_params, std::nullopt);
    for (const auto &r : ranges) {
        if (r.dst_begin + r.count > new_num_params ||
            r.src_begin + r.count > record.final_params.size()) {
            throw ArgumentError("transfer range does not fit the parameter arrays");
        }
        for (std::size_t i = 0; i < r.count; ++i) {
            base.initial_values[r.dst_begin + i] = record.final_params[r.src_begin + i];
            base.frozen_mask[r.dst_begin + i] = r.freeze;
        }
    }
    return base;
}

[[nodiscard]] inline TrainConfig transfer(const TrainRecord &record,
                                          const EpisodeSpec &new_episode,
                                          const std::vector<ParamRange> &ranges,
                                          TrainConfig base = {}) {
    return transfer(record, new_episode.num_params(), ranges, std::move(base));
}

struct SeedSummary {
    std::uint64_t seed{0};
    double final_reward{0.0};
    double seconds{0.0};
};

struct MultiSeedResult {
    TrainRecord best;
    std::vector<SeedSummary> summary;
};

/// Trains with seeds cfg.seed .. cfg.seed + n_seeds - 1; ties keep the
/// earlier seed.
[[nodiscard]] inline MultiSeedResult multi_seed(const Objective &obj, TrainConfig cfg,
                                                std::size_t n_seeds) {
    if (n_seeds == 0) {
        throw ArgumentError("n_seeds must be at least 1");
    }
    MultiSeedResult out;
    const std::uint64_t first = cfg.seed;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        cfg.seed = first + s;
        TrainRecord rec = train(obj, cfg);
        out.summary.push_back({cfg.seed, rec.final_reward, rec.seconds});
        if (s == 0 || rec.final_reward > out.best.final_reward) {
            out.best = std::move(rec);
        }
    }
    return out;
}

[[nodiscard]] inline MultiSeedResult multi_seed(const EpisodeSpec &ep,
                                                const TrainConfig &cfg,
                                                std::size_t n_seeds) {
    return multi_seed(compile(ep), cfg, n_seeds);
}

/// One line per epoch: "epoch=<i> reward=<r> gnorm=<g>".
inline void write_epoch_log(std::ostream &os, const TrainRecord &rec) {
    os << std::setprecision(17);
    for (const auto &e : rec.history) {
        os << "epoch=" << e.epoch << " reward=" << e.reward << " gnorm=" << e.gnorm
           << '\n';
    }
}

[[nodiscard]] inline std::vector<EpochStat> read_epoch_log(std::istream &is) {
    std::vector<EpochStat> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        EpochStat e;
        if (std::sscanf(line.c_str(), "epoch=%zu reward=%lf gnorm=%lf", &e.epoch,
                        &e.reward, &e.gnorm) != 3) {
            throw ParseError(lineno, "malformed epoch log line");
        }
        out.push_back(e);
    }
    return out;
}

} // namespace qagent
