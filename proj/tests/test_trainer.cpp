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
#include <catch_amalgamated.hpp>

#include <limits>
#include <sstream>

#include "qagent/tasks/games.hpp"
#include "qagent/trainer.hpp"

using namespace qagent;
using namespace qagent::tasks;

namespace {

// P(1) after U(theta, phi) on |0>, i.e. sin^2(theta / 2)
Objective toy() {
    Objective obj;
    obj.interactions.push_back(
        Interaction{StateVector(1), {ParamGateOp{GateKind::U, {0, 0}, 0, false}}, BasisReadout{}});
    obj.utility = linear_utility({{0.0, 1.0}});
    obj.num_params = 2;
    return obj;
}

TrainConfig toy_config() {
    TrainConfig cfg;
    cfg.initial_values = {0.1, 0.0};
    return cfg;
}

} // namespace

TEST_CASE("toy landscape converges", "[trainer]") {
    for (auto opt : {Optimizer::Adam, Optimizer::GradientAscent}) {
        auto cfg = toy_config();
        cfg.optimizer = opt;
        cfg.learning_rate = opt == Optimizer::Adam ? 0.05 : 1.0;
        const auto rec = train(toy(), cfg);
        CHECK(rec.final_reward > 0.9999);
        CHECK(rec.history.size() == 300);
        CHECK(rec.history.front().reward == Catch::Approx(std::pow(std::sin(0.05), 2)));
        // the returned parameters reproduce the returned reward
        CHECK(evaluate(toy(), rec.final_params) == rec.final_reward);
    }
}

TEST_CASE("keep_best returns the best iterate", "[trainer]") {
    auto cfg = toy_config();
    cfg.learning_rate = 0.5; // overshoots and oscillates
    const auto rec = train(toy(), cfg);
    for (const auto &e : rec.history) {
        CHECK(rec.final_reward >= e.reward);
    }
    cfg.keep_best = false;
    const auto last = train(toy(), cfg);
    CHECK(last.best_epoch == cfg.epochs);
}

TEST_CASE("freezing every parameter is a no-op", "[trainer]") {
    auto cfg = toy_config();
    cfg.frozen_mask = {true, true};
    for (auto opt : {Optimizer::Adam, Optimizer::GradientAscent}) {
        cfg.optimizer = opt;
        const auto rec = train(toy(), cfg);
        CHECK(rec.final_params == std::vector<double>{0.1, 0.0});
        for (const auto &e : rec.history) {
            CHECK(e.reward == rec.history.front().reward);
            CHECK(e.gnorm == 0.0);
        }
    }
}

TEST_CASE("transfer builds masks and warm starts", "[trainer]") {
    const auto src = train(toy(), toy_config());
    const auto cfg = transfer(src, 4, {ParamRange{2, 0, 2, true}});
    CHECK(cfg.frozen_mask == std::vector<bool>{false, false, true, true});
    CHECK(!cfg.initial_values[0]);
    CHECK(*cfg.initial_values[2] == src.final_params[0]);
    CHECK_THROWS_AS(transfer(src, 4, {ParamRange{3, 0, 2, true}}), ArgumentError);
    CHECK_THROWS_AS(transfer(src, 4, {ParamRange{0, 1, 2, true}}), ArgumentError);

    // freezing everything keeps the transferred values
    const auto frozen = train(toy(), transfer(src, 2, {ParamRange{0, 0, 2, true}}));
    CHECK(frozen.final_params == src.final_params);
    // freezing nothing is the same as a warm-started run
    auto warm = toy_config();
    warm.initial_values = {src.final_params[0], src.final_params[1]};
    const auto a = train(toy(), transfer(src, 2, {ParamRange{0, 0, 2, false}}));
    const auto b = train(toy(), warm);
    CHECK(a.final_params == b.final_params);
}

TEST_CASE("multi_seed with one seed is train", "[trainer]") {
    TrainConfig cfg;
    cfg.seed = 7;
    cfg.epochs = 50;
    const auto one = multi_seed(toy(), cfg, 1);
    const auto rec = train(toy(), cfg);
    CHECK(one.best.final_params == rec.final_params);
    CHECK(one.summary.size() == 1);
    CHECK(one.summary[0].seed == 7);
    CHECK(one.summary[0].final_reward == rec.final_reward);
    CHECK_THROWS_AS(multi_seed(toy(), cfg, 0), ArgumentError);
}

TEST_CASE("CHSH training is robust across seeds", "[trainer][games][slow]") {
    const auto ep = game_episode(GameTask::chsh(), trainable_game_policies());
    TrainConfig cfg;
    cfg.reward_ceiling = GameTask::chsh().optimum();
    const auto ms = multi_seed(ep, cfg, 5);
    int good = 0;
    for (const auto &s : ms.summary) {
        good += s.final_reward >= 0.853 ? 1 : 0;
    }
    CHECK(good >= 4);
    // same seeds, same summaries
    const auto again = multi_seed(ep, cfg, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(again.summary[i].final_reward == ms.summary[i].final_reward);
    }
}

TEST_CASE("training is deterministic and logs round trip", "[trainer]") {
    TrainConfig cfg;
    cfg.seed = 3;
    const auto ep = game_episode(GameTask::conflicting_interest(), trainable_game_policies());
    cfg.epochs = 40;
    const auto a = train(ep, cfg);
    const auto b = train(ep, cfg);
    std::ostringstream la, lb;
    write_epoch_log(la, a);
    write_epoch_log(lb, b);
    CHECK(la.str() == lb.str());
    CHECK(a.final_params == b.final_params);
    std::istringstream in(la.str());
    const auto back = read_epoch_log(in);
    REQUIRE(back.size() == a.history.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].epoch == a.history[i].epoch);
        CHECK(back[i].reward == a.history[i].reward);
        CHECK(back[i].gnorm == a.history[i].gnorm);
    }
    std::istringstream bad("epoch=0 reward=1 gnorm=0\nnope\n");
    CHECK_THROWS_AS(read_epoch_log(bad), ParseError);
}

TEST_CASE("invalid configurations are rejected", "[trainer]") {
    auto check = [](auto edit) {
        auto cfg = toy_config();
        edit(cfg);
        CHECK_THROWS_AS(train(toy(), cfg), ArgumentError);
    };
    check([](TrainConfig &c) { c.epochs = 0; });
    check([](TrainConfig &c) { c.learning_rate = 0.0; });
    check([](TrainConfig &c) { c.learning_rate = std::numeric_limits<double>::quiet_NaN(); });
    check([](TrainConfig &c) { c.init_range = -1.0; });
    check([](TrainConfig &c) { c.beta1 = 1.0; });
    check([](TrainConfig &c) { c.beta2 = -0.1; });
    check([](TrainConfig &c) { c.epsilon = 0.0; });
    check([](TrainConfig &c) { c.frozen_mask = {true}; });
    check([](TrainConfig &c) { c.initial_values = {1.0, 2.0, 3.0}; });
    Objective empty = toy();
    empty.num_params = 0;
    empty.interactions[0].ops.clear();
    CHECK_THROWS_AS(train(empty, TrainConfig{}), ArgumentError);
}

TEST_CASE("non-finite rewards and impossible rewards abort", "[trainer]") {
    Objective nan = toy();
    nan.utility.value = [](std::span<const ReadoutValues>) {
        return std::numeric_limits<double>::quiet_NaN();
    };
    CHECK_THROWS_AS(train(nan, toy_config()), TrainingError);

    Objective bad_grad = toy();
    bad_grad.utility.gradient = [](std::span<const ReadoutValues>) {
        return std::vector<ReadoutValues>{{0.0, std::numeric_limits<double>::infinity()}};
    };
    try {
        (void)train(bad_grad, toy_config());
        FAIL("expected a training error");
    } catch (const TrainingError &e) {
        CHECK(std::string(e.what()).find("epoch 0") != std::string::npos);
    }

    auto cfg = toy_config();
    cfg.reward_ceiling = 0.5;
    CHECK_THROWS_AS(train(toy(), cfg), TrainingError);
}
