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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qagent/run.hpp"

using namespace qagent;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("qagent_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

RunConfig config_of(const std::string &text) {
    RunConfig c;
    std::istringstream is(text);
    parse_config(is, c);
    return c;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("defaults", "[cli]") {
    const RunConfig c;
    CHECK(option_value(c, "task") == "qft");
    CHECK(option_value(c, "epochs") == "300");
    CHECK(option_value(c, "learning_rate") == "0.05");
    CHECK(option_value(c, "optimizer") == "adam");
    CHECK(c.qubits() == 4);
    CHECK_NOTHROW(validate(c));
    std::ostringstream os;
    write_config(os, c);
    for (const auto &k : kConfigKeys) {
        CHECK(os.str().find(k + " = ") != std::string::npos);
    }
}

TEST_CASE("config files round trip", "[cli]") {
    const auto c = config_of("# a grover run\n"
                             "task = grover\n"
                             "n=3   # eight items\n"
                             "queries = 2\n"
                             "layers = RYPhaseShift, MatchgatePyramid\n"
                             "learning_rate = 0.0125\n"
                             "keep_best = false\n"
                             "\n");
    CHECK(c.task == TaskKind::Grover);
    CHECK(c.qubits() == 3);
    CHECK(c.layers == std::vector{LayerKind::RYPhaseShift, LayerKind::MatchgatePyramid});
    CHECK(!c.train.keep_best);
    std::ostringstream os;
    write_config(os, c);
    const auto back = config_of(os.str());
    for (const auto &k : kConfigKeys) {
        CHECK(option_value(back, k) == option_value(c, k));
    }
}

TEST_CASE("bad configs name the line", "[cli]") {
    auto line_of = [](const std::string &text) -> std::size_t {
        try {
            (void)config_of(text);
        } catch (const ParseError &e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("task = qft\nnonsense\n") == 2);
    CHECK(line_of("task = qft\n\nflavour = sweet\n") == 3);
    CHECK(line_of("epochs = -3\n") == 1);
    CHECK(line_of("learning_rate = fast\n") == 1);
    CHECK(line_of("task = sudoku\n") == 1);
    CHECK(line_of("layers = Pyramid\n") == 1);
    CHECK(line_of("keep_best = maybe\n") == 1);
}

TEST_CASE("validation", "[cli]") {
    auto bad = [](const std::string &text) {
        const auto c = config_of(text);
        CHECK_THROWS_AS(validate(c), ArgumentError);
    };
    bad("task = qft\nn = 11\n");
    bad("task = grover\nqueries = 0\n");
    bad("task = coinflip\noutcome = 2\n");
    bad("seeds = 0\n");
    bad("epochs = 0\n");
    bad("learning_rate = 0\n");
    bad("beta1 = 1\n");
    bad("out = \n");
}

TEST_CASE("report tables", "[cli]") {
    TempDir tmp;
    std::ostringstream empty;
    write_report(empty, collect_report(tmp.path));
    const std::string head = empty.str();
    CHECK(head.find("Task") == 0);
    CHECK(std::count(head.begin(), head.end(), '\n') == 1);
    CHECK(collect_report(tmp.path / "missing").empty());

    const std::vector<std::string> configs{
        "task=grover\nn=3\nqueries=2", "task=conflicting", "task=qft\nn=6",
        "task=coinflip\ncheater=bob",  "task=grover\nn=2",  "task=chsh",
        "task=qft",                    "task=grover\nn=3",  "task=coinflip"};
    const std::vector<std::string> order{
        "QFT (n=4)",          "QFT (n=6)",          "Coin Flip (Alice)",
        "Coin Flip (Bob)",    "CHSH",               "Conflicting-Interest",
        "Grover (N=4, 1 query)", "Grover (N=8, 1 query)", "Grover (N=8, 2 queries)"};
    for (std::size_t i = 0; i < configs.size(); ++i) {
        auto c = config_of(configs[i] + "\nepochs = 2\n");
        c.out = tmp.path.string();
        (void)write_run(execute(c));
        if (i == 1) {
            // partial set: only the runs present so far
            const auto rows = collect_report(tmp.path);
            REQUIRE(rows.size() == 2);
            CHECK(rows[0].label == "Conflicting-Interest");
            CHECK(rows[1].label == "Grover (N=8, 2 queries)");
        }
    }
    const auto rows = collect_report(tmp.path);
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(rows[i].label == order[i]);
    }
    CHECK(*rows[7].optimal == Catch::Approx(0.78125).margin(1e-12));
    CHECK(*rows[8].optimal == Catch::Approx(0.9453125).margin(1e-12));
    std::ostringstream table;
    write_report(table, rows);
    const std::string text = table.str();
    CHECK(text.find("0.781250") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
}

TEST_CASE("rerunning overwrites with identical bytes", "[cli]") {
    TempDir tmp;
    auto c = config_of("task = chsh\nepochs = 25\nseeds = 2\n");
    c.out = tmp.path.string();
    const std::vector<std::string> files{"config.txt",  "epochs.log", "summary.txt",
                                         "circuit.txt", "seeds.txt",  "policy_0.circuit",
                                         "policy_2.circuit"};
    const auto dir = write_run(execute(c));
    std::vector<std::string> first;
    for (const auto &f : files) {
        first.push_back(slurp(dir / f));
        CHECK(!first.back().empty());
    }
    (void)write_run(execute(c));
    for (std::size_t i = 0; i < files.size(); ++i) {
        CHECK(slurp(dir / files[i]) == first[i]);
    }
}

TEST_CASE("evaluating circuits from files", "[cli]") {
    TempDir tmp;
    const auto qft = general_qft_circuit(4);
    {
        std::ofstream f(tmp.path / "qft.circuit");
        write_circuit_file(f, qft.circuit, qft.params);
        std::ofstream g(tmp.path / "qft.txt");
        g << render(qft.circuit, qft.params, {17, true});
        std::ofstream h(tmp.path / "id2.txt");
        h << " 0: ----\n 1: ----\n";
    }
    const auto cfg = config_of("task = qft\nn = 4\n");
    CHECK(evaluate_circuits(cfg, {load_circuit(tmp.path / "qft.circuit")}) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(evaluate_circuits(cfg, {load_circuit(tmp.path / "qft.txt")}) ==
          Catch::Approx(1.0).margin(1e-12));

    const auto grover = config_of("task = grover\nn = 2\n");
    CHECK(evaluate_circuits(grover, {load_circuit(tmp.path / "id2.txt")}) ==
          Catch::Approx(0.25).margin(1e-14));
    CHECK_THROWS_AS(evaluate_circuits(cfg, {load_circuit(tmp.path / "id2.txt")}), ArgumentError);
    CHECK_THROWS_AS(evaluate_circuits(grover, {}), ArgumentError);
    // pre and post slots, or one circuit for both
    const auto id2 = load_circuit(tmp.path / "id2.txt");
    CHECK(evaluate_circuits(grover, {id2, id2}) == Catch::Approx(0.25).margin(1e-14));
    CHECK_THROWS_AS(evaluate_circuits(grover, {id2, id2, id2}), ArgumentError);
    CHECK_THROWS(load_circuit(tmp.path / "nope.circuit"));
}
