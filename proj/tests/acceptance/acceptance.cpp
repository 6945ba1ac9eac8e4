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
// Acceptance run: one line per criterion, exit status 1 if any fails.
// Trains with the same defaults as `qagent train`.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "qagent/prune.hpp"
#include "qagent/run.hpp"

using namespace qagent;
using namespace qagent::tasks;

namespace {

struct Verdict {
    bool ok{true};
    std::ostringstream detail;

    void need(bool cond, const std::string &what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig cfg(const std::string &text) {
    RunConfig c;
    std::istringstream is(text);
    parse_config(is, c);
    return c;
}

int report(int id, const std::string &name, Verdict &v) {
    std::printf("criterion %d %-16s %s %s\n", id, name.c_str(), v.ok ? "PASS" : "FAIL",
                v.detail.str().c_str());
    std::fflush(stdout);
    return v.ok ? 0 : 1;
}

Verdict check_qft() {
    Verdict v;
    v.detail.precision(9);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r4 = execute(cfg("task = qft\nn = 4\n"));
    const double t4 = seconds_since(t0);
    v.detail << "n=4 fidelity " << r4.learned << " in " << t4 << "s;";
    v.need(r4.learned >= 0.999, "n=4 fidelity >= 0.999");
    v.need(r4.record.history.size() == 300, "300 epochs");
    v.need(t4 <= 600.0, "n=4 within 10 minutes");
    const auto r6 = execute(cfg("task = qft\nn = 6\nseeds = 5\n"));
    v.detail << " n=6 best of seeds 0-4 " << r6.learned << " (";
    for (const auto &s : r6.seeds) {
        v.detail << (s.seed ? " " : "") << s.final_reward;
    }
    v.detail << ")";
    v.need(r6.learned >= 0.999, "n=6 best >= 0.999");
    return v;
}

Verdict check_grover() {
    Verdict v;
    v.detail.precision(9);
    const std::vector<std::tuple<std::size_t, std::size_t, double>> table{
        {2, 1, 1.0}, {3, 1, 0.78125}, {3, 2, 0.9453125}};
    for (const auto &[n, k, want] : table) {
        const GroverTask t{n, k};
        const double got = grover_reward(t, canonical_grover_policies(t), {});
        const double th = std::asin(1.0 / std::sqrt(static_cast<double>(1U << n)));
        const double closed = std::pow(std::sin((2.0 * static_cast<double>(k) + 1.0) * th), 2);
        v.need(std::abs(got - want) <= 1e-12 && std::abs(got - closed) <= 1e-12,
               "canonical N=" + std::to_string(1U << n) + " k=" + std::to_string(k));
    }
    v.detail << "canonical values exact;";
    const auto a = execute(cfg("task = grover\nn = 2\n"));
    const auto b = execute(cfg("task = grover\nn = 3\n"));
    const auto c = execute(cfg("task = grover\nn = 3\nqueries = 2\n"));
    v.detail << " trained N=4,k=1 " << a.learned << "; N=8,k=1 " << b.learned
             << "; N=8,k=2 (transfer) " << c.learned;
    v.need(a.learned >= 0.999, "N=4 k=1 >= 0.999");
    v.need(b.learned >= 0.781 - 0.002, "N=8 k=1 >= 0.779");
    v.need(c.learned >= 0.944, "N=8 k=2 >= 0.944");
    return v;
}

Verdict check_coinflip() {
    Verdict v;
    v.detail.precision(9);
    const auto h = honest_coinflip_stats();
    v.need(std::abs(h.p0 - 0.5) <= 1e-10 && std::abs(h.p1 - 0.5) <= 1e-10, "honest 50/50");
    v.need(std::abs(h.abort) <= 1e-10, "honest never aborts");
    v.detail << "honest P(0)=" << h.p0 << " P(1)=" << h.p1 << " abort=" << h.abort << ";";

    // dense cross-checks written out on the qutrit code
    const auto code = [](int t) { return t == 0 ? 2 : t == 1 ? 1 : 0; };
    oracle::Vec psi_d = oracle::Vec::Zero(16);
    for (int t = 0; t < 3; ++t) {
        psi_d(4 * code(t) + code(t)) = t == 2 ? 2.0 : 1.0;
    }
    psi_d.normalize();
    for (int a = 0; a < 2; ++a) {
        oracle::Vec psi_a = oracle::Vec::Zero(16);
        psi_a(4 * code(a) + code(a)) = 1.0;
        psi_a(0) = 1.0;
        psi_a.normalize();
        v.need(std::abs(std::norm(psi_a.dot(psi_d)) - 0.75) <= 1e-12, "|<psi_a|psi^d>|^2");
        v.need(std::abs(std::norm(overlap(coinflip::qutrit_pair_state(a), alice_cheat_state())) -
                        0.75) <= 1e-12,
               "library overlap");
    }
    v.need(std::abs(bob_cheat_bound() - 0.75) <= 1e-12, "trace-norm bound");

    for (const char *who : {"alice", "bob"}) {
        const auto r = execute(cfg(std::string("task = coinflip\ncheater = ") + who + "\n"));
        v.detail << " " << who << " " << r.learned;
        v.need(r.learned >= 0.7499, std::string(who) + " >= 0.7499");
        v.need(r.learned <= 0.75 + 1e-6, std::string(who) + " <= 0.75");
        for (const auto &e : r.record.history) {
            v.need(e.reward <= 0.75 + 1e-6, std::string(who) + " history <= 0.75");
        }
    }
    return v;
}

Verdict check_games() {
    Verdict v;
    v.detail.precision(9);
    const auto chsh = execute(cfg("task = chsh\n"));
    const auto ci = execute(cfg("task = conflicting\n"));
    const double bound = classical_game_bound(GameTask::chsh());
    v.detail << "CHSH F " << chsh.learned << "; conflicting F_A " << ci.game->f_a << " F_B "
             << ci.game->f_b << "; classical CHSH " << bound;
    v.need(chsh.learned >= 0.8535, "CHSH >= 0.8535");
    v.need(ci.game->f_a >= 0.6400 && ci.game->f_b >= 0.6400, "F_A, F_B >= 0.6400");
    v.need(std::abs(ci.game->f_a - ci.game->f_b) <= 1e-3, "F_A ~ F_B");
    v.need(bound == 0.75, "classical bound 0.75");
    return v;
}

Verdict check_properties() {
    Verdict v;
    std::mt19937_64 rng(2026);
    // gate unitarity and norm preservation
    double worst_u = 0.0, worst_n = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto a = oracle::random_params(3, rng);
        for (auto k : {GateKind::U, GateKind::M, GateKind::CRY, GateKind::RBS}) {
            const auto g = oracle::gate(k, a.data());
            worst_u = std::max(worst_u, (g.adjoint() * g - oracle::Mat::Identity(g.rows(), g.rows()))
                                            .cwiseAbs()
                                            .maxCoeff());
        }
        const auto c = build_policy(4, kFullBlock);
        const auto s = apply(c, oracle::random_params(c.num_params(), rng), oracle::random_state(4, rng));
        worst_n = std::max(worst_n, std::abs(s.norm() - 1.0));
    }
    v.need(worst_u < 1e-12 && worst_n < 1e-12, "unitarity");

    // adjoint gradient against finite differences of the dense oracle
    double worst_g = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto c = build_policy(4, kFullBlock, PolicyOptions{1 + static_cast<std::size_t>(i % 3)});
        const auto p = oracle::random_params(c.num_params(), rng);
        std::vector<double> w(16);
        std::uniform_real_distribution<double> uw(-1, 1);
        for (auto &x : w) {
            x = uw(rng);
        }
        Objective obj;
        std::vector<Op> ops;
        append_circuit(ops, c, 0);
        obj.interactions.push_back(Interaction{StateVector(4), ops, BasisReadout{}});
        obj.utility = linear_utility({w});
        obj.num_params = c.num_params();
        const auto fd = finite_difference(
            [&](std::span<const double> q) {
                const oracle::Mat u = oracle::circuit_matrix(c, {q.begin(), q.end()});
                double acc = 0;
                for (Eigen::Index x = 0; x < 16; ++x) {
                    acc += w[static_cast<std::size_t>(x)] * std::norm(u(x, 0));
                }
                return acc;
            },
            p, 1e-5);
        worst_g = std::max(worst_g, compare_gradients(gradient(obj, p), fd, 1e-5).max_abs_error);
    }
    v.need(worst_g < 1e-5, "gradient vs finite differences");

    // nearest-neighbour QFT: dense equality and gate counts
    bool qft_ok = true;
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto b = general_qft_circuit(n);
        const auto k = count_qft_gates(b);
        qft_ok = qft_ok &&
                 (oracle::circuit_matrix(b.circuit, b.params) - oracle::qft(n)).cwiseAbs().maxCoeff() <
                     1e-12 &&
                 k.single_qubit == n && k.controlled_rotations == n * (n - 1) / 2 &&
                 k.swaps == n * (n - 1) / 2;
    }
    v.need(qft_ok, "general QFT circuit");

    // pruning keeps fidelity >= 1 - 10 tol
    double worst_f = 1.0;
    for (int i = 0; i < 30; ++i) {
        const auto c = build_policy(3, kFullBlock, PolicyOptions{1});
        auto p = oracle::random_params(c.num_params(), rng);
        std::uniform_real_distribution<double> small(-5e-4, 5e-4);
        for (std::size_t j = 0; j < p.size(); j += 2) {
            p[j] = small(rng);
        }
        const auto r = prune(c, p, 1e-3);
        worst_f = std::min(worst_f, oracle::phase_fidelity(oracle::circuit_matrix(c, p),
                                                           oracle::circuit_matrix(r.circuit, r.params, 3)));
    }
    v.need(worst_f >= 1.0 - 1e-2, "prune fidelity");

    // register confinement
    bool conf_ok = true;
    const RegisterLayout l{2, 1, 2};
    for (std::size_t q = 0; q + 1 < l.total(); ++q) {
        const auto c = build_policy(2, {LayerKind::MatchgatePyramid}, {}, {q, q + 1});
        bool threw = false;
        try {
            (void)InteractionSpec(l, {RoundPolicies{TrainablePolicy{c}, NoPolicy{}}});
        } catch (const ConfigurationError &) {
            threw = true;
        }
        conf_ok = conf_ok && threw == (q + 1 >= l.n_a + l.n_m);
    }
    v.need(conf_ok, "confinement");
    v.detail << "unitarity " << worst_u << ", norm " << worst_n << ", gradient " << worst_g
             << ", prune fidelity " << worst_f << ", QFT n=1..6 exact, confinement enforced";
    return v;
}

Verdict check_reproducibility() {
    Verdict v;
    std::size_t compared = 0;
    for (const char *text : {"task = qft\nn = 4\n", "task = chsh\nseed = 3\n",
                             "task = grover\nn = 3\nqueries = 2\nepochs = 60\n"}) {
        std::string logs[2];
        for (auto &log : logs) {
            std::ostringstream os;
            write_epoch_log(os, execute(cfg(text)).record);
            log = os.str();
        }
        v.need(!logs[0].empty() && logs[0] == logs[1], std::string("identical logs for ") + text);
        compared += logs[0].size();
    }
    v.detail << "3 configs trained twice, " << compared << " log bytes identical";
    return v;
}

} // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, const char *name, Verdict (*f)()) {
        try {
            Verdict v = f();
            failures += report(id, name, v);
        } catch (const std::exception &e) {
            Verdict v;
            v.need(false, e.what());
            failures += report(id, name, v);
        }
    };
    run(1, "qft", check_qft);
    run(2, "grover", check_grover);
    run(3, "coinflip", check_coinflip);
    run(4, "games", check_games);
    run(5, "properties", check_properties);
    run(6, "reproducibility", check_reproducibility);
    std::printf("%d of 6 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
