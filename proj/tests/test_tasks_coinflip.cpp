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

#include <Eigen/Eigenvalues>

#include "oracle.hpp"
#include "qagent/tasks/coinflip.hpp"

using namespace qagent;
using namespace qagent::tasks;

namespace {

// qutrit code |0> -> 10, |1> -> 01, |2> -> 00, written out by hand
std::size_t code(int t) { return t == 0 ? 2 : t == 1 ? 1 : 0; }

oracle::Vec pair_state(const std::vector<std::pair<int, int>> &terms, std::vector<double> amps) {
    oracle::Vec v = oracle::Vec::Zero(16);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        v(static_cast<Eigen::Index>(4 * code(terms[i].first) + code(terms[i].second))) += amps[i];
    }
    return v.normalized();
}

// Householder reflection taking |0000> to the real unit vector v
std::vector<cplx> prep_from_zero(const oracle::Vec &v) {
    oracle::Vec u = oracle::Vec::Zero(16);
    u(0) = 1.0;
    u -= v;
    oracle::Mat h = oracle::Mat::Identity(16, 16);
    if (u.norm() > 1e-12) {
        h -= 2.0 * u * u.adjoint() / u.squaredNorm();
    }
    std::vector<cplx> out;
    for (Eigen::Index r = 0; r < 16; ++r) {
        for (Eigen::Index c = 0; c < 16; ++c) {
            out.push_back(h(r, c));
        }
    }
    return out;
}

Op x_gate(std::size_t q) { return FixedGateOp{GateKind::U, {q, 0}, {kPi, kPi, 0.0}, false}; }

// reward of the cheat episode's utility under fixed strategies
double score(const CoinFlipTask &task, std::vector<RoundPolicies> rounds) {
    auto ep = coinflip_cheat_episode(task);
    ep.interaction = InteractionSpec(task.layout(), std::move(rounds));
    return run_episode(ep, {});
}

} // namespace

TEST_CASE("honest protocol is fair and never aborts", "[coinflip]") {
    const auto s = honest_coinflip_stats();
    CHECK(s.p0 == Catch::Approx(0.5).margin(1e-12));
    CHECK(s.p1 == Catch::Approx(0.5).margin(1e-12));
    CHECK(std::abs(s.abort) < 1e-12);
    CHECK(std::abs(s.disagreement) < 1e-12);
}

TEST_CASE("honest preparation", "[coinflip]") {
    const double r = 1.0 / std::sqrt(2.0);
    // qubits a0 a1 a2 a3 m0 m1 m2 m3
    const auto s0 = honest_coinflip_prep(0);
    const auto s1 = honest_coinflip_prep(1);
    for (std::size_t i = 0; i < 256; ++i) {
        const double w0 = i == 0b00101000 || i == 0 ? r : 0.0;
        const double w1 = i == 0b10010100 || i == 0b10000000 ? r : 0.0;
        CHECK(std::abs(s0[i] - w0) < 1e-12);
        CHECK(std::abs(s1[i] - w1) < 1e-12);
    }
    CHECK_THROWS_AS(honest_coinflip_prep(2), ArgumentError);
    for (int a = 0; a < 2; ++a) {
        const auto want = pair_state({{a, a}, {2, 2}}, {1.0, 1.0});
        CHECK((oracle::to_eigen(coinflip::qutrit_pair_state(a)) - want).norm() < 1e-12);
    }
}

TEST_CASE("playing honestly as the cheater gives one half", "[coinflip]") {
    for (auto who : {Party::Alice, Party::Bob}) {
        for (int d = 0; d < 2; ++d) {
            const CoinFlipTask task{who, d, false};
            const auto l = task.layout();
            const double v = score(task, {RoundPolicies{FixedOpsPolicy{"A1", coinflip::honest_a1(l)},
                                                        FixedOpsPolicy{"B1", coinflip::honest_b1(l)}},
                                          RoundPolicies{FixedOpsPolicy{"A2", coinflip::honest_a2(l)},
                                                        FixedOpsPolicy{"B2", coinflip::honest_b2(l)}}});
            CHECK(v == Catch::Approx(0.5).margin(1e-12));
        }
    }
}

TEST_CASE("Alice's three-quarter cheat", "[coinflip]") {
    const auto psi_d = pair_state({{0, 0}, {1, 1}, {2, 2}}, {1.0, 1.0, 2.0});
    for (int a = 0; a < 2; ++a) {
        const auto psi_a = pair_state({{a, a}, {2, 2}}, {1.0, 1.0});
        CHECK(std::norm(psi_a.dot(psi_d)) == Catch::Approx(0.75).margin(1e-12));
        CHECK(std::norm(overlap(coinflip::qutrit_pair_state(a), alice_cheat_state())) ==
              Catch::Approx(0.75).margin(1e-12));
    }
    CHECK((oracle::to_eigen(alice_cheat_state()) - psi_d).norm() < 1e-12);

    // prepare psi^d, then reveal a = b xor c* and send the qutrit unchanged
    for (int d = 0; d < 2; ++d) {
        const CoinFlipTask task{Party::Alice, d, false};
        const auto l = task.layout();
        using namespace coinflip;
        const std::vector<Op> a1{DenseOp{"psi_d",
                                         {l.a(kQutritA), l.a(kQutritA + 1), l.m(kTransit),
                                          l.m(kTransit + 1)},
                                         prep_from_zero(psi_d)}};
        std::vector<Op> a2{cnot(l.m(kAnnounceB), l.m(kRevealA))};
        if (d == 1) {
            a2.push_back(x_gate(l.m(kRevealA)));
        }
        a2.push_back(swap(l.a(kQutritA), l.m(kTransit)));
        a2.push_back(swap(l.a(kQutritA + 1), l.m(kTransit + 1)));
        const double v = score(task, {RoundPolicies{FixedOpsPolicy{"A1*", a1},
                                                    FixedOpsPolicy{"B1", honest_b1(l)}},
                                      RoundPolicies{FixedOpsPolicy{"A2*", a2},
                                                    FixedOpsPolicy{"B2", honest_b2(l)}}});
        CHECK(v == Catch::Approx(0.75).margin(1e-12));
    }
}

TEST_CASE("Bob's guessing bound", "[coinflip]") {
    // rho_a = (|a><a| + |2><2|) / 2 on the code; compute the trace norm by eigenvalues
    oracle::Mat rho[2];
    for (int a = 0; a < 2; ++a) {
        rho[a] = oracle::Mat::Zero(4, 4);
        rho[a](static_cast<Eigen::Index>(code(a)), static_cast<Eigen::Index>(code(a))) = 0.5;
        rho[a](0, 0) += 0.5;
        CHECK((bob_received_state(a) - rho[a]).cwiseAbs().maxCoeff() < 1e-12);
    }
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(rho[0] - rho[1]);
    const double tn = es.eigenvalues().cwiseAbs().sum();
    CHECK(bob_cheat_bound() == Catch::Approx(0.5 + tn / 4).margin(1e-12));
    CHECK(bob_cheat_bound() == Catch::Approx(0.75).margin(1e-12));

    // guess a from the received code qubit b3, announce b = guess xor c*
    for (int d = 0; d < 2; ++d) {
        const CoinFlipTask task{Party::Bob, d, false};
        const auto l = task.layout();
        using namespace coinflip;
        std::vector<Op> b1{swap(l.m(kTransit), l.b(kQutritB)),
                           swap(l.m(kTransit + 1), l.b(kQutritB + 1)),
                           cnot(l.b(kQutritB + 1), l.m(kAnnounceB))};
        if (d == 1) {
            b1.push_back(x_gate(l.m(kAnnounceB)));
        }
        const double v = score(task, {RoundPolicies{FixedOpsPolicy{"A1", honest_a1(l)},
                                                    FixedOpsPolicy{"B1*", b1}},
                                      RoundPolicies{FixedOpsPolicy{"A2", honest_a2(l)}, NoPolicy{}}});
        CHECK(v == Catch::Approx(0.75).margin(1e-12));
    }
}

TEST_CASE("cheat episodes keep the cheater inside its registers", "[coinflip]") {
    for (auto who : {Party::Alice, Party::Bob}) {
        for (bool anc : {false, true}) {
            const CoinFlipTask task{who, 0, anc};
            const auto ep = coinflip_cheat_episode(task);
            CHECK(ep.inputs.size() == 2);
            CHECK(ep.interaction.layout().total() == 12 + (anc ? 1 : 0));
            const auto c = default_cheat_policy(task);
            CHECK(ep.num_params() == 2 * c.num_params());
            // zero angles: the cheater does nothing and Bob/Alice sees garbage
            const double v = run_episode(ep, std::vector<double>(ep.num_params(), 0.0));
            CHECK(v >= -1e-12);
            CHECK(v <= 0.75 + 1e-12);
        }
    }
    CHECK_THROWS_AS(coinflip_cheat_episode(CoinFlipTask{Party::Alice, 2, false}), ArgumentError);
}
