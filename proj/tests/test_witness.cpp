// Copyright 2026 The dcwit Authors

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

#include "dcwit/count_ledger.hpp"
#include "dcwit/expsim.hpp"
#include "dcwit/quantum_model.hpp"
#include "dcwit/witness.hpp"
#include "test_helpers.hpp"

using namespace dcwit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CountLedger binary_ledger(std::size_t n_x, std::size_t n_y,
                          const std::vector<std::pair<std::uint64_t, std::uint64_t>> &n) {
    std::vector<SettingCounts> counts;
    for (const auto &[n0, n1] : n)
        counts.push_back({n0 + n1, n0, n1, 0});
    return CountLedger(n_x, n_y, counts);
}

/// Stderr oracle: numerical gradient of the signed witness with respect to
/// each p(0|x,y), combined with the binomial variance of that frequency.
double gradient_stderr(const CountLedger &ledger, WitnessKind kind) {
    std::vector<double> p0;
    for (std::size_t x = 0; x < ledger.n_x(); ++x)
        for (std::size_t y = 0; y < ledger.n_y(); ++y) {
            const auto &c = ledger.at(x, y);
            p0.push_back(c.trigger == 0 ? 0.5 : double(c.d0) / double(c.d0 + c.d1));
        }
    auto signed_value = [&](const std::vector<double> &v) {
        const auto t = ProbabilityTable::from_p0(ledger.n_x(), ledger.n_y(), v);
        if (kind == WitnessKind::W2)
            return det_w2(t);
        return expectation(t, 0, 0) + expectation(t, 0, 1) + expectation(t, 1, 0) -
               expectation(t, 1, 1) - expectation(t, 2, 0);
    };
    double var = 0.0;
    const double h = 1e-6;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        const auto &c = ledger.at(i / ledger.n_y(), i % ledger.n_y());
        if (c.trigger == 0)
            continue;
        auto up = p0, down = p0;
        up[i] += h;
        down[i] -= h;
        const double g = (signed_value(up) - signed_value(down)) / (2 * h);
        const double n = double(c.d0 + c.d1);
        var += g * g * p0[i] * (1 - p0[i]) / n;
    }
    return std::sqrt(var);
}

} // namespace

TEST_CASE("Witness names and scenarios", "[witness]") {
    CHECK(parse_witness("w2") == WitnessKind::W2);
    CHECK(parse_witness("idw") == WitnessKind::IDW);
    CHECK_THROWS_AS(parse_witness("chsh"), ValidationError);
    CHECK(witness_scenario(WitnessKind::W2) == PamScenario::w2());
    CHECK(witness_scenario(WitnessKind::IDW) == PamScenario::idw());
}

TEST_CASE("W2 determinant", "[witness]") {
    const auto optimal = ideal_table(PhaseConfig(test::kW2Phi, test::kSigma));
    CHECK_THAT(std::abs(det_w2(optimal)), WithinAbs(1.0, 1e-12));
    CHECK(det_w2(ProbabilityTable::from_p0(4, 2, std::vector<double>(8, 0.5))) == 0.0);
    CHECK_THROWS_AS(det_w2(ProbabilityTable::from_p0(3, 2, std::vector<double>(6, 0.5))),
                    ShapeError);

    std::mt19937_64 rng(41);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const auto t = test::random_table(rng, 4, 2);
        auto p = [&](std::size_t x, std::size_t y) { return t.p(0, x, y); };
        const double a = p(0, 0) - p(1, 0), b = p(2, 0) - p(3, 0);
        const double c = p(0, 1) - p(1, 1), d = p(2, 1) - p(3, 1);
        REQUIRE_THAT(det_w2(t), WithinAbs(a * d - b * c, 1e-12));
    }
}

TEST_CASE("I_DW", "[witness]") {
    const auto optimal = ideal_table(PhaseConfig(test::kIdwPhi, test::kSigma));
    CHECK_THAT(i_dw(optimal), WithinAbs(1 + 2 * std::sqrt(2.0), 1e-12));
    CHECK(i_dw(ProbabilityTable::from_p0(3, 2, std::vector<double>(6, 0.5))) == 0.0);
    CHECK(i_dw(ProbabilityTable::from_p0(3, 2, std::vector<double>(6, 1.0))) == 1.0);
    CHECK_THROWS_AS(i_dw(ProbabilityTable::from_p0(4, 2, std::vector<double>(8, 0.5))),
                    ShapeError);

    std::mt19937_64 rng(43);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const auto t = test::random_table(rng, 3, 2);
        auto e = [&](std::size_t x, std::size_t y) { return t.p(0, x, y) - t.p(1, x, y); };
        const double expected = std::abs(e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1) - e(2, 0));
        REQUIRE_THAT(i_dw(t), WithinAbs(expected, 1e-12));
        REQUIRE(i_dw(t) <= kIdwAlgebraicBound);
    }
}

TEST_CASE("Witnesses depend only on phase sums", "[witness][property]") {
    std::mt19937_64 rng(47);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const double c = test::random_phase(rng);
        for (std::size_t n_x : {3u, 4u}) {
            auto phi = test::random_phases(rng, n_x);
            auto sigma = test::random_phases(rng, 2);
            const auto before = ideal_table(PhaseConfig(phi, sigma));
            for (auto &v : phi)
                v += c;
            for (auto &v : sigma)
                v -= c;
            const auto after = ideal_table(PhaseConfig(phi, sigma));
            const auto kind = n_x == 3 ? WitnessKind::IDW : WitnessKind::W2;
            REQUIRE_THAT(witness_value(kind, after),
                         WithinAbs(witness_value(kind, before), 1e-12));
        }
    }
}

TEST_CASE("Expectation variance", "[witness]") {
    const std::uint64_t n = 10'000;
    CHECK_THAT(std::sqrt(expectation_variance(n / 2, n / 2)),
               WithinRel(1 / std::sqrt(double(n)), 1e-12));
    CHECK(expectation_variance(100, 0) == 0.0);
    CHECK_THROWS_AS(expectation_variance(0, 0), EmptySetting);
}

TEST_CASE("Witness standard errors", "[witness]") {
    SECTION("one balanced setting among degenerate ones") {
        const std::uint64_t n = 400;
        auto ledger = binary_ledger(3, 2, {{n / 2, n / 2}, {n, 0}, {n, 0}, {0, n}, {0, n}, {0, 0}});
        const auto r = witness_stderr(ledger, WitnessKind::IDW);
        CHECK_THAT(r.value, WithinAbs(4.0, 1e-15));
        CHECK_THAT(r.std_error, WithinRel(1 / std::sqrt(double(n)), 1e-12));
        CHECK(r.degenerate);
    }
    SECTION("all outcomes zero") {
        auto ledger = binary_ledger(3, 2, std::vector<std::pair<std::uint64_t, std::uint64_t>>(
                                              6, {100, 0}));
        const auto r = witness_stderr(ledger, WitnessKind::IDW);
        CHECK(r.value == 1.0);
        CHECK(r.std_error == 0.0);
        CHECK(r.degenerate);
    }
    SECTION("an empty setting that the witness reads is an error") {
        auto ledger = binary_ledger(3, 2, {{0, 0}, {5, 5}, {5, 5}, {5, 5}, {5, 5}, {5, 5}});
        CHECK_THROWS_AS(witness_stderr(ledger, WitnessKind::IDW), EmptySetting);
        auto w2 = binary_ledger(4, 2, {{5, 5}, {5, 5}, {5, 5}, {5, 5}, {5, 5}, {5, 5}, {5, 5},
                                       {0, 0}});
        CHECK_THROWS_AS(witness_stderr(w2, WitnessKind::W2), EmptySetting);
    }
    SECTION("propagation matches a numerical gradient") {
        std::mt19937_64 rng(53);
        for (int i = 0; i < 200; ++i) {
            for (std::size_t n_x : {3u, 4u}) {
                std::vector<std::pair<std::uint64_t, std::uint64_t>> n;
                for (std::size_t k = 0; k < n_x * 2; ++k)
                    n.emplace_back(1 + rng() % 5000, 1 + rng() % 5000);
                const auto ledger = binary_ledger(n_x, 2, n);
                const auto kind = n_x == 3 ? WitnessKind::IDW : WitnessKind::W2;
                const auto r = witness_stderr(ledger, kind);
                REQUIRE_FALSE(r.degenerate);
                REQUIRE_THAT(r.std_error, WithinRel(gradient_stderr(ledger, kind), 1e-6));
                REQUIRE_THAT(r.value,
                             WithinAbs(witness_value(
                                           kind, estimate_table(ledger, AssignmentPolicy::PostSelected)),
                                       1e-15));
            }
        }
    }
}

TEST_CASE("Quantum maximization", "[witness]") {
    const auto idw = maximize_quantum(WitnessKind::IDW);
    CHECK_THAT(idw.value, WithinAbs(kIdwQuantumBound, 1e-6));
    CHECK(idw.value <= kIdwQuantumBound + 1e-9);
    REQUIRE(idw.maximizing_config);
    CHECK_THAT(i_dw(ideal_table(*idw.maximizing_config)), WithinAbs(idw.value, 1e-12));

    const auto w2 = maximize_quantum(WitnessKind::W2);
    CHECK_THAT(w2.value, WithinAbs(1.0, 1e-6));

    OptimizeOptions equal;
    equal.fixed_sigma = std::array<double, 2>{0.4, 0.4};
    const auto collapsed = maximize_quantum(WitnessKind::IDW, equal);
    CHECK_THAT(collapsed.value, WithinAbs(3.0, 1e-6));
    CHECK(collapsed.maximizing_config->sigma()[0] == reduce_phase(0.4));

    // Dense-grid oracle over the preparation phases with the cosine table.
    double grid_best = 0.0;
    const int n = 90;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double c0 = std::cos(kTwoPi * i / n + 0.4);
            const double c2 = std::cos(kTwoPi * k / n + 0.4);
            // phi_2 enters twice with opposite signs when sigma_1 = sigma_2.
            grid_best = std::max(grid_best, std::abs(2 * c0 - c2));
        }
    CHECK_THAT(collapsed.value, WithinAbs(grid_best, 1e-3));

    OptimizeOptions coarse;
    coarse.grid_n = 4;
    CHECK_THROWS_AS(maximize_quantum(WitnessKind::IDW, coarse), InvalidInput);
}

TEST_CASE("Quantum maximization is deterministic and thread independent", "[witness]") {
    OptimizeOptions o;
    o.seed = 99;
    o.starts = 8;
    const auto a = maximize_quantum(WitnessKind::W2, o);
    o.threads = 4;
    const auto b = maximize_quantum(WitnessKind::W2, o);
    CHECK(a.value == b.value);
    CHECK(*a.maximizing_config == *b.maximizing_config);
}

TEST_CASE("Quantum maximization never exceeds the quantum bound", "[witness][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizeOptions o;
        o.seed = seed;
        o.starts = 3;
        REQUIRE(maximize_quantum(WitnessKind::IDW, o).value <= kIdwQuantumBound + 1e-9);
    }
}

TEST_CASE("Witness result JSON", "[witness]") {
    const auto r = maximize_quantum(WitnessKind::IDW);
    const auto j = witness_result_to_json(r);
    CHECK(j["witness"] == "idw");
    CHECK(j.contains("stderr"));
    CHECK(j["phases"].size() == 3);
    CHECK(j["sigma"].size() == 2);
    const auto back = witness_result_from_json(j);
    CHECK(back.value == r.value);
    CHECK(*back.maximizing_config == *r.maximizing_config);
}
