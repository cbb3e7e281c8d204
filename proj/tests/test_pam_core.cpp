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

#include "dcwit/pam_core.hpp"
#include "dcwit/quantum_model.hpp"
#include "test_helpers.hpp"

using namespace dcwit;
using Catch::Matchers::WithinAbs;

TEST_CASE("Phases reduce into [0, 2pi)", "[pam_core]") {
    CHECK(reduce_phase(0.0) == 0.0);
    CHECK_THAT(reduce_phase(-kPi / 2), WithinAbs(3 * kPi / 2, 1e-15));
    CHECK_THAT(reduce_phase(5 * kPi), WithinAbs(kPi, 1e-14));
    CHECK(reduce_phase(kTwoPi) < kTwoPi);
    CHECK_THROWS_AS(reduce_phase(std::nan("")), InvalidInput);

    std::mt19937_64 rng(11);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const double r = reduce_phase(test::uniform(rng, -100.0, 100.0));
        REQUIRE(r >= 0.0);
        REQUIRE(r < kTwoPi);
    }
}

TEST_CASE("Phase literals", "[pam_core]") {
    CHECK_THAT(parse_phase("7pi/4"), WithinAbs(7 * kPi / 4, 1e-15));
    CHECK_THAT(parse_phase("-pi/2"), WithinAbs(-kPi / 2, 1e-15));
    CHECK_THAT(parse_phase("pi"), WithinAbs(kPi, 1e-15));
    CHECK_THAT(parse_phase("0.25"), WithinAbs(0.25, 1e-15));
    CHECK_THROWS_AS(parse_phase("seven"), ParseError);
}

TEST_CASE("Scenario and phase configuration shapes", "[pam_core]") {
    CHECK_THROWS_AS(PamScenario(0, 2, 2), InvalidInput);
    CHECK(PamScenario::idw() == PamScenario(3, 2, 2));

    const PhaseConfig cfg({-kPi / 2, 0.0}, {kPi / 2});
    CHECK_THAT(cfg.phi()[0], WithinAbs(3 * kPi / 2, 1e-15));
    CHECK_NOTHROW(cfg.check_shape(PamScenario(2, 1, 2)));
    CHECK_THROWS_AS(cfg.check_shape(PamScenario::idw()), ShapeError);
    CHECK_THROWS_AS(PhaseConfig({}, {0.0}), ShapeError);
}

TEST_CASE("validate_table accepts and rejects", "[pam_core]") {
    const auto s = PamScenario(2, 2, 2);

    SECTION("deterministic table is accepted unchanged") {
        const auto t = ProbabilityTable::from_p0(2, 2, std::vector<double>(4, 1.0));
        CHECK(validate_table(t, s) == t);
    }
    SECTION("column summing to 1.2 is a normalization error") {
        std::vector<double> e{1, 0, 1, 0, 1, 0, 0.6, 0.6};
        CHECK_THROWS_AS(validate_table(ProbabilityTable(2, 2, e), s), NormalizationError);
    }
    SECTION("entry above one is a range error") {
        std::vector<double> e{1, 0, 1, 0, 1, 0, 1.01, -0.01};
        CHECK_THROWS_AS(validate_table(ProbabilityTable(2, 2, e), s), RangeError);
    }
    SECTION("shape mismatch") {
        const auto t = ProbabilityTable::from_p0(3, 2, std::vector<double>(6, 0.5));
        CHECK_THROWS_AS(validate_table(t, s), ShapeError);
    }
    SECTION("entries survive validation bit for bit") {
        std::mt19937_64 rng(3);
        for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
            const auto t = test::random_table(rng, 4, 2);
            const auto v = validate_table(t, PamScenario::w2());
            REQUIRE(std::equal(t.entries().begin(), t.entries().end(), v.entries().begin()));
        }
    }
}

TEST_CASE("Table reads are bounds checked", "[pam_core]") {
    const auto t = ProbabilityTable::from_p0(2, 2, std::vector<double>(4, 0.5));
    CHECK_THROWS_AS(t.p(2, 0, 0), IndexError);
    CHECK_THROWS_AS(t.p(0, 2, 0), IndexError);
    CHECK_THROWS_AS(expectation(t, 0, 5), IndexError);
}

TEST_CASE("Expectation values", "[pam_core]") {
    CHECK(expectation(ProbabilityTable::from_p0(1, 1, std::vector<double>{1.0}), 0, 0) == 1.0);
    CHECK(expectation(ProbabilityTable::from_p0(1, 1, std::vector<double>{0.5}), 0, 0) == 0.0);

    const auto t = ideal_table(PhaseConfig(test::kIdwPhi, test::kSigma));
    CHECK_THAT(expectation(t, 2, 0), WithinAbs(-1.0, 1e-12));
}

TEST_CASE("Expectation is linear under mixing", "[pam_core][property]") {
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const auto a = test::random_table(rng, 3, 2);
        const auto b = test::random_table(rng, 3, 2);
        const double w = test::uniform(rng);
        const std::vector<ProbabilityTable> tables{a, b};
        const std::vector<double> weights{w, 1.0 - w};
        const auto mix = mix_tables(tables, weights);
        REQUIRE_NOTHROW(validate_table(mix, PamScenario::idw()));
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                REQUIRE_THAT(expectation(mix, x, y),
                             WithinAbs(w * expectation(a, x, y) +
                                           (1 - w) * expectation(b, x, y),
                                       1e-12));
    }
}

TEST_CASE("Table serialization round-trips losslessly", "[pam_core]") {
    std::mt19937_64 rng(7);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto t = test::random_table(rng, 4, 2);
        CHECK(table_from_csv(table_to_csv(t)) == t);
        CHECK(table_from_json(table_to_json(t)) == t);
    }

    const auto t = ProbabilityTable::from_p0(1, 2, std::vector<double>{0.25, 1.0});
    CHECK(table_to_csv(t).rfind("x,y,p0,p1\n", 0) == 0);
    const auto j = table_to_json(t);
    CHECK(j["0,1"][0].get<double>() == 1.0);
    CHECK(j["0,0"][1].get<double>() == 0.75);

    CHECK_THROWS_AS(table_from_csv("x,y,p0,p1\n0,0,abc,0.5\n"), ParseError);
    CHECK_THROWS_AS(table_from_csv("a,b\n"), ParseError);
    nlohmann::json missing = {{"0,0", {0.5, 0.5}}, {"1,1", {0.5, 0.5}}};
    CHECK_THROWS(table_from_json(missing));
}
