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

#include <set>

#include <catch_amalgamated.hpp>

#include "dcwit/classical_model.hpp"
#include "dcwit/witness.hpp"
#include "test_helpers.hpp"

using namespace dcwit;
using Catch::Matchers::WithinAbs;

namespace {

/// Independent brute force over bit patterns: encoder bits x -> lambda,
/// decoder bits (lambda, y) -> b, expectations as +-1 integers.
int brute_force_idw_max() {
    int best = -1;
    for (int enc = 0; enc < 8; ++enc)
        for (int dec = 0; dec < 16; ++dec) {
            auto e = [&](int x, int y) {
                const int lambda = (enc >> x) & 1;
                const int b = (dec >> (lambda * 2 + y)) & 1;
                return b == 0 ? 1 : -1;
            };
            best = std::max(best, std::abs(e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1) - e(2, 0)));
        }
    return best;
}

CorrelatedStrategy random_mixture(std::mt19937_64 &rng,
                                  const std::vector<DeterministicStrategy> &pool,
                                  std::size_t n) {
    std::vector<WeightedStrategy> parts;
    double total = 0.0;
    std::vector<double> w(n);
    for (auto &v : w) {
        v = test::uniform(rng, 0.01, 1.0);
        total += v;
    }
    for (std::size_t i = 0; i < n; ++i)
        parts.push_back({w[i] / total, pool[rng() % pool.size()]});
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        sum += parts[i].weight;
    parts.back().weight = 1.0 - sum;
    return CorrelatedStrategy(parts);
}

} // namespace

TEST_CASE("Strategy validation", "[classical_model]") {
    const auto s = PamScenario(2, 1, 2);
    CHECK_NOTHROW(DeterministicStrategy(s, {0, 1}, {0, 1}));
    CHECK_THROWS_AS(DeterministicStrategy(s, {0, 2}, {0, 1}), InvalidInput);
    CHECK_THROWS_AS(DeterministicStrategy(s, {0}, {0, 1}), InvalidInput);
    CHECK_THROWS_AS(DeterministicStrategy(s, {0, 1}, {0, 1, 1}), InvalidInput);
    CHECK_THROWS_AS(DeterministicStrategy(s, {0, 1}, {0, 2}), InvalidInput);

    const DeterministicStrategy a(s, {0, 0}, {0, 0});
    CHECK_THROWS_AS(CorrelatedStrategy({}), InvalidInput);
    CHECK_THROWS_AS(CorrelatedStrategy({{0.5, a}, {0.6, a}}), InvalidInput);
    CHECK_THROWS_AS(CorrelatedStrategy({{1.0, a}, {0.0, DeterministicStrategy(
                                                            PamScenario(3, 1, 2), {0, 0, 0},
                                                            {0, 0})}}),
                    InvalidInput);
}

TEST_CASE("Enumeration counts and order", "[classical_model]") {
    CHECK(strategy_count(PamScenario::idw()) == 128);
    CHECK(strategy_count(PamScenario::w2()) == 256);
    CHECK(strategy_count(PamScenario(5, 2, 1)) == 4);

    const auto all = enumerate_deterministic(PamScenario::idw());
    REQUIRE(all.size() == 128);
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto &s : all)
        seen.insert({s.encoder(), s.decoder()});
    CHECK(seen.size() == 128);
    CHECK(std::is_sorted(all.begin(), all.end(), [](const auto &a, const auto &b) {
        return std::tie(a.encoder(), a.decoder()) < std::tie(b.encoder(), b.decoder());
    }));
    CHECK(all.front().encoder() == std::vector<int>{0, 0, 0});
    CHECK(all.back().decoder() == std::vector<int>{1, 1, 1, 1});

    CHECK(enumerate_deterministic(PamScenario::w2()).size() == 256);
    CHECK(enumerate_deterministic(PamScenario(5, 2, 1)).size() == 4);
    CHECK_THROWS_AS(enumerate_deterministic(PamScenario(10, 10, 4)), CapExceeded);
    CHECK_THROWS_AS(enumerate_deterministic(PamScenario::w2(), 100), CapExceeded);
}

TEST_CASE("Strategy tables", "[classical_model]") {
    const auto s = PamScenario(2, 2, 2);
    const DeterministicStrategy zero(s, {0, 0}, {0, 0, 0, 0});
    const DeterministicStrategy one(s, {0, 0}, {1, 1, 1, 1});

    const auto tz = strategy_table(zero);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            CHECK(tz.p(0, x, y) == 1.0);

    const auto half = strategy_table(CorrelatedStrategy({{0.5, zero}, {0.5, one}}));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            CHECK(half.p(0, x, y) == 0.5);

    const DeterministicStrategy parity(s, {0, 1}, {0, 0, 1, 1});
    const auto tp = strategy_table(parity);
    CHECK(tp.p(0, 0, 0) == 1.0);
    CHECK(tp.p(0, 0, 1) == 1.0);
    CHECK(tp.p(0, 1, 0) == 0.0);
    CHECK(tp.p(0, 1, 1) == 0.0);
}

TEST_CASE("Every strategy table is valid", "[classical_model][property]") {
    for (const auto &s : enumerate_deterministic(PamScenario::w2()))
        REQUIRE_NOTHROW(validate_table(strategy_table(s), PamScenario::w2()));
    std::mt19937_64 rng(31);
    const auto pool = enumerate_deterministic(PamScenario::idw());
    for (std::size_t i = 0; i < test::kPropertyCases; ++i)
        REQUIRE_NOTHROW(validate_table(strategy_table(random_mixture(rng, pool, 1 + rng() % 5)),
                                       PamScenario::idw()));
}

TEST_CASE("Classical maxima", "[classical_model]") {
    const auto idw = classical_max([](const ProbabilityTable &t) { return i_dw(t); },
                                   PamScenario::idw());
    CHECK(idw.value == 3.0);
    CHECK(idw.value == brute_force_idw_max());
    CHECK(i_dw(strategy_table(idw.maximizer)) == 3.0);

    const auto w2 = classical_max(
        [](const ProbabilityTable &t) { return std::abs(det_w2(t)); }, PamScenario::w2());
    CHECK(w2.value == 0.0);
    for (const auto &s : enumerate_deterministic(PamScenario::w2()))
        REQUIRE(det_w2(strategy_table(s)) == 0.0);

    const auto constant =
        classical_max([](const ProbabilityTable &) { return 2.5; }, PamScenario::idw());
    CHECK(constant.value == 2.5);
    CHECK(constant.maximizer == enumerate_deterministic(PamScenario::idw()).front());
}

TEST_CASE("Independent devices cannot violate W2", "[classical_model]") {
    const auto pool = enumerate_deterministic(PamScenario::w2());
    std::mt19937_64 rng(37);

    const CorrelatedStrategy single({{1.0, pool[77]}});
    CHECK(independent_det_w2(single, single) == 0.0);

    for (int i = 0; i < 100; ++i) {
        const auto prep = random_mixture(rng, pool, 1 + rng() % 6);
        const auto meas = random_mixture(rng, pool, 1 + rng() % 6);
        REQUIRE(independent_det_w2(prep, meas) <= 1e-12);
    }

    // Decoders "always 0" and "always 1" mixed evenly give the uniform table.
    const DeterministicStrategy zeros(PamScenario::w2(), {0, 0, 0, 0}, {0, 0, 0, 0});
    const DeterministicStrategy ones(PamScenario::w2(), {0, 0, 0, 0}, {1, 1, 1, 1});
    const CorrelatedStrategy uniform({{0.5, zeros}, {0.5, ones}});
    CHECK(independent_det_w2(uniform, uniform) == 0.0);
}

TEST_CASE("Correlated devices reach |det W2| = 1", "[classical_model]") {
    const auto certificate = correlated_det_certificate();
    CHECK(certificate.components().size() == 2);
    CHECK_THAT(std::abs(det_w2(strategy_table(certificate))), WithinAbs(1.0, 1e-15));

    CHECK(correlated_det_search(1, 20, 0).value == 0.0);

    const auto found = correlated_det_search(2, 50, 0);
    CHECK(found.value >= 0.99);
    CHECK(found.value <= 1.0 + 1e-12);
    CHECK_THAT(std::abs(det_w2(strategy_table(found.strategy))), WithinAbs(found.value, 1e-12));

    const auto again = correlated_det_search(2, 50, 0);
    CHECK(again.value == found.value);
    CHECK(strategy_to_json(again.strategy) == strategy_to_json(found.strategy));
}

TEST_CASE("Minimal retro-causality", "[classical_model]") {
    CHECK_THAT(min_retrocausality(3.822), WithinAbs(0.2055, 1e-4));
    CHECK(min_retrocausality(3.0) == 0.0);
    CHECK(min_retrocausality(2.0) == 0.0);
    CHECK_THROWS_AS(min_retrocausality(std::nan("")), InvalidInput);

    double previous = min_retrocausality(-1.0);
    for (double v = -1.0; v <= 6.0; v += 0.01) {
        const double r = min_retrocausality(v);
        REQUIRE(r >= previous);
        previous = r;
    }
}

TEST_CASE("Strategy JSON round-trips", "[classical_model]") {
    const auto pool = enumerate_deterministic(PamScenario::idw());
    for (const auto &s : pool)
        REQUIRE(deterministic_strategy_from_json(strategy_to_json(s)) == s);

    const auto c = correlated_det_certificate();
    const auto back = correlated_strategy_from_json(strategy_to_json(c));
    REQUIRE(back.components().size() == c.components().size());
    for (std::size_t i = 0; i < c.components().size(); ++i) {
        CHECK(back.components()[i].weight == c.components()[i].weight);
        CHECK(back.components()[i].strategy == c.components()[i].strategy);
    }
}
