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
#include "dcwit/witness.hpp"
#include "test_helpers.hpp"

using namespace dcwit;
using Catch::Matchers::WithinAbs;

namespace {

const PhaseConfig kIdwConfig(test::kIdwPhi, test::kSigma);
const PhaseConfig kW2Config(test::kW2Phi, test::kSigma);

DeviceModel inclusive(double eta, double t_a = 1.0, double t_b = 1.0) {
    DeviceModel d;
    d.eta = eta;
    d.t_a = t_a;
    d.t_b = t_b;
    d.policy = AssignmentPolicy::InclusiveAssignment;
    return d;
}

DeviceModel random_device(std::mt19937_64 &rng) {
    DeviceModel d;
    d.eta = test::uniform(rng);
    d.t_a = test::uniform(rng);
    d.t_b = test::uniform(rng);
    d.visibility = test::uniform(rng);
    d.policy = rng() % 2 ? AssignmentPolicy::PostSelected : AssignmentPolicy::InclusiveAssignment;
    return d;
}

} // namespace

TEST_CASE("Count ledger bookkeeping", "[expsim]") {
    CountLedger l(2, 2);
    l.record_d0(0, 0);
    l.record_d1(0, 0);
    l.record_lost(1, 1);
    CHECK(l.at(0, 0) == SettingCounts{2, 1, 1, 0});
    CHECK(l.at(1, 1) == SettingCounts{1, 0, 0, 1});
    CHECK(l.conserved());
    CHECK_THROWS_AS(l.at(2, 0), IndexError);

    CountLedger m(2, 2);
    m.record_d0(0, 0);
    l.merge(m);
    CHECK(l.at(0, 0).d0 == 2);
    CHECK_THROWS_AS(l.merge(CountLedger(3, 2)), ShapeError);

    CHECK_THROWS_AS(CountLedger(1, 1, {{5, 1, 1, 1}}), InvalidInput);
    CHECK_THROWS_AS(CountLedger(1, 2, {{3, 1, 1, 1}}), ShapeError);

    CHECK(ledger_from_csv(ledger_to_csv(l)) == l);
    CHECK(ledger_to_csv(l).rfind("x,y,trigger,d0,d1,lost\n", 0) == 0);
    CHECK_THROWS_AS(ledger_from_csv("x,y,trigger,d0,d1,lost\n0,0,3,1,1,0\n"), InvalidInput);

    const SettingCounts c{10, 3, 5, 2};
    CHECK(outcome_counts(c, AssignmentPolicy::PostSelected).n0 == 3);
    CHECK(outcome_counts(c, AssignmentPolicy::PostSelected).n1 == 5);
    CHECK(outcome_counts(c, AssignmentPolicy::InclusiveAssignment).n0 == 7);
    CHECK(outcome_counts(c, AssignmentPolicy::InclusiveAssignment).n1 == 3);
}

TEST_CASE("Empirical tables", "[expsim]") {
    SECTION("all coincidences on D0 flip label between policies") {
        const CountLedger l(1, 1, {{50, 50, 0, 0}});
        CHECK(estimate_table(l, AssignmentPolicy::PostSelected).p(0, 0, 0) == 1.0);
        CHECK(estimate_table(l, AssignmentPolicy::InclusiveAssignment).p(1, 0, 0) == 1.0);
    }
    SECTION("all photons lost") {
        const CountLedger l(1, 1, {{50, 0, 0, 50}});
        CHECK(estimate_table(l, AssignmentPolicy::InclusiveAssignment).p(0, 0, 0) == 1.0);
        CHECK_THROWS_AS(estimate_table(l, AssignmentPolicy::PostSelected), EmptySetting);
    }
    SECTION("exact ratios") {
        const CountLedger l(1, 1, {{10, 3, 5, 2}});
        CHECK(estimate_table(l, AssignmentPolicy::PostSelected).p(0, 0, 0) == 3.0 / 8.0);
        CHECK(estimate_table(l, AssignmentPolicy::InclusiveAssignment).p(0, 0, 0) == 7.0 / 10.0);
    }
}

TEST_CASE("Simulation determinism", "[expsim]") {
    DeviceModel d = inclusive(0.6, 0.8, 0.9);
    d.visibility = 0.9;
    const auto a = run_experiment(kW2Config, d, 50'000, 7);
    const auto b = run_experiment(kW2Config, d, 50'000, 7);
    CHECK(a == b);
    CHECK_FALSE(a == run_experiment(kW2Config, d, 50'000, 8));

    for (auto accounting : {Accounting::PerTrigger, Accounting::PerPair})
        for (auto selection : {XSelection::RoundRobin, XSelection::Uniform}) {
            SimulationOptions o{selection, accounting, 1};
            const auto single = run_experiment(kW2Config, d, 20'000, 3, o);
            o.threads = 4;
            CHECK(single == run_experiment(kW2Config, d, 20'000, 3, o));
        }

    CHECK_THROWS_AS(run_experiment(kW2Config, d, 0, 1), InvalidInput);
}

TEST_CASE("Seed determinism on random cases", "[expsim][property]") {
    std::mt19937_64 rng(59);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const std::size_t n_x = 1 + rng() % 4;
        const PhaseConfig cfg(test::random_phases(rng, n_x), test::random_phases(rng, 2));
        const auto d = random_device(rng);
        const std::uint64_t seed = rng();
        SimulationOptions o;
        o.accounting = rng() % 2 ? Accounting::PerPair : Accounting::PerTrigger;
        o.x_selection = rng() % 2 ? XSelection::Uniform : XSelection::RoundRobin;
        REQUIRE(run_experiment(cfg, d, 300, seed, o) == run_experiment(cfg, d, 300, seed, o));
    }
}

TEST_CASE("Ledger conservation on random cases", "[expsim][property]") {
    std::mt19937_64 rng(61);
    for (std::size_t i = 0; i < test::kPropertyCases; ++i) {
        const std::size_t n_x = 1 + rng() % 4;
        const PhaseConfig cfg(test::random_phases(rng, n_x), test::random_phases(rng, 2));
        SimulationOptions o;
        o.accounting = rng() % 2 ? Accounting::PerPair : Accounting::PerTrigger;
        o.x_selection = rng() % 2 ? XSelection::Uniform : XSelection::RoundRobin;
        const std::uint64_t trials = 1 + rng() % 500;
        const auto l = run_experiment(cfg, random_device(rng), trials, rng(), o);
        REQUIRE(l.conserved());
        std::uint64_t total = 0;
        for (std::size_t x = 0; x < n_x; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                total += l.at(x, y).trigger;
        REQUIRE(total == trials);
    }
}

TEST_CASE("Lossless devices lose nothing", "[expsim]") {
    const auto l = run_experiment(kIdwConfig, DeviceModel{}, 30'000, 1);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            CHECK(l.at(x, y).lost == 0);
}

TEST_CASE("Ideal simulation reproduces the optimal I_DW", "[expsim]") {
    const auto l = run_experiment(kIdwConfig, DeviceModel{}, 1'000'000, 2);
    const auto r = witness_stderr(l, WitnessKind::IDW);
    CHECK(std::abs(r.value - kIdwQuantumBound) <= 3 * r.std_error);
    CHECK(r.std_error > 0.0);
}

TEST_CASE("Low-efficiency inclusive simulation follows the loss law", "[expsim]") {
    const auto d = inclusive(0.025);
    const auto l = run_experiment(kW2Config, d, 4'000'000, 5);
    const auto r = witness_stderr(l, WitnessKind::W2, d.policy);
    CHECK(std::abs(r.value - 6.25e-4) <= 3 * r.std_error);
}

TEST_CASE("Pair accounting carries the trigger-arm loss", "[expsim]") {
    const auto d = inclusive(0.8, 0.5, 0.9);
    SimulationOptions pairs;
    pairs.accounting = Accounting::PerPair;
    const auto l = run_experiment(kW2Config, d, 4'000'000, 9, pairs);
    const auto r = witness_stderr(l, WitnessKind::W2, d.policy);
    const double expected = std::abs(det_w2(lossy_table(kW2Config, d)));
    CHECK(std::abs(r.value - expected) <= 3 * r.std_error);

    // Per trigger, the trigger arm only thins the run count.
    const auto t = run_experiment(kW2Config, d, 4'000'000, 9);
    auto no_trigger_loss = d;
    no_trigger_loss.t_a = 1.0;
    const auto rt = witness_stderr(t, WitnessKind::W2, d.policy);
    CHECK(std::abs(rt.value - std::abs(det_w2(lossy_table(kW2Config, no_trigger_loss)))) <=
          3 * rt.std_error);
}

TEST_CASE("Policies agree without losses", "[expsim][property]") {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 50; ++i) {
        const auto n_x = rng() % 2 ? 3u : 4u;
        const auto kind = n_x == 3 ? WitnessKind::IDW : WitnessKind::W2;
        const PhaseConfig cfg(test::random_phases(rng, n_x), test::random_phases(rng, 2));
        const auto l = run_experiment(cfg, DeviceModel{}, 40'000, rng());
        const auto ps = witness_stderr(l, kind, AssignmentPolicy::PostSelected);
        const auto in = witness_stderr(l, kind, AssignmentPolicy::InclusiveAssignment);
        REQUIRE_THAT(in.value, WithinAbs(ps.value, 1e-12));
    }
}

TEST_CASE("Standard errors cover the analytic value", "[expsim][property]") {
    DeviceModel d;
    d.visibility = std::sqrt(0.951);
    for (auto kind : {WitnessKind::IDW, WitnessKind::W2}) {
        const auto &cfg = kind == WitnessKind::IDW ? kIdwConfig : kW2Config;
        const double analytic = witness_value(kind, lossy_table(cfg, d));
        const std::uint64_t trials = 2 * cfg.n_x() * 10'000;
        int covered = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto r = witness_stderr(run_experiment(cfg, d, trials, seed), kind);
            covered += std::abs(r.value - analytic) <= 2 * r.std_error;
        }
        CHECK(covered >= 180);
    }
}

TEST_CASE("Stderr scale at the optimal I_DW point", "[expsim]") {
    DeviceModel d;
    d.visibility = 0.99;
    const auto r = witness_stderr(run_experiment(kIdwConfig, d, 60'000, 4), WitnessKind::IDW);
    CHECK(r.std_error > 0.003);
    CHECK(r.std_error < 0.03);
}

TEST_CASE("Phase grids", "[expsim]") {
    const auto g = uniform_phase_grid(4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 0.0);
    CHECK_THAT(g[3], WithinAbs(3 * kPi / 2, 1e-15));
    CHECK_THROWS_AS(uniform_phase_grid(0), InvalidInput);
}

TEST_CASE("I_DW sweep", "[expsim]") {
    SECTION("grid of the optimal phases") {
        SweepSpec spec;
        spec.grid = test::kIdwPhi;
        const auto r = sweep_idw(spec);
        CHECK(r.n_tuples == 27);
        CHECK(r.histogram.total() == 27);
        CHECK_THAT(r.max_value, WithinAbs(kIdwQuantumBound, 1e-12));
        for (std::size_t i = 0; i < 3; ++i)
            CHECK_THAT(r.argmax_phases[i], WithinAbs(reduce_phase(test::kIdwPhi[i]), 1e-15));
    }
    SECTION("single grid point matches the witness module") {
        SweepSpec spec;
        spec.grid = {1.1};
        const auto r = sweep_idw(spec);
        CHECK(r.n_tuples == 1);
        const auto t = ideal_table(PhaseConfig({1.1, 1.1, 1.1}, test::kSigma));
        CHECK_THAT(r.max_value, WithinAbs(i_dw(t), 1e-12));
    }
    SECTION("tuple values match the witness module") {
        SweepSpec spec;
        spec.grid = uniform_phase_grid(70);
        const IdwSweep sweep(spec);
        std::mt19937_64 rng(71);
        for (int n = 0; n < 100; ++n) {
            const std::size_t i = rng() % 70, j = rng() % 70, k = rng() % 70;
            const auto t =
                ideal_table(PhaseConfig({spec.grid[i], spec.grid[j], spec.grid[k]}, test::kSigma));
            REQUIRE_THAT(sweep.value(i, j, k), WithinAbs(i_dw(t), 1e-12));
        }
        CHECK_THROWS_AS(sweep.expectation(70, 0), IndexError);
    }
    SECTION("uniform 70-point grid") {
        SweepSpec spec;
        spec.grid = uniform_phase_grid(70);
        const auto r = sweep_idw(spec);
        CHECK(r.n_tuples == 343'000);
        CHECK(r.histogram.total() == 343'000);
        CHECK(r.histogram.counts.size() == 100);
        CHECK(r.n_above_classical > 0);
        CHECK(r.fraction_above_3 > 0.0);
        CHECK(r.max_value <= kIdwQuantumBound + 1e-9);

        spec.threads = 3;
        const auto threaded = sweep_idw(spec);
        CHECK(threaded.histogram.counts == r.histogram.counts);
        CHECK(threaded.argmax == r.argmax);
    }
    SECTION("simulated source is seeded") {
        SweepSpec spec;
        spec.grid = uniform_phase_grid(12);
        spec.simulated = SimulatedSource{DeviceModel{}, 2'000, 3};
        const auto a = sweep_idw(spec);
        spec.threads = 4;
        const auto b = sweep_idw(spec);
        CHECK(a.histogram.counts == b.histogram.counts);
        CHECK(a.max_value == b.max_value);
        CHECK(a.histogram.total() == 1728);
    }
    SECTION("bad specifications") {
        SweepSpec spec;
        CHECK_THROWS_AS(sweep_idw(spec), InvalidInput);
        spec.grid = {0.0};
        spec.bins = 0;
        CHECK_THROWS_AS(sweep_idw(spec), InvalidInput);
    }
}

TEST_CASE("Histogram binning and CSV", "[expsim]") {
    Histogram h;
    h.counts.assign(100, 0);
    CHECK(h.bin_of(0.0) == 0);
    CHECK(h.bin_of(0.049) == 0);
    CHECK(h.bin_of(0.05) == 1);
    CHECK(h.bin_of(5.0) == 99);
    CHECK(h.bin_of(7.0) == 99);

    SweepSpec spec;
    spec.grid = uniform_phase_grid(10);
    const auto r = sweep_idw(spec);
    const auto csv = histogram_to_csv(r.histogram);
    CHECK(csv.rfind("bin_low,bin_high,count,frequency\n", 0) == 0);
    const auto back = histogram_from_csv(csv);
    CHECK(back.counts == r.histogram.counts);
    CHECK(back.low == 0.0);
    CHECK(back.high == 5.0);

    const auto j = sweep_summary_to_json(r);
    CHECK(j["n_tuples"] == 1000);
    CHECK(j.contains("max"));
    CHECK(j.contains("fraction_above_3"));
}
