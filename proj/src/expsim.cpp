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

#include "dcwit/expsim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "csv.hpp"
#include "dcwit/witness.hpp"
#include "rng.hpp"

namespace dcwit {

namespace {

constexpr const char *kModule = "expsim";

// Stream families, so that no two purposes share a random sequence.
constexpr std::uint64_t kXSelectionStream = 0;
constexpr std::uint64_t kPreparationStream = 1;
constexpr std::uint64_t kSweepStream = 2;

enum class RunOutcome { D0, D1, Lost };

RunOutcome simulate_run(detail::Stream &rng, double p0, const DeviceModel &device,
                        Accounting accounting) {
    if (accounting == Accounting::PerPair && !rng.bernoulli(device.t_a))
        return RunOutcome::Lost;
    if (!rng.bernoulli(device.t_b))
        return RunOutcome::Lost;
    if (!rng.bernoulli(device.eta))
        return RunOutcome::Lost;
    return rng.bernoulli(p0) ? RunOutcome::D0 : RunOutcome::D1;
}

template <class Fn> void parallel_for(std::size_t n, unsigned threads, Fn &&fn) {
    const auto workers = static_cast<std::size_t>(std::max(1u, threads));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers)
                fn(i);
        });
}

} // namespace

const char *accounting_name(Accounting accounting) noexcept {
    return accounting == Accounting::PerTrigger ? "per_trigger" : "per_pair";
}

Accounting parse_accounting(std::string_view name) {
    if (name == "per_trigger")
        return Accounting::PerTrigger;
    if (name == "per_pair")
        return Accounting::PerPair;
    throw ValidationError(kModule, "parse_accounting",
                          "accounting must be per_trigger or per_pair");
}

const char *x_selection_name(XSelection selection) noexcept {
    return selection == XSelection::RoundRobin ? "round_robin" : "uniform";
}

XSelection parse_x_selection(std::string_view name) {
    if (name == "round_robin")
        return XSelection::RoundRobin;
    if (name == "uniform")
        return XSelection::Uniform;
    throw ValidationError(kModule, "parse_x_selection",
                          "x_selection must be round_robin or uniform");
}

CountLedger run_experiment(const PhaseConfig &config, const DeviceModel &device,
                           std::uint64_t trials, std::uint64_t seed,
                           const SimulationOptions &options) {
    device.validate();
    if (trials == 0)
        throw InvalidInput(kModule, "run_experiment", "trials must be at least 1");
    const auto n_x = config.n_x();
    const auto n_y = config.n_y();

    std::vector<std::uint64_t> per_x(n_x, trials / n_x);
    if (options.x_selection == XSelection::RoundRobin) {
        for (std::size_t x = 0; x < trials % n_x; ++x)
            ++per_x[x];
    } else {
        std::fill(per_x.begin(), per_x.end(), 0);
        detail::Stream rng(seed, {kXSelectionStream});
        for (std::uint64_t t = 0; t < trials; ++t)
            ++per_x[rng.index(n_x)];
    }

    std::vector<double> p0(n_x * n_y);
    for (std::size_t x = 0; x < n_x; ++x)
        for (std::size_t y = 0; y < n_y; ++y)
            p0[x * n_y + y] =
                interference_probability(config.phi()[x], config.sigma()[y], device.visibility);

    std::vector<CountLedger> partial(n_x, CountLedger(n_x, n_y));
    parallel_for(n_x, options.threads, [&](std::size_t x) {
        detail::Stream rng(seed, {kPreparationStream, x});
        auto &ledger = partial[x];
        for (std::uint64_t t = 0; t < per_x[x]; ++t) {
            const auto y = static_cast<std::size_t>(rng.index(n_y));
            switch (simulate_run(rng, p0[x * n_y + y], device, options.accounting)) {
            case RunOutcome::D0:
                ledger.record_d0(x, y);
                break;
            case RunOutcome::D1:
                ledger.record_d1(x, y);
                break;
            case RunOutcome::Lost:
                ledger.record_lost(x, y);
                break;
            }
        }
    });

    CountLedger total(n_x, n_y);
    for (const auto &l : partial)
        total.merge(l);
    return total;
}

ProbabilityTable estimate_table(const CountLedger &ledger, AssignmentPolicy policy) {
    std::vector<double> entries(ledger.n_x() * ledger.n_y() * 2);
    for (std::size_t x = 0; x < ledger.n_x(); ++x) {
        for (std::size_t y = 0; y < ledger.n_y(); ++y) {
            const auto &c = ledger.at(x, y);
            const auto oc = outcome_counts(c, policy);
            const auto total = oc.n0 + oc.n1;
            if (total == 0)
                throw EmptySetting(kModule, "estimate_table",
                                   std::string("setting x=") + std::to_string(x) +
                                       ", y=" + std::to_string(y) + " has no " +
                                       (policy == AssignmentPolicy::PostSelected
                                            ? "coincidences"
                                            : "triggers"));
            const auto i = (x * ledger.n_y() + y) * 2;
            entries[i] = static_cast<double>(oc.n0) / static_cast<double>(total);
            entries[i + 1] = static_cast<double>(oc.n1) / static_cast<double>(total);
        }
    }
    return {ledger.n_x(), ledger.n_y(), std::move(entries)};
}

std::vector<double> uniform_phase_grid(std::size_t n) {
    if (n == 0)
        throw InvalidInput(kModule, "uniform_phase_grid", "grid needs at least one point");
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k)
        grid[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    return grid;
}

std::uint64_t Histogram::total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts)
        t += c;
    return t;
}

std::size_t Histogram::bin_of(double value) const noexcept {
    if (counts.empty())
        return 0;
    const double scaled =
        (value - low) / (high - low) * static_cast<double>(counts.size());
    if (!(scaled > 0.0))
        return 0;
    return std::min(static_cast<std::size_t>(scaled), counts.size() - 1);
}

IdwSweep::IdwSweep(const SweepSpec &spec) {
    constexpr const char *op = "sweep_idw";
    if (spec.grid.empty())
        throw InvalidInput(kModule, op, "phase grid is empty");
    grid_.reserve(spec.grid.size());
    for (double g : spec.grid)
        grid_.push_back(reduce_phase(g));
    const std::array<double, 2> sigma{reduce_phase(spec.sigma[0]),
                                      reduce_phase(spec.sigma[1])};

    expectations_.assign(grid_.size() * 2, 0.0);
    if (!spec.simulated) {
        for (std::size_t g = 0; g < grid_.size(); ++g)
            for (std::size_t y = 0; y < 2; ++y)
                expectations_[g * 2 + y] =
                    2.0 * interference_probability(grid_[g], sigma[y], 1.0) - 1.0;
        return;
    }

    const auto &src = *spec.simulated;
    src.device.validate();
    if (src.trials_per_setting == 0)
        throw InvalidInput(kModule, op, "trials_per_setting must be at least 1");
    parallel_for(grid_.size() * 2, spec.threads, [&](std::size_t i) {
        const std::size_t g = i / 2;
        const std::size_t y = i % 2;
        detail::Stream rng(src.seed, {kSweepStream, g, y});
        const double p0 = interference_probability(grid_[g], sigma[y], src.device.visibility);
        CountLedger ledger(1, 1);
        for (std::uint64_t t = 0; t < src.trials_per_setting; ++t) {
            switch (simulate_run(rng, p0, src.device, Accounting::PerTrigger)) {
            case RunOutcome::D0:
                ledger.record_d0(0, 0);
                break;
            case RunOutcome::D1:
                ledger.record_d1(0, 0);
                break;
            case RunOutcome::Lost:
                ledger.record_lost(0, 0);
                break;
            }
        }
        expectations_[i] = dcwit::expectation(estimate_table(ledger, src.device.policy), 0, 0);
    });
}

double IdwSweep::expectation(std::size_t g, std::size_t y) const {
    if (g >= grid_.size() || y > 1)
        throw IndexError(kModule, "IdwSweep::expectation", "grid index out of range");
    return expectations_[g * 2 + y];
}

double IdwSweep::value(std::size_t i, std::size_t j, std::size_t k) const {
    return std::abs(expectation(i, 0) + expectation(i, 1) + expectation(j, 0) -
                    expectation(j, 1) - expectation(k, 0));
}

SweepResult sweep_idw(const SweepSpec &spec) {
    if (spec.bins == 0)
        throw InvalidInput(kModule, "sweep_idw", "need at least one bin");
    const IdwSweep sweep(spec);
    const auto n = sweep.grid_size();

    // I_DW = |u_i + v_j - w_k| with the per-point sums precomputed.
    std::vector<double> u(n), v(n), w(n);
    for (std::size_t g = 0; g < n; ++g) {
        u[g] = sweep.expectation(g, 0) + sweep.expectation(g, 1);
        v[g] = sweep.expectation(g, 0) - sweep.expectation(g, 1);
        w[g] = sweep.expectation(g, 0);
    }

    SweepResult r;
    r.histogram.counts.assign(spec.bins, 0);
    r.max_value = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double uv = u[i] + v[j];
            for (std::size_t k = 0; k < n; ++k) {
                const double value = std::abs(uv - w[k]);
                ++r.histogram.counts[r.histogram.bin_of(value)];
                if (value > kIdwClassicalBound)
                    ++r.n_above_classical;
                if (value > r.max_value) {
                    r.max_value = value;
                    r.argmax = {i, j, k};
                }
            }
        }
    }
    r.n_tuples = static_cast<std::uint64_t>(n) * n * n;
    r.fraction_above_3 =
        static_cast<double>(r.n_above_classical) / static_cast<double>(r.n_tuples);
    for (std::size_t a = 0; a < 3; ++a)
        r.argmax_phases[a] = sweep.grid()[r.argmax[a]];
    return r;
}

std::string histogram_to_csv(const Histogram &histogram) {
    std::string out = "bin_low,bin_high,count,frequency\n";
    const auto total = histogram.total();
    const auto bins = histogram.counts.size();
    const double width = (histogram.high - histogram.low) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double lo = histogram.low + width * static_cast<double>(b);
        const double hi = b + 1 == bins ? histogram.high : lo + width;
        const double freq = total == 0 ? 0.0
                                       : static_cast<double>(histogram.counts[b]) /
                                             static_cast<double>(total);
        out += format_real(lo) + "," + format_real(hi) + "," +
               std::to_string(histogram.counts[b]) + "," + format_real(freq) + "\n";
    }
    return out;
}

Histogram histogram_from_csv(std::string_view text) {
    constexpr const char *op = "histogram_from_csv";
    const auto csv = detail::read_csv(text, kModule, op);
    detail::expect_header(csv, {"bin_low", "bin_high", "count", "frequency"}, kModule, op);
    if (csv.rows.empty())
        throw ParseError(kModule, op, "histogram has no bins");
    Histogram h;
    h.low = detail::to_real(csv.rows.front()[0], kModule, op);
    h.high = detail::to_real(csv.rows.back()[1], kModule, op);
    for (const auto &row : csv.rows)
        h.counts.push_back(detail::to_count(row[2], kModule, op));
    return h;
}

nlohmann::json sweep_summary_to_json(const SweepResult &result) {
    return {{"max", result.max_value},
            {"fraction_above_3", result.fraction_above_3},
            {"n_tuples", result.n_tuples},
            {"n_above_3", result.n_above_classical},
            {"argmax_phases", result.argmax_phases}};
}

} // namespace dcwit
