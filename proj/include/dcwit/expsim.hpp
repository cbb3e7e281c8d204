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

/**
 * @file
 * Monte Carlo model of the delayed-choice protocol and the phase-grid sweep.
 *
 * A run starts with a trigger click. The QRNG picks y uniformly, the signal
 * photon survives the interferometer arm with probability t_b, is detected
 * with probability eta, and then lands on D0 with the visibility-damped Born
 * probability. Everything else is a loss.
 *
 * In per-pair accounting a run starts with a source pair instead, and the
 * trigger itself is lost with probability 1 - t_a; such runs are tallied as
 * losses so that inclusive assignment reproduces the eta * t_a * t_b scaling.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcwit/count_ledger.hpp"
#include "dcwit/pam_core.hpp"
#include "dcwit/quantum_model.hpp"

namespace dcwit {

enum class XSelection { RoundRobin, Uniform };
enum class Accounting { PerTrigger, PerPair };

const char *accounting_name(Accounting accounting) noexcept;
Accounting parse_accounting(std::string_view name);
const char *x_selection_name(XSelection selection) noexcept;
XSelection parse_x_selection(std::string_view name);

struct SimulationOptions {
    XSelection x_selection = XSelection::RoundRobin;
    Accounting accounting = Accounting::PerTrigger;
    /// Worker threads; ledgers are identical for any value.
    unsigned threads = 1;
};

/// Simulates `trials` runs. Deterministic for a given seed: each preparation
/// x owns an independent random stream.
CountLedger run_experiment(const PhaseConfig &config, const DeviceModel &device,
                           std::uint64_t trials, std::uint64_t seed,
                           const SimulationOptions &options = {});

/// Empirical table. PostSelected: p(0) = d0 / (d0 + d1), throwing
/// EmptySetting without coincidences. InclusiveAssignment: p(1) = d0 / trigger,
/// p(0) = (d1 + lost) / trigger.
ProbabilityTable estimate_table(const CountLedger &ledger, AssignmentPolicy policy);

/// Uniform grid k * 2pi / n, k = 0..n-1; throws InvalidInput for n = 0.
std::vector<double> uniform_phase_grid(std::size_t n);

struct SimulatedSource {
    DeviceModel device;
    std::uint64_t trials_per_setting = 10'000;
    std::uint64_t seed = 0;
};

struct SweepSpec {
    std::vector<double> grid;
    std::array<double, 2> sigma{kPi / 2.0, 0.0};
    /// Analytic ideal tables when empty.
    std::optional<SimulatedSource> simulated;
    std::size_t bins = 100;
    unsigned threads = 1;
};

struct Histogram {
    double low = 0.0;
    double high = 5.0;
    std::vector<std::uint64_t> counts;

    [[nodiscard]] std::uint64_t total() const noexcept;
    /// Bin for `value`; values at or beyond `high` fall in the last bin.
    [[nodiscard]] std::size_t bin_of(double value) const noexcept;
};

/// Per-grid-point expectations measured once and combined into every
/// (phi_1, phi_2, phi_3) tuple.
class IdwSweep {
  public:
    explicit IdwSweep(const SweepSpec &spec);

    [[nodiscard]] std::size_t grid_size() const noexcept { return grid_.size(); }
    [[nodiscard]] const std::vector<double> &grid() const noexcept { return grid_; }

    /// <B_{g,y}> for grid point g.
    [[nodiscard]] double expectation(std::size_t g, std::size_t y) const;

    /// I_DW of the tuple (grid[i], grid[j], grid[k]).
    [[nodiscard]] double value(std::size_t i, std::size_t j, std::size_t k) const;

  private:
    std::vector<double> grid_;
    std::vector<double> expectations_; // [g * 2 + y]
};

struct SweepResult {
    Histogram histogram;
    double max_value = 0.0;
    std::array<std::size_t, 3> argmax{0, 0, 0};
    std::array<double, 3> argmax_phases{0.0, 0.0, 0.0};
    std::uint64_t n_tuples = 0;
    std::uint64_t n_above_classical = 0;
    double fraction_above_3 = 0.0;
};

/// Histogram of I_DW over every tuple of grid phases.
SweepResult sweep_idw(const SweepSpec &spec);

std::string histogram_to_csv(const Histogram &histogram);
Histogram histogram_from_csv(std::string_view text);
nlohmann::json sweep_summary_to_json(const SweepResult &result);

} // namespace dcwit
