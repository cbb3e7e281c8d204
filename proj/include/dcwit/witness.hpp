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
 * The two dimension witnesses of the delayed-choice scenario.
 *
 * W2 works on four preparations and two measurements. With
 * p(i,j) = p(b=0|x=i,y=j) it is the determinant
 *
 *     | p(0,0)-p(1,0)   p(2,0)-p(3,0) |
 *     | p(0,1)-p(1,1)   p(2,1)-p(3,1) |
 *
 * and vanishes for every bit-valued classical model whose preparation and
 * measurement devices are independent.
 *
 * I_DW works on three preparations and two measurements,
 *
 *     I_DW = |<B00> + <B01> + <B10> - <B11> - <B20>|,
 *
 * with classical bound 3 and qubit bound 1 + 2 sqrt(2).
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "dcwit/count_ledger.hpp"
#include "dcwit/pam_core.hpp"
#include "dcwit/quantum_model.hpp"

namespace dcwit {

inline constexpr double kIdwClassicalBound = 3.0;
inline const double kIdwQuantumBound = 1.0 + 2.0 * std::sqrt(2.0);
inline constexpr double kIdwAlgebraicBound = 5.0;

enum class WitnessKind { W2, IDW };

const char *witness_name(WitnessKind kind) noexcept;
WitnessKind parse_witness(std::string_view name);

/// Scenario a witness is defined on.
PamScenario witness_scenario(WitnessKind kind);

/// Signed determinant of the W2 difference matrix. Throws ShapeError unless
/// the table is 4x2.
double det_w2(const ProbabilityTable &table);

/// I_DW; the (x=2, y=1) entry is not read. Throws ShapeError unless the table
/// is 3x2.
double i_dw(const ProbabilityTable &table);

/// The witness statistic: |det W2| or I_DW.
double witness_value(WitnessKind kind, const ProbabilityTable &table);

struct WitnessResult {
    WitnessKind witness = WitnessKind::IDW;
    double value = 0.0;
    /// Zero for analytic tables.
    double std_error = 0.0;
    /// Some contributing setting had all of its events in one outcome, so its
    /// binomial variance estimate is zero.
    bool degenerate = false;
    std::optional<PhaseConfig> maximizing_config;
};

/// Serialized as {witness, value, stderr, phases, sigma}; phases and sigma
/// are null without a configuration.
nlohmann::json witness_result_to_json(const WitnessResult &result);
WitnessResult witness_result_from_json(const nlohmann::json &doc);

/// Var(<B>) = 4 n0 n1 / (n0 + n1)^3 for one setting.
double expectation_variance(std::uint64_t n0, std::uint64_t n1);

/// Witness from empirical frequencies with first-order propagated error.
/// For |det| and |.| the error is that of the signed quantity. Throws
/// EmptySetting when a setting has no events under `policy`.
WitnessResult witness_stderr(const CountLedger &ledger, WitnessKind kind,
                             AssignmentPolicy policy = AssignmentPolicy::PostSelected);

struct OptimizeOptions {
    /// Points per axis of the coarse coordinate-wise grid scan (>= 8).
    std::size_t grid_n = 16;
    std::uint64_t seed = 0;
    std::size_t starts = 20;
    /// Measurement phases held fixed; all phases free when empty.
    std::optional<std::array<double, 2>> fixed_sigma;
    /// Worker threads over starts; the result does not depend on it.
    unsigned threads = 1;
};

/// Multistart maximization of the witness over ideal qubit tables: a
/// coordinate-wise coarse grid scan followed by compass search on the periodic
/// domain, halving the step until it drops below 1e-9.
WitnessResult maximize_quantum(WitnessKind kind, const OptimizeOptions &options = {});

} // namespace dcwit
