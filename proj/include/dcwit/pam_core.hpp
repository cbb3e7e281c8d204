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
 * Prepare-and-measure scenario primitives: cardinalities, phase settings and
 * conditional probability tables p(b|x,y) with their CSV/JSON encodings.
 *
 * Indices are zero-based throughout: x in [0, n_x), y in [0, n_y), b in {0,1}.
 * Outcome b=0 is the "+1" outcome of an expectation value.
 */

#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcwit/errors.hpp"

namespace dcwit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance on column sums and entry ranges of analytically built tables.
inline constexpr double kNormTolerance = 1e-12;

/// Reduce an angle to [0, 2pi).
double reduce_phase(double radians);

/// Parse "7pi/4", "-pi/2", "pi", "0.25" style phase literals to radians.
double parse_phase(std::string_view text);

/// Shortest decimal text that reads back to the same double (17 significant
/// digits).
std::string format_real(double value);

class PamScenario {
  public:
    static constexpr std::size_t n_b = 2;

    PamScenario(std::size_t n_x, std::size_t n_y, std::size_t dim);

    /// Three preparations, two measurements, bit messages.
    static PamScenario idw() { return {3, 2, 2}; }
    /// Four preparations, two measurements, bit messages.
    static PamScenario w2() { return {4, 2, 2}; }

    [[nodiscard]] std::size_t n_x() const noexcept { return n_x_; }
    [[nodiscard]] std::size_t n_y() const noexcept { return n_y_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    friend bool operator==(const PamScenario &, const PamScenario &) = default;

  private:
    std::size_t n_x_;
    std::size_t n_y_;
    std::size_t dim_;
};

/// Preparation phases phi_x and measurement phases sigma_y, stored reduced to
/// [0, 2pi).
class PhaseConfig {
  public:
    PhaseConfig(std::vector<double> phi, std::vector<double> sigma);

    [[nodiscard]] std::span<const double> phi() const noexcept { return phi_; }
    [[nodiscard]] std::span<const double> sigma() const noexcept {
        return sigma_;
    }
    [[nodiscard]] std::size_t n_x() const noexcept { return phi_.size(); }
    [[nodiscard]] std::size_t n_y() const noexcept { return sigma_.size(); }

    /// Throws ShapeError unless the lengths agree with the scenario.
    void check_shape(const PamScenario &scenario) const;

    friend bool operator==(const PhaseConfig &, const PhaseConfig &) = default;

  private:
    std::vector<double> phi_;
    std::vector<double> sigma_;
};

/// Conditional distribution p(b|x,y). Construction only checks the shape;
/// validate_table() enforces normalization and range.
class ProbabilityTable {
  public:
    /// `entries` is laid out as [(x * n_y + y) * 2 + b].
    ProbabilityTable(std::size_t n_x, std::size_t n_y,
                     std::vector<double> entries);

    /// Builds p(1|x,y) = 1 - p(0|x,y); `p0` is laid out as [x * n_y + y].
    static ProbabilityTable from_p0(std::size_t n_x, std::size_t n_y,
                                    std::span<const double> p0);

    [[nodiscard]] std::size_t n_x() const noexcept { return n_x_; }
    [[nodiscard]] std::size_t n_y() const noexcept { return n_y_; }

    /// Bounds-checked read; throws IndexError.
    [[nodiscard]] double p(std::size_t b, std::size_t x, std::size_t y) const;

    [[nodiscard]] std::span<const double> entries() const noexcept {
        return entries_;
    }

    friend bool operator==(const ProbabilityTable &,
                           const ProbabilityTable &) = default;

  private:
    std::size_t n_x_;
    std::size_t n_y_;
    std::vector<double> entries_;
};

/// Returns `table` unchanged when its shape matches `scenario`, every entry is
/// in [0,1] and every column sums to one within kNormTolerance.
ProbabilityTable validate_table(const ProbabilityTable &table,
                                const PamScenario &scenario);

/// <B_xy> = p(0|x,y) - p(1|x,y).
double expectation(const ProbabilityTable &table, std::size_t x, std::size_t y);

/// Convex combination of equally shaped tables.
ProbabilityTable mix_tables(std::span<const ProbabilityTable> tables,
                            std::span<const double> weights);

std::string table_to_csv(const ProbabilityTable &table);
ProbabilityTable table_from_csv(std::string_view text);

nlohmann::json table_to_json(const ProbabilityTable &table);
ProbabilityTable table_from_json(const nlohmann::json &doc);

} // namespace dcwit
