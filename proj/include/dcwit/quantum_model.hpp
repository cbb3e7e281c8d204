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
 * Qubit model of the polarization Mach-Zehnder interferometer. The first
 * half-wave plate prepares a balanced superposition with relative phase
 * phi_x, the delayed modulator adds sigma_y, and the closing plate plus PBS
 * project onto (|0> +- e^{-i sigma}|1>)/sqrt(2). With that labeling
 *
 *     p(0|x,y) = (1 + V cos(phi_x + sigma_y)) / 2.
 */

#pragma once

#include <array>
#include <complex>
#include <utility>

#include "dcwit/pam_core.hpp"

namespace dcwit {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

/// Eigenvalues (ascending) of a Hermitian 2x2 matrix.
std::array<double, 2> hermitian_eigenvalues(const Matrix2 &m);

/// Density matrix of a qubit: Hermitian, unit trace, positive semidefinite.
class QubitState {
  public:
    /// Throws InvalidInput when any invariant fails beyond 1e-12.
    static QubitState from_matrix(const Matrix2 &rho);

    [[nodiscard]] const Matrix2 &matrix() const noexcept { return rho_; }

  private:
    explicit QubitState(const Matrix2 &rho) : rho_(rho) {}
    Matrix2 rho_;
};

/// POVM element with spectrum in [0,1].
class MeasurementEffect {
  public:
    /// Throws InvalidInput when the matrix is not Hermitian or its spectrum
    /// leaves [0,1] beyond 1e-12.
    static MeasurementEffect from_matrix(const Matrix2 &m);

    /// Identity minus this effect, built entrywise so that the pair sums to
    /// the identity exactly.
    [[nodiscard]] MeasurementEffect complement() const;

    [[nodiscard]] const Matrix2 &matrix() const noexcept { return m_; }

  private:
    explicit MeasurementEffect(const Matrix2 &m) : m_(m) {}
    Matrix2 m_;
};

/// (|0> + e^{i phi}|1>)/sqrt(2) as a density matrix.
QubitState prepare_state(double phi);

/// b=0 and b=1 projectors onto (|0> +- e^{-i sigma}|1>)/sqrt(2).
std::pair<MeasurementEffect, MeasurementEffect> measurement_effects(double sigma);

/// Tr(rho M), clamped to [0,1] when within 1e-12 of either end.
double born_probability(const QubitState &state, const MeasurementEffect &effect);

/// Born-rule table over every (x, y) of the configuration.
ProbabilityTable ideal_table(const PhaseConfig &config);

enum class AssignmentPolicy {
    /// Keep only trigger/signal coincidences; D0 coincidence means b=0.
    PostSelected,
    /// Every trigger is a run; D0 coincidence means b=1, anything else b=0.
    InclusiveAssignment,
};

const char *policy_name(AssignmentPolicy policy) noexcept;
AssignmentPolicy parse_policy(std::string_view name);

struct DeviceModel {
    double eta = 1.0;
    double t_a = 1.0;
    double t_b = 1.0;
    double visibility = 1.0;
    AssignmentPolicy policy = AssignmentPolicy::PostSelected;

    /// Throws ValidationError naming the first field outside [0,1].
    void validate() const;
};

/// Closed form (1 + V cos(phi + sigma)) / 2.
double interference_probability(double phi, double sigma, double visibility);

/// Table seen through a lossy, partially coherent device under its policy.
/// InclusiveAssignment folds the full eta * t_a * t_b detection chain in, which
/// is the per-source-pair accounting.
ProbabilityTable lossy_table(const PhaseConfig &config,
                             const DeviceModel &device);

} // namespace dcwit
