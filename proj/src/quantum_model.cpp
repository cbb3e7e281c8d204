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

#include "dcwit/quantum_model.hpp"

#include <cmath>

namespace dcwit {

namespace {

constexpr const char *kModule = "quantum_model";
constexpr double kTol = 1e-12;

bool is_hermitian(const Matrix2 &m) {
    return std::abs(m[0].imag()) <= kTol && std::abs(m[3].imag()) <= kTol &&
           std::abs(m[1] - std::conj(m[2])) <= kTol;
}

} // namespace

std::array<double, 2> hermitian_eigenvalues(const Matrix2 &m) {
    const double a = m[0].real();
    const double d = m[3].real();
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(m[1]));
    return {mean - radius, mean + radius};
}

QubitState QubitState::from_matrix(const Matrix2 &rho) {
    if (!is_hermitian(rho))
        throw InvalidInput(kModule, "QubitState", "density matrix is not Hermitian");
    if (std::abs(rho[0].real() + rho[3].real() - 1.0) > kTol)
        throw InvalidInput(kModule, "QubitState", "density matrix trace is not 1");
    if (hermitian_eigenvalues(rho)[0] < -kTol)
        throw InvalidInput(kModule, "QubitState",
                           "density matrix has a negative eigenvalue");
    return QubitState(rho);
}

MeasurementEffect MeasurementEffect::from_matrix(const Matrix2 &m) {
    if (!is_hermitian(m))
        throw InvalidInput(kModule, "MeasurementEffect", "effect is not Hermitian");
    const auto ev = hermitian_eigenvalues(m);
    if (ev[0] < -kTol || ev[1] > 1.0 + kTol)
        throw InvalidInput(kModule, "MeasurementEffect",
                           "effect spectrum leaves [0,1]");
    return MeasurementEffect(m);
}

MeasurementEffect MeasurementEffect::complement() const {
    return MeasurementEffect(
        Matrix2{Complex(1.0) - m_[0], -m_[1], -m_[2], Complex(1.0) - m_[3]});
}

QubitState prepare_state(double phi) {
    const Complex phase = std::polar(1.0, reduce_phase(phi));
    // |psi><psi| with |psi> = (|0> + e^{i phi}|1>)/sqrt(2)
    return QubitState::from_matrix(
        Matrix2{Complex(0.5), 0.5 * std::conj(phase), 0.5 * phase, Complex(0.5)});
}

std::pair<MeasurementEffect, MeasurementEffect> measurement_effects(double sigma) {
    const Complex phase = std::polar(1.0, -reduce_phase(sigma));
    auto zero = MeasurementEffect::from_matrix(
        Matrix2{Complex(0.5), 0.5 * std::conj(phase), 0.5 * phase, Complex(0.5)});
    auto one = zero.complement();
    return {zero, one};
}

double born_probability(const QubitState &state, const MeasurementEffect &effect) {
    const auto &r = state.matrix();
    const auto &m = effect.matrix();
    const double p = (r[0] * m[0] + r[1] * m[2] + r[2] * m[1] + r[3] * m[3]).real();
    if (p < 0.0 && p >= -kTol)
        return 0.0;
    if (p > 1.0 && p <= 1.0 + kTol)
        return 1.0;
    return p;
}

ProbabilityTable ideal_table(const PhaseConfig &config) {
    std::vector<MeasurementEffect> effects;
    effects.reserve(config.n_y());
    for (double s : config.sigma())
        effects.push_back(measurement_effects(s).first);

    std::vector<double> p0;
    p0.reserve(config.n_x() * config.n_y());
    for (double phi : config.phi()) {
        const auto state = prepare_state(phi);
        for (const auto &effect : effects)
            p0.push_back(born_probability(state, effect));
    }
    return ProbabilityTable::from_p0(config.n_x(), config.n_y(), p0);
}

const char *policy_name(AssignmentPolicy policy) noexcept {
    return policy == AssignmentPolicy::PostSelected ? "post_selected"
                                                    : "inclusive";
}

AssignmentPolicy parse_policy(std::string_view name) {
    if (name == "post_selected" || name == "PostSelected")
        return AssignmentPolicy::PostSelected;
    if (name == "inclusive" || name == "InclusiveAssignment")
        return AssignmentPolicy::InclusiveAssignment;
    throw ValidationError(kModule, "parse_policy",
                          "policy must be post_selected or inclusive, got '" +
                              std::string(name) + "'");
}

void DeviceModel::validate() const {
    const std::pair<const char *, double> fields[] = {
        {"eta", eta}, {"t_a", t_a}, {"t_b", t_b}, {"visibility", visibility}};
    for (const auto &[name, value] : fields)
        if (!(value >= 0.0 && value <= 1.0))
            throw ValidationError(kModule, "DeviceModel",
                                  std::string(name) + " out of [0,1]");
}

double interference_probability(double phi, double sigma, double visibility) {
    return 0.5 * (1.0 + visibility * std::cos(phi + sigma));
}

ProbabilityTable lossy_table(const PhaseConfig &config,
                             const DeviceModel &device) {
    device.validate();
    const double detected = device.eta * device.t_a * device.t_b;
    std::vector<double> p0;
    p0.reserve(config.n_x() * config.n_y());
    for (double phi : config.phi()) {
        for (double sigma : config.sigma()) {
            const double p = interference_probability(phi, sigma, device.visibility);
            if (device.policy == AssignmentPolicy::PostSelected)
                p0.push_back(p);
            else
                p0.push_back(1.0 - detected * p);
        }
    }
    return ProbabilityTable::from_p0(config.n_x(), config.n_y(), p0);
}

} // namespace dcwit
