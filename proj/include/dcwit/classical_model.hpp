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
 * Classical hidden-variable models of bounded dimension. A deterministic
 * strategy encodes x into a message lambda in [0, d) and decodes (lambda, y)
 * into b. Mixtures with independent preparation and measurement noise, and
 * mixtures with shared randomness between the two devices, are both covered.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "dcwit/pam_core.hpp"

namespace dcwit {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Default number of shared-randomness components in correlated searches.
/// Four is a practical cap (a 2x2 matrix has four entries), not a proven
/// sufficiency bound.
inline constexpr std::size_t kDefaultCorrelatedComponents = 4;

class DeterministicStrategy {
  public:
    /// `encoder[x]` is the message for preparation x; `decoder[lambda * n_y + y]`
    /// is the outcome. Throws InvalidInput on out-of-range entries or sizes.
    DeterministicStrategy(const PamScenario &scenario, std::vector<int> encoder,
                          std::vector<int> decoder);

    [[nodiscard]] const PamScenario &scenario() const noexcept { return scenario_; }
    [[nodiscard]] const std::vector<int> &encoder() const noexcept { return encoder_; }
    [[nodiscard]] const std::vector<int> &decoder() const noexcept { return decoder_; }

    [[nodiscard]] int message(std::size_t x) const { return encoder_.at(x); }
    [[nodiscard]] int outcome(int message, std::size_t y) const;

    friend bool operator==(const DeterministicStrategy &,
                           const DeterministicStrategy &) = default;

  private:
    PamScenario scenario_;
    std::vector<int> encoder_;
    std::vector<int> decoder_;
};

struct WeightedStrategy {
    double weight;
    DeterministicStrategy strategy;
};

/// Deterministic strategies selected by a shared variable mu with p(mu) given
/// by the weights.
class CorrelatedStrategy {
  public:
    /// Throws InvalidInput when empty, when weights leave [0,1] or do not sum
    /// to one within 1e-12, or when scenarios differ.
    explicit CorrelatedStrategy(std::vector<WeightedStrategy> components);

    [[nodiscard]] const std::vector<WeightedStrategy> &components() const noexcept {
        return components_;
    }
    [[nodiscard]] const PamScenario &scenario() const noexcept {
        return components_.front().strategy.scenario();
    }

  private:
    std::vector<WeightedStrategy> components_;
};

/// d^{n_x} * 2^{d n_y}, saturating at UINT64_MAX.
std::uint64_t strategy_count(const PamScenario &scenario);

/// Every deterministic strategy in lexicographic (encoder, decoder) order.
/// Throws CapExceeded when strategy_count exceeds `cap`.
std::vector<DeterministicStrategy>
enumerate_deterministic(const PamScenario &scenario,
                        std::uint64_t cap = kDefaultEnumerationCap);

ProbabilityTable strategy_table(const DeterministicStrategy &strategy);
ProbabilityTable strategy_table(const CorrelatedStrategy &strategy);

using WitnessFunction = std::function<double(const ProbabilityTable &)>;

struct ClassicalOptimum {
    double value;
    DeterministicStrategy maximizer;
};

/// Maximum of `witness` over the deterministic extreme points; ties go to the
/// lexicographically smallest strategy.
ClassicalOptimum classical_max(const WitnessFunction &witness,
                               const PamScenario &scenario,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// |det W2| of the model whose encoder is drawn from `preparation` and whose
/// decoder is drawn, independently, from `measurement`. Only the encoders of
/// the first mixture and the decoders of the second are used.
double independent_det_w2(const CorrelatedStrategy &preparation,
                          const CorrelatedStrategy &measurement);

struct CorrelatedSearchResult {
    double value;
    CorrelatedStrategy strategy;
};

/// Randomized hill climbing of |det W2| over shared-randomness mixtures of
/// `n_components` deterministic bit strategies. Deterministic for a seed.
CorrelatedSearchResult correlated_det_search(std::size_t n_components,
                                             std::size_t restarts,
                                             std::uint64_t seed);

/// Equal mixture of two strategies whose W2 difference matrices are
/// (1,1)(1,1)^T and (1,-1)(1,-1)^T; the mixture has |det W2| = 1.
CorrelatedStrategy correlated_det_certificate();

/// Least retro-causal influence of Y on Lambda that explains a given I_DW:
/// max((I_DW - 3) / 4, 0).
double min_retrocausality(double i_dw_value);

nlohmann::json strategy_to_json(const DeterministicStrategy &strategy);
nlohmann::json strategy_to_json(const CorrelatedStrategy &strategy);
DeterministicStrategy deterministic_strategy_from_json(const nlohmann::json &doc);
CorrelatedStrategy correlated_strategy_from_json(const nlohmann::json &doc);

} // namespace dcwit
