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

#include "dcwit/classical_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "dcwit/witness.hpp"
#include "rng.hpp"

namespace dcwit {

namespace {

constexpr const char *kModule = "classical_model";

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i)
        r = saturating_mul(r, base);
    return r;
}

/// Advance a little-endian-last odometer; returns false after the last state.
bool advance(std::vector<int> &digits, int radix) {
    for (auto i = digits.size(); i-- > 0;) {
        if (++digits[i] < radix)
            return true;
        digits[i] = 0;
    }
    return false;
}

} // namespace

DeterministicStrategy::DeterministicStrategy(const PamScenario &scenario,
                                             std::vector<int> encoder,
                                             std::vector<int> decoder)
    : scenario_(scenario), encoder_(std::move(encoder)), decoder_(std::move(decoder)) {
    const auto d = static_cast<int>(scenario_.dim());
    if (encoder_.size() != scenario_.n_x())
        throw InvalidInput(kModule, "DeterministicStrategy",
                           "encoder needs one message per preparation");
    if (decoder_.size() != scenario_.dim() * scenario_.n_y())
        throw InvalidInput(kModule, "DeterministicStrategy",
                           "decoder needs one outcome per (message, measurement)");
    if (std::any_of(encoder_.begin(), encoder_.end(),
                    [d](int m) { return m < 0 || m >= d; }))
        throw InvalidInput(kModule, "DeterministicStrategy", "message out of range");
    if (std::any_of(decoder_.begin(), decoder_.end(),
                    [](int b) { return b != 0 && b != 1; }))
        throw InvalidInput(kModule, "DeterministicStrategy", "outcome must be 0 or 1");
}

int DeterministicStrategy::outcome(int message, std::size_t y) const {
    if (message < 0 || static_cast<std::size_t>(message) >= scenario_.dim() ||
        y >= scenario_.n_y())
        throw IndexError(kModule, "DeterministicStrategy::outcome",
                         "decoder index out of range");
    return decoder_[static_cast<std::size_t>(message) * scenario_.n_y() + y];
}

CorrelatedStrategy::CorrelatedStrategy(std::vector<WeightedStrategy> components)
    : components_(std::move(components)) {
    if (components_.empty())
        throw InvalidInput(kModule, "CorrelatedStrategy", "need at least one component");
    double total = 0.0;
    for (const auto &c : components_) {
        if (!(c.weight >= 0.0 && c.weight <= 1.0))
            throw InvalidInput(kModule, "CorrelatedStrategy", "weight outside [0,1]");
        if (!(c.strategy.scenario() == components_.front().strategy.scenario()))
            throw InvalidInput(kModule, "CorrelatedStrategy",
                               "components use different scenarios");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw InvalidInput(kModule, "CorrelatedStrategy",
                           "weights sum to " + format_real(total));
}

std::uint64_t strategy_count(const PamScenario &scenario) {
    return saturating_mul(saturating_pow(scenario.dim(), scenario.n_x()),
                          saturating_pow(2, scenario.dim() * scenario.n_y()));
}

std::vector<DeterministicStrategy> enumerate_deterministic(const PamScenario &scenario,
                                                           std::uint64_t cap) {
    const auto count = strategy_count(scenario);
    if (count > cap)
        throw CapExceeded(kModule, "enumerate_deterministic",
                          "scenario has more than " + std::to_string(cap) +
                              " deterministic strategies");
    std::vector<DeterministicStrategy> out;
    out.reserve(count);
    std::vector<int> encoder(scenario.n_x(), 0);
    do {
        std::vector<int> decoder(scenario.dim() * scenario.n_y(), 0);
        do {
            out.emplace_back(scenario, encoder, decoder);
        } while (advance(decoder, 2));
    } while (advance(encoder, static_cast<int>(scenario.dim())));
    return out;
}

ProbabilityTable strategy_table(const DeterministicStrategy &strategy) {
    const auto &s = strategy.scenario();
    std::vector<double> p0(s.n_x() * s.n_y());
    for (std::size_t x = 0; x < s.n_x(); ++x)
        for (std::size_t y = 0; y < s.n_y(); ++y)
            p0[x * s.n_y() + y] = strategy.outcome(strategy.message(x), y) == 0 ? 1.0 : 0.0;
    return ProbabilityTable::from_p0(s.n_x(), s.n_y(), p0);
}

ProbabilityTable strategy_table(const CorrelatedStrategy &strategy) {
    std::vector<ProbabilityTable> tables;
    std::vector<double> weights;
    for (const auto &c : strategy.components()) {
        tables.push_back(strategy_table(c.strategy));
        weights.push_back(c.weight);
    }
    return mix_tables(tables, weights);
}

ClassicalOptimum classical_max(const WitnessFunction &witness,
                               const PamScenario &scenario, std::uint64_t cap) {
    const auto strategies = enumerate_deterministic(scenario, cap);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const double v = witness(strategy_table(strategies[i]));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return {best, strategies[arg]};
}

double independent_det_w2(const CorrelatedStrategy &preparation,
                          const CorrelatedStrategy &measurement) {
    const auto &s = preparation.scenario();
    if (!(s == PamScenario::w2()) || !(measurement.scenario() == s))
        throw ShapeError(kModule, "independent_det_w2",
                         "W2 needs the 4-preparation, 2-measurement bit scenario");
    // p(0|x,y) = sum_{i,j} w_i v_j [dec_j(enc_i(x), y) == 0]
    std::vector<double> p0(s.n_x() * s.n_y(), 0.0);
    for (const auto &enc : preparation.components())
        for (const auto &dec : measurement.components())
            for (std::size_t x = 0; x < s.n_x(); ++x)
                for (std::size_t y = 0; y < s.n_y(); ++y)
                    if (dec.strategy.outcome(enc.strategy.message(x), y) == 0)
                        p0[x * s.n_y() + y] += enc.weight * dec.weight;
    for (auto &p : p0)
        p = std::clamp(p, 0.0, 1.0);
    return std::abs(det_w2(ProbabilityTable::from_p0(s.n_x(), s.n_y(), p0)));
}

namespace {

using P0Vector = std::array<double, 8>;

double abs_det(const P0Vector &p) {
    // layout [x * 2 + y]
    const double a = p[0] - p[2];
    const double b = p[4] - p[6];
    const double c = p[1] - p[3];
    const double d = p[5] - p[7];
    return std::abs(a * d - b * c);
}

struct SearchState {
    std::vector<std::size_t> pick;
    std::vector<double> weight;
    double value = 0.0;
};

class MixtureObjective {
  public:
    explicit MixtureObjective(const std::vector<DeterministicStrategy> &strategies) {
        vectors_.reserve(strategies.size());
        for (const auto &s : strategies) {
            P0Vector v{};
            const auto t = strategy_table(s);
            for (std::size_t x = 0; x < 4; ++x)
                for (std::size_t y = 0; y < 2; ++y)
                    v[x * 2 + y] = t.p(0, x, y);
            vectors_.push_back(v);
        }
    }

    [[nodiscard]] std::size_t size() const { return vectors_.size(); }

    double operator()(const std::vector<std::size_t> &pick,
                      const std::vector<double> &weight) const {
        P0Vector p{};
        for (std::size_t k = 0; k < pick.size(); ++k)
            for (std::size_t i = 0; i < 8; ++i)
                p[i] += weight[k] * vectors_[pick[k]][i];
        return abs_det(p);
    }

  private:
    std::vector<P0Vector> vectors_;
};

SearchState climb(const MixtureObjective &f, std::size_t n, detail::Stream &rng) {
    SearchState s;
    s.pick.resize(n);
    s.weight.resize(n);
    for (auto &p : s.pick)
        p = rng.index(f.size());
    // Flat Dirichlet draw.
    double total = 0.0;
    for (auto &w : s.weight) {
        w = -std::log(1.0 - rng.uniform());
        total += w;
    }
    for (auto &w : s.weight)
        w /= total;
    s.value = f(s.pick, s.weight);

    double step = 0.25;
    while (true) {
        bool improved = false;
        // Swap whole components.
        for (std::size_t k = 0; k < n; ++k) {
            const auto keep = s.pick[k];
            std::size_t arg = keep;
            for (std::size_t c = 0; c < f.size(); ++c) {
                s.pick[k] = c;
                const double v = f(s.pick, s.weight);
                if (v > s.value) {
                    s.value = v;
                    arg = c;
                    improved = true;
                }
            }
            s.pick[k] = arg;
        }
        // Shift weight between pairs of components.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                const double delta = std::min(step, s.weight[j]);
                if (delta <= 0.0)
                    continue;
                s.weight[i] += delta;
                s.weight[j] -= delta;
                const double v = f(s.pick, s.weight);
                if (v > s.value) {
                    s.value = v;
                    improved = true;
                } else {
                    s.weight[i] -= delta;
                    s.weight[j] += delta;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if (step < 1e-9)
                break;
        }
    }
    return s;
}

} // namespace

CorrelatedSearchResult correlated_det_search(std::size_t n_components,
                                             std::size_t restarts, std::uint64_t seed) {
    if (n_components == 0)
        throw InvalidInput(kModule, "correlated_det_search",
                           "need at least one component");
    const auto scenario = PamScenario::w2();
    const auto strategies = enumerate_deterministic(scenario);
    const MixtureObjective f(strategies);

    SearchState best;
    best.value = -1.0;
    for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
        detail::Stream rng(seed, {r});
        auto s = climb(f, n_components, rng);
        if (s.value > best.value)
            best = std::move(s);
    }

    // Renormalize so the strategy invariant holds despite rounding in moves.
    const double total = std::accumulate(best.weight.begin(), best.weight.end(), 0.0);
    std::vector<WeightedStrategy> components;
    for (std::size_t k = 0; k < n_components; ++k)
        components.push_back({std::clamp(best.weight[k] / total, 0.0, 1.0),
                              strategies[best.pick[k]]});
    CorrelatedStrategy strategy(std::move(components));
    return {std::abs(det_w2(strategy_table(strategy))), std::move(strategy)};
}

CorrelatedStrategy correlated_det_certificate() {
    const auto s = PamScenario::w2();
    // Messages 0,1,0,1 and an outcome equal to the message: both columns of
    // the difference matrix are (1,1).
    DeterministicStrategy same(s, {0, 1, 0, 1}, {0, 0, 1, 1});
    // Messages 0,1,1,0; decoder (lambda=0 -> 0,1; lambda=1 -> 1,0): columns
    // (1,-1) and (-1,1).
    DeterministicStrategy flipped(s, {0, 1, 1, 0}, {0, 1, 1, 0});
    return CorrelatedStrategy({{0.5, same}, {0.5, flipped}});
}

double min_retrocausality(double i_dw_value) {
    if (!std::isfinite(i_dw_value))
        throw InvalidInput(kModule, "min_retrocausality", "value is not finite");
    return std::max((i_dw_value - kIdwClassicalBound) / 4.0, 0.0);
}

nlohmann::json strategy_to_json(const DeterministicStrategy &strategy) {
    const auto &s = strategy.scenario();
    nlohmann::json decoder = nlohmann::json::array();
    for (std::size_t m = 0; m < s.dim(); ++m) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t y = 0; y < s.n_y(); ++y)
            row.push_back(strategy.outcome(static_cast<int>(m), y));
        decoder.push_back(row);
    }
    return {{"n_x", s.n_x()},
            {"n_y", s.n_y()},
            {"dim", s.dim()},
            {"encoder", strategy.encoder()},
            {"decoder", decoder}};
}

nlohmann::json strategy_to_json(const CorrelatedStrategy &strategy) {
    nlohmann::json components = nlohmann::json::array();
    for (const auto &c : strategy.components())
        components.push_back({{"weight", c.weight}, {"strategy", strategy_to_json(c.strategy)}});
    return {{"components", components}};
}

DeterministicStrategy deterministic_strategy_from_json(const nlohmann::json &doc) {
    try {
        const PamScenario s(doc.at("n_x").get<std::size_t>(), doc.at("n_y").get<std::size_t>(),
                            doc.at("dim").get<std::size_t>());
        std::vector<int> decoder;
        for (const auto &row : doc.at("decoder")) {
            if (row.size() != s.n_y())
                throw InvalidInput(kModule, "deterministic_strategy_from_json",
                                   "decoder row length must equal n_y");
            for (const auto &b : row)
                decoder.push_back(b.get<int>());
        }
        return {s, doc.at("encoder").get<std::vector<int>>(), std::move(decoder)};
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(kModule, "deterministic_strategy_from_json", e.what());
    }
}

CorrelatedStrategy correlated_strategy_from_json(const nlohmann::json &doc) {
    try {
        std::vector<WeightedStrategy> components;
        for (const auto &c : doc.at("components"))
            components.push_back({c.at("weight").get<double>(),
                                  deterministic_strategy_from_json(c.at("strategy"))});
        return CorrelatedStrategy(std::move(components));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(kModule, "correlated_strategy_from_json", e.what());
    }
}

} // namespace dcwit
