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

#include "dcwit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "rng.hpp"

namespace dcwit {

namespace {

constexpr const char *kModule = "witness";

void require_shape(const ProbabilityTable &table, std::size_t n_x,
                   std::size_t n_y, const char *op) {
    if (table.n_x() != n_x || table.n_y() != n_y)
        throw ShapeError(kModule, op,
                         "expected a " + std::to_string(n_x) + "x" +
                             std::to_string(n_y) + " table, got " +
                             std::to_string(table.n_x()) + "x" +
                             std::to_string(table.n_y()));
}

} // namespace

const char *witness_name(WitnessKind kind) noexcept {
    return kind == WitnessKind::W2 ? "w2" : "idw";
}

WitnessKind parse_witness(std::string_view name) {
    if (name == "w2" || name == "W2")
        return WitnessKind::W2;
    if (name == "idw" || name == "IDW" || name == "i_dw")
        return WitnessKind::IDW;
    throw ValidationError(kModule, "parse_witness",
                          "witness must be w2 or idw, got '" + std::string(name) + "'");
}

PamScenario witness_scenario(WitnessKind kind) {
    return kind == WitnessKind::W2 ? PamScenario::w2() : PamScenario::idw();
}

double det_w2(const ProbabilityTable &table) {
    require_shape(table, 4, 2, "det_w2");
    auto p = [&](std::size_t x, std::size_t y) { return table.p(0, x, y); };
    const double a = p(0, 0) - p(1, 0);
    const double b = p(2, 0) - p(3, 0);
    const double c = p(0, 1) - p(1, 1);
    const double d = p(2, 1) - p(3, 1);
    return a * d - b * c;
}

double i_dw(const ProbabilityTable &table) {
    require_shape(table, 3, 2, "i_dw");
    auto e = [&](std::size_t x, std::size_t y) { return expectation(table, x, y); };
    return std::abs(e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1) - e(2, 0));
}

double witness_value(WitnessKind kind, const ProbabilityTable &table) {
    return kind == WitnessKind::W2 ? std::abs(det_w2(table)) : i_dw(table);
}

nlohmann::json witness_result_to_json(const WitnessResult &result) {
    nlohmann::json doc;
    doc["witness"] = witness_name(result.witness);
    doc["value"] = result.value;
    doc["stderr"] = result.std_error;
    if (result.maximizing_config) {
        const auto &cfg = *result.maximizing_config;
        doc["phases"] = std::vector<double>(cfg.phi().begin(), cfg.phi().end());
        doc["sigma"] = std::vector<double>(cfg.sigma().begin(), cfg.sigma().end());
    } else {
        doc["phases"] = nullptr;
        doc["sigma"] = nullptr;
    }
    if (result.degenerate)
        doc["degenerate"] = true;
    return doc;
}

WitnessResult witness_result_from_json(const nlohmann::json &doc) {
    try {
        WitnessResult r;
        r.witness = parse_witness(doc.at("witness").get<std::string>());
        r.value = doc.at("value").get<double>();
        r.std_error = doc.at("stderr").get<double>();
        r.degenerate = doc.value("degenerate", false);
        if (!doc.at("phases").is_null())
            r.maximizing_config = PhaseConfig(doc.at("phases").get<std::vector<double>>(),
                                              doc.at("sigma").get<std::vector<double>>());
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(kModule, "witness_result_from_json", e.what());
    }
}

double expectation_variance(std::uint64_t n0, std::uint64_t n1) {
    const double total = static_cast<double>(n0) + static_cast<double>(n1);
    if (total == 0.0)
        throw EmptySetting(kModule, "expectation_variance", "no events");
    return 4.0 * static_cast<double>(n0) * static_cast<double>(n1) /
           (total * total * total);
}

WitnessResult witness_stderr(const CountLedger &ledger, WitnessKind kind,
                             AssignmentPolicy policy) {
    constexpr const char *op = "witness_stderr";
    const auto scenario = witness_scenario(kind);
    if (ledger.n_x() != scenario.n_x() || ledger.n_y() != scenario.n_y())
        throw ShapeError(kModule, op, "ledger shape does not match the witness");

    auto used = [&](std::size_t x, std::size_t y) {
        return !(kind == WitnessKind::IDW && x == 2 && y == 1);
    };

    WitnessResult result;
    result.witness = kind;

    // var_p0[x * n_y + y] is the variance of the empirical p(0|x,y).
    std::vector<double> p0(ledger.n_x() * ledger.n_y(), 0.5);
    std::vector<double> var_p0(p0.size(), 0.0);
    for (std::size_t x = 0; x < ledger.n_x(); ++x) {
        for (std::size_t y = 0; y < ledger.n_y(); ++y) {
            if (!used(x, y))
                continue;
            const auto oc = outcome_counts(ledger.at(x, y), policy);
            const auto total = oc.n0 + oc.n1;
            if (total == 0)
                throw EmptySetting(kModule, op,
                                   "setting x=" + std::to_string(x) + ", y=" +
                                       std::to_string(y) + " has no events");
            const auto i = x * ledger.n_y() + y;
            p0[i] = static_cast<double>(oc.n0) / static_cast<double>(total);
            var_p0[i] = expectation_variance(oc.n0, oc.n1) / 4.0;
            if (oc.n0 == 0 || oc.n1 == 0)
                result.degenerate = true;
        }
    }
    const auto table = ProbabilityTable::from_p0(ledger.n_x(), ledger.n_y(), p0);
    result.value = witness_value(kind, table);

    double variance = 0.0;
    if (kind == WitnessKind::IDW) {
        // Var(<B>) = 4 Var(p0); the five expectations are independent.
        for (auto i : {0, 1, 2, 3, 4})
            variance += 4.0 * var_p0[static_cast<std::size_t>(i)];
    } else {
        auto v = [&](std::size_t x, std::size_t y) { return var_p0[x * 2 + y]; };
        auto p = [&](std::size_t x, std::size_t y) { return p0[x * 2 + y]; };
        const double a = p(0, 0) - p(1, 0);
        const double b = p(2, 0) - p(3, 0);
        const double c = p(0, 1) - p(1, 1);
        const double d = p(2, 1) - p(3, 1);
        // det = a d - b c
        variance = d * d * (v(0, 0) + v(1, 0)) + c * c * (v(2, 0) + v(3, 0)) +
                   b * b * (v(0, 1) + v(1, 1)) + a * a * (v(2, 1) + v(3, 1));
    }
    result.std_error = std::sqrt(variance);
    return result;
}

namespace {

struct Candidate {
    double value = -1.0;
    std::vector<double> phi;
    std::vector<double> sigma;
};

class QuantumObjective {
  public:
    QuantumObjective(WitnessKind kind, std::optional<std::array<double, 2>> fixed)
        : kind_(kind), n_x_(witness_scenario(kind).n_x()), fixed_(fixed) {}

    [[nodiscard]] std::size_t dimension() const { return n_x_ + (fixed_ ? 0 : 2); }

    void split(const std::vector<double> &v, std::vector<double> &phi,
               std::vector<double> &sigma) const {
        phi.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n_x_));
        if (fixed_)
            sigma.assign(fixed_->begin(), fixed_->end());
        else
            sigma.assign(v.begin() + static_cast<std::ptrdiff_t>(n_x_), v.end());
    }

    double operator()(const std::vector<double> &v) const {
        double sigma[2];
        if (fixed_) {
            sigma[0] = (*fixed_)[0];
            sigma[1] = (*fixed_)[1];
        } else {
            sigma[0] = v[n_x_];
            sigma[1] = v[n_x_ + 1];
        }
        double p0[8];
        for (std::size_t x = 0; x < n_x_; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                p0[x * 2 + y] = interference_probability(v[x], sigma[y], 1.0);
        return witness_value(kind_, ProbabilityTable::from_p0(n_x_, 2, {p0, n_x_ * 2}));
    }

  private:
    WitnessKind kind_;
    std::size_t n_x_;
    std::optional<std::array<double, 2>> fixed_;
};

Candidate run_start(const QuantumObjective &f, const OptimizeOptions &options,
                    std::size_t start) {
    detail::Stream rng(options.seed, {start});
    const auto n = f.dimension();
    std::vector<double> v(n);
    for (auto &c : v)
        c = kTwoPi * rng.uniform();
    double best = f(v);

    // Coarse stage: scan each coordinate over the grid until nothing moves.
    const double grid_step = kTwoPi / static_cast<double>(options.grid_n);
    for (int sweep = 0; sweep < 32; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double keep = v[i];
            double arg = keep;
            for (std::size_t k = 0; k < options.grid_n; ++k) {
                v[i] = grid_step * static_cast<double>(k);
                const double value = f(v);
                if (value > best) {
                    best = value;
                    arg = v[i];
                    moved = true;
                }
            }
            v[i] = arg;
        }
        if (!moved)
            break;
    }

    // Compass search with halving step.
    double step = grid_step;
    while (step >= 1e-9) {
        bool improved = true;
        for (int pass = 0; improved && pass < 10000; ++pass) {
            improved = false;
            for (std::size_t i = 0; i < n; ++i) {
                const double keep = v[i];
                for (double delta : {step, -step}) {
                    v[i] = keep + delta;
                    const double value = f(v);
                    if (value > best) {
                        best = value;
                        improved = true;
                        break;
                    }
                    v[i] = keep;
                }
            }
        }
        step *= 0.5;
    }

    Candidate c;
    c.value = best;
    f.split(v, c.phi, c.sigma);
    for (auto &p : c.phi)
        p = reduce_phase(p);
    for (auto &s : c.sigma)
        s = reduce_phase(s);
    return c;
}

bool better(const Candidate &a, const Candidate &b) {
    constexpr double kTie = 1e-12;
    if (a.value > b.value + kTie)
        return true;
    if (b.value > a.value + kTie)
        return false;
    if (a.phi != b.phi)
        return a.phi < b.phi;
    return a.sigma < b.sigma;
}

} // namespace

WitnessResult maximize_quantum(WitnessKind kind, const OptimizeOptions &options) {
    if (options.grid_n < 8)
        throw InvalidInput(kModule, "maximize_quantum", "grid_n must be at least 8");
    if (options.starts == 0)
        throw InvalidInput(kModule, "maximize_quantum", "need at least one start");

    const QuantumObjective f(kind, options.fixed_sigma);
    std::vector<Candidate> candidates(options.starts);
    const unsigned workers =
        std::max(1u, std::min<unsigned>(options.threads,
                                        static_cast<unsigned>(options.starts)));
    if (workers == 1) {
        for (std::size_t s = 0; s < options.starts; ++s)
            candidates[s] = run_start(f, options, s);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < options.starts; s += workers)
                    candidates[s] = run_start(f, options, s);
            });
    }

    const Candidate *best = &candidates.front();
    for (const auto &c : candidates)
        if (better(c, *best))
            best = &c;

    WitnessResult result;
    result.witness = kind;
    result.value = best->value;
    result.maximizing_config = PhaseConfig(best->phi, best->sigma);
    return result;
}

} // namespace dcwit
