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

#include "dcwit/dcwit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "dcwit/classical_model.hpp"
#include "dcwit/expsim.hpp"
#include "dcwit/run_config.hpp"
#include "dcwit/witness.hpp"

struct dcwit_table {
    dcwit::ProbabilityTable value;
};

struct dcwit_ledger {
    dcwit::CountLedger value;
};

struct dcwit_config {
    dcwit::RunConfig value;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_json;

dcwit_status record(dcwit_status status, const std::exception &e) {
    last_error = e.what();
    last_error_json = dcwit::error_record(e).dump();
    return status;
}

class NullArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

template <class Fn> dcwit_status guard(Fn &&fn) noexcept {
    try {
        fn();
        return DCWIT_OK;
    } catch (const dcwit::Error &e) {
        return record(static_cast<dcwit_status>(e.code()), e);
    } catch (const NullArgument &e) {
        last_error = e.what();
        last_error_json = nlohmann::json{{"status", "error"},
                                         {"error",
                                          {{"type", "NullArgument"},
                                           {"module", "c_api"},
                                           {"operation", "argument check"},
                                           {"cause", e.what()}}}}
                              .dump();
        return DCWIT_ERR_NULL_ARGUMENT;
    } catch (const std::exception &e) {
        return record(DCWIT_ERR_INTERNAL, e);
    } catch (...) {
        last_error = "unknown failure";
        last_error_json = R"({"status":"error","error":{"type":"InternalError",)"
                          R"("module":"unknown","operation":"unknown","cause":"unknown failure"}})";
        return DCWIT_ERR_INTERNAL;
    }
}

void require(const void *p, const char *name) {
    if (p == nullptr)
        throw NullArgument(std::string(name) + " must not be NULL");
}

char *copy_string(const std::string &s) {
    auto *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dcwit::PhaseConfig phases(const double *phi, std::size_t n_x, const double *sigma,
                          std::size_t n_y) {
    require(phi, "phi");
    require(sigma, "sigma");
    return {std::vector<double>(phi, phi + n_x), std::vector<double>(sigma, sigma + n_y)};
}

dcwit::AssignmentPolicy to_policy(dcwit_policy p) {
    return p == DCWIT_POLICY_INCLUSIVE ? dcwit::AssignmentPolicy::InclusiveAssignment
                                       : dcwit::AssignmentPolicy::PostSelected;
}

dcwit::WitnessKind to_witness(dcwit_witness w) {
    return w == DCWIT_WITNESS_W2 ? dcwit::WitnessKind::W2 : dcwit::WitnessKind::IDW;
}

dcwit::DeviceModel to_device(const dcwit_device *d) {
    require(d, "device");
    dcwit::DeviceModel m;
    m.eta = d->eta;
    m.t_a = d->t_a;
    m.t_b = d->t_b;
    m.visibility = d->visibility;
    m.policy = to_policy(d->policy);
    m.validate();
    return m;
}

void fill_result(const dcwit::WitnessResult &r, dcwit_witness_result *out) {
    dcwit_witness_result c{};
    c.witness = r.witness == dcwit::WitnessKind::W2 ? DCWIT_WITNESS_W2 : DCWIT_WITNESS_IDW;
    c.value = r.value;
    c.std_error = r.std_error;
    c.degenerate = r.degenerate ? 1 : 0;
    if (r.maximizing_config) {
        const auto &cfg = *r.maximizing_config;
        c.has_config = 1;
        c.n_x = cfg.n_x();
        c.n_y = cfg.n_y();
        for (std::size_t i = 0; i < cfg.n_x() && i < 4; ++i)
            c.phi[i] = cfg.phi()[i];
        for (std::size_t i = 0; i < cfg.n_y() && i < 2; ++i)
            c.sigma[i] = cfg.sigma()[i];
    }
    *out = c;
}

} // namespace

extern "C" {

const char *dcwit_version(void) { return "1.0.0"; }

const char *dcwit_status_name(dcwit_status status) {
    switch (status) {
    case DCWIT_OK:
        return "OK";
    case DCWIT_ERR_NULL_ARGUMENT:
        return "NullArgument";
    case DCWIT_ERR_INTERNAL:
        return "InternalError";
    default:
        if (status >= DCWIT_ERR_NORMALIZATION && status <= DCWIT_ERR_IO)
            return dcwit::error_code_name(static_cast<dcwit::ErrorCode>(status));
        return "Unknown";
    }
}

const char *dcwit_last_error(void) { return last_error.c_str(); }
const char *dcwit_last_error_json(void) { return last_error_json.c_str(); }

void dcwit_string_free(char *text) { std::free(text); }

dcwit_device dcwit_device_ideal(void) {
    return dcwit_device{1.0, 1.0, 1.0, 1.0, DCWIT_POLICY_POST_SELECTED};
}

dcwit_status dcwit_table_create(size_t n_x, size_t n_y, const double *p0, const double *p1,
                                dcwit_table **out) {
    return guard([&] {
        require(p0, "p0");
        require(p1, "p1");
        require(out, "out");
        std::vector<double> entries(n_x * n_y * 2);
        for (std::size_t i = 0; i < n_x * n_y; ++i) {
            entries[2 * i] = p0[i];
            entries[2 * i + 1] = p1[i];
        }
        dcwit::ProbabilityTable t(n_x, n_y, std::move(entries));
        *out = new dcwit_table{dcwit::validate_table(t, dcwit::PamScenario(n_x, n_y, 2))};
    });
}

dcwit_status dcwit_table_ideal(const double *phi, size_t n_x, const double *sigma, size_t n_y,
                               dcwit_table **out) {
    return guard([&] {
        require(out, "out");
        *out = new dcwit_table{dcwit::ideal_table(phases(phi, n_x, sigma, n_y))};
    });
}

dcwit_status dcwit_table_lossy(const double *phi, size_t n_x, const double *sigma, size_t n_y,
                               const dcwit_device *device, dcwit_table **out) {
    return guard([&] {
        require(out, "out");
        *out = new dcwit_table{
            dcwit::lossy_table(phases(phi, n_x, sigma, n_y), to_device(device))};
    });
}

dcwit_status dcwit_table_from_csv(const char *text, dcwit_table **out) {
    return guard([&] {
        require(text, "text");
        require(out, "out");
        *out = new dcwit_table{dcwit::table_from_csv(text)};
    });
}

dcwit_status dcwit_table_from_json(const char *text, dcwit_table **out) {
    return guard([&] {
        require(text, "text");
        require(out, "out");
        auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded())
            throw dcwit::ParseError("pam_core", "table_from_json", "invalid JSON");
        *out = new dcwit_table{dcwit::table_from_json(doc)};
    });
}

void dcwit_table_free(dcwit_table *table) { delete table; }

dcwit_status dcwit_table_shape(const dcwit_table *table, size_t *n_x, size_t *n_y) {
    return guard([&] {
        require(table, "table");
        require(n_x, "n_x");
        require(n_y, "n_y");
        *n_x = table->value.n_x();
        *n_y = table->value.n_y();
    });
}

dcwit_status dcwit_table_get(const dcwit_table *table, size_t b, size_t x, size_t y,
                             double *out) {
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = table->value.p(b, x, y);
    });
}

dcwit_status dcwit_table_expectation(const dcwit_table *table, size_t x, size_t y,
                                     double *out) {
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = dcwit::expectation(table->value, x, y);
    });
}

dcwit_status dcwit_table_to_csv(const dcwit_table *table, char **out) {
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = copy_string(dcwit::table_to_csv(table->value));
    });
}

dcwit_status dcwit_table_to_json(const dcwit_table *table, char **out) {
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = copy_string(dcwit::table_to_json(table->value).dump());
    });
}

dcwit_status dcwit_det_w2(const dcwit_table *table, double *out) {
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = dcwit::det_w2(table->value);
    });
}

dcwit_status dcwit_i_dw(const dcwit_table *table, double *out) {
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = dcwit::i_dw(table->value);
    });
}

dcwit_status dcwit_classical_max(dcwit_witness witness, size_t dim, double *out) {
    return guard([&] {
        require(out, "out");
        const auto kind = to_witness(witness);
        const auto base = dcwit::witness_scenario(kind);
        const auto best = dcwit::classical_max(
            [kind](const dcwit::ProbabilityTable &t) { return dcwit::witness_value(kind, t); },
            dcwit::PamScenario(base.n_x(), base.n_y(), dim));
        *out = best.value;
    });
}

dcwit_status dcwit_correlated_det_search(size_t n_components, size_t restarts, uint64_t seed,
                                         double *out) {
    return guard([&] {
        require(out, "out");
        *out = dcwit::correlated_det_search(n_components, restarts, seed).value;
    });
}

dcwit_status dcwit_min_retrocausality(double i_dw_value, double *out) {
    return guard([&] {
        require(out, "out");
        *out = dcwit::min_retrocausality(i_dw_value);
    });
}

dcwit_status dcwit_maximize_quantum(dcwit_witness witness, const double *fixed_sigma,
                                    size_t grid_n, size_t starts, uint64_t seed,
                                    dcwit_witness_result *out) {
    return guard([&] {
        require(out, "out");
        dcwit::OptimizeOptions o;
        o.grid_n = grid_n;
        o.starts = starts;
        o.seed = seed;
        if (fixed_sigma != nullptr)
            o.fixed_sigma = std::array<double, 2>{fixed_sigma[0], fixed_sigma[1]};
        fill_result(dcwit::maximize_quantum(to_witness(witness), o), out);
    });
}

dcwit_status dcwit_run_experiment(const double *phi, size_t n_x, const double *sigma,
                                  size_t n_y, const dcwit_device *device, uint64_t trials,
                                  uint64_t seed, const dcwit_sim_options *options,
                                  dcwit_ledger **out) {
    return guard([&] {
        require(out, "out");
        dcwit::SimulationOptions o;
        if (options != nullptr) {
            o.accounting = options->accounting == DCWIT_ACCOUNTING_PER_PAIR
                               ? dcwit::Accounting::PerPair
                               : dcwit::Accounting::PerTrigger;
            o.x_selection = options->x_selection == DCWIT_X_UNIFORM
                                ? dcwit::XSelection::Uniform
                                : dcwit::XSelection::RoundRobin;
            o.threads = options->threads == 0 ? 1 : options->threads;
        }
        *out = new dcwit_ledger{dcwit::run_experiment(phases(phi, n_x, sigma, n_y),
                                                      to_device(device), trials, seed, o)};
    });
}

dcwit_status dcwit_ledger_from_csv(const char *text, dcwit_ledger **out) {
    return guard([&] {
        require(text, "text");
        require(out, "out");
        *out = new dcwit_ledger{dcwit::ledger_from_csv(text)};
    });
}

void dcwit_ledger_free(dcwit_ledger *ledger) { delete ledger; }

dcwit_status dcwit_ledger_shape(const dcwit_ledger *ledger, size_t *n_x, size_t *n_y) {
    return guard([&] {
        require(ledger, "ledger");
        require(n_x, "n_x");
        require(n_y, "n_y");
        *n_x = ledger->value.n_x();
        *n_y = ledger->value.n_y();
    });
}

dcwit_status dcwit_ledger_counts(const dcwit_ledger *ledger, size_t x, size_t y,
                                 uint64_t *trigger, uint64_t *d0, uint64_t *d1,
                                 uint64_t *lost) {
    return guard([&] {
        require(ledger, "ledger");
        const auto &c = ledger->value.at(x, y);
        if (trigger != nullptr)
            *trigger = c.trigger;
        if (d0 != nullptr)
            *d0 = c.d0;
        if (d1 != nullptr)
            *d1 = c.d1;
        if (lost != nullptr)
            *lost = c.lost;
    });
}

dcwit_status dcwit_ledger_to_csv(const dcwit_ledger *ledger, char **out) {
    return guard([&] {
        require(ledger, "ledger");
        require(out, "out");
        *out = copy_string(dcwit::ledger_to_csv(ledger->value));
    });
}

dcwit_status dcwit_estimate_table(const dcwit_ledger *ledger, dcwit_policy policy,
                                  dcwit_table **out) {
    return guard([&] {
        require(ledger, "ledger");
        require(out, "out");
        *out = new dcwit_table{dcwit::estimate_table(ledger->value, to_policy(policy))};
    });
}

dcwit_status dcwit_witness_stderr(const dcwit_ledger *ledger, dcwit_witness witness,
                                  dcwit_policy policy, dcwit_witness_result *out) {
    return guard([&] {
        require(ledger, "ledger");
        require(out, "out");
        fill_result(dcwit::witness_stderr(ledger->value, to_witness(witness), to_policy(policy)),
                    out);
    });
}

dcwit_status dcwit_sweep_idw(const double *grid, size_t grid_n, const double *sigma,
                             const dcwit_device *device, uint64_t trials_per_setting,
                             uint64_t seed, size_t bins, dcwit_sweep_summary *summary,
                             uint64_t *counts) {
    return guard([&] {
        require(grid, "grid");
        require(sigma, "sigma");
        require(summary, "summary");
        dcwit::SweepSpec spec;
        spec.grid.assign(grid, grid + grid_n);
        spec.sigma = {sigma[0], sigma[1]};
        spec.bins = bins;
        if (device != nullptr)
            spec.simulated = dcwit::SimulatedSource{to_device(device), trials_per_setting, seed};
        const auto r = dcwit::sweep_idw(spec);
        dcwit_sweep_summary s{};
        s.max_value = r.max_value;
        s.fraction_above_3 = r.fraction_above_3;
        s.n_tuples = r.n_tuples;
        s.n_above_3 = r.n_above_classical;
        for (std::size_t i = 0; i < 3; ++i)
            s.argmax_phases[i] = r.argmax_phases[i];
        *summary = s;
        if (counts != nullptr)
            std::copy(r.histogram.counts.begin(), r.histogram.counts.end(), counts);
    });
}

dcwit_status dcwit_config_create(dcwit_config **out) {
    return guard([&] {
        require(out, "out");
        *out = new dcwit_config{dcwit::parse_config(nlohmann::json::object())};
    });
}

dcwit_status dcwit_config_load(const char *path, dcwit_config **out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new dcwit_config{dcwit::load_config(path)};
    });
}

dcwit_status dcwit_config_set(dcwit_config *config, const char *key, const char *value) {
    return guard([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        config->value =
            dcwit::with_override(config->value, key, dcwit::parse_override_value(value));
    });
}

dcwit_status dcwit_config_effective_json(const dcwit_config *config, char **out) {
    return guard([&] {
        require(config, "config");
        require(out, "out");
        *out = copy_string(config->value.effective().dump());
    });
}

void dcwit_config_free(dcwit_config *config) { delete config; }

dcwit_status dcwit_dispatch(const dcwit_config *config, const char *command,
                            char **summary_json) {
    return guard([&] {
        require(config, "config");
        require(command, "command");
        require(summary_json, "summary_json");
        const auto result = dcwit::dispatch(config->value, dcwit::parse_command(command));
        *summary_json = copy_string(result.summary.dump());
    });
}

} // extern "C"
