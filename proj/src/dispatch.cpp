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

#include <fstream>

#include "dcwit/classical_model.hpp"
#include "dcwit/run_config.hpp"

namespace dcwit {

namespace {

constexpr const char *kModule = "cli";

class ArtifactWriter {
  public:
    ArtifactWriter(const RunConfig &config, DispatchResult &result)
        : dir_(config.out), provenance_(config.provenance()), result_(result) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw IoError(kModule, "dispatch",
                          "cannot create output directory '" + dir_.string() +
                              "': " + ec.message());
    }

    /// CSV with the effective configuration as a leading comment line.
    void csv(const std::string &name, const std::string &body) {
        write(name, "# config=" + provenance_.dump() + "\n" + body);
    }

    /// JSON object with the effective configuration under "config".
    void json(const std::string &name, nlohmann::json doc) {
        doc["config"] = provenance_;
        write(name, doc.dump(2) + "\n");
    }

  private:
    void write(const std::string &name, const std::string &text) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError(kModule, "dispatch", "cannot write '" + path.string() + "'");
        out << text;
        if (!out)
            throw IoError(kModule, "dispatch", "failed writing '" + path.string() + "'");
        result_.outputs.push_back(path);
        result_.summary["outputs"].push_back(path.string());
    }

    std::filesystem::path dir_;
    nlohmann::json provenance_;
    DispatchResult &result_;
};

void require_seed(const RunConfig &config, Command command) {
    if (config.strict_repro && !config.seed_explicit)
        throw ValidationError(kModule, command_name(command),
                              "seed is required when strict_repro is set");
}

PhaseConfig phases_of(const RunConfig &config, Command command) {
    if (!config.phi)
        throw ValidationError(kModule, command_name(command), "phi is required");
    return PhaseConfig(*config.phi, config.sigma);
}

/// Explicit witness, else the one whose scenario matches the phase lists.
std::optional<WitnessKind> witness_for(const RunConfig &config, const PhaseConfig &phases) {
    if (config.witness) {
        phases.check_shape(witness_scenario(*config.witness));
        return config.witness;
    }
    for (auto kind : {WitnessKind::IDW, WitnessKind::W2}) {
        const auto s = witness_scenario(kind);
        if (phases.n_x() == s.n_x() && phases.n_y() == s.n_y())
            return kind;
    }
    return std::nullopt;
}

nlohmann::json expectations_json(const ProbabilityTable &table) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t x = 0; x < table.n_x(); ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t y = 0; y < table.n_y(); ++y)
            row.push_back(expectation(table, x, y));
        rows.push_back(row);
    }
    return rows;
}

void run_predict(const RunConfig &config, DispatchResult &result) {
    const auto phases = phases_of(config, Command::Predict);
    const auto table = lossy_table(phases, config.device);
    ArtifactWriter out(config, result);

    nlohmann::json doc;
    doc["table"] = table_to_json(table);
    doc["ideal_table"] = table_to_json(ideal_table(phases));
    doc["expectations"] = expectations_json(table);
    if (const auto kind = witness_for(config, phases)) {
        const double value = witness_value(*kind, table);
        doc["witness"] = witness_name(*kind);
        doc["value"] = value;
        result.summary["witness"] = witness_name(*kind);
        result.summary["value"] = value;
        if (*kind == WitnessKind::IDW)
            result.summary["min_retrocausality"] = min_retrocausality(value);
    }
    result.summary["expectations"] = doc["expectations"];
    out.csv("table.csv", table_to_csv(table));
    out.json("predict.json", doc);
}

WitnessKind witness_or_idw(const RunConfig &config) {
    return config.witness.value_or(WitnessKind::IDW);
}

OptimizeOptions optimize_options(const RunConfig &config) {
    OptimizeOptions o;
    o.grid_n = config.opt_grid_n;
    o.seed = config.seed;
    o.starts = config.starts;
    o.fixed_sigma = config.fix_sigma;
    o.threads = config.threads;
    return o;
}

void run_bounds(const RunConfig &config, DispatchResult &result) {
    require_seed(config, Command::Bounds);
    const auto kind = witness_or_idw(config);
    const auto base = witness_scenario(kind);
    const PamScenario scenario(base.n_x(), base.n_y(), config.dim);

    const auto classical = classical_max(
        [kind](const ProbabilityTable &t) { return witness_value(kind, t); }, scenario,
        config.cap);
    auto quantum_options = optimize_options(config);
    quantum_options.fixed_sigma.reset();
    const auto quantum = maximize_quantum(kind, quantum_options);

    nlohmann::json doc;
    doc["witness"] = witness_name(kind);
    doc["dim"] = config.dim;
    doc["classical"] = classical.value;
    doc["classical_maximizer"] = strategy_to_json(classical.maximizer);
    doc["quantum"] = witness_result_to_json(quantum);
    result.summary["witness"] = witness_name(kind);
    result.summary["classical"] = classical.value;
    result.summary["quantum"] = quantum.value;
    if (kind == WitnessKind::IDW) {
        result.summary["algebraic"] = kIdwAlgebraicBound;
        doc["algebraic"] = kIdwAlgebraicBound;
    } else {
        const auto correlated =
            correlated_det_search(config.components, config.restarts, config.seed);
        doc["classical_correlated"] = correlated.value;
        doc["classical_correlated_strategy"] = strategy_to_json(correlated.strategy);
        result.summary["classical_correlated"] = correlated.value;
    }
    ArtifactWriter out(config, result);
    out.json("bounds.json", doc);
}

void run_optimize(const RunConfig &config, DispatchResult &result) {
    require_seed(config, Command::Optimize);
    const auto kind = witness_or_idw(config);
    const auto best = maximize_quantum(kind, optimize_options(config));
    auto doc = witness_result_to_json(best);
    result.summary["witness"] = witness_name(kind);
    result.summary["value"] = best.value;
    result.summary["phases"] = doc["phases"];
    result.summary["sigma"] = doc["sigma"];
    ArtifactWriter out(config, result);
    out.json("optimize.json", doc);
}

void run_simulate(const RunConfig &config, DispatchResult &result) {
    require_seed(config, Command::Simulate);
    const auto phases = phases_of(config, Command::Simulate);
    SimulationOptions options;
    options.accounting = config.accounting;
    options.x_selection = config.x_selection;
    options.threads = config.threads;
    const auto ledger = run_experiment(phases, config.device, config.trials, config.seed, options);
    const auto table = estimate_table(ledger, config.device.policy);

    nlohmann::json doc;
    doc["table"] = table_to_json(table);
    result.summary["trials"] = config.trials;
    if (const auto kind = witness_for(config, phases)) {
        const auto estimate = witness_stderr(ledger, *kind, config.device.policy);
        // Per-trigger runs never see the trigger-arm loss.
        auto analytic_device = config.device;
        if (config.accounting == Accounting::PerTrigger)
            analytic_device.t_a = 1.0;
        const double analytic = witness_value(*kind, lossy_table(phases, analytic_device));
        doc["result"] = witness_result_to_json(estimate);
        doc["analytic"] = analytic;
        result.summary["witness"] = witness_name(*kind);
        result.summary["value"] = estimate.value;
        result.summary["stderr"] = estimate.std_error;
        result.summary["analytic"] = analytic;
    }
    ArtifactWriter out(config, result);
    out.csv("ledger.csv", ledger_to_csv(ledger));
    out.csv("table.csv", table_to_csv(table));
    out.json("simulate.json", doc);
}

void run_sweep(const RunConfig &config, DispatchResult &result) {
    if (config.simulated_source)
        require_seed(config, Command::Sweep);
    if (config.sigma.size() != 2)
        throw ValidationError(kModule, "sweep", "sigma must hold exactly two phases");
    SweepSpec spec;
    spec.grid = config.grid ? *config.grid : uniform_phase_grid(config.grid_n);
    spec.sigma = {config.sigma[0], config.sigma[1]};
    spec.bins = config.bins;
    spec.threads = config.threads;
    if (config.simulated_source)
        spec.simulated = SimulatedSource{config.device, config.trials_per_setting, config.seed};
    const auto sweep = sweep_idw(spec);

    auto summary = sweep_summary_to_json(sweep);
    for (const auto &[k, v] : summary.items())
        result.summary[k] = v;
    ArtifactWriter out(config, result);
    out.csv("histogram.csv", histogram_to_csv(sweep.histogram));
    out.json("sweep.json", summary);
}

} // namespace

const char *command_name(Command command) noexcept {
    switch (command) {
    case Command::Predict:
        return "predict";
    case Command::Bounds:
        return "bounds";
    case Command::Optimize:
        return "optimize";
    case Command::Simulate:
        return "simulate";
    case Command::Sweep:
        return "sweep";
    }
    return "unknown";
}

Command parse_command(std::string_view name) {
    for (auto c : {Command::Predict, Command::Bounds, Command::Optimize, Command::Simulate,
                   Command::Sweep})
        if (name == command_name(c))
            return c;
    throw ValidationError(kModule, "dispatch", "unknown command '" + std::string(name) + "'");
}

DispatchResult dispatch(const RunConfig &config, Command command) {
    DispatchResult result;
    result.summary["command"] = command_name(command);
    result.summary["status"] = "ok";
    result.summary["outputs"] = nlohmann::json::array();
    switch (command) {
    case Command::Predict:
        run_predict(config, result);
        break;
    case Command::Bounds:
        run_bounds(config, result);
        break;
    case Command::Optimize:
        run_optimize(config, result);
        break;
    case Command::Simulate:
        run_simulate(config, result);
        break;
    case Command::Sweep:
        run_sweep(config, result);
        break;
    }
    return result;
}

nlohmann::json error_record(const std::exception &error) {
    nlohmann::json e;
    if (const auto *typed = dynamic_cast<const Error *>(&error)) {
        e["type"] = error_code_name(typed->code());
        e["module"] = typed->module();
        e["operation"] = typed->operation();
    } else {
        e["type"] = "InternalError";
        e["module"] = "unknown";
        e["operation"] = "unknown";
    }
    e["cause"] = error.what();
    return {{"status", "error"}, {"error", e}};
}

} // namespace dcwit
