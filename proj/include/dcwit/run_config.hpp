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
 * Run configuration and command dispatch behind the `dcwit` tool.
 *
 * A configuration is one flat JSON object. Every key is optional; unknown
 * keys are rejected. Phases may be numbers (radians) or literals such as
 * "7pi/4". Precedence is override > file > default, and the effective
 * configuration is embedded in every artifact a command writes.
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcwit/expsim.hpp"
#include "dcwit/quantum_model.hpp"
#include "dcwit/witness.hpp"

namespace dcwit {

struct RunConfig {
    /// Keys as supplied by the file and overrides, before defaults.
    nlohmann::json supplied = nlohmann::json::object();

    std::optional<std::vector<double>> phi;
    std::vector<double> sigma{kPi / 2.0, 0.0};
    DeviceModel device;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    bool seed_explicit = false;
    std::optional<WitnessKind> witness;

    std::size_t dim = 2;
    std::uint64_t cap = 1'000'000;
    std::size_t components = 4;
    std::size_t restarts = 50;

    std::size_t grid_n = 70;
    std::optional<std::vector<double>> grid;
    std::size_t bins = 100;
    bool simulated_source = false;
    std::uint64_t trials_per_setting = 10'000;

    std::size_t opt_grid_n = 16;
    std::size_t starts = 20;
    std::optional<std::array<double, 2>> fix_sigma;

    Accounting accounting = Accounting::PerTrigger;
    XSelection x_selection = XSelection::RoundRobin;
    unsigned threads = 1;
    bool strict_repro = false;
    std::string out = ".";

    /// Every field with defaults filled in.
    [[nodiscard]] nlohmann::json effective() const;
    /// effective() minus keys that cannot change results (out, threads).
    [[nodiscard]] nlohmann::json provenance() const;
};

/// Keys accepted in a configuration document.
const std::vector<std::string> &config_keys();

/// Validates a flat document. Throws ParseError, UnknownKey or
/// ValidationError naming the field.
RunConfig parse_config(const nlohmann::json &doc);

RunConfig load_config(const std::filesystem::path &path);

/// Reads an override value: JSON when it parses as JSON, a string otherwise.
nlohmann::json parse_override_value(std::string_view text);

/// Re-validates `config` with `key` set to `value`.
RunConfig with_override(const RunConfig &config, const std::string &key,
                        const nlohmann::json &value);

enum class Command { Predict, Bounds, Optimize, Simulate, Sweep };

const char *command_name(Command command) noexcept;
Command parse_command(std::string_view name);

struct DispatchResult {
    /// One-line summary; always holds "command", "status" and "outputs".
    nlohmann::json summary;
    std::vector<std::filesystem::path> outputs;
};

/// Runs `command` and writes its artifacts into `config.out`.
DispatchResult dispatch(const RunConfig &config, Command command);

/// Machine-readable error record for any exception raised by dispatch.
nlohmann::json error_record(const std::exception &error);

} // namespace dcwit
