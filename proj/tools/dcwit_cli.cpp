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

// dcwit: command-line front end over the C API.
//
//   dcwit predict  --config F
//   dcwit bounds   --witness w2|idw
//   dcwit optimize --witness w2|idw [--fix-sigma a,b]
//   dcwit simulate --config F
//   dcwit sweep    --config F
//
// Prints one JSON line (summary or error record) and exits 0 on success.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dcwit/dcwit.h"

namespace {

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool strict_repro = false;
    std::optional<std::string> witness;
    std::optional<std::string> fix_sigma;
    std::vector<std::string> sets;
};

struct ConfigDeleter {
    void operator()(dcwit_config *c) const { dcwit_config_free(c); }
};
using ConfigHandle = std::unique_ptr<dcwit_config, ConfigDeleter>;

std::string json_string(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

int usage_error(const std::string &cause) {
    std::cout << R"({"status":"error","error":{"type":"UsageError","module":"cli",)"
              << R"("operation":"parse_arguments","cause":)" << json_string(cause) << "}}\n";
    return 2;
}

int library_error() {
    std::cout << dcwit_last_error_json() << "\n";
    return 1;
}

void add_common(CLI::App *cmd, Options &o, bool witness_flags) {
    cmd->add_option("--config", o.config, "JSON configuration file");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_flag("--strict-repro", o.strict_repro, "require an explicit seed");
    cmd->add_option("--set", o.sets, "override a configuration key (key=value)");
    if (witness_flags) {
        cmd->add_option("--witness", o.witness, "w2 or idw")
            ->check(CLI::IsMember({"w2", "idw"}));
        cmd->add_option("--fix-sigma", o.fix_sigma, "measurement phases a,b");
    }
}

/// Splits "a,b" into a JSON list of phase literals.
std::string phase_list(const std::string &text) {
    std::string out = "[";
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma - start);
        if (out.size() > 1)
            out += ",";
        out += json_string(item);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out + "]";
}

bool apply(dcwit_config *config, const std::string &key, const std::string &value) {
    return dcwit_config_set(config, key.c_str(), value.c_str()) == DCWIT_OK;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Dimension witnesses for a delayed-choice interferometer", "dcwit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dcwit_version()));

    Options o;
    struct Entry {
        const char *name;
        const char *help;
        bool witness_flags;
    };
    const Entry commands[] = {
        {"predict", "probability table and witness value for the configured phases", false},
        {"bounds", "classical and quantum bounds of a witness", true},
        {"optimize", "maximize a witness over qubit phase settings", true},
        {"simulate", "Monte Carlo run of the interferometer with count ledger", false},
        {"sweep", "histogram of I_DW over a grid of preparation phases", false}};
    for (const auto &c : commands)
        add_common(app.add_subcommand(c.name, c.help), o, c.witness_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return usage_error(e.what());
    }
    const std::string command = app.get_subcommands().front()->get_name();

    dcwit_config *raw = nullptr;
    const auto status =
        o.config.empty() ? dcwit_config_create(&raw) : dcwit_config_load(o.config.c_str(), &raw);
    if (status != DCWIT_OK)
        return library_error();
    ConfigHandle config(raw);

    for (const auto &s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            return usage_error("--set expects key=value, got '" + s + "'");
        if (!apply(config.get(), s.substr(0, eq), s.substr(eq + 1)))
            return library_error();
    }
    if (o.out && !apply(config.get(), "out", json_string(*o.out)))
        return library_error();
    if (o.seed && !apply(config.get(), "seed", std::to_string(*o.seed)))
        return library_error();
    if (o.threads && !apply(config.get(), "threads", std::to_string(*o.threads)))
        return library_error();
    if (o.strict_repro && !apply(config.get(), "strict_repro", "true"))
        return library_error();
    if (o.witness && !apply(config.get(), "witness", json_string(*o.witness)))
        return library_error();
    if (o.fix_sigma && !apply(config.get(), "fix_sigma", phase_list(*o.fix_sigma)))
        return library_error();

    char *summary = nullptr;
    if (dcwit_dispatch(config.get(), command.c_str(), &summary) != DCWIT_OK)
        return library_error();
    std::cout << summary << "\n";
    dcwit_string_free(summary);
    return 0;
}
