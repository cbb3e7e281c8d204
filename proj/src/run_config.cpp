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

#include "dcwit/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dcwit {

namespace {

constexpr const char *kModule = "cli";

ValidationError invalid(const std::string &field, const std::string &reason) {
    return ValidationError(kModule, "load_config", field + " " + reason);
}

double read_real(const nlohmann::json &v, const std::string &field) {
    if (!v.is_number())
        throw invalid(field, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw invalid(field, "must be finite");
    return d;
}

double read_unit(const nlohmann::json &v, const std::string &field) {
    const double d = read_real(v, field);
    if (d < 0.0 || d > 1.0)
        throw invalid(field, "out of [0,1]");
    return d;
}

std::uint64_t read_count(const nlohmann::json &v, const std::string &field,
                         std::uint64_t min) {
    if (!v.is_number_integer() ||
        (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw invalid(field, "must be a non-negative integer");
    const auto n = v.get<std::uint64_t>();
    if (n < min)
        throw invalid(field, "must be at least " + std::to_string(min));
    return n;
}

bool read_bool(const nlohmann::json &v, const std::string &field) {
    if (!v.is_boolean())
        throw invalid(field, "must be true or false");
    return v.get<bool>();
}

std::string read_string(const nlohmann::json &v, const std::string &field) {
    if (!v.is_string())
        throw invalid(field, "must be a string");
    return v.get<std::string>();
}

double read_phase(const nlohmann::json &v, const std::string &field) {
    if (v.is_string()) {
        try {
            return parse_phase(v.get<std::string>());
        } catch (const ParseError &) {
            throw invalid(field, "has an unreadable phase '" + v.get<std::string>() + "'");
        }
    }
    return read_real(v, field);
}

std::vector<double> read_phases(const nlohmann::json &v, const std::string &field) {
    if (!v.is_array() || v.empty())
        throw invalid(field, "must be a non-empty list of phases");
    std::vector<double> out;
    for (const auto &e : v)
        out.push_back(read_phase(e, field));
    return out;
}

template <class Fn> auto translate(const std::string &field, Fn &&fn) {
    try {
        return fn();
    } catch (const ValidationError &e) {
        throw invalid(field, std::string("invalid: ") + e.what());
    }
}

} // namespace

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = {
        "phi",        "sigma",      "eta",          "t_a",
        "t_b",        "visibility", "policy",       "trials",
        "seed",       "witness",    "dim",          "cap",
        "components", "restarts",   "grid_n",       "grid",
        "bins",       "source",     "trials_per_setting",
        "opt_grid_n", "starts",     "fix_sigma",    "accounting",
        "x_selection", "threads",   "strict_repro", "out"};
    return keys;
}

RunConfig parse_config(const nlohmann::json &doc) {
    if (!doc.is_object())
        throw ParseError(kModule, "load_config", "configuration must be a JSON object");
    const auto &keys = config_keys();
    for (const auto &[key, _] : doc.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw UnknownKey(kModule, "load_config", "unknown key '" + key + "'");

    RunConfig c;
    c.supplied = doc;
    // null means "use the default", so effective() documents re-parse.
    auto has = [&](const char *k) { return doc.contains(k) && !doc[k].is_null(); };

    if (has("phi"))
        c.phi = read_phases(doc["phi"], "phi");
    if (has("sigma"))
        c.sigma = read_phases(doc["sigma"], "sigma");
    if (has("eta"))
        c.device.eta = read_unit(doc["eta"], "eta");
    if (has("t_a"))
        c.device.t_a = read_unit(doc["t_a"], "t_a");
    if (has("t_b"))
        c.device.t_b = read_unit(doc["t_b"], "t_b");
    if (has("visibility"))
        c.device.visibility = read_unit(doc["visibility"], "visibility");
    if (has("policy"))
        c.device.policy = translate("policy", [&] {
            return parse_policy(read_string(doc["policy"], "policy"));
        });
    if (has("trials"))
        c.trials = read_count(doc["trials"], "trials", 1);
    if (has("seed")) {
        c.seed = read_count(doc["seed"], "seed", 0);
        c.seed_explicit = true;
    }
    if (has("witness"))
        c.witness = translate("witness", [&] {
            return parse_witness(read_string(doc["witness"], "witness"));
        });
    if (has("dim"))
        c.dim = read_count(doc["dim"], "dim", 1);
    if (has("cap"))
        c.cap = read_count(doc["cap"], "cap", 1);
    if (has("components"))
        c.components = read_count(doc["components"], "components", 1);
    if (has("restarts"))
        c.restarts = read_count(doc["restarts"], "restarts", 1);
    if (has("grid_n"))
        c.grid_n = read_count(doc["grid_n"], "grid_n", 1);
    if (has("grid"))
        c.grid = read_phases(doc["grid"], "grid");
    if (has("bins"))
        c.bins = read_count(doc["bins"], "bins", 1);
    if (has("source")) {
        const auto s = read_string(doc["source"], "source");
        if (s != "analytic" && s != "simulated")
            throw invalid("source", "must be analytic or simulated");
        c.simulated_source = s == "simulated";
    }
    if (has("trials_per_setting"))
        c.trials_per_setting = read_count(doc["trials_per_setting"], "trials_per_setting", 1);
    if (has("opt_grid_n"))
        c.opt_grid_n = read_count(doc["opt_grid_n"], "opt_grid_n", 8);
    if (has("starts"))
        c.starts = read_count(doc["starts"], "starts", 1);
    if (has("fix_sigma")) {
        const auto v = read_phases(doc["fix_sigma"], "fix_sigma");
        if (v.size() != 2)
            throw invalid("fix_sigma", "must hold exactly two phases");
        c.fix_sigma = std::array<double, 2>{v[0], v[1]};
    }
    if (has("accounting"))
        c.accounting = translate("accounting", [&] {
            return parse_accounting(read_string(doc["accounting"], "accounting"));
        });
    if (has("x_selection"))
        c.x_selection = translate("x_selection", [&] {
            return parse_x_selection(read_string(doc["x_selection"], "x_selection"));
        });
    if (has("threads")) {
        const auto t = read_count(doc["threads"], "threads", 1);
        if (t > 1024)
            throw invalid("threads", "must be at most 1024");
        c.threads = static_cast<unsigned>(t);
    }
    if (has("strict_repro"))
        c.strict_repro = read_bool(doc["strict_repro"], "strict_repro");
    if (has("out"))
        c.out = read_string(doc["out"], "out");

    c.device.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(kModule, "load_config", "cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(kModule, "load_config",
                         "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

nlohmann::json parse_override_value(std::string_view text) {
    auto parsed = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
    if (parsed.is_discarded())
        return std::string(text);
    return parsed;
}

RunConfig with_override(const RunConfig &config, const std::string &key,
                        const nlohmann::json &value) {
    auto doc = config.supplied;
    doc[key] = value;
    return parse_config(doc);
}

nlohmann::json RunConfig::effective() const {
    nlohmann::json e;
    e["phi"] = phi ? nlohmann::json(*phi) : nlohmann::json(nullptr);
    e["sigma"] = sigma;
    e["eta"] = device.eta;
    e["t_a"] = device.t_a;
    e["t_b"] = device.t_b;
    e["visibility"] = device.visibility;
    e["policy"] = policy_name(device.policy);
    e["trials"] = trials;
    e["seed"] = seed;
    e["witness"] = witness ? nlohmann::json(witness_name(*witness)) : nlohmann::json(nullptr);
    e["dim"] = dim;
    e["cap"] = cap;
    e["components"] = components;
    e["restarts"] = restarts;
    e["grid_n"] = grid_n;
    e["grid"] = grid ? nlohmann::json(*grid) : nlohmann::json(nullptr);
    e["bins"] = bins;
    e["source"] = simulated_source ? "simulated" : "analytic";
    e["trials_per_setting"] = trials_per_setting;
    e["opt_grid_n"] = opt_grid_n;
    e["starts"] = starts;
    e["fix_sigma"] = fix_sigma ? nlohmann::json(*fix_sigma) : nlohmann::json(nullptr);
    e["accounting"] = accounting_name(accounting);
    e["x_selection"] = x_selection_name(x_selection);
    e["threads"] = threads;
    e["strict_repro"] = strict_repro;
    e["out"] = out;
    return e;
}

nlohmann::json RunConfig::provenance() const {
    auto e = effective();
    e.erase("out");
    e.erase("threads");
    return e;
}

} // namespace dcwit
