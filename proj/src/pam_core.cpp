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

#include "dcwit/pam_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "csv.hpp"

namespace dcwit {

namespace {
constexpr const char *kModule = "pam_core";
} // namespace

const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Normalization:
        return "NormalizationError";
    case ErrorCode::Range:
        return "RangeError";
    case ErrorCode::Shape:
        return "ShapeError";
    case ErrorCode::Index:
        return "IndexError";
    case ErrorCode::InvalidInput:
        return "InvalidInput";
    case ErrorCode::CapExceeded:
        return "CapExceeded";
    case ErrorCode::EmptySetting:
        return "EmptySetting";
    case ErrorCode::Parse:
        return "ParseError";
    case ErrorCode::Validation:
        return "ValidationError";
    case ErrorCode::UnknownKey:
        return "UnknownKey";
    case ErrorCode::Io:
        return "IoError";
    }
    return "Error";
}

double reduce_phase(double radians) {
    if (!std::isfinite(radians))
        throw InvalidInput(kModule, "reduce_phase", "phase is not finite");
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    // fmod of a tiny negative angle plus 2pi can round up to exactly 2pi.
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

double parse_phase(std::string_view text) {
    auto fail = [&] {
        return ParseError(kModule, "parse_phase",
                          "cannot read phase '" + std::string(text) + "'");
    };
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '*')
            s.push_back(c);
    if (s.empty())
        throw fail();

    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw fail();
        return v;
    }

    // [sign][coef]pi[/den]
    std::string coef = s.substr(0, pi_pos);
    double sign = 1.0;
    if (!coef.empty() && (coef.front() == '-' || coef.front() == '+')) {
        if (coef.front() == '-')
            sign = -1.0;
        coef.erase(0, 1);
    }
    double multiplier = 1.0;
    if (!coef.empty()) {
        const auto [ptr, ec] = std::from_chars(
            coef.data(), coef.data() + coef.size(), multiplier);
        if (ec != std::errc() || ptr != coef.data() + coef.size())
            throw fail();
    }
    double denominator = 1.0;
    const std::string rest = s.substr(pi_pos + 2);
    if (!rest.empty()) {
        if (rest.front() != '/' || rest.size() < 2)
            throw fail();
        const auto [ptr, ec] = std::from_chars(
            rest.data() + 1, rest.data() + rest.size(), denominator);
        if (ec != std::errc() || ptr != rest.data() + rest.size() ||
            denominator == 0.0)
            throw fail();
    }
    return sign * multiplier * kPi / denominator;
}

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

PamScenario::PamScenario(std::size_t n_x, std::size_t n_y, std::size_t dim)
    : n_x_(n_x), n_y_(n_y), dim_(dim) {
    if (n_x == 0 || n_y == 0 || dim == 0)
        throw InvalidInput(kModule, "PamScenario",
                           "cardinalities must be at least 1");
}

PhaseConfig::PhaseConfig(std::vector<double> phi, std::vector<double> sigma)
    : phi_(std::move(phi)), sigma_(std::move(sigma)) {
    if (phi_.empty() || sigma_.empty())
        throw ShapeError(kModule, "PhaseConfig",
                         "need at least one preparation and one measurement "
                         "phase");
    for (auto &p : phi_)
        p = reduce_phase(p);
    for (auto &s : sigma_)
        s = reduce_phase(s);
}

void PhaseConfig::check_shape(const PamScenario &scenario) const {
    if (phi_.size() != scenario.n_x() || sigma_.size() != scenario.n_y())
        throw ShapeError(kModule, "PhaseConfig",
                         "phase lists are " + std::to_string(phi_.size()) +
                             "x" + std::to_string(sigma_.size()) +
                             ", scenario needs " +
                             std::to_string(scenario.n_x()) + "x" +
                             std::to_string(scenario.n_y()));
}

ProbabilityTable::ProbabilityTable(std::size_t n_x, std::size_t n_y,
                                   std::vector<double> entries)
    : n_x_(n_x), n_y_(n_y), entries_(std::move(entries)) {
    if (n_x == 0 || n_y == 0)
        throw ShapeError(kModule, "ProbabilityTable", "empty table");
    if (entries_.size() != n_x * n_y * 2)
        throw ShapeError(kModule, "ProbabilityTable",
                         "expected " + std::to_string(n_x * n_y * 2) +
                             " entries, got " + std::to_string(entries_.size()));
}

ProbabilityTable ProbabilityTable::from_p0(std::size_t n_x, std::size_t n_y,
                                           std::span<const double> p0) {
    if (p0.size() != n_x * n_y)
        throw ShapeError(kModule, "ProbabilityTable::from_p0",
                         "expected " + std::to_string(n_x * n_y) +
                             " values, got " + std::to_string(p0.size()));
    std::vector<double> entries(n_x * n_y * 2);
    for (std::size_t i = 0; i < p0.size(); ++i) {
        entries[2 * i] = p0[i];
        entries[2 * i + 1] = 1.0 - p0[i];
    }
    return {n_x, n_y, std::move(entries)};
}

double ProbabilityTable::p(std::size_t b, std::size_t x, std::size_t y) const {
    if (b > 1 || x >= n_x_ || y >= n_y_)
        throw IndexError(kModule, "ProbabilityTable::p",
                         "index (b=" + std::to_string(b) +
                             ", x=" + std::to_string(x) +
                             ", y=" + std::to_string(y) + ") out of range");
    return entries_[(x * n_y_ + y) * 2 + b];
}

ProbabilityTable validate_table(const ProbabilityTable &table,
                                const PamScenario &scenario) {
    if (table.n_x() != scenario.n_x() || table.n_y() != scenario.n_y())
        throw ShapeError(kModule, "validate_table",
                         "table is " + std::to_string(table.n_x()) + "x" +
                             std::to_string(table.n_y()) + ", scenario is " +
                             std::to_string(scenario.n_x()) + "x" +
                             std::to_string(scenario.n_y()));
    for (std::size_t x = 0; x < table.n_x(); ++x) {
        for (std::size_t y = 0; y < table.n_y(); ++y) {
            const double p0 = table.p(0, x, y);
            const double p1 = table.p(1, x, y);
            for (double v : {p0, p1}) {
                if (!(v >= 0.0 && v <= 1.0))
                    throw RangeError(kModule, "validate_table",
                                     "entry " + format_real(v) + " at x=" +
                                         std::to_string(x) + ", y=" +
                                         std::to_string(y) +
                                         " is outside [0,1]");
            }
            if (std::abs(p0 + p1 - 1.0) > kNormTolerance)
                throw NormalizationError(
                    kModule, "validate_table",
                    "column x=" + std::to_string(x) + ", y=" +
                        std::to_string(y) + " sums to " + format_real(p0 + p1));
        }
    }
    return table;
}

double expectation(const ProbabilityTable &table, std::size_t x,
                   std::size_t y) {
    return table.p(0, x, y) - table.p(1, x, y);
}

ProbabilityTable mix_tables(std::span<const ProbabilityTable> tables,
                            std::span<const double> weights) {
    if (tables.empty() || tables.size() != weights.size())
        throw ShapeError(kModule, "mix_tables",
                         "need one weight per table and at least one table");
    const auto n_x = tables.front().n_x();
    const auto n_y = tables.front().n_y();
    std::vector<double> entries(n_x * n_y * 2, 0.0);
    for (std::size_t k = 0; k < tables.size(); ++k) {
        if (tables[k].n_x() != n_x || tables[k].n_y() != n_y)
            throw ShapeError(kModule, "mix_tables", "table shapes differ");
        const auto src = tables[k].entries();
        for (std::size_t i = 0; i < entries.size(); ++i)
            entries[i] += weights[k] * src[i];
    }
    return {n_x, n_y, std::move(entries)};
}

std::string table_to_csv(const ProbabilityTable &table) {
    std::string out = "x,y,p0,p1\n";
    for (std::size_t x = 0; x < table.n_x(); ++x)
        for (std::size_t y = 0; y < table.n_y(); ++y)
            out += std::to_string(x) + "," + std::to_string(y) + "," +
                   format_real(table.p(0, x, y)) + "," +
                   format_real(table.p(1, x, y)) + "\n";
    return out;
}

namespace {

ProbabilityTable assemble(const std::map<std::pair<std::size_t, std::size_t>,
                                         std::pair<double, double>> &cells,
                          const char *operation) {
    if (cells.empty())
        throw ParseError(kModule, operation, "table has no entries");
    std::size_t n_x = 0;
    std::size_t n_y = 0;
    for (const auto &[key, _] : cells) {
        n_x = std::max(n_x, key.first + 1);
        n_y = std::max(n_y, key.second + 1);
    }
    if (cells.size() != n_x * n_y)
        throw ShapeError(kModule, operation,
                         "table entries do not cover a full " +
                             std::to_string(n_x) + "x" + std::to_string(n_y) +
                             " grid");
    std::vector<double> entries(n_x * n_y * 2);
    for (const auto &[key, value] : cells) {
        const auto i = key.first * n_y + key.second;
        entries[2 * i] = value.first;
        entries[2 * i + 1] = value.second;
    }
    return {n_x, n_y, std::move(entries)};
}

} // namespace

ProbabilityTable table_from_csv(std::string_view text) {
    constexpr const char *op = "table_from_csv";
    const auto csv = detail::read_csv(text, kModule, op);
    detail::expect_header(csv, {"x", "y", "p0", "p1"}, kModule, op);
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>>
        cells;
    for (const auto &row : csv.rows) {
        const auto key =
            std::pair{static_cast<std::size_t>(detail::to_count(row[0], kModule, op)),
                      static_cast<std::size_t>(detail::to_count(row[1], kModule, op))};
        if (!cells
                 .emplace(key, std::pair{detail::to_real(row[2], kModule, op),
                                         detail::to_real(row[3], kModule, op)})
                 .second)
            throw ParseError(kModule, op, "duplicate row for x=" + row[0] +
                                              ", y=" + row[1]);
    }
    return assemble(cells, op);
}

nlohmann::json table_to_json(const ProbabilityTable &table) {
    nlohmann::json doc = nlohmann::json::object();
    for (std::size_t x = 0; x < table.n_x(); ++x)
        for (std::size_t y = 0; y < table.n_y(); ++y)
            doc[std::to_string(x) + "," + std::to_string(y)] = {
                table.p(0, x, y), table.p(1, x, y)};
    return doc;
}

ProbabilityTable table_from_json(const nlohmann::json &doc) {
    constexpr const char *op = "table_from_json";
    if (!doc.is_object())
        throw ParseError(kModule, op, "table must be a JSON object");
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>>
        cells;
    for (const auto &[key, value] : doc.items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos)
            throw ParseError(kModule, op, "key '" + key + "' is not \"x,y\"");
        const auto x = detail::to_count(key.substr(0, comma), kModule, op);
        const auto y = detail::to_count(key.substr(comma + 1), kModule, op);
        if (!value.is_array() || value.size() != 2 ||
            !value[0].is_number() || !value[1].is_number())
            throw ParseError(kModule, op,
                             "value for '" + key + "' must be [p0, p1]");
        cells.emplace(std::pair{static_cast<std::size_t>(x),
                                static_cast<std::size_t>(y)},
                      std::pair{value[0].get<double>(), value[1].get<double>()});
    }
    return assemble(cells, op);
}

} // namespace dcwit
