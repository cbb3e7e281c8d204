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

// Minimal reader for the flat numeric CSV files written by dcwit. Lines that
// start with '#' carry provenance and are skipped.

#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dcwit/errors.hpp"

namespace dcwit::detail {

struct CsvRows {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos
                                            ? std::string_view::npos
                                            : comma - start);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\r'))
            field.remove_suffix(1);
        while (!field.empty() && field.front() == ' ')
            field.remove_prefix(1);
        fields.emplace_back(field);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

inline CsvRows read_csv(std::string_view text, const char *module,
                        const char *operation) {
    CsvRows out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty() || line == "\r" || line.front() == '#')
            continue;
        auto fields = split_fields(line);
        if (out.header.empty()) {
            out.header = std::move(fields);
            continue;
        }
        if (fields.size() != out.header.size())
            throw ParseError(module, operation,
                             "csv row has " + std::to_string(fields.size()) +
                                 " fields, header has " +
                                 std::to_string(out.header.size()));
        out.rows.push_back(std::move(fields));
    }
    if (out.header.empty())
        throw ParseError(module, operation, "csv has no header");
    return out;
}

inline void expect_header(const CsvRows &csv,
                          const std::vector<std::string> &expected,
                          const char *module, const char *operation) {
    if (csv.header != expected) {
        std::string want;
        for (const auto &h : expected)
            want += (want.empty() ? "" : ",") + h;
        throw ParseError(module, operation, "csv header must be " + want);
    }
}

inline double to_real(const std::string &field, const char *module,
                      const char *operation) {
    double value = 0.0;
    const auto *first = field.data();
    const auto *last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(module, operation, "not a number: '" + field + "'");
    return value;
}

inline std::uint64_t to_count(const std::string &field, const char *module,
                              const char *operation) {
    std::uint64_t value = 0;
    const auto *first = field.data();
    const auto *last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(module, operation,
                         "not a non-negative integer: '" + field + "'");
    return value;
}

} // namespace dcwit::detail
