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

#include "dcwit/count_ledger.hpp"

#include <algorithm>
#include <map>

#include "csv.hpp"

namespace dcwit {

namespace {
constexpr const char *kModule = "expsim";
} // namespace

CountLedger::CountLedger(std::size_t n_x, std::size_t n_y)
    : n_x_(n_x), n_y_(n_y), counts_(n_x * n_y) {
    if (n_x == 0 || n_y == 0)
        throw ShapeError(kModule, "CountLedger", "empty ledger");
}

CountLedger::CountLedger(std::size_t n_x, std::size_t n_y,
                         std::vector<SettingCounts> counts)
    : n_x_(n_x), n_y_(n_y), counts_(std::move(counts)) {
    if (n_x == 0 || n_y == 0 || counts_.size() != n_x * n_y)
        throw ShapeError(kModule, "CountLedger",
                         "expected " + std::to_string(n_x * n_y) + " settings");
    if (!conserved())
        throw InvalidInput(kModule, "CountLedger",
                           "d0 + d1 + lost must equal trigger for every setting");
}

const SettingCounts &CountLedger::at(std::size_t x, std::size_t y) const {
    if (x >= n_x_ || y >= n_y_)
        throw IndexError(kModule, "CountLedger::at", "setting out of range");
    return counts_[x * n_y_ + y];
}

SettingCounts &CountLedger::slot(std::size_t x, std::size_t y) {
    if (x >= n_x_ || y >= n_y_)
        throw IndexError(kModule, "CountLedger::record", "setting out of range");
    return counts_[x * n_y_ + y];
}

void CountLedger::record_d0(std::size_t x, std::size_t y) {
    auto &c = slot(x, y);
    ++c.trigger;
    ++c.d0;
}

void CountLedger::record_d1(std::size_t x, std::size_t y) {
    auto &c = slot(x, y);
    ++c.trigger;
    ++c.d1;
}

void CountLedger::record_lost(std::size_t x, std::size_t y) {
    auto &c = slot(x, y);
    ++c.trigger;
    ++c.lost;
}

void CountLedger::merge(const CountLedger &other) {
    if (other.n_x_ != n_x_ || other.n_y_ != n_y_)
        throw ShapeError(kModule, "CountLedger::merge", "ledger shapes differ");
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i].trigger += other.counts_[i].trigger;
        counts_[i].d0 += other.counts_[i].d0;
        counts_[i].d1 += other.counts_[i].d1;
        counts_[i].lost += other.counts_[i].lost;
    }
}

bool CountLedger::conserved() const noexcept {
    return std::all_of(counts_.begin(), counts_.end(), [](const SettingCounts &c) {
        return c.d0 + c.d1 + c.lost == c.trigger;
    });
}

OutcomeCounts outcome_counts(const SettingCounts &counts, AssignmentPolicy policy) {
    if (policy == AssignmentPolicy::PostSelected)
        return {counts.d0, counts.d1};
    return {counts.d1 + counts.lost, counts.d0};
}

std::string ledger_to_csv(const CountLedger &ledger) {
    std::string out = "x,y,trigger,d0,d1,lost\n";
    for (std::size_t x = 0; x < ledger.n_x(); ++x) {
        for (std::size_t y = 0; y < ledger.n_y(); ++y) {
            const auto &c = ledger.at(x, y);
            out += std::to_string(x) + "," + std::to_string(y) + "," +
                   std::to_string(c.trigger) + "," + std::to_string(c.d0) + "," +
                   std::to_string(c.d1) + "," + std::to_string(c.lost) + "\n";
        }
    }
    return out;
}

CountLedger ledger_from_csv(std::string_view text) {
    constexpr const char *op = "ledger_from_csv";
    const auto csv = detail::read_csv(text, kModule, op);
    detail::expect_header(csv, {"x", "y", "trigger", "d0", "d1", "lost"}, kModule, op);
    std::map<std::pair<std::uint64_t, std::uint64_t>, SettingCounts> cells;
    std::uint64_t n_x = 0;
    std::uint64_t n_y = 0;
    for (const auto &row : csv.rows) {
        const auto x = detail::to_count(row[0], kModule, op);
        const auto y = detail::to_count(row[1], kModule, op);
        n_x = std::max(n_x, x + 1);
        n_y = std::max(n_y, y + 1);
        SettingCounts c{detail::to_count(row[2], kModule, op),
                        detail::to_count(row[3], kModule, op),
                        detail::to_count(row[4], kModule, op),
                        detail::to_count(row[5], kModule, op)};
        if (!cells.emplace(std::pair{x, y}, c).second)
            throw ParseError(kModule, op, "duplicate ledger row");
    }
    if (cells.size() != n_x * n_y)
        throw ShapeError(kModule, op, "ledger rows do not cover every setting");
    std::vector<SettingCounts> counts(n_x * n_y);
    for (const auto &[key, c] : cells)
        counts[key.first * n_y + key.second] = c;
    return {n_x, n_y, std::move(counts)};
}

} // namespace dcwit
