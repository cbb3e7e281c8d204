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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dcwit/pam_core.hpp"
#include "dcwit/quantum_model.hpp"

namespace dcwit {

/// Event tallies for one (x, y) setting. Every run starts with a trigger and
/// ends as exactly one of: a D0 coincidence, a D1 coincidence, or a loss.
struct SettingCounts {
    std::uint64_t trigger = 0;
    std::uint64_t d0 = 0;
    std::uint64_t d1 = 0;
    std::uint64_t lost = 0;

    friend bool operator==(const SettingCounts &, const SettingCounts &) = default;
};

class CountLedger {
  public:
    CountLedger(std::size_t n_x, std::size_t n_y);
    /// `counts` is laid out as [x * n_y + y]; throws InvalidInput when
    /// d0 + d1 + lost != trigger for any setting.
    CountLedger(std::size_t n_x, std::size_t n_y,
                std::vector<SettingCounts> counts);

    [[nodiscard]] std::size_t n_x() const noexcept { return n_x_; }
    [[nodiscard]] std::size_t n_y() const noexcept { return n_y_; }

    [[nodiscard]] const SettingCounts &at(std::size_t x, std::size_t y) const;

    /// Record one run outcome.
    void record_d0(std::size_t x, std::size_t y);
    void record_d1(std::size_t x, std::size_t y);
    void record_lost(std::size_t x, std::size_t y);

    /// Adds another ledger of the same shape.
    void merge(const CountLedger &other);

    [[nodiscard]] bool conserved() const noexcept;

    friend bool operator==(const CountLedger &, const CountLedger &) = default;

  private:
    SettingCounts &slot(std::size_t x, std::size_t y);

    std::size_t n_x_;
    std::size_t n_y_;
    std::vector<SettingCounts> counts_;
};

/// Outcome tallies (n0, n1) of one setting under an assignment policy.
struct OutcomeCounts {
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;
};
OutcomeCounts outcome_counts(const SettingCounts &counts, AssignmentPolicy policy);

std::string ledger_to_csv(const CountLedger &ledger);
CountLedger ledger_from_csv(std::string_view text);

} // namespace dcwit
