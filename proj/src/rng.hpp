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

// Seeded stream derivation. Every independent stream (a setting, a restart, a
// grid point) gets its own mt19937_64 whose seed is a SplitMix64 hash of the
// user seed and the stream coordinates, so results never depend on the order
// in which streams are scheduled.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dcwit::detail {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(seed);
    for (auto c : coords)
        h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

class Stream {
  public:
    Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coords)
        : engine_(stream_seed(seed, coords)) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform index in [0, n). Modulo bias is below 2^-60 for the tiny n used
    /// here.
    std::uint64_t index(std::uint64_t n) noexcept { return engine_() % n; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    std::mt19937_64 &engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
};

} // namespace dcwit::detail
