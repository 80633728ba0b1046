/*
 * Copyright 2026 The cbsamp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

namespace cbsamp {

/// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Compile-time FNV-1a hash of a label, used to tag independent stream purposes.
constexpr std::uint64_t stream_tag(std::string_view label) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

/**
 * @brief Deterministic pseudo-random stream (splitmix64).
 *
 * Satisfies std::uniform_random_bit_generator. Every consumer receives an
 * explicit stream; nothing in the library touches global RNG state. Streams
 * for Monte-Carlo work are derived per sample index via StreamFamily so that
 * results do not depend on worker count or scheduling.
 */
class RandomStream {
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    result_type operator()() noexcept { return next_u64(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Unbiased uniform integer in [0, bound); bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal deviate (Box-Muller, trig form; pairs are cached).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]; keeps log() finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/**
 * @brief A family of statistically independent streams addressed by index.
 *
 * The stream for sample i is a pure function of (master_seed, purpose, i).
 * Workers processing disjoint index ranges therefore reproduce exactly the
 * same per-sample randomness regardless of how samples are distributed.
 */
struct StreamFamily {
    std::uint64_t master_seed = 0;
    std::uint64_t purpose = 0;

    StreamFamily(std::uint64_t seed, std::uint64_t purpose_bits) noexcept
        : master_seed(seed), purpose(purpose_bits) {}

    StreamFamily(std::uint64_t seed, std::string_view label) noexcept
        : master_seed(seed), purpose(stream_tag(label)) {}

    /// Sub-family for a nested purpose (ensemble, matrix index, ...).
    [[nodiscard]] StreamFamily sub(std::uint64_t salt) const noexcept {
        return {master_seed, mix64(purpose ^ (salt + 0x9E3779B97F4A7C15ULL))};
    }

    [[nodiscard]] StreamFamily sub(std::string_view label) const noexcept {
        return sub(stream_tag(label));
    }

    [[nodiscard]] RandomStream at(std::uint64_t index) const noexcept {
        std::uint64_t s = mix64(master_seed ^ 0xA0761D6478BD642FULL);
        s = mix64(s ^ purpose);
        s = mix64(s ^ index);
        return RandomStream(s);
    }
};

}  // namespace cbsamp
