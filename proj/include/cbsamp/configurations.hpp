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

#include <cstdint>
#include <vector>

namespace cbsamp {

/**
 * @brief Which input modes carry a photon.
 *
 * Mode indices are strictly increasing. The sampling convention used
 * throughout the experiments is photons in the first n modes.
 */
struct InputConfiguration {
    std::vector<std::uint32_t> modes;

    /// Photons on modes 0..n-1.
    static InputConfiguration contiguous(std::size_t n);

    [[nodiscard]] std::size_t photons() const { return modes.size(); }

    /// Throws std::invalid_argument unless strictly increasing and < m.
    void validate(std::size_t m) const;
};

/**
 * @brief An output configuration s: a multiset of n output-mode indices.
 *
 * Stored sorted non-decreasing; repeated entries are collisions. Equivalent to
 * an occupation vector n_o over the m modes.
 */
struct OutputConfiguration {
    std::uint32_t m = 0;
    std::vector<std::uint32_t> modes;  // sorted, repetitions allowed

    OutputConfiguration() = default;
    OutputConfiguration(std::uint32_t total_modes, std::vector<std::uint32_t> sorted_modes);

    [[nodiscard]] std::size_t photons() const { return modes.size(); }

    [[nodiscard]] bool collision_free() const;

    /// prod_k n_{o,k}! over the occupation numbers; 1 for collision-free s.
    [[nodiscard]] double occupation_factorial() const;

    /// Occupation vector n_o of length m.
    [[nodiscard]] std::vector<std::uint32_t> occupations() const;

    bool operator==(const OutputConfiguration& other) const = default;
};

}  // namespace cbsamp
