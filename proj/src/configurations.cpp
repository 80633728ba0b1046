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

#include "cbsamp/configurations.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cbsamp {

InputConfiguration InputConfiguration::contiguous(std::size_t n) {
    InputConfiguration cfg;
    cfg.modes.resize(n);
    std::iota(cfg.modes.begin(), cfg.modes.end(), 0u);
    return cfg;
}

void InputConfiguration::validate(std::size_t m) const {
    if (modes.empty()) throw std::invalid_argument("InputConfiguration: no photons");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] >= m) throw std::invalid_argument("InputConfiguration: mode index out of range");
        if (i > 0 && modes[i] <= modes[i - 1])
            throw std::invalid_argument("InputConfiguration: modes must be strictly increasing");
    }
}

OutputConfiguration::OutputConfiguration(std::uint32_t total_modes,
                                         std::vector<std::uint32_t> sorted_modes)
    : m(total_modes), modes(std::move(sorted_modes)) {
    if (m == 0) throw std::invalid_argument("OutputConfiguration: m must be positive");
    if (!std::is_sorted(modes.begin(), modes.end()))
        throw std::invalid_argument("OutputConfiguration: modes must be sorted");
    for (std::uint32_t mode : modes) {
        if (mode >= m) throw std::invalid_argument("OutputConfiguration: mode index out of range");
    }
}

bool OutputConfiguration::collision_free() const {
    return std::adjacent_find(modes.begin(), modes.end()) == modes.end();
}

double OutputConfiguration::occupation_factorial() const {
    double product = 1.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= modes.size(); ++i) {
        if (i < modes.size() && modes[i] == modes[i - 1]) {
            ++run;
            product *= static_cast<double>(run);  // builds n_o! incrementally
        } else {
            run = 1;
        }
    }
    return product;
}

std::vector<std::uint32_t> OutputConfiguration::occupations() const {
    std::vector<std::uint32_t> occ(m, 0u);
    for (std::uint32_t mode : modes) ++occ[mode];
    return occ;
}

}  // namespace cbsamp
