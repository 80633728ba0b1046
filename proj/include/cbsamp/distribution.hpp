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
#include <iosfwd>
#include <string>
#include <vector>

#include "cbsamp/collisions.hpp"
#include "cbsamp/matrix_core.hpp"
#include "cbsamp/parallel.hpp"

namespace cbsamp {

/// The full output distribution of a small instance: every multiset outcome
/// (lexicographic order) with its probability.
struct OutcomeDistribution {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<OutputConfiguration> outcomes;
    std::vector<double> probabilities;
    std::string source;      // matrix descriptor for reproducibility
    std::uint64_t seed = 0;  // 0 when the matrix was supplied, not generated
};

/// Born-rule outcome probability |perm(U_T)|^2 / prod_k n_{o,k}!.
/// Guarded at n <= 8.
double outcome_probability(const ComplexMatrix& u, const InputConfiguration& inputs,
                           const OutputConfiguration& s);
double outcome_probability(const CirculantUnitary& u, const InputConfiguration& inputs,
                           const OutputConfiguration& s);

/**
 * @brief Enumerates all C(m+n-1, n) outcomes and their probabilities.
 *
 * Guarded at C(m+n-1, n) <= 10^6 and n <= 8; throws NumericalError (with the
 * source echo) if the probabilities do not sum to 1 within 1e-8.
 */
OutcomeDistribution full_distribution(const ComplexMatrix& u, const InputConfiguration& inputs,
                                      std::string source = {}, std::uint64_t seed = 0,
                                      const ParallelOptions& par = {});
OutcomeDistribution full_distribution(const CirculantUnitary& u, const InputConfiguration& inputs,
                                      std::string source = {}, std::uint64_t seed = 0,
                                      const ParallelOptions& par = {});

/// k i.i.d. categorical draws via inverse CDF on the cumulative array.
std::vector<OutputConfiguration> sample_outcomes(const OutcomeDistribution& dist, std::size_t k,
                                                 RandomStream& rng);

/// One outcome per line: {"modes": [...], "probability": p}.
void write_distribution_jsonl(const OutcomeDistribution& dist, std::ostream& out);

}  // namespace cbsamp
