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
#include <functional>
#include <vector>

#include "cbsamp/configurations.hpp"
#include "cbsamp/matrix_core.hpp"
#include "cbsamp/parallel.hpp"
#include "cbsamp/rng.hpp"

namespace cbsamp {

/// min((a-b) mod m, (b-a) mod m).
std::uint32_t circular_distance(std::uint32_t a, std::uint32_t b, std::uint32_t m);

/**
 * @brief Good-outcome predicate for circulant sampling with photons in the
 * first n input modes: no repeated mode, and every pair of distinct output
 * modes at circular distance >= n.
 *
 * Equivalent to the truncation U_T containing no repeated matrix element;
 * see is_good_outcome_index_pattern for that characterization.
 */
bool is_good_outcome(const OutputConfiguration& s, std::size_t n, std::size_t m);

/// Same predicate, decided by checking that the n^2 first-row indices
/// (s_b - a) mod m over rows a < n and columns b are pairwise distinct.
bool is_good_outcome_index_pattern(const OutputConfiguration& s, std::size_t n, std::size_t m);

/// C(m+n-1, n), the number of output multisets. Throws GuardError when the
/// value does not fit in 64 bits.
std::uint64_t multiset_count(std::size_t n, std::size_t m);

/// Visits every output multiset in lexicographic order (sorted vectors).
void for_each_multiset(std::size_t n, std::size_t m,
                       const std::function<void(const std::vector<std::uint32_t>&)>& visit);

/// Brute-force count of multisets passing is_good_outcome. Guarded at
/// C(m+n-1, n) <= 10^7.
std::uint64_t count_good_outcomes_exact(std::size_t n, std::size_t m);

/// Closed-form circular-gap count (m/(m-n(n-1))) * C(m-n(n-1), n), evaluated
/// exactly in integers; 0 when no packing with pairwise gaps >= n exists.
std::uint64_t count_good_outcomes_closed_form(std::size_t n, std::size_t m);

/// count_good_outcomes_closed_form / C(m+n-1, n), in log space (no overflow).
double good_fraction_closed_form(std::size_t n, std::size_t m);

/// Approximate good fraction prod_{j<n}(m - j(2n-1)) / prod_{j<n}(m+n-1-j);
/// 0 if any numerator factor <= 0. Direct product ratio when safe, log space
/// for large arguments.
double n_good_formula(std::size_t n, std::size_t m);

/// Leading-order scaling 1 - (n^3 + n^2)/m.
double n_good_laurent(std::size_t n, std::size_t m);

/// Uniform over all C(m+n-1, n) multisets via the stars-and-bars bijection
/// (uniform n-subset of m+n-1 staggered indices).
OutputConfiguration sample_outcome_uniform(std::size_t n, std::size_t m, RandomStream& rng);

/**
 * @brief Uniform sample over good outcomes.
 *
 * Rejection from sample_outcome_uniform when the good fraction is >= 1e-3;
 * below that, an exact-uniform gap-composition sampler (uniform start point
 * plus uniform weak composition of m - n^2 into n parts, which covers every
 * good outcome exactly n times). Throws std::invalid_argument when no good
 * outcome exists (requires m >= n^2).
 */
OutputConfiguration sample_good_outcome(std::size_t n, std::size_t m, RandomStream& rng);

struct FractionEstimate {
    double fraction = 0.0;
    double stddev = 0.0;  // Bernoulli sqrt(p(1-p)/samples)
    std::uint64_t good = 0;
    std::uint64_t samples = 0;
};

/// Fraction of uniform multiset samples passing is_good_outcome.
FractionEstimate estimate_good_fraction(std::size_t n, std::size_t m, std::uint64_t samples,
                                        const StreamFamily& streams, const ParallelOptions& par = {});

struct MassEstimate {
    double mass = 0.0;             // count_good * mean(|perm(U_T)|^2 over good outcomes)
    double error = 0.0;            // sample-variance term: count_good * stderr(mean)
    double error_bernoulli = 0.0;  // count uncertainty at this effort, paper-style error bar
    double mean_perm_sq = 0.0;
    std::uint64_t good_outcomes = 0;
    std::uint64_t samples = 0;
    bool used_rejection = true;
};

/**
 * @brief Monte-Carlo estimate of the total probability mass on good outcomes,
 * count_good(n, m) times the mean of |perm(U_T)|^2 over uniformly sampled
 * good outcomes (collision-free, so no occupation factorial enters).
 *
 * Guarded at n <= 8 (permanent cost). Throws std::invalid_argument when the
 * circulant has no good outcome (m < n^2).
 */
MassEstimate estimate_good_probability_mass(const CirculantUnitary& u, std::size_t n,
                                            std::uint64_t samples, const StreamFamily& streams,
                                            const ParallelOptions& par = {});

/// Exact mass by full enumeration of all multisets: sum over good outcomes of
/// |perm(U_T)|^2. Guarded at C(m+n-1, n) <= 10^6 and n <= 8.
double good_probability_mass_exact(const CirculantUnitary& u, std::size_t n);

}  // namespace cbsamp
