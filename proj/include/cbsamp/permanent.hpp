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

#include "cbsamp/matrix.hpp"

namespace cbsamp {

/**
 * @brief Permanent by explicit enumeration of all n! permutations.
 *
 * The slow oracle: O(n! n) cost, guarded at n <= 10. Throws
 * std::invalid_argument for non-square input and GuardError above the limit.
 */
Complex permanent_naive(const ComplexMatrix& a);

/**
 * @brief Permanent via Ryser's inclusion-exclusion in Gray-code order.
 *
 * Each subset step updates one column in the running row sums, so the total
 * cost is O(n 2^n). The outer alternating sum is accumulated with compensated
 * (Kahan) summation. Guarded at n <= 30.
 */
Complex permanent_ryser(const ComplexMatrix& a);

/// n!/m^n, the i.i.d.-Gaussian reference value for E|perm(X)|^2 when
/// E|x_ij|^2 = 1/m. Evaluated in log space; overflow-safe.
double expected_gaussian_permanent_sq(std::uint64_t n, std::uint64_t m);

}  // namespace cbsamp
