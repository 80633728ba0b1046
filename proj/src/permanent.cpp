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

#include "cbsamp/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cbsamp/errors.hpp"
#include "cbsamp/stats.hpp"

namespace cbsamp {

namespace {

int square_size(const ComplexMatrix& a, const char* who, int limit) {
    if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
    const auto n = a.rows();
    if (n < 1) throw std::invalid_argument(std::string(who) + ": matrix must be non-empty");
    if (n > limit)
        throw GuardError(std::string(who) + ": refused, n = " + std::to_string(n) +
                         " exceeds cost guard n <= " + std::to_string(limit));
    return static_cast<int>(n);
}

}  // namespace

Complex permanent_naive(const ComplexMatrix& a) {
    const int n = square_size(a, "permanent_naive", 10);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex total(0.0, 0.0);
    do {
        Complex product(1.0, 0.0);
        for (int i = 0; i < n; ++i) product *= a(i, perm[i]);
        total += product;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

Complex permanent_ryser(const ComplexMatrix& a) {
    const int n = square_size(a, "permanent_ryser", 30);

    // perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij.
    // Subsets are visited in Gray-code order so each step adjusts the row
    // sums by a single column.
    std::vector<Complex> row_sum(static_cast<std::size_t>(n), Complex(0.0, 0.0));
    KahanSum<Complex> total;
    std::uint64_t gray = 0;
    const std::uint64_t end = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < end; ++k) {
        const std::uint64_t next_gray = k ^ (k >> 1);
        const std::uint64_t changed = next_gray ^ gray;
        const int j = std::countr_zero(changed);
        if (next_gray & changed) {
            for (int i = 0; i < n; ++i) row_sum[static_cast<std::size_t>(i)] += a(i, j);
        } else {
            for (int i = 0; i < n; ++i) row_sum[static_cast<std::size_t>(i)] -= a(i, j);
        }
        gray = next_gray;

        Complex product(1.0, 0.0);
        for (int i = 0; i < n; ++i) product *= row_sum[static_cast<std::size_t>(i)];
        const double subset_sign = (std::popcount(gray) & 1) ? -1.0 : 1.0;
        total.add(subset_sign * product);
    }
    const double outer_sign = (n & 1) ? -1.0 : 1.0;
    return outer_sign * total.sum;
}

double expected_gaussian_permanent_sq(std::uint64_t n, std::uint64_t m) {
    if (n == 0 || m == 0)
        throw std::invalid_argument("expected_gaussian_permanent_sq: n, m must be positive");
    const double log_value = std::lgamma(static_cast<double>(n) + 1.0) -
                             static_cast<double>(n) * std::log(static_cast<double>(m));
    return std::exp(log_value);
}

}  // namespace cbsamp
