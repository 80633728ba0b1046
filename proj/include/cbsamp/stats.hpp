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
#include <vector>

namespace cbsamp {

/// Compensated (Kahan) accumulator.
template <class T>
struct KahanSum {
    T sum{};
    T compensation{};

    void add(T value) {
        const T y = value - compensation;
        const T t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }

    /// Merging keeps only the running sums; partials are folded in a fixed
    /// order by the caller so results stay deterministic.
    void merge(const KahanSum& other) {
        add(other.sum);
        add(other.compensation * T(-1));
    }
};

/// (count, sum, sum-of-squares) triple; merge is associative and commutative
/// up to floating-point rounding, so callers fold partials in block order.
struct MomentAccumulator {
    std::uint64_t count = 0;
    KahanSum<double> sum;
    KahanSum<double> sum_sq;

    void add(double x) {
        ++count;
        sum.add(x);
        sum_sq.add(x * x);
    }

    void merge(const MomentAccumulator& other) {
        count += other.count;
        sum.merge(other.sum);
        sum_sq.merge(other.sum_sq);
    }

    [[nodiscard]] double mean() const { return count ? sum.sum / static_cast<double>(count) : 0.0; }

    /// Unbiased sample variance.
    [[nodiscard]] double variance() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        const double v = (sum_sq.sum - sum.sum * sum.sum / n) / (n - 1.0);
        return v > 0.0 ? v : 0.0;
    }

    [[nodiscard]] double stddev() const { return std::sqrt(variance()); }

    /// Standard error of the mean.
    [[nodiscard]] double stderr_mean() const {
        return count ? stddev() / std::sqrt(static_cast<double>(count)) : 0.0;
    }
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_sigma = 0.0;
    double intercept_sigma = 0.0;
};

/// Weighted least squares y = a + b x with per-point standard deviations.
/// Points with sigma <= 0 get unit weight.
LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& sigma);

/// Upper critical value of the chi-square distribution (Wilson-Hilferty
/// approximation), adequate for dof >= 3 at the 1% level used in tests.
double chi_square_critical(double dof, double alpha);

/// Two-sided Kolmogorov-Smirnov critical value sqrt(-ln(alpha/2)/2)/sqrt(n)
/// (asymptotic form).
double ks_critical(std::uint64_t n, double alpha);

}  // namespace cbsamp
