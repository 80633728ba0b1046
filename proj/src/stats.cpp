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

#include "cbsamp/stats.hpp"

#include <stdexcept>

namespace cbsamp {

LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& sigma) {
    if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
        throw std::invalid_argument("weighted_linear_fit: need matching arrays of size >= 2");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = sigma[i] > 0 ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    const double delta = sw * swxx - swx * swx;
    if (delta == 0.0) throw std::invalid_argument("weighted_linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (sw * swxy - swx * swy) / delta;
    fit.intercept = (swxx * swy - swx * swxy) / delta;
    fit.slope_sigma = std::sqrt(sw / delta);
    fit.intercept_sigma = std::sqrt(swxx / delta);
    return fit;
}

double chi_square_critical(double dof, double alpha) {
    if (dof <= 0 || alpha <= 0 || alpha >= 1)
        throw std::invalid_argument("chi_square_critical: bad arguments");
    // Upper-tail normal quantile via Acklam-style rational approximation.
    const double p = 1.0 - alpha;
    auto normal_quantile = [](double q) {
        // Beasley-Springer-Moro
        static const double a[] = {2.50662823884, -18.61500062529, 41.39119773534, -25.44106049637};
        static const double b[] = {-8.47351093090, 23.08336743743, -21.06224101826, 3.13082909833};
        static const double c[] = {0.3374754822726147, 0.9761690190917186, 0.1607979714918209,
                                   0.0276438810333863, 0.0038405729373609, 0.0003951896511919,
                                   0.0000321767881768, 0.0000002888167364, 0.0000003960315187};
        const double u = q - 0.5;
        if (std::abs(u) < 0.42) {
            const double r = u * u;
            return u * (((a[3] * r + a[2]) * r + a[1]) * r + a[0]) /
                   ((((b[3] * r + b[2]) * r + b[1]) * r + b[0]) * r + 1.0);
        }
        double r = (u > 0) ? 1.0 - q : q;
        r = std::log(-std::log(r));
        double v = c[0];
        double power = 1.0;
        for (int i = 1; i < 9; ++i) {
            power *= r;
            v += c[i] * power;
        }
        return (u > 0) ? v : -v;
    };
    const double z = normal_quantile(p);
    // Wilson-Hilferty cube approximation.
    const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
    return dof * t * t * t;
}

double ks_critical(std::uint64_t n, double alpha) {
    if (n == 0 || alpha <= 0 || alpha >= 1) throw std::invalid_argument("ks_critical: bad arguments");
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

}  // namespace cbsamp
