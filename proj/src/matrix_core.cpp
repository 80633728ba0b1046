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

#include "cbsamp/matrix_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cbsamp/errors.hpp"

namespace cbsamp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

void PhaseVector::validate() const {
    if (phases.empty()) throw std::invalid_argument("PhaseVector: m must be positive");
    for (double phi : phases) {
        if (!(phi >= 0.0 && phi < two_pi))
            throw std::invalid_argument("PhaseVector: phase outside [0, 2*pi)");
    }
}

PhaseVector random_phases(std::size_t m, RandomStream& rng) {
    if (m == 0) throw std::invalid_argument("random_phases: m must be positive");
    PhaseVector p;
    p.phases.resize(m);
    for (double& phi : p.phases) phi = rng.uniform() * two_pi;
    return p;
}

namespace detail {

std::vector<Complex> idft_direct(const std::vector<Complex>& in) {
    const std::size_t m = in.size();
    // Exact root table: omega^t for t < m; exponents reduced mod m so no
    // accumulated phase drift enters the sum.
    std::vector<Complex> roots(m);
    for (std::size_t t = 0; t < m; ++t) roots[t] = std::polar(1.0, two_pi * static_cast<double>(t) / static_cast<double>(m));
    std::vector<Complex> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < m; ++j) acc += in[j] * roots[(j * k) % m];
        out[k] = acc / static_cast<double>(m);
    }
    return out;
}

std::vector<Complex> idft_radix2(const std::vector<Complex>& in) {
    const std::size_t n = in.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("idft_radix2: size must be a power of two");
    std::vector<Complex> a = in;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // One twiddle table for the whole transform; level `len` strides it by n/len.
    std::vector<Complex> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, two_pi * static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex w = twiddle[k * stride];
                const Complex u = a[base + k];
                const Complex v = a[base + k + len / 2] * w;
                a[base + k] = u + v;
                a[base + k + len / 2] = u - v;
            }
        }
    }

    const double scale = 1.0 / static_cast<double>(n);
    for (Complex& z : a) z *= scale;
    return a;
}

}  // namespace detail

namespace {

std::vector<Complex> phase_exponentials(const PhaseVector& phases) {
    std::vector<Complex> z(phases.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = std::polar(1.0, phases.phases[j]);
    return z;
}

}  // namespace

CirculantUnitary CirculantUnitary::from_phases(PhaseVector phases) {
    phases.validate();
    auto first_row = detail::idft_direct(phase_exponentials(phases));
    return CirculantUnitary(std::move(phases), std::move(first_row));
}

CirculantUnitary CirculantUnitary::from_phases_fast(PhaseVector phases) {
    phases.validate();
    auto z = phase_exponentials(phases);
    auto first_row = is_power_of_two(z.size()) ? detail::idft_radix2(z) : detail::idft_direct(z);
    return CirculantUnitary(std::move(phases), std::move(first_row));
}

CirculantUnitary CirculantUnitary::sample(std::size_t m, RandomStream& rng) {
    return from_phases_fast(random_phases(m, rng));
}

ComplexMatrix CirculantUnitary::dense() const {
    const std::size_t m = modes();
    ComplexMatrix u(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) u(a, b) = first_row_[(b + m - a) % m];
    }
    return u;
}

ComplexMatrix dft_matrix(std::size_t m) {
    if (m == 0) throw std::invalid_argument("dft_matrix: m must be positive");
    ComplexMatrix f(m, m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            // Exponent reduced mod m before evaluating the angle.
            const std::size_t t = (j * k) % m;
            f(j, k) = norm * std::polar(1.0, -two_pi * static_cast<double>(t) / static_cast<double>(m));
        }
    }
    return f;
}

namespace {

ComplexMatrix standard_complex_ginibre(std::size_t rows, std::size_t cols, RandomStream& rng) {
    ComplexMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
    }
    return a;
}

/// QR with the R-diagonal phase correction Q.col(j) *= R_jj/|R_jj|, which
/// yields the Q factor of the unique positive-diagonal decomposition.
ComplexMatrix haar_frame(std::size_t rows, std::size_t cols, RandomStream& rng) {
    const ComplexMatrix a = standard_complex_ginibre(rows, cols, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    const auto r_diag = qr.matrixQR().diagonal();
    for (std::size_t j = 0; j < cols; ++j) {
        const Complex r = r_diag(static_cast<Eigen::Index>(j));
        const double mag = std::abs(r);
        if (mag == 0.0) throw NumericalError("haar sampling: zero R diagonal (degenerate draw)");
        q.col(static_cast<Eigen::Index>(j)) *= r / mag;
    }
    return q;
}

}  // namespace

ComplexMatrix haar_unitary(std::size_t m, RandomStream& rng) {
    if (m == 0) throw std::invalid_argument("haar_unitary: m must be positive");
    return haar_frame(m, m, rng);
}

ComplexMatrix haar_truncation(std::size_t n, std::size_t m, RandomStream& rng) {
    if (n == 0 || m < n) throw std::invalid_argument("haar_truncation: need 1 <= n <= m");
    const ComplexMatrix frame = haar_frame(m, n, rng);
    return frame.topRows(static_cast<Eigen::Index>(n));
}

ComplexMatrix ginibre_matrix(std::size_t n, std::size_t m_norm, RandomStream& rng) {
    if (n == 0 || m_norm == 0) throw std::invalid_argument("ginibre_matrix: n, m_norm must be positive");
    const double sigma = std::sqrt(1.0 / (2.0 * static_cast<double>(m_norm)));
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = Complex(sigma * rng.normal(), sigma * rng.normal());
    }
    return a;
}

namespace {

void check_truncation_args(std::size_t m, const InputConfiguration& inputs,
                           const OutputConfiguration& outcome) {
    inputs.validate(m);
    if (outcome.m != m) throw std::invalid_argument("truncate: outcome mode count mismatch");
    if (outcome.photons() != inputs.photons())
        throw std::invalid_argument("truncate: outcome must have exactly n entries");
    for (std::uint32_t mode : outcome.modes) {
        if (mode >= m) throw std::invalid_argument("truncate: output mode out of range");
    }
}

}  // namespace

ComplexMatrix truncate(const ComplexMatrix& u, const InputConfiguration& inputs,
                       const OutputConfiguration& outcome) {
    if (u.rows() != u.cols()) throw std::invalid_argument("truncate: matrix must be square");
    check_truncation_args(static_cast<std::size_t>(u.rows()), inputs, outcome);
    const std::size_t n = inputs.photons();
    ComplexMatrix t(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) t(a, b) = u(inputs.modes[a], outcome.modes[b]);
    }
    return t;
}

ComplexMatrix truncate(const CirculantUnitary& u, const InputConfiguration& inputs,
                       const OutputConfiguration& outcome) {
    check_truncation_args(u.modes(), inputs, outcome);
    const std::size_t n = inputs.photons();
    ComplexMatrix t(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) t(a, b) = u.entry(inputs.modes[a], outcome.modes[b]);
    }
    return t;
}

}  // namespace cbsamp
