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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbsamp/errors.hpp"
#include "cbsamp/matrix_core.hpp"
#include "cbsamp/spectra.hpp"
#include "cbsamp/stats.hpp"
#include "test_util.hpp"

using namespace cbsamp;
using cbsamp::testing::multisets_match;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST_SUITE("matrix-core") {

TEST_CASE("dft_matrix degenerate and 2-point values") {
    const ComplexMatrix f1 = dft_matrix(1);
    CHECK(f1.rows() == 1);
    CHECK(std::abs(f1(0, 0) - Complex(1.0, 0.0)) < 1e-15);

    const ComplexMatrix f2 = dft_matrix(2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(0, 0) - Complex(s, 0)) < 1e-15);
    CHECK(std::abs(f2(0, 1) - Complex(s, 0)) < 1e-15);
    CHECK(std::abs(f2(1, 0) - Complex(s, 0)) < 1e-15);
    CHECK(std::abs(f2(1, 1) - Complex(-s, 0)) < 1e-15);
}

TEST_CASE("dft_matrix is unitary") {
    CHECK(unitarity_error(dft_matrix(4)) <= 1e-12);
    CHECK(unitarity_error(dft_matrix(37)) <= 1e-12);
    CHECK(unitarity_error(dft_matrix(64)) <= 1e-12);
    CHECK_THROWS_AS(dft_matrix(0), std::invalid_argument);
}

TEST_CASE("random_phases determinism and range") {
    StreamFamily streams(99, "phases");
    RandomStream a = streams.at(0);
    RandomStream b = streams.at(0);
    const PhaseVector pa = random_phases(8, a);
    const PhaseVector pb = random_phases(8, b);
    REQUIRE(pa.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(pa.phases[i] == pb.phases[i]);
        CHECK(pa.phases[i] >= 0.0);
        CHECK(pa.phases[i] < two_pi);
    }
    CHECK_THROWS_AS(random_phases(0, a), std::invalid_argument);
}

TEST_CASE("random_phases uniform moments and KS statistic") {
    const std::size_t m = 100'000;
    RandomStream rng = StreamFamily(7, "phases-ks").at(0);
    PhaseVector p = random_phases(m, rng);

    MomentAccumulator acc;
    for (double phi : p.phases) acc.add(phi);
    const double sigma = (two_pi / std::sqrt(12.0)) / std::sqrt(static_cast<double>(m));
    CHECK(std::abs(acc.mean() - std::numbers::pi) < 4.0 * sigma);

    std::sort(p.phases.begin(), p.phases.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double cdf = p.phases[i] / two_pi;
        const double hi = static_cast<double>(i + 1) / static_cast<double>(m);
        const double lo = static_cast<double>(i) / static_cast<double>(m);
        ks = std::max(ks, std::max(std::abs(hi - cdf), std::abs(cdf - lo)));
    }
    CHECK(ks < ks_critical(m, 0.01));
}

TEST_CASE("circulant with zero phases is the identity") {
    PhaseVector p;
    p.phases.assign(6, 0.0);
    const CirculantUnitary u = CirculantUnitary::from_phases(p);
    const ComplexMatrix dense = u.dense();
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) {
            CHECK(std::abs(dense(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("circulant matches the explicit F diag(exp(i phi)) F^dagger product") {
    // Oracle: the dense similarity product computed with independent Eigen ops.
    PhaseVector p;
    p.phases = {0.0, 0.0, std::numbers::pi};
    const CirculantUnitary u = CirculantUnitary::from_phases(p);

    const ComplexMatrix f = dft_matrix(3);
    ComplexMatrix phi = ComplexMatrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) phi(j, j) = std::polar(1.0, p.phases[static_cast<std::size_t>(j)]);
    const ComplexMatrix expected = f * phi * f.adjoint();

    CHECK((u.dense() - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("circulant eigenvalues are the phase factors") {
    for (std::size_t m : {5, 8, 64}) {
        RandomStream rng = StreamFamily(3, "circ-spectrum").at(m);
        const CirculantUnitary u = CirculantUnitary::sample(m, rng);
        std::vector<Complex> expected;
        expected.reserve(m);
        for (double phi : u.phases().phases) expected.push_back(std::polar(1.0, phi));
        CHECK(multisets_match(eigenvalues(u.dense()), expected, 1e-8));
    }
}

TEST_CASE("circulant shift structure is exact and rows are unit norm") {
    RandomStream rng = StreamFamily(4, "circ-shift").at(0);
    const CirculantUnitary u = CirculantUnitary::sample(32, rng);
    const ComplexMatrix dense = u.dense();
    for (std::size_t a = 0; a < 32; ++a) {
        for (std::size_t b = 0; b < 32; ++b) {
            CHECK(dense(a, b) == dense((a + 1) % 32, (b + 1) % 32));  // same stored value
        }
    }
    double norm_sq = 0.0;
    for (const Complex& c : u.first_row()) norm_sq += std::norm(c);
    CHECK(std::abs(norm_sq - 1.0) < 1e-10);
    CHECK(unitarity_error(dense) <= 1e-10);
}

TEST_CASE("fast first-row path agrees with direct summation") {
    for (std::size_t m : {8, 64, 256}) {
        RandomStream rng = StreamFamily(5, "circ-fast").at(m);
        const PhaseVector p = random_phases(m, rng);
        const CirculantUnitary direct = CirculantUnitary::from_phases(p);
        const CirculantUnitary fast = CirculantUnitary::from_phases_fast(p);
        double gap = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            gap = std::max(gap, std::abs(direct.first_row()[k] - fast.first_row()[k]));
        CHECK(gap <= 1e-10);
    }
}

TEST_CASE("idft_radix2 equals idft_direct on random data") {
    RandomStream rng = StreamFamily(6, "idft").at(0);
    std::vector<Complex> data(128);
    for (Complex& z : data) z = Complex(rng.normal(), rng.normal());
    const auto direct = detail::idft_direct(data);
    const auto fast = detail::idft_radix2(data);
    for (std::size_t k = 0; k < data.size(); ++k) CHECK(std::abs(direct[k] - fast[k]) <= 1e-12);
    CHECK_THROWS_AS(detail::idft_radix2(std::vector<Complex>(12)), std::invalid_argument);
}

TEST_CASE("haar_unitary basics") {
    RandomStream rng = StreamFamily(8, "haar").at(0);
    const ComplexMatrix u1 = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

    const ComplexMatrix u16 = haar_unitary(16, rng);
    CHECK(unitarity_error(u16) <= 1e-10);
}

TEST_CASE("haar second moment E|U_00|^2 = 1/m") {
    const std::size_t m = 8;
    const std::uint64_t draws = 10'000;
    StreamFamily streams(9, "haar-moment");
    MomentAccumulator acc;
    for (std::uint64_t i = 0; i < draws; ++i) {
        RandomStream rng = streams.at(i);
        acc.add(std::norm(haar_unitary(m, rng)(0, 0)));
    }
    CHECK(std::abs(acc.mean() - 1.0 / static_cast<double>(m)) < 4.0 * acc.stderr_mean());
}

TEST_CASE("haar_truncation matches the full-unitary truncation distribution") {
    // Moment check: truncation entries should also have E|t_ij|^2 = 1/m, and
    // all its eigenvalues must stay inside the closed unit disk.
    const std::size_t n = 3, m = 12;
    StreamFamily streams(10, "haar-trunc");
    MomentAccumulator corner;
    for (std::uint64_t i = 0; i < 4000; ++i) {
        RandomStream rng = streams.at(i);
        const ComplexMatrix t = haar_truncation(n, m, rng);
        corner.add(std::norm(t(1, 2)));
        for (const Complex& lambda : eigenvalues(t)) CHECK(std::abs(lambda) <= 1.0 + 1e-8);
    }
    CHECK(std::abs(corner.mean() - 1.0 / static_cast<double>(m)) < 4.0 * corner.stderr_mean());
}

TEST_CASE("ginibre moments and determinism") {
    const std::size_t n = 4, m_norm = 16;
    StreamFamily streams(11, "ginibre");
    MomentAccumulator abs_sq, real_part, imag_part;
    for (std::uint64_t i = 0; i < 6'250; ++i) {  // 10^5 entries in total
        RandomStream rng = streams.at(i);
        const ComplexMatrix g = ginibre_matrix(n, m_norm, rng);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                abs_sq.add(std::norm(g(r, c)));
                real_part.add(g(r, c).real());
                imag_part.add(g(r, c).imag());
            }
        }
    }
    CHECK(std::abs(abs_sq.mean() - 1.0 / 16.0) < 4.0 * abs_sq.stderr_mean());
    CHECK(std::abs(real_part.mean()) < 4.0 * real_part.stderr_mean());
    CHECK(std::abs(imag_part.mean()) < 4.0 * imag_part.stderr_mean());

    RandomStream r1 = streams.at(77);
    RandomStream r2 = streams.at(77);
    CHECK(ginibre_matrix(3, 9, r1) == ginibre_matrix(3, 9, r2));
}

TEST_CASE("truncate on identity and on circulants") {
    const ComplexMatrix eye = ComplexMatrix::Identity(4, 4);
    const InputConfiguration inputs = InputConfiguration::contiguous(2);
    const OutputConfiguration same(4, {0, 1});
    CHECK((truncate(eye, inputs, same) - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    RandomStream rng = StreamFamily(12, "trunc").at(0);
    const CirculantUnitary u = CirculantUnitary::sample(9, rng);
    const OutputConfiguration s(9, {2, 5, 7});
    const ComplexMatrix t = truncate(u, InputConfiguration::contiguous(3), s);
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
            CHECK(t(a, b) == u.first_row()[(s.modes[b] + 9 - a) % 9]);
        }
    }

    const OutputConfiguration collision(4, {0, 0});
    const ComplexMatrix dup = truncate(eye, inputs, collision);
    CHECK(dup.col(0) == dup.col(1));

    CHECK_THROWS_AS(truncate(eye, inputs, OutputConfiguration(5, {0, 4})), std::invalid_argument);
    CHECK_THROWS_AS(truncate(eye, inputs, OutputConfiguration(4, {0, 1, 2})), std::invalid_argument);
}

TEST_CASE("matrix JSON round trip") {
    RandomStream rng = StreamFamily(13, "json").at(0);
    const ComplexMatrix a = cbsamp::testing::random_complex_matrix(3, rng);
    const ComplexMatrix back = matrix_from_json(matrix_to_json(a));
    CHECK(a == back);

    nlohmann::json bad = {{"rows", 2}, {"cols", 2}, {"entries", {1.0, 0.0}}};
    CHECK_THROWS_AS(matrix_from_json(bad), std::invalid_argument);
}

}  // TEST_SUITE
