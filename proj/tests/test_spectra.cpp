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

#include <cmath>
#include <numbers>

#include "cbsamp/errors.hpp"
#include "cbsamp/spectra.hpp"
#include "cbsamp/stats.hpp"
#include "test_util.hpp"

using namespace cbsamp;
using cbsamp::testing::multisets_match;

TEST_SUITE("spectra") {

TEST_CASE("eigenvalues of a diagonal matrix") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = Complex(1, 0);
    d(1, 1) = Complex(0, 1);
    d(2, 2) = Complex(-1, 0);
    CHECK(multisets_match(eigenvalues(d), {Complex(1, 0), Complex(0, 1), Complex(-1, 0)}, 1e-12));

    CHECK_THROWS_AS(eigenvalues(ComplexMatrix::Ones(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(eigenvalues(ComplexMatrix::Identity(65, 65)), GuardError);
}

TEST_CASE("circulant spectrum through the solver") {
    RandomStream rng = StreamFamily(51, "spectrum").at(0);
    const CirculantUnitary u = CirculantUnitary::sample(8, rng);
    std::vector<Complex> expected;
    for (double phi : u.phases().phases) expected.push_back(std::polar(1.0, phi));
    CHECK(multisets_match(eigenvalues(u.dense()), expected, 1e-8));
}

TEST_CASE("truncations of unitaries are contractions") {
    StreamFamily streams(52, "contraction");
    for (std::uint64_t i = 0; i < 50; ++i) {
        RandomStream rng = streams.at(i);
        const ComplexMatrix t = haar_truncation(4, 9, rng);
        for (const Complex& lambda : eigenvalues(t)) CHECK(std::abs(lambda) <= 1.0 + 1e-8);
    }
}

TEST_CASE("histogram basics") {
    Histogram2D empty(64, 1.0);
    CHECK(empty.total() == 0);

    Histogram2D h(64, 1.0);
    h.add(Complex(0.0, 0.0));
    CHECK(h.total() == 1);
    CHECK(h.overflow() == 0);
    std::uint64_t occupied = 0;
    for (std::uint64_t c : h.counts()) occupied += (c != 0);
    CHECK(occupied == 1);

    h.add(Complex(2.5, 0.0));  // clamped into a boundary bin
    CHECK(h.total() == 2);
    CHECK(h.overflow() == 1);
    std::uint64_t sum = 0;
    for (std::uint64_t c : h.counts()) sum += c;
    CHECK(sum == h.total());
}

TEST_CASE("uniform disk points match the area measure") {
    // Oracle: cell masses from a fine quadrature of the disk indicator.
    const std::size_t bins = 8;
    const double r = 1.1;
    StreamFamily streams(53, "disk");
    RandomStream rng = streams.at(0);
    Histogram2D h(bins, r);
    const std::uint64_t draws = 10'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const double radius = std::sqrt(rng.uniform());
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        h.add(std::polar(radius, theta));
    }
    CHECK(h.overflow() == 0);

    const double cell = 2.0 * r / static_cast<double>(bins);
    const int sub = 64;
    double chi_sq = 0.0;
    double dof = 0.0;
    for (std::size_t iy = 0; iy < bins; ++iy) {
        for (std::size_t ix = 0; ix < bins; ++ix) {
            std::uint64_t inside = 0;
            for (int sy = 0; sy < sub; ++sy) {
                for (int sx = 0; sx < sub; ++sx) {
                    const double x = -r + cell * (static_cast<double>(ix) + (sx + 0.5) / sub);
                    const double y = -r + cell * (static_cast<double>(iy) + (sy + 0.5) / sub);
                    inside += (x * x + y * y <= 1.0);
                }
            }
            const double mass = static_cast<double>(inside) / (sub * sub) * cell * cell / std::numbers::pi;
            const double expected = mass * static_cast<double>(draws);
            if (expected < 10.0) continue;  // chi-square needs populated cells
            const double observed = static_cast<double>(h.counts()[iy * bins + ix]);
            chi_sq += (observed - expected) * (observed - expected) / expected;
            dof += 1.0;
        }
    }
    CHECK(chi_sq < chi_square_critical(dof - 1.0, 0.01));
}

TEST_CASE("fidelity closed forms") {
    Histogram2D h(16, 1.0);
    RandomStream rng = StreamFamily(54, "fid").at(0);
    for (int i = 0; i < 500; ++i) h.add(Complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)));
    CHECK(fidelity(h, h) == doctest::Approx(1.0).epsilon(1e-12));

    Histogram2D left(2, 1.0), right(2, 1.0), both(2, 1.0);
    left.add(Complex(-0.5, -0.5));
    left.add(Complex(-0.5, -0.5));
    right.add(Complex(0.5, 0.5));
    both.add(Complex(-0.5, -0.5));
    both.add(Complex(0.5, 0.5));
    CHECK(fidelity(left, right) == 0.0);                                      // disjoint support
    CHECK(fidelity(both, left) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(fidelity(both, left) == fidelity(left, both));

    Histogram2D other_bins(4, 1.0);
    other_bins.add(Complex(0, 0));
    CHECK_THROWS_AS(fidelity(left, other_bins), std::invalid_argument);
    Histogram2D never_filled(2, 1.0);
    CHECK_THROWS_AS(fidelity(left, never_filled), std::invalid_argument);
}

TEST_CASE("histogram merge is bin-wise and binning-checked") {
    Histogram2D a(8, 1.0), b(8, 1.0);
    RandomStream rng = StreamFamily(55, "merge").at(0);
    for (int i = 0; i < 100; ++i) a.add(Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    for (int i = 0; i < 150; ++i) b.add(Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    Histogram2D ab = a;
    ab.merge(b);
    Histogram2D ba = b;
    ba.merge(a);
    CHECK(ab.total() == 250);
    for (std::size_t i = 0; i < ab.counts().size(); ++i) CHECK(ab.counts()[i] == ba.counts()[i]);

    Histogram2D fresh;  // default-constructed merges by adoption
    fresh.merge(a);
    CHECK(fresh.total() == a.total());
    Histogram2D mismatched(4, 1.0);
    CHECK_THROWS_AS(mismatched.merge(a), std::invalid_argument);
}

TEST_CASE("bootstrap sigma shrinks with sample count") {
    StreamFamily streams(56, "boot");
    auto build = [&](std::uint64_t points, std::uint64_t salt) {
        Histogram2D h(16, 1.1);
        RandomStream rng = streams.sub(salt).at(0);
        for (std::uint64_t i = 0; i < points; ++i)
            h.add(Complex(0.4 * rng.normal(), 0.4 * rng.normal()));
        return h;
    };
    const Histogram2D small_a = build(500, 1), small_b = build(500, 2);
    const Histogram2D big_a = build(20'000, 3), big_b = build(20'000, 4);
    RandomStream r1 = streams.sub("sig").at(0);
    RandomStream r2 = streams.sub("sig").at(1);
    const double sigma_small = fidelity_sigma_bootstrap(small_a, small_b, 24, r1);
    const double sigma_big = fidelity_sigma_bootstrap(big_a, big_b, 24, r2);
    CHECK(sigma_small > sigma_big);
    CHECK(sigma_big > 0.0);
}

TEST_CASE("eigen fidelity experiment: determinism and worker invariance") {
    const std::vector<std::pair<Ensemble, Ensemble>> pairs = {
        {Ensemble::circulant, Ensemble::gaussian},
        {Ensemble::haar, Ensemble::circulant},
    };
    EigenFidelityOptions opts;
    opts.bins_per_axis = 32;
    StreamFamily streams(57, "eigen-exp");
    const auto a = eigen_fidelity_experiment(3, 9, pairs, 600, opts, streams, ParallelOptions{1});
    const auto b = eigen_fidelity_experiment(3, 9, pairs, 600, opts, streams, ParallelOptions{4});
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fidelity == b[i].fidelity);  // bit-identical across workers
        CHECK(a[i].sigma == b[i].sigma);
        CHECK(a[i].fidelity >= 0.0);
        CHECK(a[i].fidelity <= 1.0);
    }

    CHECK_THROWS_WITH_AS(
        eigen_fidelity_experiment(3, 8, pairs, 100, opts, streams, ParallelOptions{1}),
        doctest::Contains("m >= n^2"), std::invalid_argument);
}

TEST_CASE("variation distance probe: null test and shape") {
    StreamFamily streams(58, "tv");
    const auto null_probe =
        variation_distance_probe(2, 64, 20'000, 32, Ensemble::gaussian, streams.sub("null"));
    CHECK(null_probe.marginal_tv.size() == 8);  // 2 n^2 coordinates
    CHECK(null_probe.max_marginal_tv <= 2.0 * null_probe.tv_noise_floor);

    const auto circ_probe =
        variation_distance_probe(2, 16, 20'000, 32, Ensemble::circulant, streams.sub("circ"));
    CHECK(circ_probe.max_marginal_tv > null_probe.max_marginal_tv);
    // intensity correlations carry the unitarity constraint, about -1/(m-1)
    CHECK(circ_probe.max_intensity_correlation ==
          doctest::Approx(1.0 / 15.0).epsilon(0.5));

    CHECK_THROWS_AS(variation_distance_probe(3, 8, 100, 32, Ensemble::circulant, streams),
                    std::invalid_argument);

    const auto again =
        variation_distance_probe(2, 16, 20'000, 32, Ensemble::circulant, streams.sub("circ"),
                                 ParallelOptions{4});
    CHECK(again.max_marginal_tv == circ_probe.max_marginal_tv);
    CHECK(again.max_intensity_correlation == circ_probe.max_intensity_correlation);
}

}  // TEST_SUITE
