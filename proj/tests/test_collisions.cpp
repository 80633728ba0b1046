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
#include <map>
#include <vector>

#include "cbsamp/collisions.hpp"
#include "cbsamp/errors.hpp"
#include "cbsamp/stats.hpp"
#include "test_util.hpp"

using namespace cbsamp;

TEST_SUITE("collisions") {

TEST_CASE("circular_distance") {
    CHECK(circular_distance(3, 3, 7) == 0);
    CHECK(circular_distance(0, 6, 7) == 1);  // wraparound
    CHECK(circular_distance(0, 4, 8) == 4);  // antipodal
    CHECK(circular_distance(1, 5, 12) == 4);
    CHECK_THROWS_AS(circular_distance(8, 0, 8), std::invalid_argument);
}

TEST_CASE("good outcome examples at n = 2, m = 6") {
    CHECK(is_good_outcome(OutputConfiguration(6, {0, 3}), 2, 6));
    CHECK_FALSE(is_good_outcome(OutputConfiguration(6, {0, 1}), 2, 6));  // distance 1 < 2
    CHECK_FALSE(is_good_outcome(OutputConfiguration(6, {2, 2}), 2, 6));  // collision
    CHECK(is_good_outcome(OutputConfiguration(5, {1}), 1, 5));           // single photon
}

TEST_CASE("predicate characterizations agree exhaustively (n <= 4, m <= 20)") {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t m = 1; m <= 20; ++m) {
            for_each_multiset(n, m, [&](const std::vector<std::uint32_t>& modes) {
                OutputConfiguration s(static_cast<std::uint32_t>(m), modes);
                REQUIRE(is_good_outcome(s, n, m) == is_good_outcome_index_pattern(s, n, m));
            });
        }
    }
}

TEST_CASE("exact counts against enumeration oracles") {
    CHECK(count_good_outcomes_exact(2, 4) == 2);  // {0,2} and {1,3}
    CHECK(count_good_outcomes_exact(2, 6) == 9);
    CHECK(count_good_outcomes_closed_form(2, 6) == 9);  // (6/4)*C(4,2)
    for (std::size_t m = 1; m <= 12; ++m) CHECK(count_good_outcomes_exact(1, m) == m);
    CHECK_THROWS_AS(count_good_outcomes_exact(8, 100), GuardError);
}

TEST_CASE("closed-form gap count equals enumeration for n <= 4, m <= 40") {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t m = 1; m <= 40; ++m) {
            if (m > n * (n - 1)) {
                CHECK(count_good_outcomes_exact(n, m) == count_good_outcomes_closed_form(n, m));
            }
            if (m < n * n) {
                CHECK(count_good_outcomes_exact(n, m) <= n);  // boundary packing bound
            }
        }
    }
}

TEST_CASE("n_good_formula closed-form examples") {
    // n = 2 cases where the product formula reproduces the exact fraction.
    const double exact_m6 =
        static_cast<double>(count_good_outcomes_exact(2, 6)) / static_cast<double>(multiset_count(2, 6));
    CHECK(n_good_formula(2, 6) == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    CHECK(n_good_formula(2, 6) == doctest::Approx(exact_m6).epsilon(1e-15));

    const double exact_m4 =
        static_cast<double>(count_good_outcomes_exact(2, 4)) / static_cast<double>(multiset_count(2, 4));
    CHECK(n_good_formula(2, 4) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(n_good_formula(2, 4) == doctest::Approx(exact_m4).epsilon(1e-15));

    for (std::size_t m : {3, 9, 20}) CHECK(n_good_formula(1, m) == doctest::Approx(1.0));
    CHECK(n_good_formula(3, 5) == 0.0);  // numerator factor hits zero
}

TEST_CASE("n_good_laurent values and breakdown") {
    CHECK(n_good_laurent(3, 3600) == doctest::Approx(0.99).epsilon(1e-12));
    CHECK(n_good_laurent(2, 12) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("formula converges to the exact fraction, Laurent remainder bounded") {
    double c_fit = 0.0;
    for (std::size_t n = 2; n <= 4; ++n) {
        const double n3 = static_cast<double>(n) * n * n;
        for (int k = 0; k < 4; ++k) {
            const std::size_t m = static_cast<std::size_t>(50.0 * n3) << k;
            const double formula = n_good_formula(n, m);
            const double exact = good_fraction_closed_form(n, m);
            CHECK(std::abs(formula - exact) <= 0.02 * exact);
            const double remainder = std::abs(formula - n_good_laurent(n, m));
            c_fit = std::max(c_fit, remainder * static_cast<double>(m) * static_cast<double>(m) /
                                        (n3 * static_cast<double>(n) * n));
        }
    }
    MESSAGE("fitted remainder constant C = ", c_fit);
    CHECK(c_fit < 1000.0);
    // the fitted constant bounds every sweep point by construction
    for (std::size_t n = 2; n <= 4; ++n) {
        const double n5 = std::pow(static_cast<double>(n), 5);
        for (int k = 0; k < 4; ++k) {
            const std::size_t m = static_cast<std::size_t>(50.0 * n * n * n) << k;
            const double remainder = std::abs(n_good_formula(n, m) - n_good_laurent(n, m));
            CHECK(remainder <= c_fit * n5 / (static_cast<double>(m) * static_cast<double>(m)) + 1e-15);
        }
    }
}

TEST_CASE("uniform multiset sampler hits every outcome equally") {
    // n = 2, m = 3: all 6 multisets equiprobable (chi-square at 1%).
    StreamFamily streams(31, "multiset");
    std::map<std::vector<std::uint32_t>, std::uint64_t> hist;
    const std::uint64_t draws = 60'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        RandomStream rng = streams.at(i);
        ++hist[sample_outcome_uniform(2, 3, rng).modes];
    }
    CHECK(hist.size() == 6);
    const double expected = static_cast<double>(draws) / 6.0;
    double chi_sq = 0.0;
    for (const auto& [modes, count] : hist) {
        const double delta = static_cast<double>(count) - expected;
        chi_sq += delta * delta / expected;
    }
    CHECK(chi_sq < chi_square_critical(5.0, 0.01));
}

TEST_CASE("uniform sampler at n = 1 is uniform over modes") {
    StreamFamily streams(32, "single");
    const std::size_t m = 10;
    std::vector<std::uint64_t> counts(m, 0);
    const std::uint64_t draws = 100'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        RandomStream rng = streams.at(i);
        ++counts[sample_outcome_uniform(1, m, rng).modes[0]];
    }
    const double expected = static_cast<double>(draws) / static_cast<double>(m);
    double chi_sq = 0.0;
    for (std::uint64_t c : counts) {
        const double delta = static_cast<double>(c) - expected;
        chi_sq += delta * delta / expected;
    }
    CHECK(chi_sq < chi_square_critical(static_cast<double>(m - 1), 0.01));

    RandomStream a = streams.at(5);
    RandomStream b = streams.at(5);
    CHECK(sample_outcome_uniform(3, 20, a).modes == sample_outcome_uniform(3, 20, b).modes);
}

TEST_CASE("good outcome sampler: rejection branch is uniform over good outcomes") {
    // n = 2, m = 6 has 9 good outcomes and acceptance ~ 0.43.
    StreamFamily streams(33, "good-sampler");
    std::map<std::vector<std::uint32_t>, std::uint64_t> hist;
    const std::uint64_t draws = 90'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        RandomStream rng = streams.at(i);
        const OutputConfiguration s = sample_good_outcome(2, 6, rng);
        REQUIRE(is_good_outcome(s, 2, 6));
        ++hist[s.modes];
    }
    CHECK(hist.size() == 9);
    const double expected = static_cast<double>(draws) / 9.0;
    double chi_sq = 0.0;
    for (const auto& [modes, count] : hist) {
        const double delta = static_cast<double>(count) - expected;
        chi_sq += delta * delta / expected;
    }
    CHECK(chi_sq < chi_square_critical(8.0, 0.01));
}

TEST_CASE("good outcome sampler: gap-composition branch is uniform") {
    // n = 5, m = 25 = n^2: exactly 5 good outcomes, acceptance ~ 4e-5 forces
    // the direct sampler.
    REQUIRE(good_fraction_closed_form(5, 25) < 1e-3);
    REQUIRE(count_good_outcomes_closed_form(5, 25) == 5);
    StreamFamily streams(34, "gap-sampler");
    std::map<std::vector<std::uint32_t>, std::uint64_t> hist;
    const std::uint64_t draws = 50'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        RandomStream rng = streams.at(i);
        const OutputConfiguration s = sample_good_outcome(5, 25, rng);
        REQUIRE(is_good_outcome(s, 5, 25));
        ++hist[s.modes];
    }
    CHECK(hist.size() == 5);
    const double expected = static_cast<double>(draws) / 5.0;
    double chi_sq = 0.0;
    for (const auto& [modes, count] : hist) {
        const double delta = static_cast<double>(count) - expected;
        chi_sq += delta * delta / expected;
    }
    CHECK(chi_sq < chi_square_critical(4.0, 0.01));

    RandomStream rng = streams.at(0);
    CHECK_THROWS_AS(sample_good_outcome(3, 8, rng), std::invalid_argument);
}

TEST_CASE("gap-composition sampler is uniform off the symmetric case") {
    // n = 5, m = 26 (> n^2): 26 good outcomes, acceptance ~ 1.8e-4, so the
    // direct sampler handles a case with non-trivial gap compositions.
    REQUIRE(good_fraction_closed_form(5, 26) < 1e-3);
    REQUIRE(count_good_outcomes_closed_form(5, 26) == count_good_outcomes_exact(5, 26));
    const std::uint64_t n_good = count_good_outcomes_exact(5, 26);
    REQUIRE(n_good == 26);
    StreamFamily streams(35, "gap-sampler-2");
    std::map<std::vector<std::uint32_t>, std::uint64_t> hist;
    const std::uint64_t draws = 100'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        RandomStream rng = streams.at(i);
        const OutputConfiguration s = sample_good_outcome(5, 26, rng);
        REQUIRE(is_good_outcome(s, 5, 26));
        ++hist[s.modes];
    }
    CHECK(hist.size() == n_good);
    const double expected = static_cast<double>(draws) / static_cast<double>(n_good);
    double chi_sq = 0.0;
    for (const auto& [modes, count] : hist) {
        const double delta = static_cast<double>(count) - expected;
        chi_sq += delta * delta / expected;
    }
    CHECK(chi_sq < chi_square_critical(static_cast<double>(n_good - 1), 0.01));
}

TEST_CASE("estimate_good_fraction against the exact count") {
    StreamFamily streams(36, "fraction");
    const FractionEstimate est = estimate_good_fraction(2, 6, 100'000, streams);
    const double exact = 9.0 / 21.0;
    CHECK(std::abs(est.fraction - exact) < 4.0 * est.stddev);

    // below the packing bound no good outcome can appear
    const FractionEstimate none = estimate_good_fraction(2, 3, 20'000, streams.sub("none"));
    CHECK(none.fraction == 0.0);
    CHECK(none.good == 0);
}

TEST_CASE("estimate_good_fraction is worker-count invariant") {
    StreamFamily streams(37, "fraction-workers");
    const FractionEstimate one = estimate_good_fraction(3, 40, 50'000, streams, ParallelOptions{1});
    const FractionEstimate four = estimate_good_fraction(3, 40, 50'000, streams, ParallelOptions{4});
    CHECK(one.good == four.good);
    CHECK(one.fraction == four.fraction);
}

TEST_CASE("estimate_good_fraction is unbiased over repetitions") {
    const double exact = good_fraction_closed_form(2, 8);
    StreamFamily streams(38, "unbiased");
    MomentAccumulator means;
    const std::uint64_t reps = 100, per_rep = 2'000;
    for (std::uint64_t r = 0; r < reps; ++r) {
        means.add(estimate_good_fraction(2, 8, per_rep, streams.sub(r)).fraction);
    }
    const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(per_rep * reps));
    CHECK(std::abs(means.mean() - exact) < 3.0 * sigma);
}

TEST_CASE("good probability mass: single photon is exactly unitarity") {
    RandomStream rng = StreamFamily(39, "mass-n1").at(0);
    const CirculantUnitary u = CirculantUnitary::sample(12, rng);
    CHECK(good_probability_mass_exact(u, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("good probability mass estimator matches full enumeration") {
    RandomStream rng = StreamFamily(40, "mass-oracle").at(0);
    const CirculantUnitary u = CirculantUnitary::sample(16, rng);
    const double exact = good_probability_mass_exact(u, 2);
    const MassEstimate est =
        estimate_good_probability_mass(u, 2, 20'000, StreamFamily(40, "mass-mc"));
    CHECK(std::abs(est.mass - exact) < 4.0 * est.error);
    CHECK(est.used_rejection);

    CHECK_THROWS_AS(estimate_good_probability_mass(u, 5, 100, StreamFamily(40, "mass-bad")),
                    std::invalid_argument);  // m = 16 < 25 = n^2
}

}  // TEST_SUITE
