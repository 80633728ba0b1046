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

#include "cbsamp/collisions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbsamp/errors.hpp"
#include "cbsamp/permanent.hpp"
#include "cbsamp/stats.hpp"

namespace cbsamp {

namespace {

/// C(a, b) exactly; throws GuardError when the value overflows 64 bits.
std::uint64_t binomial_u64(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= b; ++i) {
        result = result * (a - b + i) / i;  // stays integral at every step
        if (result > static_cast<unsigned __int128>(UINT64_MAX))
            throw GuardError("binomial overflows 64 bits: C(" + std::to_string(a) + ", " +
                             std::to_string(b) + ")");
    }
    return static_cast<std::uint64_t>(result);
}

double log_binomial(double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

void check_outcome_arity(const OutputConfiguration& s, std::size_t n, std::size_t m) {
    if (s.photons() != n) throw std::invalid_argument("good outcome predicate: s must have n entries");
    if (s.m != m) throw std::invalid_argument("good outcome predicate: mode count mismatch");
    if (n == 0 || m == 0) throw std::invalid_argument("good outcome predicate: n, m must be positive");
}

}  // namespace

std::uint32_t circular_distance(std::uint32_t a, std::uint32_t b, std::uint32_t m) {
    if (a >= m || b >= m) throw std::invalid_argument("circular_distance: index out of range");
    const std::uint32_t forward = (a >= b) ? a - b : a + m - b;
    const std::uint32_t backward = m - forward;
    return forward == 0 ? 0 : std::min(forward, backward);
}

bool is_good_outcome(const OutputConfiguration& s, std::size_t n, std::size_t m) {
    check_outcome_arity(s, n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (s.modes[i] == s.modes[j]) return false;
            if (circular_distance(s.modes[i], s.modes[j], static_cast<std::uint32_t>(m)) < n)
                return false;
        }
    }
    return true;
}

bool is_good_outcome_index_pattern(const OutputConfiguration& s, std::size_t n, std::size_t m) {
    check_outcome_arity(s, n, m);
    // U_T(a, b) = c[(s_b - a) mod m]; the outcome is good iff all n^2 first-row
    // indices are distinct.
    std::vector<std::uint32_t> indices;
    indices.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            indices.push_back(static_cast<std::uint32_t>((s.modes[b] + m - a) % m));
        }
    }
    std::sort(indices.begin(), indices.end());
    return std::adjacent_find(indices.begin(), indices.end()) == indices.end();
}

std::uint64_t multiset_count(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw std::invalid_argument("multiset_count: n, m must be positive");
    return binomial_u64(m + n - 1, n);
}

void for_each_multiset(std::size_t n, std::size_t m,
                       const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
    if (n == 0 || m == 0) throw std::invalid_argument("for_each_multiset: n, m must be positive");
    std::vector<std::uint32_t> modes(n, 0u);
    for (;;) {
        visit(modes);
        std::size_t i = n;
        while (i > 0 && modes[i - 1] == m - 1) --i;
        if (i == 0) return;
        const std::uint32_t next = modes[i - 1] + 1;
        for (std::size_t j = i - 1; j < n; ++j) modes[j] = next;
    }
}

std::uint64_t count_good_outcomes_exact(std::size_t n, std::size_t m) {
    const std::uint64_t total = multiset_count(n, m);
    if (total > 10'000'000ULL)
        throw GuardError("count_good_outcomes_exact: refused, C(m+n-1, n) = " +
                         std::to_string(total) + " exceeds 10^7");
    std::uint64_t good = 0;
    for_each_multiset(n, m, [&](const std::vector<std::uint32_t>& modes) {
        OutputConfiguration s(static_cast<std::uint32_t>(m), modes);
        if (is_good_outcome(s, n, m)) ++good;
    });
    return good;
}

std::uint64_t count_good_outcomes_closed_form(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0)
        throw std::invalid_argument("count_good_outcomes_closed_form: n, m must be positive");
    // Packings of n points on the m-cycle with all cyclic gaps >= n:
    // m * C(m - n(n-1) - 1, n - 1) / n, zero when m < n^2.
    const std::uint64_t blocked = static_cast<std::uint64_t>(n) * (n - 1);
    if (m <= blocked) return 0;
    const std::uint64_t gap_slack = m - blocked;  // = m - n^2 + n
    const std::uint64_t arrangements = binomial_u64(gap_slack - 1, n - 1);
    unsigned __int128 scaled = static_cast<unsigned __int128>(arrangements) * m;
    scaled /= n;  // every packing is counted once per chosen point
    if (scaled > static_cast<unsigned __int128>(UINT64_MAX))
        throw GuardError("count_good_outcomes_closed_form: overflows 64 bits");
    return static_cast<std::uint64_t>(scaled);
}

double good_fraction_closed_form(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0)
        throw std::invalid_argument("good_fraction_closed_form: n, m must be positive");
    const std::uint64_t blocked = static_cast<std::uint64_t>(n) * (n - 1);
    if (m <= blocked) return 0.0;
    const double gap_slack = static_cast<double>(m - blocked);
    if (gap_slack - 1.0 < static_cast<double>(n - 1)) return 0.0;  // C(gap_slack-1, n-1) = 0
    const double log_count = std::log(static_cast<double>(m)) - std::log(static_cast<double>(n)) +
                             log_binomial(gap_slack - 1.0, static_cast<double>(n - 1));
    const double log_total =
        log_binomial(static_cast<double>(m + n - 1), static_cast<double>(n));
    return std::exp(log_count - log_total);
}

double n_good_formula(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw std::invalid_argument("n_good_formula: n, m must be positive");
    const double step = static_cast<double>(2 * n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (static_cast<double>(m) - static_cast<double>(j) * step <= 0.0) return 0.0;
    }
    // Direct product ratio keeps the small-argument cases exact (they match
    // the exact fraction bit for bit at n = 2); fall back to log space when
    // the partial products could overflow.
    const double largest = static_cast<double>(m + n - 1);
    if (static_cast<double>(n) * std::log2(largest) < 900.0) {
        double numerator = 1.0;
        double denominator = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            numerator *= static_cast<double>(m) - static_cast<double>(j) * step;
            denominator *= static_cast<double>(m + n - 1 - j);
        }
        return numerator / denominator;
    }
    double log_ratio = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        log_ratio += std::log(static_cast<double>(m) - static_cast<double>(j) * step);
        log_ratio -= std::log(static_cast<double>(m + n - 1 - j));
    }
    return std::exp(log_ratio);
}

double n_good_laurent(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw std::invalid_argument("n_good_laurent: n, m must be positive");
    const double nd = static_cast<double>(n);
    return 1.0 - (nd * nd * nd + nd * nd) / static_cast<double>(m);
}

namespace {

/// Floyd's uniform k-subset of {0, ..., universe-1}, returned sorted.
std::vector<std::uint64_t> uniform_subset(std::uint64_t universe, std::size_t k, RandomStream& rng) {
    std::vector<std::uint64_t> picked;
    picked.reserve(k);
    for (std::uint64_t j = universe - k; j < universe; ++j) {
        const std::uint64_t t = rng.uniform_below(j + 1);
        if (std::find(picked.begin(), picked.end(), t) != picked.end()) {
            picked.push_back(j);
        } else {
            picked.push_back(t);
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

OutputConfiguration sample_outcome_uniform(std::size_t n, std::size_t m, RandomStream& rng) {
    if (n == 0 || m == 0) throw std::invalid_argument("sample_outcome_uniform: n, m must be positive");
    // Stars and bars: a uniform n-subset of m+n-1 staggered indices maps
    // bijectively onto the multisets.
    const auto staggered = uniform_subset(m + n - 1, n, rng);
    std::vector<std::uint32_t> modes(n);
    for (std::size_t i = 0; i < n; ++i)
        modes[i] = static_cast<std::uint32_t>(staggered[i] - i);
    return OutputConfiguration(static_cast<std::uint32_t>(m), std::move(modes));
}

namespace {

OutputConfiguration sample_good_outcome_by_gaps(std::size_t n, std::size_t m, RandomStream& rng) {
    // (start point, cyclic gap composition with all gaps >= n): each good
    // outcome corresponds to exactly n such pairs, so uniform pairs give
    // uniform outcomes.
    const std::uint64_t start = rng.uniform_below(m);
    const std::uint64_t slack = m - static_cast<std::uint64_t>(n) * n;
    std::vector<std::uint64_t> excess(n, 0);
    if (n > 1) {
        const auto dividers = uniform_subset(slack + n - 1, n - 1, rng);
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            excess[i] = dividers[i] - i - prev;
            prev = dividers[i] - i;
        }
        excess[n - 1] = slack - prev;
    } else {
        excess[0] = slack;
    }
    std::vector<std::uint32_t> modes(n);
    std::uint64_t position = start;
    for (std::size_t i = 0; i < n; ++i) {
        modes[i] = static_cast<std::uint32_t>(position % m);
        position += n + excess[i];
    }
    std::sort(modes.begin(), modes.end());
    return OutputConfiguration(static_cast<std::uint32_t>(m), std::move(modes));
}

}  // namespace

OutputConfiguration sample_good_outcome(std::size_t n, std::size_t m, RandomStream& rng) {
    if (count_good_outcomes_closed_form(n, m) == 0)
        throw std::invalid_argument("sample_good_outcome: no good outcome exists, need m >= n^2 (m = " +
                                    std::to_string(m) + ", n = " + std::to_string(n) + ")");
    const double fraction = good_fraction_closed_form(n, m);
    if (fraction < 1e-3) return sample_good_outcome_by_gaps(n, m, rng);
    for (std::uint64_t tries = 0; tries < 10'000'000ULL; ++tries) {
        OutputConfiguration s = sample_outcome_uniform(n, m, rng);
        if (is_good_outcome(s, n, m)) return s;
    }
    throw NumericalError("sample_good_outcome: rejection failed to accept (n = " + std::to_string(n) +
                         ", m = " + std::to_string(m) + ")");
}

namespace {

struct CountStats {
    std::uint64_t good = 0;
    std::uint64_t total = 0;
    void merge(const CountStats& other) {
        good += other.good;
        total += other.total;
    }
};

}  // namespace

FractionEstimate estimate_good_fraction(std::size_t n, std::size_t m, std::uint64_t samples,
                                        const StreamFamily& streams, const ParallelOptions& par) {
    if (samples == 0) throw std::invalid_argument("estimate_good_fraction: samples must be positive");
    const auto stats = run_blocks<CountStats>(
        samples, 8192, par, [&](std::uint64_t lo, std::uint64_t hi, CountStats& block) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                RandomStream rng = streams.at(i);
                const OutputConfiguration s = sample_outcome_uniform(n, m, rng);
                if (is_good_outcome(s, n, m)) ++block.good;
                ++block.total;
            }
        });
    FractionEstimate est;
    est.good = stats.good;
    est.samples = stats.total;
    est.fraction = static_cast<double>(stats.good) / static_cast<double>(stats.total);
    est.stddev = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(stats.total));
    return est;
}

MassEstimate estimate_good_probability_mass(const CirculantUnitary& u, std::size_t n,
                                            std::uint64_t samples, const StreamFamily& streams,
                                            const ParallelOptions& par) {
    const std::size_t m = u.modes();
    if (n > 8)
        throw GuardError("estimate_good_probability_mass: refused, n = " + std::to_string(n) +
                         " exceeds permanent cost guard n <= 8");
    if (samples == 0)
        throw std::invalid_argument("estimate_good_probability_mass: samples must be positive");
    const std::uint64_t good_count = count_good_outcomes_closed_form(n, m);
    if (good_count == 0)
        throw std::invalid_argument("estimate_good_probability_mass: no good outcome exists, need m >= n^2");
    const double fraction = good_fraction_closed_form(n, m);
    const InputConfiguration inputs = InputConfiguration::contiguous(n);

    const auto stats = run_blocks<MomentAccumulator>(
        samples, 2048, par, [&](std::uint64_t lo, std::uint64_t hi, MomentAccumulator& block) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                RandomStream rng = streams.at(i);
                const OutputConfiguration s = sample_good_outcome(n, m, rng);
                const Complex perm = permanent_ryser(truncate(u, inputs, s));
                block.add(std::norm(perm));
            }
        });

    MassEstimate est;
    est.good_outcomes = good_count;
    est.samples = stats.count;
    est.used_rejection = fraction >= 1e-3;
    est.mean_perm_sq = stats.mean();
    const double count_d = static_cast<double>(good_count);
    est.mass = count_d * stats.mean();
    est.error = count_d * stats.stderr_mean();
    est.error_bernoulli =
        est.mass * std::sqrt((1.0 - fraction) / (fraction * static_cast<double>(stats.count)));
    return est;
}

double good_probability_mass_exact(const CirculantUnitary& u, std::size_t n) {
    const std::size_t m = u.modes();
    if (n > 8)
        throw GuardError("good_probability_mass_exact: refused, n exceeds permanent guard n <= 8");
    const std::uint64_t total = multiset_count(n, m);
    if (total > 1'000'000ULL)
        throw GuardError("good_probability_mass_exact: refused, C(m+n-1, n) = " +
                         std::to_string(total) + " exceeds 10^6");
    const InputConfiguration inputs = InputConfiguration::contiguous(n);
    KahanSum<double> mass;
    for_each_multiset(n, m, [&](const std::vector<std::uint32_t>& modes) {
        OutputConfiguration s(static_cast<std::uint32_t>(m), modes);
        if (!is_good_outcome(s, n, m)) return;
        const Complex perm = permanent_ryser(truncate(u, inputs, s));
        mass.add(std::norm(perm));
    });
    return mass.sum;
}

}  // namespace cbsamp
