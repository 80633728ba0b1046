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

#include "cbsamp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "cbsamp/errors.hpp"
#include "cbsamp/permanent.hpp"
#include "cbsamp/stats.hpp"

namespace cbsamp {

namespace {

void check_photon_guard(std::size_t n, const char* who) {
    if (n > 8)
        throw GuardError(std::string(who) + ": refused, n = " + std::to_string(n) +
                         " exceeds permanent cost guard n <= 8");
}

double born_probability(const ComplexMatrix& truncation, const OutputConfiguration& s) {
    const Complex amplitude_numerator = permanent_ryser(truncation);
    return std::norm(amplitude_numerator) / s.occupation_factorial();
}

template <class Unitary>
OutcomeDistribution build_distribution(const Unitary& u, std::size_t m,
                                       const InputConfiguration& inputs, std::string source,
                                       std::uint64_t seed, const ParallelOptions& par) {
    const std::size_t n = inputs.photons();
    check_photon_guard(n, "full_distribution");
    inputs.validate(m);
    const std::uint64_t count = multiset_count(n, m);
    if (count > 1'000'000ULL)
        throw GuardError("full_distribution: refused, C(m+n-1, n) = " + std::to_string(count) +
                         " exceeds 10^6");

    OutcomeDistribution dist;
    dist.n = n;
    dist.m = m;
    dist.source = std::move(source);
    dist.seed = seed;
    dist.outcomes.reserve(count);
    for_each_multiset(n, m, [&](const std::vector<std::uint32_t>& modes) {
        dist.outcomes.emplace_back(static_cast<std::uint32_t>(m), modes);
    });

    // Probabilities land in a pre-sized array indexed by outcome, so the
    // parallel fill has no merge ambiguity.
    dist.probabilities.assign(dist.outcomes.size(), 0.0);
    struct Empty {
        void merge(const Empty&) {}
    };
    run_blocks<Empty>(dist.outcomes.size(), 256, par,
                      [&](std::uint64_t lo, std::uint64_t hi, Empty&) {
                          for (std::uint64_t i = lo; i < hi; ++i) {
                              const auto& s = dist.outcomes[static_cast<std::size_t>(i)];
                              dist.probabilities[static_cast<std::size_t>(i)] =
                                  born_probability(truncate(u, inputs, s), s);
                          }
                      });

    KahanSum<double> norm;
    for (double p : dist.probabilities) norm.add(p);
    if (std::abs(norm.sum - 1.0) > 1e-8)
        throw NumericalError("full_distribution: probabilities sum to " + std::to_string(norm.sum) +
                             ", outside 1e-8 of 1 (source: " +
                             (dist.source.empty() ? std::string("unspecified") : dist.source) +
                             ", seed " + std::to_string(seed) + ")");
    return dist;
}

}  // namespace

double outcome_probability(const ComplexMatrix& u, const InputConfiguration& inputs,
                           const OutputConfiguration& s) {
    check_photon_guard(inputs.photons(), "outcome_probability");
    return born_probability(truncate(u, inputs, s), s);
}

double outcome_probability(const CirculantUnitary& u, const InputConfiguration& inputs,
                           const OutputConfiguration& s) {
    check_photon_guard(inputs.photons(), "outcome_probability");
    return born_probability(truncate(u, inputs, s), s);
}

OutcomeDistribution full_distribution(const ComplexMatrix& u, const InputConfiguration& inputs,
                                      std::string source, std::uint64_t seed,
                                      const ParallelOptions& par) {
    if (u.rows() != u.cols()) throw std::invalid_argument("full_distribution: matrix must be square");
    return build_distribution(u, static_cast<std::size_t>(u.rows()), inputs, std::move(source), seed,
                              par);
}

OutcomeDistribution full_distribution(const CirculantUnitary& u, const InputConfiguration& inputs,
                                      std::string source, std::uint64_t seed,
                                      const ParallelOptions& par) {
    return build_distribution(u, u.modes(), inputs, std::move(source), seed, par);
}

std::vector<OutputConfiguration> sample_outcomes(const OutcomeDistribution& dist, std::size_t k,
                                                 RandomStream& rng) {
    if (dist.outcomes.empty() || dist.outcomes.size() != dist.probabilities.size())
        throw std::invalid_argument("sample_outcomes: invalid distribution");
    std::vector<double> cumulative(dist.probabilities.size());
    double running = 0.0;
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
        running += dist.probabilities[i];
        cumulative[i] = running;
    }
    cumulative.back() = std::max(cumulative.back(), 1.0);  // guard the last edge against rounding

    std::vector<OutputConfiguration> draws;
    draws.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t idx =
            std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                  dist.outcomes.size() - 1);
        draws.push_back(dist.outcomes[idx]);
    }
    return draws;
}

void write_distribution_jsonl(const OutcomeDistribution& dist, std::ostream& out) {
    for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
        nlohmann::ordered_json row;
        row["modes"] = dist.outcomes[i].modes;
        row["probability"] = dist.probabilities[i];
        out << row.dump() << '\n';
    }
}

}  // namespace cbsamp
