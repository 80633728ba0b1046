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

#include "cbsamp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cbsamp/collisions.hpp"
#include "cbsamp/errors.hpp"
#include "cbsamp/stats.hpp"

namespace cbsamp {

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
    if (a.rows() < 1) throw std::invalid_argument("eigenvalues: matrix must be non-empty");
    if (a.rows() > 64)
        throw GuardError("eigenvalues: refused, size " + std::to_string(a.rows()) +
                         " exceeds guard n <= 64");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: dense solver did not converge (size " +
                             std::to_string(a.rows()) + ")");
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

Histogram2D::Histogram2D(std::size_t bins_per_axis, double range)
    : bins_(bins_per_axis), range_(range), counts_(bins_per_axis * bins_per_axis, 0) {
    if (bins_per_axis == 0) throw std::invalid_argument("Histogram2D: bins_per_axis must be positive");
    if (!(range > 0.0)) throw std::invalid_argument("Histogram2D: range must be positive");
}

void Histogram2D::add(Complex z) {
    const double width = 2.0 * range_;
    const double fx = (z.real() + range_) / width * static_cast<double>(bins_);
    const double fy = (z.imag() + range_) / width * static_cast<double>(bins_);
    std::int64_t ix = static_cast<std::int64_t>(std::floor(fx));
    std::int64_t iy = static_cast<std::int64_t>(std::floor(fy));
    const auto last = static_cast<std::int64_t>(bins_) - 1;
    const bool inside = ix >= 0 && ix <= last && iy >= 0 && iy <= last;
    if (!inside) {
        ++overflow_;
        ix = std::clamp<std::int64_t>(ix, 0, last);
        iy = std::clamp<std::int64_t>(iy, 0, last);
    }
    ++counts_[static_cast<std::size_t>(iy) * bins_ + static_cast<std::size_t>(ix)];
    ++total_;
}

void Histogram2D::merge(const Histogram2D& other) {
    if (other.bins_ == 0) return;
    if (bins_ == 0) {
        *this = other;
        return;
    }
    if (!same_binning(other)) throw std::invalid_argument("Histogram2D::merge: binning mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
    overflow_ += other.overflow_;
}

Histogram2D histogram_eigenvalues(std::span<const Complex> points, std::size_t bins_per_axis,
                                  double range) {
    Histogram2D h(bins_per_axis, range);
    for (const Complex& z : points) h.add(z);
    return h;
}

double fidelity(const Histogram2D& h1, const Histogram2D& h2) {
    if (!h1.same_binning(h2)) throw std::invalid_argument("fidelity: binning mismatch");
    if (h1.total() == 0 || h2.total() == 0) throw std::invalid_argument("fidelity: empty histogram");
    const auto c1 = h1.counts();
    const auto c2 = h2.counts();
    KahanSum<double> acc;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (c1[i] && c2[i])
            acc.add(std::sqrt(static_cast<double>(c1[i]) * static_cast<double>(c2[i])));
    }
    return acc.sum / std::sqrt(static_cast<double>(h1.total()) * static_cast<double>(h2.total()));
}

double fidelity_bias_estimate(const Histogram2D& h1, const Histogram2D& h2) {
    if (!h1.same_binning(h2)) throw std::invalid_argument("fidelity_bias_estimate: binning mismatch");
    if (h1.total() == 0 || h2.total() == 0)
        throw std::invalid_argument("fidelity_bias_estimate: empty histogram");
    // First-order Taylor bias of sum sqrt(p q) under multinomial counts:
    // E sqrt(p_hat) = sqrt(p) (1 - (1-p)/(8 N p)), applied per occupied bin.
    const auto c1 = h1.counts();
    const auto c2 = h2.counts();
    const double n1 = static_cast<double>(h1.total());
    const double n2 = static_cast<double>(h2.total());
    double bias = 0.0;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (!c1[i] || !c2[i]) continue;
        const double p = static_cast<double>(c1[i]) / n1;
        const double q = static_cast<double>(c2[i]) / n2;
        bias += std::sqrt(q / p) * (1.0 - p) / (8.0 * n1) + std::sqrt(p / q) * (1.0 - q) / (8.0 * n2);
    }
    return bias;
}

namespace {

/// Multinomial resample of a histogram's counts via inverse CDF.
std::vector<std::uint64_t> resample_counts(std::span<const std::uint64_t> counts,
                                           std::uint64_t total, RandomStream& rng) {
    std::vector<std::uint64_t> cumulative;
    std::vector<std::size_t> occupied;
    cumulative.reserve(counts.size());
    occupied.reserve(counts.size());
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!counts[i]) continue;
        running += counts[i];
        cumulative.push_back(running);
        occupied.push_back(i);
    }
    std::vector<std::uint64_t> out(counts.size(), 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        const std::uint64_t u = rng.uniform_below(total) + 1;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        ++out[occupied[static_cast<std::size_t>(it - cumulative.begin())]];
    }
    return out;
}

double fidelity_of_counts(const std::vector<std::uint64_t>& c1, std::uint64_t n1,
                          const std::vector<std::uint64_t>& c2, std::uint64_t n2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (c1[i] && c2[i]) acc += std::sqrt(static_cast<double>(c1[i]) * static_cast<double>(c2[i]));
    }
    return acc / std::sqrt(static_cast<double>(n1) * static_cast<double>(n2));
}

}  // namespace

double fidelity_sigma_bootstrap(const Histogram2D& h1, const Histogram2D& h2, std::size_t reps,
                                RandomStream& rng) {
    if (!h1.same_binning(h2)) throw std::invalid_argument("fidelity_sigma_bootstrap: binning mismatch");
    if (reps < 2) throw std::invalid_argument("fidelity_sigma_bootstrap: need at least 2 reps");
    MomentAccumulator acc;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto r1 = resample_counts(h1.counts(), h1.total(), rng);
        const auto r2 = resample_counts(h2.counts(), h2.total(), rng);
        acc.add(fidelity_of_counts(r1, h1.total(), r2, h2.total()));
    }
    return acc.stddev();
}

const char* ensemble_name(Ensemble e) {
    switch (e) {
        case Ensemble::circulant: return "circulant";
        case Ensemble::haar: return "haar";
        case Ensemble::gaussian: return "gaussian";
    }
    return "unknown";
}

namespace {

struct HistogramSet {
    Histogram2D per_ensemble[3];
    void merge(const HistogramSet& other) {
        for (int e = 0; e < 3; ++e) per_ensemble[e].merge(other.per_ensemble[e]);
    }
};

void add_ensemble_sample(Ensemble e, std::size_t n, std::size_t m, RandomStream& rng,
                         const InputConfiguration& inputs, Histogram2D& hist) {
    ComplexMatrix t;
    switch (e) {
        case Ensemble::circulant: {
            const CirculantUnitary u = CirculantUnitary::sample(m, rng);
            const OutputConfiguration s = sample_good_outcome(n, m, rng);
            t = truncate(u, inputs, s);
            break;
        }
        case Ensemble::haar:
            t = haar_truncation(n, m, rng);
            break;
        case Ensemble::gaussian:
            t = ginibre_matrix(n, m, rng);
            break;
    }
    for (const Complex& lambda : eigenvalues(t)) hist.add(lambda);
}

}  // namespace

std::vector<FidelityRecord> eigen_fidelity_experiment(
    std::size_t n, std::size_t m, const std::vector<std::pair<Ensemble, Ensemble>>& pairs,
    std::uint64_t samples, const EigenFidelityOptions& opts, const StreamFamily& streams,
    const ParallelOptions& par) {
    if (pairs.empty()) throw std::invalid_argument("eigen_fidelity_experiment: no ensemble pairs");
    if (samples == 0) throw std::invalid_argument("eigen_fidelity_experiment: samples must be positive");
    if (m < n) throw std::invalid_argument("eigen_fidelity_experiment: need m >= n");

    bool used[3] = {false, false, false};
    for (const auto& [a, b] : pairs) {
        used[static_cast<int>(a)] = true;
        used[static_cast<int>(b)] = true;
    }
    if (used[static_cast<int>(Ensemble::circulant)] && count_good_outcomes_closed_form(n, m) == 0)
        throw std::invalid_argument(
            "eigen_fidelity_experiment: no collision-free circulant outcome exists, need m >= n^2 "
            "(m = " + std::to_string(m) + ", n = " + std::to_string(n) + ")");

    const InputConfiguration inputs = InputConfiguration::contiguous(n);
    StreamFamily per_ensemble[3] = {streams.sub("circulant"), streams.sub("haar"),
                                    streams.sub("gaussian")};

    const auto hists = run_blocks<HistogramSet>(
        samples, 1024, par, [&](std::uint64_t lo, std::uint64_t hi, HistogramSet& block) {
            for (int e = 0; e < 3; ++e) {
                if (used[e]) block.per_ensemble[e] = Histogram2D(opts.bins_per_axis, opts.range);
            }
            for (std::uint64_t i = lo; i < hi; ++i) {
                for (int e = 0; e < 3; ++e) {
                    if (!used[e]) continue;
                    RandomStream rng = per_ensemble[e].at(i);
                    add_ensemble_sample(static_cast<Ensemble>(e), n, m, rng, inputs,
                                        block.per_ensemble[e]);
                }
            }
        });

    std::vector<FidelityRecord> records;
    records.reserve(pairs.size());
    StreamFamily bootstrap = streams.sub("bootstrap");
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [a, b] = pairs[k];
        const Histogram2D& ha = hists.per_ensemble[static_cast<int>(a)];
        const Histogram2D& hb = hists.per_ensemble[static_cast<int>(b)];
        FidelityRecord rec;
        rec.n = n;
        rec.m = m;
        rec.first = a;
        rec.second = b;
        rec.fidelity = fidelity(ha, hb);
        rec.bias = fidelity_bias_estimate(ha, hb);
        RandomStream rng = bootstrap.at(k);
        rec.sigma = fidelity_sigma_bootstrap(ha, hb, opts.bootstrap_reps, rng);
        rec.samples = samples;
        rec.seed = streams.master_seed;
        records.push_back(rec);
    }
    return records;
}

namespace {

struct ProbeStats {
    std::vector<std::uint64_t> marginal_counts;  // [coordinate][cell]
    std::vector<double> coord_sum, coord_sum_sq, coord_cross;
    std::vector<double> intensity_sum, intensity_sum_sq, intensity_cross;
    std::uint64_t samples = 0;

    void init(std::size_t coords, std::size_t cells) {
        marginal_counts.assign(coords * cells, 0);
        coord_sum.assign(coords, 0.0);
        coord_sum_sq.assign(coords, 0.0);
        coord_cross.assign(coords * (coords - 1) / 2, 0.0);
        const std::size_t d = coords / 2;
        intensity_sum.assign(d, 0.0);
        intensity_sum_sq.assign(d, 0.0);
        intensity_cross.assign(d * (d - 1) / 2, 0.0);
    }

    void merge(const ProbeStats& other) {
        if (other.samples == 0) return;
        if (samples == 0) {
            *this = other;
            return;
        }
        for (std::size_t i = 0; i < marginal_counts.size(); ++i)
            marginal_counts[i] += other.marginal_counts[i];
        auto add_all = [](std::vector<double>& into, const std::vector<double>& from) {
            for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
        };
        add_all(coord_sum, other.coord_sum);
        add_all(coord_sum_sq, other.coord_sum_sq);
        add_all(coord_cross, other.coord_cross);
        add_all(intensity_sum, other.intensity_sum);
        add_all(intensity_sum_sq, other.intensity_sum_sq);
        add_all(intensity_cross, other.intensity_cross);
        samples += other.samples;
    }
};

double max_abs_correlation(const std::vector<double>& sum, const std::vector<double>& sum_sq,
                           const std::vector<double>& cross, std::uint64_t count) {
    const double n = static_cast<double>(count);
    const std::size_t k = sum.size();
    double best = 0.0;
    std::size_t pair = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j, ++pair) {
            const double cov = cross[pair] / n - (sum[i] / n) * (sum[j] / n);
            const double vi = sum_sq[i] / n - (sum[i] / n) * (sum[i] / n);
            const double vj = sum_sq[j] / n - (sum[j] / n) * (sum[j] / n);
            if (vi <= 0.0 || vj <= 0.0) continue;
            best = std::max(best, std::abs(cov / std::sqrt(vi * vj)));
        }
    }
    return best;
}

}  // namespace

TvProbeResult variation_distance_probe(std::size_t n, std::size_t m, std::uint64_t samples,
                                       std::size_t bins, Ensemble source,
                                       const StreamFamily& streams, const ParallelOptions& par) {
    if (n == 0 || m == 0) throw std::invalid_argument("variation_distance_probe: n, m positive");
    if (source == Ensemble::haar)
        throw std::invalid_argument("variation_distance_probe: source must be circulant or gaussian");
    if (bins < 2) throw std::invalid_argument("variation_distance_probe: need at least 2 bins");
    if (samples == 0) throw std::invalid_argument("variation_distance_probe: samples must be positive");
    if (m < n * n)
        throw std::invalid_argument("variation_distance_probe: need m >= n^2 for a good outcome (m = " +
                                    std::to_string(m) + ", n = " + std::to_string(n) + ")");

    // Fixed good outcome {0, n, 2n, ...}; every marginal is then a sum of m
    // independent cosines with variance exactly 1/(2m).
    std::vector<std::uint32_t> fixed_modes(n);
    for (std::size_t i = 0; i < n; ++i) fixed_modes[i] = static_cast<std::uint32_t>(i * n);
    const OutputConfiguration outcome(static_cast<std::uint32_t>(m), fixed_modes);

    const std::size_t d = n * n;
    const std::size_t coords = 2 * d;
    const std::size_t cells = bins + 2;  // interior bins plus the two Gaussian tails
    const double sigma = std::sqrt(1.0 / (2.0 * static_cast<double>(m)));
    const double edge = 5.0 * sigma;

    const auto stats = run_blocks<ProbeStats>(
        samples, 4096, par, [&](std::uint64_t lo, std::uint64_t hi, ProbeStats& block) {
            block.init(coords, cells);
            block.samples = 0;
            std::vector<Complex> entries(d);
            std::vector<double> coordinate(coords);
            std::vector<double> intensity(d);
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                RandomStream rng = streams.at(idx);
                if (source == Ensemble::circulant) {
                    const CirculantUnitary u = CirculantUnitary::sample(m, rng);
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b)
                            entries[a * n + b] = u.entry(a, outcome.modes[b]);
                } else {
                    const ComplexMatrix g = ginibre_matrix(n, m, rng);
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b) entries[a * n + b] = g(a, b);
                }
                for (std::size_t k = 0; k < d; ++k) {
                    coordinate[2 * k] = entries[k].real();
                    coordinate[2 * k + 1] = entries[k].imag();
                    intensity[k] = std::norm(entries[k]);
                }
                for (std::size_t c = 0; c < coords; ++c) {
                    const double v = coordinate[c];
                    std::int64_t cell =
                        1 + static_cast<std::int64_t>(std::floor((v + edge) / (2.0 * edge) *
                                                                 static_cast<double>(bins)));
                    cell = std::clamp<std::int64_t>(cell, 0, static_cast<std::int64_t>(cells) - 1);
                    ++block.marginal_counts[c * cells + static_cast<std::size_t>(cell)];
                    block.coord_sum[c] += v;
                    block.coord_sum_sq[c] += v * v;
                }
                std::size_t pair = 0;
                for (std::size_t i = 0; i < coords; ++i)
                    for (std::size_t j = i + 1; j < coords; ++j, ++pair)
                        block.coord_cross[pair] += coordinate[i] * coordinate[j];
                pair = 0;
                for (std::size_t i = 0; i < d; ++i) {
                    block.intensity_sum[i] += intensity[i];
                    block.intensity_sum_sq[i] += intensity[i] * intensity[i];
                    for (std::size_t j = i + 1; j < d; ++j, ++pair)
                        block.intensity_cross[pair] += intensity[i] * intensity[j];
                }
                ++block.samples;
            }
        });

    // Exact Gaussian cell masses for N(0, 1/(2m)) on the same grid.
    std::vector<double> reference(cells);
    auto cdf = [&](double x) { return 0.5 * (1.0 + std::erf(x / (sigma * std::numbers::sqrt2))); };
    reference[0] = cdf(-edge);
    reference[cells - 1] = 1.0 - cdf(edge);
    for (std::size_t b = 0; b < bins; ++b) {
        const double a = -edge + 2.0 * edge * static_cast<double>(b) / static_cast<double>(bins);
        const double c = -edge + 2.0 * edge * static_cast<double>(b + 1) / static_cast<double>(bins);
        reference[b + 1] = cdf(c) - cdf(a);
    }

    TvProbeResult result;
    result.samples = stats.samples;
    result.marginal_tv.resize(coords);
    const double total = static_cast<double>(stats.samples);
    for (std::size_t c = 0; c < coords; ++c) {
        double tv = 0.0;
        for (std::size_t cell = 0; cell < cells; ++cell) {
            const double empirical =
                static_cast<double>(stats.marginal_counts[c * cells + cell]) / total;
            tv += std::abs(empirical - reference[cell]);
        }
        result.marginal_tv[c] = 0.5 * tv;
        result.max_marginal_tv = std::max(result.max_marginal_tv, result.marginal_tv[c]);
    }
    result.max_coordinate_correlation =
        max_abs_correlation(stats.coord_sum, stats.coord_sum_sq, stats.coord_cross, stats.samples);
    result.max_intensity_correlation = max_abs_correlation(stats.intensity_sum, stats.intensity_sum_sq,
                                                           stats.intensity_cross, stats.samples);
    double floor = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const double p = reference[cell];
        floor += std::sqrt(2.0 * p * (1.0 - p) / (std::numbers::pi * total));
    }
    result.tv_noise_floor = 0.5 * floor;
    return result;
}

}  // namespace cbsamp
