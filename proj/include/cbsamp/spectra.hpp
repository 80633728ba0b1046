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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbsamp/matrix_core.hpp"
#include "cbsamp/parallel.hpp"
#include "cbsamp/rng.hpp"

namespace cbsamp {

/// All eigenvalues (with multiplicity) of a square matrix, unspecified order.
/// Guarded at size <= 64; throws NumericalError on solver failure.
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

/**
 * @brief Binned density over the square [-r, r]^2 of the complex plane.
 *
 * Bins are half-open; points outside the square are clamped into the boundary
 * bins and tallied as overflow, so total always equals the number of points
 * added. Histograms with identical binning merge by bin-wise addition, which
 * is order-independent (integer counts).
 */
class Histogram2D {
  public:
    Histogram2D() = default;
    Histogram2D(std::size_t bins_per_axis, double range);

    void add(Complex z);
    void merge(const Histogram2D& other);

    [[nodiscard]] std::size_t bins_per_axis() const { return bins_; }
    [[nodiscard]] double range() const { return range_; }
    [[nodiscard]] std::uint64_t total() const { return total_; }
    [[nodiscard]] std::uint64_t overflow() const { return overflow_; }
    [[nodiscard]] std::span<const std::uint64_t> counts() const { return counts_; }
    [[nodiscard]] bool same_binning(const Histogram2D& other) const {
        return bins_ == other.bins_ && range_ == other.range_;
    }

  private:
    std::size_t bins_ = 0;
    double range_ = 0.0;
    std::uint64_t total_ = 0;
    std::uint64_t overflow_ = 0;
    std::vector<std::uint64_t> counts_;
};

Histogram2D histogram_eigenvalues(std::span<const Complex> points, std::size_t bins_per_axis,
                                  double range);

/// Bhattacharyya fidelity sum_j sqrt(P_j Q_j) between two histograms with
/// identical binning and nonzero totals; result in [0, 1].
double fidelity(const Histogram2D& h1, const Histogram2D& h2);

/// First-order estimate of the multinomial small-sample bias of fidelity();
/// the debiased value is fidelity() + fidelity_bias_estimate().
double fidelity_bias_estimate(const Histogram2D& h1, const Histogram2D& h2);

/// Bootstrap standard deviation of fidelity() under multinomial resampling
/// of both histograms.
double fidelity_sigma_bootstrap(const Histogram2D& h1, const Histogram2D& h2, std::size_t reps,
                                RandomStream& rng);

enum class Ensemble { circulant, haar, gaussian };

const char* ensemble_name(Ensemble e);

struct FidelityRecord {
    std::size_t n = 0;
    std::size_t m = 0;
    Ensemble first = Ensemble::circulant;
    Ensemble second = Ensemble::gaussian;
    double fidelity = 0.0;
    double bias = 0.0;   // additive debiasing term
    double sigma = 0.0;  // bootstrap standard deviation
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

struct EigenFidelityOptions {
    std::size_t bins_per_axis = 64;
    double range = 1.1;
    std::size_t bootstrap_reps = 32;
};

/**
 * @brief Accumulates eigenvalue histograms of `samples` independent n-by-n
 * matrices per ensemble and returns the pairwise fidelities.
 *
 * Ensembles: truncations of circulant unitaries on uniformly sampled good
 * outcomes, truncations of Haar unitaries on collision-free outcomes, and
 * i.i.d. Gaussian matrices with E|x|^2 = 1/m. Requires m >= n^2 whenever the
 * circulant ensemble is requested (otherwise no good outcome exists).
 */
std::vector<FidelityRecord> eigen_fidelity_experiment(
    std::size_t n, std::size_t m, const std::vector<std::pair<Ensemble, Ensemble>>& pairs,
    std::uint64_t samples, const EigenFidelityOptions& opts, const StreamFamily& streams,
    const ParallelOptions& par = {});

struct TvProbeResult {
    std::vector<double> marginal_tv;     // one per real coordinate (2 n^2 of them)
    double max_marginal_tv = 0.0;
    double max_intensity_correlation = 0.0;   // over pairs of |entry|^2
    double max_coordinate_correlation = 0.0;  // over pairs of raw coordinates
    double tv_noise_floor = 0.0;              // expected TV for exact Gaussian data
    std::uint64_t samples = 0;
};

/**
 * @brief Empirical probe of the distance between truncated-circulant entries
 * and i.i.d. Gaussians.
 *
 * Draws `samples` truncations on the fixed good outcome {0, n, 2n, ...},
 * splits the n^2 entries into 2 n^2 real coordinates, and reports the binned
 * total-variation distance of each marginal against N(0, 1/(2m)) plus maximum
 * pairwise empirical correlations. source = gaussian runs the identical probe
 * on i.i.d. Gaussian entries as a null test.
 */
TvProbeResult variation_distance_probe(std::size_t n, std::size_t m, std::uint64_t samples,
                                       std::size_t bins, Ensemble source,
                                       const StreamFamily& streams, const ParallelOptions& par = {});

}  // namespace cbsamp
