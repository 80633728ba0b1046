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
#include <vector>

#include "cbsamp/configurations.hpp"
#include "cbsamp/matrix.hpp"
#include "cbsamp/rng.hpp"

namespace cbsamp {

/// m i.i.d. phases, uniform on [0, 2*pi).
struct PhaseVector {
    std::vector<double> phases;

    [[nodiscard]] std::size_t size() const { return phases.size(); }

    /// Throws std::invalid_argument if empty or any phase outside [0, 2*pi).
    void validate() const;
};

PhaseVector random_phases(std::size_t m, RandomStream& rng);

/**
 * @brief Unitary circulant matrix U = F diag(exp(i*phi)) F^dagger.
 *
 * Stored compactly as the phase vector plus the first row c_0..c_{m-1};
 * the dense matrix satisfies U(a, b) = c[(b - a) mod m] and is materialized
 * only on demand. Instances are immutable and safe to share across threads.
 */
class CirculantUnitary {
  public:
    /// Builds the first row by direct O(m^2) summation (the reference path).
    static CirculantUnitary from_phases(PhaseVector phases);

    /// Builds the first row with a radix-2 transform when m is a power of two,
    /// falling back to the direct path otherwise. Agrees with from_phases to
    /// better than 1e-10 (tested).
    static CirculantUnitary from_phases_fast(PhaseVector phases);

    /// Fresh uniformly random circulant (fast first-row path).
    static CirculantUnitary sample(std::size_t m, RandomStream& rng);

    [[nodiscard]] std::size_t modes() const { return phases_.size(); }
    [[nodiscard]] const PhaseVector& phases() const { return phases_; }
    [[nodiscard]] std::span<const Complex> first_row() const { return first_row_; }

    /// U(a, b) = first_row[(b - a) mod m], the circulant index identity.
    [[nodiscard]] Complex entry(std::size_t row, std::size_t col) const {
        const std::size_t m = phases_.size();
        return first_row_[(col + m - row) % m];
    }

    /// Dense m-by-m expansion; O(m^2) memory, entries copied from first_row.
    [[nodiscard]] ComplexMatrix dense() const;

  private:
    CirculantUnitary(PhaseVector phases, std::vector<Complex> first_row)
        : phases_(std::move(phases)), first_row_(std::move(first_row)) {}

    PhaseVector phases_;
    std::vector<Complex> first_row_;
};

/// DFT matrix F(j, k) = exp(-2*pi*i*j*k/m)/sqrt(m). Throws on m = 0.
ComplexMatrix dft_matrix(std::size_t m);

/// Haar-random m-by-m unitary via QR of a Ginibre matrix with the R-diagonal
/// phase correction.
ComplexMatrix haar_unitary(std::size_t m, RandomStream& rng);

/**
 * @brief n-by-n truncation of a Haar-random m-by-m unitary on a
 * collision-free outcome, sampled without materializing the full unitary.
 *
 * Draws the n used columns directly as a Haar-distributed m-by-n isometry
 * (thin QR of an m-by-n Ginibre block, phase-corrected) and keeps the first
 * n rows. By right-invariance of the Haar measure under mode permutations
 * the result is distributed exactly as truncate(haar_unitary(m), 0..n-1, s)
 * for any collision-free s.
 */
ComplexMatrix haar_truncation(std::size_t n, std::size_t m, RandomStream& rng);

/// n-by-n i.i.d. complex Gaussian matrix with E|x|^2 = 1/m_norm
/// (real and imaginary parts each of variance 1/(2*m_norm)).
ComplexMatrix ginibre_matrix(std::size_t n, std::size_t m_norm, RandomStream& rng);

/// n-by-n submatrix with rows the input modes and columns the outcome modes,
/// repeating a column once per unit of occupation. Throws on index overflow
/// or photon-count mismatch.
ComplexMatrix truncate(const ComplexMatrix& u, const InputConfiguration& inputs,
                       const OutputConfiguration& outcome);
ComplexMatrix truncate(const CirculantUnitary& u, const InputConfiguration& inputs,
                       const OutputConfiguration& outcome);

namespace detail {
/// Inverse DFT with 1/m normalization: out[k] = (1/m) sum_j in[j] exp(+2*pi*i*j*k/m).
/// Direct O(m^2) summation over an exact root table.
std::vector<Complex> idft_direct(const std::vector<Complex>& in);
/// Same transform via an iterative radix-2 FFT; size must be a power of two.
std::vector<Complex> idft_radix2(const std::vector<Complex>& in);
}  // namespace detail

}  // namespace cbsamp
