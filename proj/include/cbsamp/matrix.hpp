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

#include <complex>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace cbsamp {

using Complex = std::complex<double>;

/// Dense complex matrix, the carrier for unitaries, truncations and Gaussian
/// draws. Backed by Eigen; serialized in the documented row-major JSON form.
using ComplexMatrix = Eigen::MatrixXcd;

using ComplexVector = Eigen::VectorXcd;

/// true iff every entry is finite (no NaN/Inf in either component).
bool all_finite(const ComplexMatrix& a);

/// Max-norm deviation from unitarity, max_ij |(A A^dagger - I)_ij|.
double unitarity_error(const ComplexMatrix& a);

/// JSON form: {"rows": r, "cols": c, "entries": [re00, im00, re01, im01, ...]}
/// with entries in row-major order. Throws std::invalid_argument on non-finite
/// entries; matrix_from_json validates shape and finiteness.
nlohmann::ordered_json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace cbsamp
