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

#include "cbsamp/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace cbsamp {

bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const Complex& z = a(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

double unitarity_error(const ComplexMatrix& a) {
    const ComplexMatrix gram = a * a.adjoint();
    const ComplexMatrix identity = ComplexMatrix::Identity(a.rows(), a.rows());
    return (gram - identity).cwiseAbs().maxCoeff();
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& a) {
    if (!all_finite(a)) throw std::invalid_argument("matrix_to_json: non-finite entry");
    nlohmann::ordered_json j;
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(a.size()) * 2);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            entries.push_back(a(i, k).real());
            entries.push_back(a(i, k).imag());
        }
    }
    j["entries"] = std::move(entries);
    return j;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw std::invalid_argument("matrix_from_json: need rows, cols, entries");
    const auto rows = j.at("rows").get<std::int64_t>();
    const auto cols = j.at("cols").get<std::int64_t>();
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix_from_json: non-positive dims");
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols * 2))
        throw std::invalid_argument("matrix_from_json: entries length must be 2*rows*cols");
    ComplexMatrix a(rows, cols);
    std::size_t pos = 0;
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t k = 0; k < cols; ++k) {
            const double re = entries.at(pos++).get<double>();
            const double im = entries.at(pos++).get<double>();
            a(i, k) = Complex(re, im);
        }
    }
    if (!all_finite(a)) throw std::invalid_argument("matrix_from_json: non-finite entry");
    return a;
}

}  // namespace cbsamp
