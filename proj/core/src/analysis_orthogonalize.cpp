// Copyright 2026 The Sketchattack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <string>

#include "sketchattack/analysis.hpp"

namespace sketchattack {

AffineOrthogonalization affine_orthogonalize(std::span<const Eigen::VectorXd> v,
                                             Index k) {
  if (v.empty()) throw AffinePreconditionError("no input vectors", 0);
  if (k < 1) throw std::invalid_argument("sketch dimension must be positive");
  const std::size_t count = v.size();
  const double log_k = std::log(static_cast<double>(k));
  for (std::size_t i = 0; i < count; ++i) {
    if (v[i].size() != v[0].size()) {
      throw AffinePreconditionError("vector length mismatch", i);
    }
    if (!(v[i].squaredNorm() > static_cast<double>(i + 1) * (2.0 + log_k))) {
      throw AffinePreconditionError(
          "squared norm below the required bound at index " + std::to_string(i), i);
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(v[i].dot(v[j]) - 1.0) > 1e-8) {
        throw AffinePreconditionError(
            "inner product differs from 1 at index " + std::to_string(i), i);
      }
    }
  }

  AffineOrthogonalization out;
  out.coefficients = Eigen::MatrixXd::Zero(static_cast<Index>(count),
                                           static_cast<Index>(count));
  out.u.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto row = static_cast<Index>(i);
    Eigen::VectorXd residual = v[i];
    Eigen::VectorXd gamma = Eigen::VectorXd::Unit(static_cast<Index>(count), row);
    double coefficient_sum = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double coef = v[i].dot(out.u[j]) / out.u[j].squaredNorm();
      residual -= coef * out.u[j];
      gamma -= coef * out.coefficients.row(static_cast<Index>(j)).transpose();
      coefficient_sum += coef;
    }
    if (residual.norm() <= 1e-12 * v[i].norm()) {
      throw AffinePreconditionError(
          "vectors are linearly dependent at index " + std::to_string(i), i);
    }
    const double denom = 1.0 - coefficient_sum;
    if (!(denom > 0.0)) {
      throw AffinePreconditionError(
          "nonpositive renormalization at index " + std::to_string(i), i);
    }
    out.u.push_back(residual / denom);
    out.coefficients.row(row) = gamma.transpose() / denom;
  }
  return out;
}

}  // namespace sketchattack
