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

#include "sketchattack/linalg.hpp"

#include <stdexcept>

#include <Eigen/SVD>

namespace sketchattack {

double spectral_norm(const MatrixView& m) {
  if (m.size() == 0) throw std::invalid_argument("spectral_norm: empty matrix");
  if (!m.allFinite()) {
    throw std::invalid_argument("spectral_norm: non-finite entry");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

RowOrthogonalization orthogonalize_rows(const MatrixView& rows,
                                        double rel_tol) {
  const Index k = rows.rows();
  RowOrthogonalization out;
  out.transform = Eigen::MatrixXd::Identity(k, k);
  out.orthogonal = rows;
  out.zero_row.assign(static_cast<std::size_t>(k), false);
  for (Index i = 0; i < k; ++i) {
    const double original = out.orthogonal.row(i).norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < i; ++j) {
        if (out.zero_row[static_cast<std::size_t>(j)]) continue;
        const double denom = out.orthogonal.row(j).squaredNorm();
        const double coef =
            out.orthogonal.row(i).dot(out.orthogonal.row(j)) / denom;
        out.orthogonal.row(i) -= coef * out.orthogonal.row(j);
        out.transform.row(i) -= coef * out.transform.row(j);
      }
    }
    if (original == 0.0 || out.orthogonal.row(i).norm() <= rel_tol * original) {
      out.orthogonal.row(i).setZero();
      out.zero_row[static_cast<std::size_t>(i)] = true;
    }
  }
  return out;
}

}  // namespace sketchattack
