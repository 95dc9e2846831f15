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

#ifndef SKETCHATTACK_LINALG_HPP_
#define SKETCHATTACK_LINALG_HPP_

#include <vector>

#include <Eigen/Core>

#include "sketchattack/types.hpp"

namespace sketchattack {

// Largest singular value. Throws std::invalid_argument on an empty or
// non-finite matrix.
double spectral_norm(const MatrixView& m);

// Modified Gram-Schmidt on the rows of `rows`, applied twice per row.
// `transform * rows == orthogonal` holds, rows of `orthogonal` are pairwise
// orthogonal, and a row whose residual falls below rel_tol times its original
// norm is set exactly to zero and flagged.
struct RowOrthogonalization {
  Eigen::MatrixXd transform;
  Eigen::MatrixXd orthogonal;
  std::vector<bool> zero_row;
};

RowOrthogonalization orthogonalize_rows(const MatrixView& rows,
                                        double rel_tol = 1e-10);

}  // namespace sketchattack

#endif  // SKETCHATTACK_LINALG_HPP_
