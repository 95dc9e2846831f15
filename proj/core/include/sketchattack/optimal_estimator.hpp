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

#ifndef SKETCHATTACK_OPTIMAL_ESTIMATOR_HPP_
#define SKETCHATTACK_OPTIMAL_ESTIMATOR_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sketchattack/query_model.hpp"
#include "sketchattack/sketch_matrix.hpp"
#include "sketchattack/types.hpp"

namespace sketchattack {

// Raised when an estimation operation is applied to a zero signal column.
class ColumnZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Minimum-variance unbiased linear estimator of the signal weight at column h
// under Gaussian noise on M. T(y) = <g, y>; T(A v) - w has standard deviation
// c * sigma_t.
class OptimalEstimator {
 public:
  bool column_zero() const { return column_zero_; }
  // True when part of the signal column lies outside the noise range, in
  // which case sigma_t is 0.
  bool exact_recovery() const { return exact_recovery_; }

  const Eigen::VectorXd& extraction() const;
  double sigma_t() const;
  double sigma_t_squared() const;

  Index h() const { return h_; }
  Index n() const { return n_; }
  const std::vector<Index>& support() const { return *support_; }
  Index m() const { return static_cast<Index>(support_->size()); }
  double c() const { return c_; }

  // <g, A_j> for each j in M, in support order.
  const Eigen::VectorXd& noise_response() const;

  bool in_support(Index j) const {
    return j >= 0 && j < n_ && mask_[static_cast<std::size_t>(j)] != 0;
  }

  // FNV-1a over the support indices.
  std::uint64_t support_hash() const;
  std::string to_json() const;

 private:
  friend OptimalEstimator build_optimal(const SketchMatrix& a, Index h,
                                        std::vector<Index> support, double c);

  Index h_ = 0;
  Index n_ = 0;
  double c_ = 1.0;
  std::shared_ptr<const std::vector<Index>> support_;
  std::vector<char> mask_;
  bool column_zero_ = false;
  bool exact_recovery_ = false;
  Eigen::VectorXd g_;
  Eigen::VectorXd noise_response_;
  double sigma_t_squared_ = 0.0;
};

OptimalEstimator build_optimal(const SketchMatrix& a, Index h,
                               std::vector<Index> support, double c);
OptimalEstimator build_optimal(const SketchMatrix& a, const QuerySpec& spec);

double estimate_signal(const OptimalEstimator& est, const VectorView& sketch);

// c * <g, A u> for u supported on M.
double deviation(const OptimalEstimator& est, const VectorView& u);
// <g, A u>, the unscaled form used for adversarial tests.
double unit_deviation(const OptimalEstimator& est, const VectorView& u);

bool is_adversarial(const OptimalEstimator& est, const VectorView& u,
                    double gamma);

// sigma_t^2 for M = all columns except h, computed by orthogonalizing the
// rows of A on M and summing the inverse variances of the rows that carry a
// signal coefficient.
double sigma_t_squared_by_characterization(const SketchMatrix& a, Index h);

}  // namespace sketchattack

#endif  // SKETCHATTACK_OPTIMAL_ESTIMATOR_HPP_
