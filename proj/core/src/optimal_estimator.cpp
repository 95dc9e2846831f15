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

#include "sketchattack/optimal_estimator.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "sketchattack/linalg.hpp"

namespace sketchattack {
namespace {

constexpr double kZeroColumnTol = 1e-12;
constexpr double kRankTol = 1e-10;
constexpr double kComplementTol = 1e-8;

void RequireUsable(const OptimalEstimator& est) {
  if (est.column_zero()) {
    throw ColumnZeroError("signal column is zero; no unbiased estimator");
  }
}

double SupportDot(const OptimalEstimator& est, const VectorView& u) {
  RequireUsable(est);
  if (u.size() != est.n()) {
    throw std::invalid_argument("noise vector length does not match n");
  }
  for (Index j = 0; j < u.size(); ++j) {
    if (!est.in_support(j) && std::abs(u[j]) > 1e-12) {
      throw std::invalid_argument("noise vector has mass outside the support");
    }
  }
  const auto& support = est.support();
  const Eigen::VectorXd& q = est.noise_response();
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    total += q[static_cast<Index>(i)] * u[support[i]];
  }
  return total;
}

}  // namespace

const Eigen::VectorXd& OptimalEstimator::extraction() const {
  RequireUsable(*this);
  return g_;
}

double OptimalEstimator::sigma_t() const {
  return std::sqrt(sigma_t_squared());
}

double OptimalEstimator::sigma_t_squared() const {
  RequireUsable(*this);
  return sigma_t_squared_;
}

const Eigen::VectorXd& OptimalEstimator::noise_response() const {
  RequireUsable(*this);
  return noise_response_;
}

std::uint64_t OptimalEstimator::support_hash() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (Index j : *support_) {
    auto x = static_cast<std::uint64_t>(j);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (x >> (8 * byte)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

std::string OptimalEstimator::to_json() const {
  nlohmann::json doc;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(support_hash()));
  doc["h"] = h_;
  doc["M_hash"] = hash;
  doc["m"] = m();
  doc["c"] = c_;
  doc["column_zero"] = column_zero_;
  if (!column_zero_) {
    doc["sigma_T"] = sigma_t();
    doc["exact_recovery"] = exact_recovery_;
    doc["g"] = std::vector<double>(g_.data(), g_.data() + g_.size());
  }
  return doc.dump();
}

OptimalEstimator build_optimal(const SketchMatrix& a, Index h,
                               std::vector<Index> support, double c) {
  const Index n = a.n();
  if (h < 0 || h >= n) throw std::invalid_argument("signal index out of range");
  OptimalEstimator est;
  est.h_ = h;
  est.n_ = n;
  est.c_ = c;
  est.mask_.assign(static_cast<std::size_t>(n), 0);
  for (Index j : support) {
    if (j < 0 || j >= n) throw std::invalid_argument("support index out of range");
    if (j == h) throw std::invalid_argument("signal index lies in the support");
    if (est.mask_[static_cast<std::size_t>(j)]++) {
      throw std::invalid_argument("duplicate support index");
    }
  }
  est.support_ = std::make_shared<const std::vector<Index>>(std::move(support));

  const Eigen::VectorXd col = a.column(h);
  if (col.cwiseAbs().maxCoeff() < kZeroColumnTol) {
    est.column_zero_ = true;
    return est;
  }

  const Index m = est.m();
  const Eigen::MatrixXd noise = a.gather_columns(*est.support_);
  Eigen::VectorXd complement = col;
  Eigen::MatrixXd basis;
  Eigen::VectorXd singular;
  if (m > 0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(noise, Eigen::ComputeThinU);
    const Eigen::VectorXd& s = svd.singularValues();
    Index rank = 0;
    while (rank < s.size() && s[rank] > kRankTol * s[0]) ++rank;
    basis = svd.matrixU().leftCols(rank);
    singular = s.head(rank);
    complement -= basis * (basis.transpose() * col);
  }

  if (complement.norm() > kComplementTol * col.norm()) {
    est.exact_recovery_ = true;
    est.g_ = complement / complement.dot(col);
    est.sigma_t_squared_ = 0.0;
  } else {
    const Eigen::VectorXd coords = basis.transpose() * col;
    const Eigen::VectorXd scaled =
        coords.cwiseQuotient(singular.cwiseAbs2()) * static_cast<double>(m);
    const double precision = coords.dot(scaled);
    est.g_ = basis * scaled / precision;
    est.sigma_t_squared_ = 1.0 / precision;
  }
  est.noise_response_ = m > 0 ? Eigen::VectorXd(noise.transpose() * est.g_)
                              : Eigen::VectorXd();
  return est;
}

OptimalEstimator build_optimal(const SketchMatrix& a, const QuerySpec& spec) {
  return build_optimal(a, spec.h(), spec.support(), spec.c());
}

double estimate_signal(const OptimalEstimator& est, const VectorView& sketch) {
  const Eigen::VectorXd& g = est.extraction();
  if (sketch.size() != g.size()) {
    throw std::invalid_argument("sketch length does not match k");
  }
  return g.dot(sketch);
}

double deviation(const OptimalEstimator& est, const VectorView& u) {
  return est.c() * SupportDot(est, u);
}

double unit_deviation(const OptimalEstimator& est, const VectorView& u) {
  return SupportDot(est, u);
}

bool is_adversarial(const OptimalEstimator& est, const VectorView& u,
                    double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("adversarial test needs a unit vector");
  }
  return std::abs(SupportDot(est, u)) > gamma;
}

double sigma_t_squared_by_characterization(const SketchMatrix& a, Index h) {
  const Index n = a.n();
  if (h < 0 || h >= n) throw std::invalid_argument("signal index out of range");
  const Eigen::VectorXd col = a.column(h);
  if (col.cwiseAbs().maxCoeff() < kZeroColumnTol) {
    throw ColumnZeroError("signal column is zero");
  }
  std::vector<Index> others;
  others.reserve(static_cast<std::size_t>(n - 1));
  for (Index j = 0; j < n; ++j) {
    if (j != h) others.push_back(j);
  }
  const Index m = static_cast<Index>(others.size());
  if (m == 0) return 0.0;

  const RowOrthogonalization ortho =
      orthogonalize_rows(a.gather_columns(others), kRankTol);
  const Eigen::VectorXd signal = ortho.transform * col;
  double precision = 0.0;
  for (Index i = 0; i < signal.size(); ++i) {
    const double coef = signal[i];
    const double scale = ortho.transform.row(i).norm() * col.norm();
    if (std::abs(coef) <= 1e-9 * scale) continue;
    if (ortho.zero_row[static_cast<std::size_t>(i)]) return 0.0;
    precision += static_cast<double>(m) * coef * coef /
                 ortho.orthogonal.row(i).squaredNorm();
  }
  if (precision == 0.0) throw ColumnZeroError("no row carries the signal");
  return 1.0 / precision;
}

}  // namespace sketchattack
