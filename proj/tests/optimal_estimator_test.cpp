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

#include <Eigen/Cholesky>
#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_stream.hpp"
#include "test_util.hpp"

namespace sketchattack {
namespace {

using testing::gaussian_matrix;
using testing::iota_support;
using testing::Moments;

// Closed-form GLS for a full-rank noise covariance, used as an independent
// route to g and sigma_t^2.
struct GlsOracle {
  Eigen::VectorXd g;
  double sigma_sq;
};

GlsOracle Gls(const SketchMatrix& a, Index h, const std::vector<Index>& m) {
  const Eigen::MatrixXd am = a.gather_columns(m);
  const Eigen::MatrixXd sigma = am * am.transpose() / static_cast<double>(m.size());
  const Eigen::VectorXd ah = a.entries().col(h);
  const Eigen::VectorXd x = sigma.ldlt().solve(ah);
  const double precision = ah.dot(x);
  return {x / precision, 1.0 / precision};
}

Eigen::VectorXd OnSupport(const Eigen::VectorXd& compressed, const std::vector<Index>& m,
                          Index n) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < m.size(); ++i) u[m[i]] = compressed[static_cast<Index>(i)];
  return u;
}

TEST(BuildOptimal, SignalOutsideNoiseRangeIsExact) {
  RowMatrix row = RowMatrix::Zero(1, 6);
  row(0, 0) = 1.0;
  const SketchMatrix a = make_explicit(row);
  const OptimalEstimator est = build_optimal(a, 0, iota_support(1, 6), 1.0);
  EXPECT_TRUE(est.exact_recovery());
  EXPECT_EQ(est.sigma_t(), 0.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v[0] = 1.7;
  v[3] = 0.4;
  EXPECT_NEAR(estimate_signal(est, apply(a, v)), 1.7, 1e-12);
}

TEST(BuildOptimal, AllOnesRowHasUnitVariance) {
  const Index m = 9;
  const SketchMatrix a = make_explicit(RowMatrix::Ones(1, m + 1));
  const OptimalEstimator est = build_optimal(a, 0, iota_support(1, m + 1), 1.0);
  EXPECT_NEAR(est.extraction()[0], 1.0, 1e-12);
  EXPECT_NEAR(est.sigma_t_squared(), 1.0, 1e-12);
  EXPECT_NEAR(sigma_t_squared_by_characterization(a, 0), 1.0, 1e-12);

  const QuerySpec spec = QuerySpec::make(m + 1, 0, iota_support(1, m + 1), 1.0, 0.1);
  Moments mom;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    const QueryVector q = sample_query(spec, 6, t);
    mom.add(estimate_signal(est, apply(a, q.v)) - q.w);
  }
  EXPECT_NEAR(mom.variance(), 1.0, 0.05);
}

TEST(BuildOptimal, ZeroColumn) {
  RowMatrix e = RowMatrix::Ones(2, 4);
  e.col(2).setZero();
  const SketchMatrix a = make_explicit(e);
  const OptimalEstimator est = build_optimal(a, 2, {0, 1, 3}, 1.0);
  EXPECT_TRUE(est.column_zero());
  EXPECT_THROW(est.extraction(), ColumnZeroError);
  EXPECT_THROW(est.sigma_t(), ColumnZeroError);
  EXPECT_THROW(sigma_t_squared_by_characterization(a, 2), ColumnZeroError);
}

TEST(BuildOptimal, RejectsBadSupport) {
  const SketchMatrix a = make_explicit(gaussian_matrix(2, 5, 1));
  EXPECT_THROW(build_optimal(a, 1, {1, 2}, 1.0), std::invalid_argument);
  EXPECT_THROW(build_optimal(a, 1, {0, 0}, 1.0), std::invalid_argument);
  EXPECT_THROW(build_optimal(a, 5, {0}, 1.0), std::invalid_argument);
}

TEST(BuildOptimal, MatchesNormalEquations) {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const Index k = 2 + static_cast<Index>(s % 6);
    const Index n = k + 10 + static_cast<Index>(s);
    const SketchMatrix a = make_explicit(gaussian_matrix(k, n, 100 + s));
    const auto m = iota_support(0, n - 1);
    const OptimalEstimator est = build_optimal(a, n - 1, m, 1.0);
    const GlsOracle o = Gls(a, n - 1, m);
    EXPECT_LE((est.extraction() - o.g).norm(), 1e-9 * o.g.norm());
    EXPECT_NEAR(est.sigma_t_squared(), o.sigma_sq, 1e-9 * o.sigma_sq);
    EXPECT_NEAR(est.extraction().dot(a.entries().col(n - 1)), 1.0, 1e-10);
  }
}

TEST(BuildOptimal, NoiseResponseIsTransposeProduct) {
  const SketchMatrix a = make_explicit(gaussian_matrix(3, 12, 2));
  const std::vector<Index> m = {0, 2, 5, 7, 11};
  const OptimalEstimator est = build_optimal(a, 4, m, 0.5);
  const Eigen::VectorXd expect = a.gather_columns(m).transpose() * est.extraction();
  EXPECT_LE((est.noise_response() - expect).norm(), 1e-12);
  EXPECT_TRUE(est.in_support(5));
  EXPECT_FALSE(est.in_support(4));
  EXPECT_NEAR(est.sigma_t_squared(), expect.squaredNorm() / 5.0, 1e-12);
}

TEST(Characterization, AgreesWithGlsOnRandomMatrices) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SketchMatrix a = make_explicit(gaussian_matrix(4, 30, 300 + s));
    const Index h = static_cast<Index>(s % 30);
    std::vector<Index> rest;
    for (Index j = 0; j < 30; ++j) {
      if (j != h) rest.push_back(j);
    }
    const double gls = build_optimal(a, h, rest, 1.0).sigma_t_squared();
    EXPECT_NEAR(sigma_t_squared_by_characterization(a, h), gls, 1e-7 * gls);
  }
}

TEST(Characterization, DuplicateRowAddsNothing) {
  RowMatrix base = gaussian_matrix(3, 15, 8);
  RowMatrix dup(4, 15);
  dup << base, base.row(1);
  const double one = sigma_t_squared_by_characterization(make_explicit(base), 14);
  const double two = sigma_t_squared_by_characterization(make_explicit(dup), 14);
  EXPECT_NEAR(one, two, 1e-9 * one);
}

TEST(EstimateSignal, ZeroNoiseRecoversWeight) {
  const SketchMatrix a = make_explicit(gaussian_matrix(5, 40, 4));
  const OptimalEstimator est = build_optimal(a, 39, iota_support(0, 39), 1.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(40);
  v[39] = 2.0;
  EXPECT_NEAR(estimate_signal(est, apply(a, v)), 2.0, 1e-9);
}

TEST(EstimateSignal, UnbiasedWithPredictedVariance) {
  const Index k = 6, n = 80;
  const double c = 0.7;
  const SketchMatrix a = make_explicit(gaussian_matrix(k, n, 5));
  const QuerySpec spec = QuerySpec::make(n, 3, {0, 1, 2, 10, 20, 30, 40, 50, 60, 70, 79}, c, 0.1);
  const OptimalEstimator est = build_optimal(a, spec);
  QueryStream stream(a, spec, 77);
  QueryStream::Block block;
  Eigen::VectorXd y(k);
  Moments mom;
  for (Index first = 0; first < 100000; first += 500) {
    stream.fill(first, 500, block);
    for (Index j = 0; j < block.count; ++j) {
      stream.sketch(block, j, y);
      mom.add(estimate_signal(est, y) - block.w[j]);
    }
  }
  const double expected = c * c * est.sigma_t_squared();
  EXPECT_LT(std::abs(mom.mean), 3.0 * c * est.sigma_t() / std::sqrt(1e5));
  EXPECT_NEAR(mom.variance(), expected, 0.05 * expected);
}

TEST(Deviation, LinearAndZeroAtOrigin) {
  const SketchMatrix a = make_explicit(gaussian_matrix(3, 20, 6));
  const auto m = iota_support(0, 19);
  const OptimalEstimator est = build_optimal(a, 19, m, 0.4);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(20);
  EXPECT_EQ(deviation(est, zero), 0.0);
  Engine rng(3);
  NormalSampler normal;
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(20), u2 = Eigen::VectorXd::Zero(20);
  for (Index j = 0; j < 19; ++j) {
    u1[j] = normal(rng);
    u2[j] = normal(rng);
  }
  const double lhs = deviation(est, 2.5 * u1 - 0.5 * u2);
  const double rhs = 2.5 * deviation(est, u1) - 0.5 * deviation(est, u2);
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs)));
  EXPECT_NEAR(deviation(est, u1), 0.4 * unit_deviation(est, u1), 1e-14);
  Eigen::VectorXd off = zero;
  off[19] = 1.0;
  EXPECT_THROW(deviation(est, off), std::invalid_argument);
}

TEST(Deviation, GaussianNoiseGivesNormalDeviation) {
  const Index n = 60;
  const double c = 0.8;
  const SketchMatrix a = make_explicit(gaussian_matrix(4, n, 9));
  const QuerySpec spec = QuerySpec::make(n, n - 1, iota_support(0, n - 1), c, 0.1);
  const OptimalEstimator est = build_optimal(a, spec);
  std::vector<double> devs;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    devs.push_back(deviation(est, sample_noise(spec.noise(), n, 12, t)));
  }
  const boost::math::normal law(0.0, c * est.sigma_t());
  EXPECT_LT(testing::ks_distance(devs, [&](double x) { return cdf(law, x); }), 0.01);
}

TEST(IsAdversarial, BoundaryAndMaximizer) {
  const Index n = 50;
  const SketchMatrix a = make_explicit(gaussian_matrix(3, n, 10));
  const auto m = iota_support(0, n - 1);
  const OptimalEstimator est = build_optimal(a, n - 1, m, 1.0);

  // Unit direction orthogonal to the noise response has zero deviation.
  Eigen::VectorXd resp = est.noise_response();
  Eigen::VectorXd perp = Eigen::VectorXd::Zero(n - 1);
  perp[0] = resp[1];
  perp[1] = -resp[0];
  perp.normalize();
  EXPECT_NEAR(unit_deviation(est, OnSupport(perp, m, n)), 0.0, 1e-12);

  // The best unit vector is the normalized noise response.
  const Eigen::VectorXd best = OnSupport(resp.normalized(), m, n);
  const double top = resp.norm();
  EXPECT_NEAR(top, est.sigma_t() * std::sqrt(static_cast<double>(n - 1)), 1e-10 * top);
  EXPECT_NEAR(unit_deviation(est, best), top, 1e-10 * top);
  EXPECT_TRUE(is_adversarial(est, best, 0.99 * top));
  EXPECT_FALSE(is_adversarial(est, best, 1.01 * top));
  EXPECT_THROW(is_adversarial(est, 2.0 * best, 0.1), std::invalid_argument);
  EXPECT_THROW(is_adversarial(est, best, -1.0), std::invalid_argument);

  Engine rng(4);
  NormalSampler normal;
  Index hits = 0;
  for (int t = 0; t < 10000; ++t) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (Index j = 0; j < n - 1; ++j) u[j] = normal(rng);
    u.normalize();
    hits += is_adversarial(est, u, 10.0 * est.sigma_t()) ? 1 : 0;
  }
  EXPECT_LE(hits, 10);
}

TEST(IsAdversarial, StrictAtZero) {
  RowMatrix e(1, 3);
  e << 1, 1, 0;
  const SketchMatrix a = make_explicit(e);
  const OptimalEstimator est = build_optimal(a, 0, {1, 2}, 1.0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
  u[2] = 1.0;
  EXPECT_EQ(unit_deviation(est, u), 0.0);
  EXPECT_FALSE(is_adversarial(est, u, 0.0));
}

TEST(OptimalEstimator, JsonAndHash) {
  const SketchMatrix a = make_explicit(gaussian_matrix(2, 6, 11));
  const OptimalEstimator e1 = build_optimal(a, 5, {0, 1, 2}, 1.0);
  const OptimalEstimator e2 = build_optimal(a, 5, {0, 1, 3}, 1.0);
  EXPECT_NE(e1.support_hash(), e2.support_hash());
  EXPECT_NE(e1.to_json().find("sigma_T"), std::string::npos);
}

}  // namespace
}  // namespace sketchattack
