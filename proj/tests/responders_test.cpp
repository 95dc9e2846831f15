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

#include <gtest/gtest.h>

#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/responders.hpp"
#include "test_util.hpp"

namespace sketchattack {
namespace {

using testing::iota_support;
using testing::Moments;

// One row [t, ..., t, 1]: the signal sits in the last column and
// sigma_t = t exactly.
SketchMatrix TunedRow(Index m, double t) {
  RowMatrix e = RowMatrix::Constant(1, m + 1, t);
  e(0, m) = 1.0;
  return make_explicit(e);
}

TEST(StandardEstimate, Norm) {
  EXPECT_EQ(standard_estimate(Eigen::Vector2d(3, 4)), 5.0);
  EXPECT_EQ(standard_estimate(Eigen::Vector3d::Zero()), 0.0);
}

TEST(StandardEstimate, JlConcentration) {
  Index inside = 0;
  const Index trials = 2000;
  for (Index t = 0; t < trials; ++t) {
    const Eigen::VectorXd y = sample_jl_column(1000, JlVariant::kGaussian,
                                               derive_seed(1, StreamTag::kMatrix, t), 0);
    inside += std::abs(standard_estimate(y) - 1.0) <= 0.1 ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(inside) / trials, 0.99);
}

TEST(RobustEstimate, ZeroSigmaIsStandard) {
  Engine rng(1);
  const Eigen::VectorXd y = sample_jl_column(16, JlVariant::kGaussian, 3, 0);
  EXPECT_EQ(robust_estimate(y, 0.0, rng), standard_estimate(y));
  RobustEstimator r(0.0, 5);
  EXPECT_EQ(r.estimate(y), standard_estimate(y));
  EXPECT_THROW(RobustEstimator(-0.1, 1), std::invalid_argument);
}

TEST(RobustEstimate, ZeroSketchClampsHalfTheTime) {
  RobustEstimator r(1.0, 9);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  const Index trials = 100000;
  for (Index t = 0; t < trials; ++t) ASSERT_GE(r.estimate(zero), 0.0);
  EXPECT_NEAR(static_cast<double>(r.clamp_count()) / trials, 0.5, 0.01);
}

TEST(RobustEstimate, SquaredEstimateSpread) {
  // With a fixed sketch only the added noise varies.
  Engine rng(2);
  const Eigen::Vector2d y(0.6, 0.8);
  Moments mom;
  for (int t = 0; t < 100000; ++t) {
    const double s = robust_estimate(y, 0.05, rng);
    mom.add(s * s);
  }
  EXPECT_NEAR(std::sqrt(mom.variance()), 0.05, 0.001);
  EXPECT_LT(std::abs(mom.mean - 1.0), 3.0 * mom.std_error());
}

TEST(GapFromEstimate, TieAnswersMinus) {
  EXPECT_EQ(gap_from_estimate(1.2, 1.0).s, 1);
  EXPECT_EQ(gap_from_estimate(0.8, 1.0).s, -1);
  EXPECT_EQ(gap_from_estimate(1.0, 1.0).s, -1);
  EXPECT_EQ(*gap_from_estimate(0.8, 1.0).raw_estimate, 0.8);
}

TEST(NormResponders, ReadOnlyTheSketch) {
  auto make = [] {
    return NormGapResponder(std::make_unique<RobustEstimator>(0.3, 44), 1.0);
  };
  NormGapResponder r1 = make(), r2 = make();
  for (std::uint64_t t = 0; t < 500; ++t) {
    const Eigen::VectorXd y = sample_jl_column(8, JlVariant::kSign, t, 0);
    EXPECT_EQ(r1.respond(y).s, r2.respond(Eigen::VectorXd(y)).s);
  }
  EXPECT_FALSE(r1.distribution_aware());
  EXPECT_EQ(r1.tag(), "robust");
}

TEST(OptimalGapResponder, ZeroNoiseAnswers) {
  const SketchMatrix a = TunedRow(10, 0.2);
  const OptimalEstimator est = build_optimal(a, 10, iota_support(0, 10), 1.0);
  auto psi = optimal_gap_responder(est, 1.05);
  EXPECT_TRUE(psi->distribution_aware());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(11);
  v[10] = 2.0;
  EXPECT_EQ(psi->respond(apply(a, v)).s, 1);
  v[10] = 0.5;
  EXPECT_EQ(psi->respond(apply(a, v)).s, -1);

  RowMatrix z = RowMatrix::Ones(1, 3);
  z(0, 2) = 0.0;
  const OptimalEstimator zero = build_optimal(make_explicit(z), 2, {0, 1}, 1.0);
  EXPECT_THROW(optimal_gap_responder(zero, 1.0), ColumnZeroError);
}

TEST(MeasureErr, SmallSigmaMeetsTolerance) {
  const double alpha = 0.4, delta = default_delta(alpha);
  const double bound = alpha / (4.0 * std::sqrt(2.0 * std::log(1.0 / delta)));
  const SketchMatrix a = TunedRow(20, 0.95 * bound);
  const QuerySpec spec = QuerySpec::make(21, 20, iota_support(0, 20), 1.0, alpha);
  const OptimalEstimator est = build_optimal(a, spec);
  ASSERT_NEAR(est.sigma_t(), 0.95 * bound, 1e-12);
  auto psi = optimal_gap_responder(est, spec);
  EXPECT_LE(measure_err(*psi, a, spec, 100000, 3), delta);
}

TEST(MeasureErr, NonIncreasingInGapWidth) {
  const SketchMatrix a = TunedRow(20, 0.1);
  double previous = 1.0;
  for (double alpha : {0.1, 0.2, 0.4}) {
    const QuerySpec spec = QuerySpec::make(21, 20, iota_support(0, 20), 1.0, alpha);
    auto psi = optimal_gap_responder(build_optimal(a, spec), spec);
    const double err = measure_err(*psi, a, spec, 100000, 4);
    const double se = std::sqrt(std::max(err * (1 - err), 1e-6) / 1e5);
    EXPECT_LE(err, previous + 3.0 * se) << alpha;
    previous = err;
  }
}

TEST(MeasureErr, PerfectResponderFromExactChannel) {
  // Row 0 carries only the signal, so the sketch reveals w.
  RowMatrix e = RowMatrix::Zero(2, 9);
  e(0, 8) = 1.0;
  e.row(1).head(8).setOnes();
  const SketchMatrix a = make_explicit(e);
  const QuerySpec spec = QuerySpec::make(9, 8, iota_support(0, 8), 0.5, 0.1);
  FunctionResponder oracle([](const VectorView& y) { return y[0] > 1.05 ? 1 : -1; });
  EXPECT_EQ(measure_err(oracle, a, spec, 20000, 5), 0.0);
}

TEST(MeasureErr, RandomAndConstantResponders) {
  const double c = 0.5;
  const SketchMatrix a = TunedRow(20, 0.3);
  const QuerySpec spec = QuerySpec::make(21, 20, iota_support(0, 20), c, 0.1);
  RandomResponder coin(77);
  EXPECT_NEAR(measure_err(coin, a, spec, 100000, 6), 0.5 * 10.0 / (c + 10.0), 0.01);
  ConstantResponder plus(+1);
  EXPECT_NEAR(measure_err(plus, a, spec, 100000, 7), 5.0 / (c + 10.0), 0.01);
  EXPECT_THROW(ConstantResponder(0), std::invalid_argument);
}

TEST(FunctionResponder, RejectsNonSign) {
  FunctionResponder bad([](const VectorView&) { return 0; });
  EXPECT_THROW(bad.respond(Eigen::VectorXd::Zero(1)), std::logic_error);
}

}  // namespace
}  // namespace sketchattack
