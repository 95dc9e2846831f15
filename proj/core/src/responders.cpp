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

#include "sketchattack/responders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "sketchattack/query_stream.hpp"

namespace sketchattack {

double standard_estimate(const VectorView& sketch) { return sketch.norm(); }

double robust_estimate(const VectorView& sketch, double sigma, Engine& rng,
                       bool* clamped) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (clamped) *clamped = false;
  if (sigma == 0.0) return sketch.norm();
  NormalSampler normal;
  const double radicand = sketch.squaredNorm() + sigma * normal(rng);
  if (radicand < 0.0) {
    if (clamped) *clamped = true;
    return 0.0;
  }
  return std::sqrt(radicand);
}

GapResponse gap_from_estimate(double estimate, double reference) {
  return {estimate > reference ? 1 : -1, estimate};
}

RobustEstimator::RobustEstimator(double sigma, std::uint64_t stream_seed)
    : sigma_(sigma), rng_(stream_seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
}

double RobustEstimator::estimate(const VectorView& sketch) {
  bool clamped = false;
  const double value = robust_estimate(sketch, sigma_, rng_, &clamped);
  if (clamped) ++clamp_count_;
  return value;
}

NormGapResponder::NormGapResponder(std::unique_ptr<NormEstimator> estimator,
                                   double threshold)
    : estimator_(std::move(estimator)), threshold_(threshold) {
  if (!estimator_) throw std::invalid_argument("missing norm estimator");
}

GapResponse NormGapResponder::respond(const VectorView& sketch) {
  return gap_from_estimate(estimator_->estimate(sketch), threshold_);
}

OptimalGapResponder::OptimalGapResponder(OptimalEstimator estimator,
                                         double threshold)
    : estimator_(std::move(estimator)), threshold_(threshold) {
  if (estimator_.column_zero()) {
    throw ColumnZeroError("optimal-gap responder needs a nonzero column");
  }
}

GapResponse OptimalGapResponder::respond(const VectorView& sketch) {
  const double t = estimate_signal(estimator_, sketch);
  return {t >= threshold_ ? 1 : -1, t};
}

ConstantResponder::ConstantResponder(int s) : s_(s) {
  if (s != 1 && s != -1) throw std::invalid_argument("response must be +1 or -1");
}

RandomResponder::RandomResponder(std::uint64_t stream_seed) : rng_(stream_seed) {}

GapResponse RandomResponder::respond(const VectorView&) {
  return {(rng_() >> 63) ? 1 : -1, std::nullopt};
}

FunctionResponder::FunctionResponder(std::function<int(const VectorView&)> fn,
                                     std::string tag, bool aware)
    : fn_(std::move(fn)), tag_(std::move(tag)), aware_(aware) {}

GapResponse FunctionResponder::respond(const VectorView& sketch) {
  const int s = fn_(sketch);
  if (s != 1 && s != -1) throw std::logic_error("responder returned a non-sign");
  return {s, std::nullopt};
}

std::unique_ptr<Responder> optimal_gap_responder(const OptimalEstimator& est,
                                                 double threshold) {
  return std::make_unique<OptimalGapResponder>(est, threshold);
}

std::unique_ptr<Responder> optimal_gap_responder(const OptimalEstimator& est,
                                                 const QuerySpec& spec) {
  return optimal_gap_responder(est, 1.0 + spec.alpha() / 2.0);
}

double measure_err(Responder& psi, const SketchMatrix& a,
                   const QuerySpec& spec, Index trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("measure_err needs trials >= 1");
  QueryStream stream(a, spec, seed);
  QueryStream::Block block;
  Eigen::VectorXd sketch(a.k());
  constexpr Index kBlock = 64;
  Index errors = 0;
  for (Index first = 0; first < trials; first += kBlock) {
    stream.fill(first, std::min(kBlock, trials - first), block);
    for (Index j = 0; j < block.count; ++j) {
      stream.sketch(block, j, sketch);
      const int s = psi.respond(sketch).s;
      if (!is_correct(gap_label(block.w[j], 1.0, spec.alpha()), s)) ++errors;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(trials);
}

}  // namespace sketchattack
