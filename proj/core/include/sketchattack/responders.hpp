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

#ifndef SKETCHATTACK_RESPONDERS_HPP_
#define SKETCHATTACK_RESPONDERS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_model.hpp"
#include "sketchattack/rng.hpp"
#include "sketchattack/sketch_matrix.hpp"
#include "sketchattack/types.hpp"

namespace sketchattack {

struct GapResponse {
  int s = -1;
  std::optional<double> raw_estimate;
};

double standard_estimate(const VectorView& sketch);
// sqrt(|sketch|^2 + N(0, sigma^2)), clamped to 0 when the radicand is
// negative. `clamped` is set when that happens.
double robust_estimate(const VectorView& sketch, double sigma, Engine& rng,
                       bool* clamped = nullptr);

// +1 iff estimate > reference; ties answer -1.
GapResponse gap_from_estimate(double estimate, double reference);

// Norm estimators read only the sketch.
class NormEstimator {
 public:
  virtual ~NormEstimator() = default;
  virtual double estimate(const VectorView& sketch) = 0;
  virtual std::string tag() const = 0;
  virtual double sigma() const = 0;
};

class StandardEstimator final : public NormEstimator {
 public:
  double estimate(const VectorView& sketch) override {
    return standard_estimate(sketch);
  }
  std::string tag() const override { return "standard"; }
  double sigma() const override { return 0.0; }
};

class RobustEstimator final : public NormEstimator {
 public:
  RobustEstimator(double sigma, std::uint64_t stream_seed);

  double estimate(const VectorView& sketch) override;
  std::string tag() const override { return "robust"; }
  double sigma() const override { return sigma_; }
  Index clamp_count() const { return clamp_count_; }

 private:
  double sigma_;
  Engine rng_;
  Index clamp_count_ = 0;
};

// Gap responders consume one sketch per call and answer +1 or -1.
class Responder {
 public:
  virtual ~Responder() = default;
  virtual GapResponse respond(const VectorView& sketch) = 0;
  virtual std::string tag() const = 0;
  // True when the responder was built with knowledge of (h, M).
  virtual bool distribution_aware() const { return false; }
};

// Answers gap_from_estimate(estimator(sketch), threshold).
class NormGapResponder final : public Responder {
 public:
  NormGapResponder(std::unique_ptr<NormEstimator> estimator, double threshold);

  GapResponse respond(const VectorView& sketch) override;
  std::string tag() const override { return estimator_->tag(); }
  const NormEstimator& estimator() const { return *estimator_; }

 private:
  std::unique_ptr<NormEstimator> estimator_;
  double threshold_;
};

// +1 iff estimate_signal(sketch) >= threshold.
class OptimalGapResponder final : public Responder {
 public:
  OptimalGapResponder(OptimalEstimator estimator, double threshold);

  GapResponse respond(const VectorView& sketch) override;
  std::string tag() const override { return "optimal-gap"; }
  bool distribution_aware() const override { return true; }
  double threshold() const { return threshold_; }

 private:
  OptimalEstimator estimator_;
  double threshold_;
};

class ConstantResponder final : public Responder {
 public:
  explicit ConstantResponder(int s);
  GapResponse respond(const VectorView&) override { return {s_, std::nullopt}; }
  std::string tag() const override { return "constant"; }

 private:
  int s_;
};

class RandomResponder final : public Responder {
 public:
  explicit RandomResponder(std::uint64_t stream_seed);
  GapResponse respond(const VectorView& sketch) override;
  std::string tag() const override { return "random"; }

 private:
  Engine rng_;
};

class FunctionResponder final : public Responder {
 public:
  explicit FunctionResponder(std::function<int(const VectorView&)> fn,
                             std::string tag = "custom", bool aware = false);
  GapResponse respond(const VectorView& sketch) override;
  std::string tag() const override { return tag_; }
  bool distribution_aware() const override { return aware_; }

 private:
  std::function<int(const VectorView&)> fn_;
  std::string tag_;
  bool aware_;
};

// Throws ColumnZeroError on a zero signal column.
std::unique_ptr<Responder> optimal_gap_responder(const OptimalEstimator& est,
                                                 double threshold);
std::unique_ptr<Responder> optimal_gap_responder(const OptimalEstimator& est,
                                                 const QuerySpec& spec);

// Fraction of queries answered incorrectly for the (1, alpha) signal gap.
// Queries are sample_query(spec, seed, t) for t < trials.
double measure_err(Responder& psi, const SketchMatrix& a,
                   const QuerySpec& spec, Index trials, std::uint64_t seed);

}  // namespace sketchattack

#endif  // SKETCHATTACK_RESPONDERS_HPP_
