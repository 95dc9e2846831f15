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

#ifndef SKETCHATTACK_ANALYSIS_HPP_
#define SKETCHATTACK_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_model.hpp"
#include "sketchattack/responders.hpp"
#include "sketchattack/sketch_matrix.hpp"
#include "sketchattack/types.hpp"

namespace sketchattack {

// ---------------------------------------------------------------------------
// Fragile columns.

struct ColumnFragility {
  Index h = 0;
  std::vector<Index> active_rows;       // rows with a nonzero entry in h
  std::vector<Index> dominated_counts;  // |{j : A_ij^2 >= A_ih^2}| per row
  std::vector<Index> sorted_counts;     // nondecreasing
  bool fragile = false;
};

struct FragilityReport {
  std::vector<ColumnFragility> columns;
  double fragile_fraction = 0.0;
  // m / (10 k log2 k); the i-th smallest count must reach i times this.
  double unit_threshold = 0.0;
};

// Throws std::invalid_argument when k < 2 or an entry is non-finite.
FragilityReport fragility_report(const MatrixView& a);

// ---------------------------------------------------------------------------
// Gram-Schmidt with affine renormalization for vectors with pairwise inner
// products equal to 1.

class AffinePreconditionError : public std::invalid_argument {
 public:
  AffinePreconditionError(const std::string& what, std::size_t index)
      : std::invalid_argument(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct AffineOrthogonalization {
  std::vector<Eigen::VectorXd> u;
  // Row i holds the coefficients of u_i over v_0..v_i.
  Eigen::MatrixXd coefficients;
};

// `k` is the sketch dimension entering the norm precondition
// |v_i|^2 > (i + 1)(2 + ln k) for the 0-based index i.
AffineOrthogonalization affine_orthogonalize(std::span<const Eigen::VectorXd> v,
                                             Index k);

// ---------------------------------------------------------------------------
// Per-column sigma_t^2 with M = all other columns.

struct SigmaProfileEntry {
  Index h = 0;
  bool zero_column = false;
  double sigma_t_squared = 0.0;
};

struct SigmaProfile {
  std::vector<SigmaProfileEntry> entries;
  double floor = 0.0;  // c0 / (k ln k)
  double p10 = 0.0;
  double fraction_above = 0.0;  // among nonzero columns
  double max_sigma_t_squared = 0.0;
  Index zero_columns = 0;
};

SigmaProfile sigma_t_profile(const SketchMatrix& a, double c0 = 0.01);

// ---------------------------------------------------------------------------
// Signed Gaussian sums.

struct SignedSumCheck {
  Index trials = 0;
  Index violations = 0;
  double violation_frequency = 0.0;
  double probability_bound = 0.0;  // 2 exp(-t^2 / 2)
  Index deterministic_failures = 0;
  double max_ratio = 0.0;  // max over trials of sigma_max sqrt(r) / bound
};

SignedSumCheck signed_sum_bound_check(Index m, Index r, double t, Index trials,
                                      std::uint64_t seed,
                                      Index sign_vectors = 100);

// ---------------------------------------------------------------------------
// Noise norm concentration.

struct ConcentrationCheck {
  Index trials = 0;
  Index hits = 0;
  double frequency = 0.0;
  double bound = 0.0;      // 2 exp(-m eps^2 / 4)
  double std_error = 0.0;  // binomial, at the bound
  bool pass = false;       // frequency <= bound + 3 std_error
};

ConcentrationCheck noise_norm_concentration(Index m, Index trials,
                                            double epsilon, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Norm gap to signal gap.

struct NormSignalGapOptions {
  bool zero_noise = false;
};

struct NormSignalGapCheck {
  Index queries = 0;
  Index violations = 0;
  double epsilon = 0.0;           // 1 / (10 sqrt(k))
  double squared_threshold = 0.0;  // 1 - c^2 (1 + eps)
  double squared_width = 0.0;      // 2 alpha + alpha^2 + 2 c^2 eps
  // Width of the equivalent gap on |w|, divided by alpha.
  double induced_width_ratio = 0.0;
  double max_noise_fluctuation = 0.0;
};

// A correct (1, alpha) gap answer on |v| must be a correct gap answer for w^2
// with the threshold and width above. Each query is checked with both
// answers; `violations` counts (query, answer) pairs that break this.
NormSignalGapCheck check_norm_signal_gap(Index k, const QuerySpec& spec,
                                         Index trials, std::uint64_t seed,
                                         const NormSignalGapOptions& options = {});
NormSignalGapCheck check_norm_signal_gap(const SketchMatrix& a,
                                         const QuerySpec& spec, Index trials,
                                         std::uint64_t seed,
                                         const NormSignalGapOptions& options = {});

// ---------------------------------------------------------------------------
// Gain and the conditional response curve.

struct GainEstimate {
  double gain = 0.0;
  double std_error = 0.0;
  Index trials = 0;
};

// Mean of psi(Av) (T(Av) - w) over fresh queries.
GainEstimate measure_gain(const SketchMatrix& a, const QuerySpec& spec,
                          Responder& responder, const OptimalEstimator& est,
                          Index trials, std::uint64_t seed);

struct PsiOptions {
  Index bins = 64;
  Index min_count = 50;
};

struct PsiBin {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  Index count = 0;
  std::optional<double> mean;  // absent below min_count
};

std::vector<PsiBin> estimate_psi(const SketchMatrix& a, const QuerySpec& spec,
                                 Responder& responder, Index trials,
                                 std::uint64_t seed,
                                 const PsiOptions& options = {});

}  // namespace sketchattack

#endif  // SKETCHATTACK_ANALYSIS_HPP_
