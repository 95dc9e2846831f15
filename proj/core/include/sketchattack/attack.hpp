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

#ifndef SKETCHATTACK_ATTACK_HPP_
#define SKETCHATTACK_ATTACK_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_model.hpp"
#include "sketchattack/responders.hpp"
#include "sketchattack/sketch_matrix.hpp"

namespace sketchattack {

struct AttackTranscript {
  explicit AttackTranscript(QuerySpec query_spec) : spec(std::move(query_spec)) {}

  QuerySpec spec;
  Index r = 0;
  std::uint64_t seed = 0;
  std::string responder_tag;
  std::vector<std::int8_t> responses;
  std::vector<double> signals;
  Eigen::VectorXd signed_sum;
  std::optional<Eigen::VectorXd> z_adv;
  // Filled only when an evaluator estimator is supplied. Entry t is the unit
  // deviation of the normalized signed sum after step t.
  std::vector<double> per_step_deviation;
  // Entry t is the unit deviation of the t-th noise vector.
  std::vector<double> step_noise_deviation;
  Index err_count = 0;

  bool degenerate() const { return !z_adv.has_value(); }
};

struct AttackOptions {
  // Used for telemetry after each response. Never visible to responders.
  const OptimalEstimator* evaluator = nullptr;
  Index block_size = 64;
};

enum class ReferenceNorm {
  kTrueNorm,  // |v|_2 of the query actually sent
  kExpected,  // sqrt(w^2 + c^2)
};

struct LightweightOptions {
  const OptimalEstimator* evaluator = nullptr;
  Index block_size = 64;
  ReferenceNorm reference = ReferenceNorm::kTrueNorm;
  // Gap width used for the per-step error labels.
  double alpha = 0.1;
};

AttackTranscript run_attack(const SketchMatrix& a, const QuerySpec& spec,
                            Responder& responder, Index r, std::uint64_t seed,
                            const AttackOptions& options = {});

// Runs several responders against one shared query batch. Equivalent to
// separate run_attack calls with the same seed.
std::vector<AttackTranscript> run_attack_shared(
    const SketchMatrix& a, const QuerySpec& spec,
    std::span<Responder* const> responders, Index r, std::uint64_t seed,
    const AttackOptions& options = {});

// h = n - 1, M = the first n - 1 columns, c = 1.
QuerySpec lightweight_spec(Index n, double alpha);

AttackTranscript run_lightweight_attack(const SketchMatrix& a, double w_fixed,
                                        Index r, NormEstimator& responder,
                                        std::uint64_t seed,
                                        const LightweightOptions& options = {});

std::vector<AttackTranscript> run_lightweight_attack_shared(
    const SketchMatrix& a, double w_fixed, Index r,
    std::span<NormEstimator* const> responders, std::uint64_t seed,
    const LightweightOptions& options = {});

// Returns S / |S|, or nothing when S is exactly zero.
std::optional<Eigen::VectorXd> normalize_signed_sum(const Eigen::VectorXd& sum);

enum class OutcomeKind { kResponderFailed, kAdversarialFound, kInconclusive };

std::string_view outcome_name(OutcomeKind kind);

struct AttackOutcome {
  OutcomeKind kind = OutcomeKind::kInconclusive;
  double err_rate = 0.0;
  double deviation_of_adv = 0.0;
  double gamma_achieved = 0.0;
  bool responder_failed = false;
  bool adversarial = false;
};

// An adversarial z_adv takes precedence over the error-rate branch.
AttackOutcome evaluate_attack(const AttackTranscript& transcript,
                              const OptimalEstimator& est, double gamma,
                              double delta);

// ceil(c_r * gamma^2 * alpha^-2 * k^2 * ln^2 k), at least 1.
Index default_query_budget(double gamma, double alpha, Index k, double c_r);

void save_transcript(const AttackTranscript& transcript,
                     const std::filesystem::path& path);
AttackTranscript load_transcript(const std::filesystem::path& path);
std::string transcript_summary_json(const AttackTranscript& transcript,
                                    const AttackOutcome& outcome);

}  // namespace sketchattack

#endif  // SKETCHATTACK_ATTACK_HPP_
