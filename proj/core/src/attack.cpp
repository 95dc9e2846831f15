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

#include "sketchattack/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sketchattack/query_stream.hpp"

namespace sketchattack {
namespace {

void CheckEvaluator(const OptimalEstimator* est, const QuerySpec& spec) {
  if (est == nullptr) return;
  if (est->column_zero()) {
    throw ColumnZeroError("evaluator estimator has a zero signal column");
  }
  if (est->h() != spec.h() || est->n() != spec.n() ||
      est->support() != spec.support()) {
    throw std::invalid_argument("evaluator was built for a different (h, M)");
  }
}

// Shared main loop. `decide(rho, sketch, w, energy)` returns the response of
// responder rho to the current query.
template <typename Decide>
std::vector<AttackTranscript> RunCore(const QueryStream& stream, Index r,
                                      std::uint64_t seed, std::size_t count,
                                      const OptimalEstimator* evaluator,
                                      Index block_size, double alpha,
                                      Decide&& decide) {
  if (r < 1) throw std::invalid_argument("attack needs r >= 1");
  if (block_size < 1) throw std::invalid_argument("block size must be positive");
  const QuerySpec& spec = stream.spec();
  CheckEvaluator(evaluator, spec);
  const Index m = spec.m();

  std::vector<AttackTranscript> out(count, AttackTranscript(spec));
  std::vector<Eigen::VectorXd> sums(count, Eigen::VectorXd::Zero(m));
  std::vector<double> numerators(count, 0.0);
  for (auto& tr : out) {
    tr.r = r;
    tr.seed = seed;
    tr.responses.reserve(static_cast<std::size_t>(r));
    tr.signals.reserve(static_cast<std::size_t>(r));
    if (evaluator) {
      tr.per_step_deviation.reserve(static_cast<std::size_t>(r));
      tr.step_noise_deviation.reserve(static_cast<std::size_t>(r));
    }
  }

  QueryStream::Block block;
  Eigen::VectorXd sketch(stream.signal_column().size());
  for (Index first = 0; first < r; first += block_size) {
    stream.fill(first, std::min(block_size, r - first), block);
    for (Index j = 0; j < block.count; ++j) {
      stream.sketch(block, j, sketch);
      const double w = block.w[j];
      const GapLabel label = gap_label(w, 1.0, alpha);
      const double noise_dev =
          evaluator ? evaluator->extraction().dot(block.noise_sketch.col(j)) : 0.0;
      for (std::size_t rho = 0; rho < count; ++rho) {
        const int s = decide(rho, sketch, w, block.energy[j]);
        AttackTranscript& tr = out[rho];
        tr.responses.push_back(static_cast<std::int8_t>(s));
        tr.signals.push_back(w);
        if (!is_correct(label, s)) ++tr.err_count;
        sums[rho] += static_cast<double>(s) * block.noise.col(j);
        if (evaluator) {
          numerators[rho] += s * noise_dev;
          const double norm = sums[rho].norm();
          tr.per_step_deviation.push_back(norm > 0.0 ? numerators[rho] / norm
                                                     : 0.0);
          tr.step_noise_deviation.push_back(noise_dev);
        }
      }
    }
  }

  const auto& support = spec.support();
  for (std::size_t rho = 0; rho < count; ++rho) {
    AttackTranscript& tr = out[rho];
    tr.signed_sum = Eigen::VectorXd::Zero(spec.n());
    for (std::size_t i = 0; i < support.size(); ++i) {
      tr.signed_sum[support[i]] = sums[rho][static_cast<Index>(i)];
    }
    tr.z_adv = normalize_signed_sum(tr.signed_sum);
  }
  return out;
}

}  // namespace

std::optional<Eigen::VectorXd> normalize_signed_sum(const Eigen::VectorXd& sum) {
  const double norm = sum.norm();
  if (norm == 0.0) return std::nullopt;
  return Eigen::VectorXd(sum / norm);
}

AttackTranscript run_attack(const SketchMatrix& a, const QuerySpec& spec,
                            Responder& responder, Index r, std::uint64_t seed,
                            const AttackOptions& options) {
  Responder* one[] = {&responder};
  return std::move(run_attack_shared(a, spec, one, r, seed, options).front());
}

std::vector<AttackTranscript> run_attack_shared(
    const SketchMatrix& a, const QuerySpec& spec,
    std::span<Responder* const> responders, Index r, std::uint64_t seed,
    const AttackOptions& options) {
  if (responders.empty()) throw std::invalid_argument("no responders given");
  QueryStream stream(a, spec, seed);
  auto out = RunCore(stream, r, seed, responders.size(), options.evaluator,
                     options.block_size, spec.alpha(),
                     [&](std::size_t rho, const Eigen::VectorXd& sketch, double,
                         double) { return responders[rho]->respond(sketch).s; });
  for (std::size_t rho = 0; rho < out.size(); ++rho) {
    out[rho].responder_tag = responders[rho]->tag();
  }
  return out;
}

QuerySpec lightweight_spec(Index n, double alpha) {
  if (n < 2) throw std::invalid_argument("lightweight attack needs n >= 2");
  std::vector<Index> support(static_cast<std::size_t>(n - 1));
  std::iota(support.begin(), support.end(), Index{0});
  return QuerySpec::make(n, n - 1, std::move(support), 1.0, alpha);
}

AttackTranscript run_lightweight_attack(const SketchMatrix& a, double w_fixed,
                                        Index r, NormEstimator& responder,
                                        std::uint64_t seed,
                                        const LightweightOptions& options) {
  NormEstimator* one[] = {&responder};
  return std::move(
      run_lightweight_attack_shared(a, w_fixed, r, one, seed, options).front());
}

std::vector<AttackTranscript> run_lightweight_attack_shared(
    const SketchMatrix& a, double w_fixed, Index r,
    std::span<NormEstimator* const> responders, std::uint64_t seed,
    const LightweightOptions& options) {
  if (responders.empty()) throw std::invalid_argument("no responders given");
  if (!std::isfinite(w_fixed)) throw std::invalid_argument("w_fixed must be finite");
  const QuerySpec spec = lightweight_spec(a.n(), options.alpha);
  QueryStream stream(a, spec, seed);
  stream.set_fixed_signal(w_fixed);
  const double expected = std::sqrt(w_fixed * w_fixed + 1.0);
  auto out = RunCore(
      stream, r, seed, responders.size(), options.evaluator, options.block_size,
      spec.alpha(),
      [&](std::size_t rho, const Eigen::VectorXd& sketch, double w,
          double energy) {
        const double reference = options.reference == ReferenceNorm::kTrueNorm
                                     ? std::sqrt(w * w + energy)
                                     : expected;
        return gap_from_estimate(responders[rho]->estimate(sketch), reference).s;
      });
  for (std::size_t rho = 0; rho < out.size(); ++rho) {
    out[rho].responder_tag = responders[rho]->tag();
  }
  return out;
}

std::string_view outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kResponderFailed:
      return "responder-failed";
    case OutcomeKind::kAdversarialFound:
      return "adversarial-found";
    case OutcomeKind::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

AttackOutcome evaluate_attack(const AttackTranscript& transcript,
                              const OptimalEstimator& est, double gamma,
                              double delta) {
  CheckEvaluator(&est, transcript.spec);
  if (transcript.r < 1 ||
      transcript.responses.size() != static_cast<std::size_t>(transcript.r)) {
    throw std::invalid_argument("transcript is incomplete");
  }
  AttackOutcome outcome;
  outcome.err_rate = static_cast<double>(transcript.err_count) /
                     static_cast<double>(transcript.r);
  if (transcript.z_adv) {
    outcome.deviation_of_adv = unit_deviation(est, *transcript.z_adv);
  }
  outcome.gamma_achieved = std::abs(outcome.deviation_of_adv);
  outcome.responder_failed = outcome.err_rate > delta;
  outcome.adversarial = transcript.z_adv.has_value() && outcome.gamma_achieved > gamma;
  if (outcome.adversarial) {
    outcome.kind = OutcomeKind::kAdversarialFound;
  } else if (outcome.responder_failed) {
    outcome.kind = OutcomeKind::kResponderFailed;
  } else {
    outcome.kind = OutcomeKind::kInconclusive;
  }
  return outcome;
}

Index default_query_budget(double gamma, double alpha, Index k, double c_r) {
  if (!(gamma >= 0.0) || !(alpha > 0.0) || k < 1 || !(c_r > 0.0)) {
    throw std::invalid_argument("invalid query budget parameters");
  }
  const double lnk = std::log(static_cast<double>(k));
  const double kk = static_cast<double>(k);
  const double budget =
      std::ceil(c_r * gamma * gamma / (alpha * alpha) * kk * kk * lnk * lnk);
  return std::max<Index>(1, static_cast<Index>(budget));
}

}  // namespace sketchattack
