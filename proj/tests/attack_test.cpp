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
#include <filesystem>

#include <gtest/gtest.h>

#include "sketchattack/attack.hpp"
#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/responders.hpp"
#include "test_util.hpp"

namespace sketchattack {
namespace {

using testing::iota_support;

struct Fixture {
  Index k = 6, n = 41;
  SketchMatrix a = sample_jl(6, 41, JlVariant::kGaussian, 21);
  QuerySpec spec = QuerySpec::make(41, 40, iota_support(0, 40), 1.0, 0.2);
  OptimalEstimator est = build_optimal(a, spec);
};

TEST(Attack, SingleQueryNormalizesTheNoise) {
  Fixture f;
  for (int s : {+1, -1}) {
    ConstantResponder rho(s);
    const AttackTranscript tr = run_attack(f.a, f.spec, rho, 1, 5);
    ASSERT_TRUE(tr.z_adv.has_value());
    const Eigen::VectorXd z = sample_noise(f.spec.noise(), f.n, 5, 0);
    const Eigen::VectorXd expect = s * z / z.norm();
    EXPECT_LT((*tr.z_adv - expect).norm(), 1e-12);
    EXPECT_EQ((*tr.z_adv)[f.spec.h()], 0.0);
  }
}

TEST(Attack, QueriesMatchTheSampler) {
  Fixture f;
  ConstantResponder rho(1);
  const AttackTranscript tr = run_attack(f.a, f.spec, rho, 130, 8, {nullptr, 16});
  for (Index t = 0; t < 130; ++t) {
    EXPECT_EQ(tr.signals[t], sample_signal(f.spec, 8, t));
  }
}

TEST(Attack, ConstantResponderDoesNotGrow) {
  Fixture f;
  ConstantResponder rho(1);
  const Index r = 4000;
  const AttackTranscript tr = run_attack(f.a, f.spec, rho, r, 2, {&f.est, 64});
  ASSERT_EQ(tr.per_step_deviation.size(), static_cast<std::size_t>(r));
  // The sum of i.i.d. noise has a Gaussian unit deviation.
  EXPECT_LT(std::abs(tr.per_step_deviation.back()), 4.5 * f.est.sigma_t());
  EXPECT_NEAR(tr.per_step_deviation.back(), unit_deviation(f.est, *tr.z_adv), 1e-9);
}

TEST(Attack, SignOracleGrowsLikeSqrtR) {
  // Answers with the sign of the noise deviation hidden in the estimate.
  Fixture f;
  const OptimalEstimator est = f.est;
  FunctionResponder rho([&est](const VectorView& y) {
    return estimate_signal(est, y) >= 1.1 ? 1 : -1;
  });
  const Index r = 16000;
  const AttackTranscript tr = run_attack(f.a, f.spec, rho, r, 3, {&f.est, 64});
  const double dev = std::abs(tr.per_step_deviation.back());
  EXPECT_GT(dev, 6.0 * f.est.sigma_t());
  EXPECT_GT(dev, std::abs(tr.per_step_deviation[r / 16 - 1]));
}

TEST(Attack, SharedRunMatchesSeparateRuns) {
  Fixture f;
  auto make = [] {
    std::vector<std::unique_ptr<Responder>> out;
    out.push_back(std::make_unique<NormGapResponder>(
        std::make_unique<StandardEstimator>(), 1.5));
    out.push_back(std::make_unique<NormGapResponder>(
        std::make_unique<RobustEstimator>(0.3, 12), 1.5));
    out.push_back(std::make_unique<RandomResponder>(99));
    return out;
  };
  auto shared_owned = make();
  std::vector<Responder*> shared;
  for (auto& p : shared_owned) shared.push_back(p.get());
  const auto together = run_attack_shared(f.a, f.spec, shared, 300, 4, {&f.est, 32});
  auto alone_owned = make();
  for (std::size_t i = 0; i < alone_owned.size(); ++i) {
    const AttackTranscript one =
        run_attack(f.a, f.spec, *alone_owned[i], 300, 4, {&f.est, 7});
    EXPECT_EQ(one.responses, together[i].responses);
    EXPECT_EQ(one.err_count, together[i].err_count);
    EXPECT_EQ(one.responder_tag, together[i].responder_tag);
    EXPECT_LT((*one.z_adv - *together[i].z_adv).norm(), 1e-12);
  }
}

TEST(Attack, RejectsBadInputs) {
  Fixture f;
  ConstantResponder rho(1);
  EXPECT_THROW(run_attack(f.a, f.spec, rho, 0, 1), std::invalid_argument);
  const OptimalEstimator other = build_optimal(f.a, 0, iota_support(1, 41), 1.0);
  EXPECT_THROW(run_attack(f.a, f.spec, rho, 5, 1, {&other, 64}),
               std::invalid_argument);
}

TEST(EvaluateAttack, OutcomeRules) {
  Fixture f;
  ConstantResponder minus(-1);
  const AttackTranscript tr = run_attack(f.a, f.spec, minus, 200, 6);
  const AttackOutcome loose = evaluate_attack(tr, f.est, 0.0, 1.0);
  EXPECT_EQ(loose.kind, OutcomeKind::kAdversarialFound);
  EXPECT_NEAR(loose.deviation_of_adv, unit_deviation(f.est, *tr.z_adv), 1e-15);

  Index errors = 0;
  for (Index t = 0; t < 200; ++t) {
    errors += gap_label(tr.signals[t], 1.0, 0.2) == GapLabel::kPlus ? 1 : 0;
  }
  EXPECT_EQ(tr.err_count, errors);
  const AttackOutcome strict = evaluate_attack(tr, f.est, 1e9, 0.0);
  EXPECT_DOUBLE_EQ(strict.err_rate, errors / 200.0);
  EXPECT_EQ(strict.kind, errors > 0 ? OutcomeKind::kResponderFailed
                                    : OutcomeKind::kInconclusive);
  const AttackOutcome neither = evaluate_attack(tr, f.est, 1e9, 1.0);
  EXPECT_EQ(neither.kind, OutcomeKind::kInconclusive);
  EXPECT_EQ(outcome_name(OutcomeKind::kResponderFailed), "responder-failed");
}

TEST(Transcript, SaveLoadRoundTrip) {
  Fixture f;
  RandomResponder rho(3);
  const AttackTranscript tr = run_attack(f.a, f.spec, rho, 77, 9, {&f.est, 10});
  const auto path = std::filesystem::temp_directory_path() / "sa_transcript_test.sktr";
  save_transcript(tr, path);
  const AttackTranscript back = load_transcript(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.r, tr.r);
  EXPECT_EQ(back.seed, tr.seed);
  EXPECT_EQ(back.responder_tag, tr.responder_tag);
  EXPECT_EQ(back.responses, tr.responses);
  EXPECT_EQ(back.signals, tr.signals);
  EXPECT_EQ(back.err_count, tr.err_count);
  EXPECT_EQ(back.per_step_deviation, tr.per_step_deviation);
  EXPECT_EQ(back.signed_sum, tr.signed_sum);
  EXPECT_EQ(*back.z_adv, *tr.z_adv);
  EXPECT_EQ(back.spec.support(), tr.spec.support());
  EXPECT_EQ(back.spec.alpha(), tr.spec.alpha());
  EXPECT_THROW(load_transcript("/nonexistent/x.sktr"), IoError);
}

TEST(Lightweight, SingleQueryAndReference) {
  const SketchMatrix a = sample_jl(4, 30, JlVariant::kSign, 2);
  StandardEstimator est;
  LightweightOptions opts;
  const AttackTranscript tr = run_lightweight_attack(a, 1.0, 1, est, 11, opts);
  const QuerySpec spec = lightweight_spec(30, opts.alpha);
  EXPECT_EQ(spec.h(), 29);
  EXPECT_EQ(tr.signals[0], 1.0);
  const Eigen::VectorXd z = sample_noise(spec.noise(), 30, 11, 0);
  EXPECT_LT((*tr.z_adv - tr.responses[0] * z / z.norm()).norm(), 1e-12);

  Eigen::VectorXd v = z;
  v[29] = 1.0;
  const double truth = v.norm();
  const int expect = standard_estimate(apply(a, v)) > truth ? 1 : -1;
  EXPECT_EQ(tr.responses[0], expect);
}

TEST(Lightweight, RobustZeroSigmaMatchesStandard) {
  const SketchMatrix a = sample_jl(8, 64, JlVariant::kSign, 4);
  StandardEstimator s;
  RobustEstimator r(0.0, 1);
  NormEstimator* both[] = {&s, &r};
  const auto out = run_lightweight_attack_shared(a, 1.0, 500, both, 3, {});
  EXPECT_EQ(out[0].responses, out[1].responses);
}

TEST(QueryBudget, Formula) {
  const double lnk = std::log(32.0);
  EXPECT_EQ(default_query_budget(3.0, 0.4, 32, 0.25),
            static_cast<Index>(std::ceil(0.25 * 9.0 / 0.16 * 1024.0 * lnk * lnk)));
  EXPECT_EQ(default_query_budget(0.0, 0.4, 32, 1.0), 1);
  EXPECT_EQ(default_query_budget(3.0, 0.4, 1, 1.0), 1);
  EXPECT_THROW(default_query_budget(3.0, 0.0, 32, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace sketchattack
