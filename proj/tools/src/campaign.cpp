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

#include "sketchattack/harness/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "sketchattack/harness/parallel.hpp"
#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_model.hpp"
#include "sketchattack/responders.hpp"
#include "sketchattack/rng.hpp"

namespace sketchattack::harness {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::uint64_t ResponderSeed(std::uint64_t trial_seed, std::size_t index) {
  return derive_seed(trial_seed, StreamTag::kResponder, index);
}

// Uniform h among nonzero columns, then a uniform m-subset of the rest,
// stored in increasing order.
QuerySpec DrawFullSpec(const SketchMatrix& a, const CampaignConfig& c,
                       std::uint64_t trial_seed) {
  Engine rng = make_stream(trial_seed, StreamTag::kSupport, 0);
  std::vector<Index> nonzero;
  for (Index j = 0; j < a.n(); ++j) {
    if (a.entries().col(j).cwiseAbs().maxCoeff() >= 1e-12) nonzero.push_back(j);
  }
  if (nonzero.empty()) throw ConfigError("sketch matrix has no nonzero column");
  boost::random::uniform_int_distribution<std::size_t> pick(0, nonzero.size() - 1);
  const Index h = nonzero[pick(rng)];

  std::vector<Index> rest;
  rest.reserve(static_cast<std::size_t>(a.n() - 1));
  for (Index j = 0; j < a.n(); ++j) {
    if (j != h) rest.push_back(j);
  }
  const std::size_t m = static_cast<std::size_t>(c.m ? *c.m : a.n() - 1);
  for (std::size_t i = 0; i < m && m < rest.size(); ++i) {
    boost::random::uniform_int_distribution<std::size_t> d(i, rest.size() - 1);
    std::swap(rest[i], rest[d(rng)]);
  }
  rest.resize(m);
  std::sort(rest.begin(), rest.end());
  return QuerySpec::make(a.n(), h, std::move(rest), c.c, c.alpha);
}

std::vector<CampaignRecord> MakeRecords(const CampaignConfig& c, Index trial,
                                        std::uint64_t trial_seed,
                                        const EstimatorConfig& ec,
                                        const AttackTranscript& tr) {
  std::vector<CampaignRecord> rows;
  rows.reserve(static_cast<std::size_t>(c.r / c.record_every + 1));
  Index errors = 0;
  const double alpha = tr.spec.alpha();
  for (Index t = 0; t < tr.r; ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (!is_correct(gap_label(tr.signals[i], 1.0, alpha), tr.responses[i])) ++errors;
    const Index step = t + 1;
    if (step % c.record_every != 0 && step != tr.r) continue;
    CampaignRecord row;
    row.k = c.k;
    row.estimator = std::string(estimator_tag(ec.kind));
    row.sigma = ec.sigma;
    row.trial = trial;
    row.step = step;
    row.deviation = std::abs(tr.per_step_deviation[i]);
    row.err_rate = static_cast<double>(errors) / static_cast<double>(step);
    row.seed = trial_seed;
    rows.push_back(std::move(row));
  }
  return rows;
}

double FullNormThreshold(const CampaignConfig& c) {
  const double w = 1.0 + c.alpha / 2.0;
  return std::sqrt(w * w + c.c * c.c);
}

TrialResult RunTrial(const CampaignConfig& c, const SketchMatrix& a, Index trial,
                     bool keep_transcripts) {
  const auto start = Clock::now();
  TrialResult out;
  out.trial = trial;
  out.seed = c.trial_seed(trial);

  const QuerySpec spec = c.attack == AttackKind::kLightweight
                             ? lightweight_spec(c.n, c.alpha)
                             : DrawFullSpec(a, c, out.seed);
  const OptimalEstimator est = build_optimal(a, spec);
  if (est.column_zero()) throw ConfigError("signal column is zero");
  out.h = spec.h();
  out.m = spec.m();
  out.sigma_t = est.sigma_t();

  std::vector<AttackTranscript> transcripts;
  std::vector<const RobustEstimator*> robust(c.estimators.size(), nullptr);
  std::vector<std::unique_ptr<NormEstimator>> owned_norm;
  std::vector<std::unique_ptr<Responder>> owned;
  if (c.attack == AttackKind::kLightweight) {
    std::vector<NormEstimator*> ptrs;
    for (std::size_t i = 0; i < c.estimators.size(); ++i) {
      const auto& ec = c.estimators[i];
      if (ec.kind == EstimatorKind::kRobust) {
        auto r = std::make_unique<RobustEstimator>(ec.sigma, ResponderSeed(out.seed, i));
        robust[i] = r.get();
        owned_norm.push_back(std::move(r));
      } else {
        owned_norm.push_back(std::make_unique<StandardEstimator>());
      }
      ptrs.push_back(owned_norm.back().get());
    }
    LightweightOptions opts;
    opts.evaluator = &est;
    opts.alpha = c.alpha;
    transcripts = run_lightweight_attack_shared(a, c.w_fixed, c.r, ptrs, out.seed, opts);
  } else {
    std::vector<Responder*> ptrs;
    for (std::size_t i = 0; i < c.estimators.size(); ++i) {
      const auto& ec = c.estimators[i];
      const std::uint64_t rs = ResponderSeed(out.seed, i);
      switch (ec.kind) {
        case EstimatorKind::kStandard:
        case EstimatorKind::kRobust: {
          std::unique_ptr<NormEstimator> ne;
          if (ec.kind == EstimatorKind::kRobust) {
            auto r = std::make_unique<RobustEstimator>(ec.sigma, rs);
            robust[i] = r.get();
            ne = std::move(r);
          } else {
            ne = std::make_unique<StandardEstimator>();
          }
          owned.push_back(std::make_unique<NormGapResponder>(
              std::move(ne), ec.threshold.value_or(FullNormThreshold(c))));
          break;
        }
        case EstimatorKind::kOptimalGap:
          owned.push_back(optimal_gap_responder(
              est, ec.threshold.value_or(1.0 + c.alpha / 2.0)));
          break;
        case EstimatorKind::kRandom:
          owned.push_back(std::make_unique<RandomResponder>(rs));
          break;
      }
      ptrs.push_back(owned.back().get());
    }
    AttackOptions opts;
    opts.evaluator = &est;
    transcripts = run_attack_shared(a, spec, ptrs, c.r, out.seed, opts);
  }

  out.estimators.resize(c.estimators.size());
  for (std::size_t i = 0; i < robust.size(); ++i) {
    if (robust[i]) out.estimators[i].clamp_count = robust[i]->clamp_count();
  }
  for (std::size_t i = 0; i < c.estimators.size(); ++i) {
    const auto& ec = c.estimators[i];
    auto& res = out.estimators[i];
    const AttackTranscript& tr = transcripts[i];
    res.tag = std::string(estimator_tag(ec.kind));
    res.sigma = ec.sigma;
    res.final_deviation = std::abs(tr.per_step_deviation.back());
    res.outcome = evaluate_attack(tr, est, c.gamma, c.effective_delta());
    auto rows = MakeRecords(c, trial, out.seed, ec, tr);
    out.records.insert(out.records.end(), std::make_move_iterator(rows.begin()),
                       std::make_move_iterator(rows.end()));
  }
  if (keep_transcripts) out.transcripts = std::move(transcripts);
  out.wall_time = Seconds(start);
  for (auto& row : out.records) row.wall_time = out.wall_time;
  return out;
}

double SampleStd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

SketchMatrix campaign_matrix(const CampaignConfig& c) {
  if (c.matrix.from_file) {
    SketchMatrix a = load_sketch_matrix(c.matrix.path);
    if (a.k() != c.k || a.n() != c.n) {
      throw ConfigError("matrix file dimensions do not match k and n");
    }
    return a;
  }
  const std::uint64_t seed = c.matrix_seed();
  switch (c.matrix.family) {
    case SketchFamily::kJlGaussian:
      return sample_jl(c.k, c.n, JlVariant::kGaussian, seed);
    case SketchFamily::kJlSign:
      return sample_jl(c.k, c.n, JlVariant::kSign, seed);
    case SketchFamily::kAms:
      return sample_ams(c.k, c.n, seed);
    case SketchFamily::kExplicit:
      break;
  }
  throw ConfigError("unsupported matrix family");
}

CampaignResult run_campaign(const CampaignConfig& c, const RunOptions& options) {
  const auto start = Clock::now();
  const SketchMatrix a = campaign_matrix(c);
  CampaignResult result;
  result.trials.resize(static_cast<std::size_t>(c.trials));
  parallel_for(result.trials.size(), options.threads, [&](std::size_t t) {
    result.trials[t] = RunTrial(c, a, static_cast<Index>(t), options.keep_transcripts);
  });
  result.wall_time = Seconds(start);
  result.summary = summarize(c, result.trials);
  result.summary["wall_time_s"] = result.wall_time;
  return result;
}

json summarize(const CampaignConfig& c, const std::vector<TrialResult>& trials) {
  json doc;
  doc["config"] = json::parse(config_to_json(c));
  doc["std_convention"] = "sample (n - 1)";

  // Series keyed by estimator position so duplicated tags stay separate.
  json series = json::array();
  for (std::size_t e = 0; e < c.estimators.size(); ++e) {
    std::map<Index, std::vector<double>> by_step;
    std::map<Index, std::vector<double>> err_by_step;
    for (const auto& tr : trials) {
      const std::size_t per = tr.records.size() / c.estimators.size();
      for (std::size_t i = e * per; i < (e + 1) * per; ++i) {
        by_step[tr.records[i].step].push_back(tr.records[i].deviation);
        err_by_step[tr.records[i].step].push_back(tr.records[i].err_rate);
      }
    }
    json s;
    s["k"] = c.k;
    s["estimator"] = estimator_tag(c.estimators[e].kind);
    s["sigma"] = c.estimators[e].sigma;
    json steps = json::array(), mean = json::array(), stdev = json::array(),
         err_mean = json::array();
    for (const auto& [step, values] : by_step) {
      const double mu =
          std::accumulate(values.begin(), values.end(), 0.0) / values.size();
      const auto& errs = err_by_step[step];
      steps.push_back(step);
      mean.push_back(mu);
      stdev.push_back(SampleStd(values, mu));
      err_mean.push_back(std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size());
    }
    s["steps"] = steps;
    s["mean_deviation"] = mean;
    s["std_deviation"] = stdev;
    s["mean_err_rate"] = err_mean;
    s["final_mean_deviation"] = mean.empty() ? json(nullptr) : mean.back();
    s["final_std_deviation"] = stdev.empty() ? json(nullptr) : stdev.back();

    std::map<std::string, int> kinds;
    for (const auto& tr : trials) {
      kinds[std::string(outcome_name(tr.estimators[e].outcome.kind))]++;
    }
    s["outcomes"] = kinds;
    series.push_back(s);
  }
  doc["series"] = series;

  json per_trial = json::array();
  for (const auto& tr : trials) {
    json jt;
    jt["trial"] = tr.trial;
    jt["seed"] = tr.seed;
    jt["h"] = tr.h;
    jt["m"] = tr.m;
    jt["sigma_T"] = tr.sigma_t;
    jt["wall_time_s"] = tr.wall_time;
    json ests = json::array();
    for (const auto& er : tr.estimators) {
      ests.push_back({{"estimator", er.tag},
                      {"sigma", er.sigma},
                      {"final_deviation", er.final_deviation},
                      {"deviation_of_adv", er.outcome.deviation_of_adv},
                      {"err_rate", er.outcome.err_rate},
                      {"kind", outcome_name(er.outcome.kind)},
                      {"responder_failed", er.outcome.responder_failed},
                      {"adversarial", er.outcome.adversarial},
                      {"clamp_count", er.clamp_count}});
    }
    jt["estimators"] = ests;
    per_trial.push_back(jt);
  }
  doc["trials"] = per_trial;
  return doc;
}

void write_records_csv(const std::vector<TrialResult>& trials,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << kRecordsHeader << '\n';
  for (const auto& tr : trials) {
    for (const auto& row : tr.records) write_record(out, row);
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_campaign(const CampaignConfig& c, const CampaignResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) throw IoError("cannot create " + c.output_dir.string() + ": " + ec.message());
  write_records_csv(result.trials, c.output_dir / "records.csv");
  {
    std::ofstream out(c.output_dir / "summary.json", std::ios::trunc);
    if (!out) throw IoError("cannot write summary.json");
    out << result.summary.dump(2) << '\n';
    if (!out) throw IoError("write failed for summary.json");
  }
  if (!c.write_transcripts) return;
  const fs::path dir = c.output_dir / "transcripts";
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& tr : result.trials) {
    for (std::size_t i = 0; i < tr.transcripts.size(); ++i) {
      const std::string stem = "trial_" + std::to_string(tr.trial) + "_" +
                               std::to_string(i) + "_" + tr.estimators[i].tag;
      save_transcript(tr.transcripts[i], dir / (stem + ".sktr"));
      std::ofstream js(dir / (stem + ".json"), std::ios::trunc);
      if (!js) throw IoError("cannot write transcript summary");
      js << transcript_summary_json(tr.transcripts[i], tr.estimators[i].outcome) << '\n';
    }
  }
}

}  // namespace sketchattack::harness
