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

#ifndef SKETCHATTACK_HARNESS_CAMPAIGN_HPP_
#define SKETCHATTACK_HARNESS_CAMPAIGN_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sketchattack/attack.hpp"
#include "sketchattack/harness/config.hpp"
#include "sketchattack/harness/records.hpp"
#include "sketchattack/sketch_matrix.hpp"

namespace sketchattack::harness {

struct EstimatorTrialResult {
  std::string tag;
  double sigma = 0.0;
  double final_deviation = 0.0;  // |unit deviation of z_adv| after step r
  AttackOutcome outcome;
  Index clamp_count = 0;
};

struct TrialResult {
  Index trial = 0;
  std::uint64_t seed = 0;
  Index h = 0;
  Index m = 0;
  double sigma_t = 0.0;
  double wall_time = 0.0;
  std::vector<EstimatorTrialResult> estimators;
  std::vector<CampaignRecord> records;
  std::vector<AttackTranscript> transcripts;
};

struct CampaignResult {
  std::vector<TrialResult> trials;
  nlohmann::json summary;
  double wall_time = 0.0;
};

struct RunOptions {
  unsigned threads = 1;
  bool keep_transcripts = true;
};

// Builds the campaign matrix from the config.
SketchMatrix campaign_matrix(const CampaignConfig& config);

// Runs every trial. Results are indexed by trial regardless of scheduling.
CampaignResult run_campaign(const CampaignConfig& config,
                            const RunOptions& options = {});

// Per-(k, estimator, sigma) mean and sample standard deviation of the
// recorded deviations at each step.
nlohmann::json summarize(const CampaignConfig& config,
                         const std::vector<TrialResult>& trials);

// Writes records.csv, summary.json, and transcripts/ under
// config.output_dir. Throws IoError on failure.
void write_campaign(const CampaignConfig& config, const CampaignResult& result);

void write_records_csv(const std::vector<TrialResult>& trials,
                       const std::filesystem::path& path);

}  // namespace sketchattack::harness

#endif  // SKETCHATTACK_HARNESS_CAMPAIGN_HPP_
