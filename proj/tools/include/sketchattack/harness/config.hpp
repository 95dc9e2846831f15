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

#ifndef SKETCHATTACK_HARNESS_CONFIG_HPP_
#define SKETCHATTACK_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sketchattack/sketch_matrix.hpp"
#include "sketchattack/types.hpp"

namespace sketchattack::harness {

// Malformed or inconsistent configuration. Maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class AttackKind { kLightweight, kFull };
enum class EstimatorKind { kStandard, kRobust, kOptimalGap, kRandom };

std::string_view estimator_tag(EstimatorKind kind);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::kStandard;
  double sigma = 0.0;
  // Decision threshold for gap responders in the full attack. Defaults to
  // 1 + alpha / 2.
  std::optional<double> threshold;
};

struct MatrixConfig {
  SketchFamily family = SketchFamily::kJlSign;
  std::optional<std::uint64_t> seed;
  std::filesystem::path path;  // only for family "file"
  bool from_file = false;
};

struct CampaignConfig {
  Index k = 0;
  Index n = 0;
  MatrixConfig matrix;
  std::vector<EstimatorConfig> estimators;
  AttackKind attack = AttackKind::kLightweight;
  Index r = 0;
  double c = 1.0;
  double alpha = 0.1;
  double w_fixed = 1.0;
  // Full attack only: noise support size, drawn per trial from the columns
  // other than h. Defaults to n - 1.
  std::optional<Index> m;
  Index trials = 1;
  double gamma = 3.0;
  std::optional<double> delta;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  Index record_every = 1;
  bool write_transcripts = true;

  double effective_delta() const;
  std::uint64_t matrix_seed() const;
  std::uint64_t trial_seed(Index trial) const;
};

CampaignConfig parse_config(std::string_view json_text);
CampaignConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const CampaignConfig& config);

}  // namespace sketchattack::harness

#endif  // SKETCHATTACK_HARNESS_CONFIG_HPP_
