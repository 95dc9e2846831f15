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

#ifndef SKETCHATTACK_HARNESS_VALIDATE_HPP_
#define SKETCHATTACK_HARNESS_VALIDATE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sketchattack::harness {

struct CheckReport {
  std::string check_name;
  nlohmann::json params;
  double statistic = 0.0;
  double bound = 0.0;
  std::string comparison;  // how statistic relates to bound when passing
  bool pass = false;
  nlohmann::json details;

  nlohmann::json to_json() const;
};

struct ValidationManifest {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckReport> checks;

  bool pass() const;
  nlohmann::json to_json() const;
};

inline constexpr std::uint64_t kDefaultValidationSeed = 0x5eed2026;

// Individual suites in the order `all` runs them.
const std::vector<std::string_view>& validation_suites();
bool is_validation_selector(std::string_view selector);

struct ValidationOptions {
  std::uint64_t seed = kDefaultValidationSeed;
  unsigned threads = 1;
};

// Throws std::invalid_argument for an unknown selector.
ValidationManifest run_validation(std::string_view selector,
                                  const ValidationOptions& options = {});

// Single-suite entry points.
std::vector<CheckReport> validate_fragility(std::uint64_t seed);
std::vector<CheckReport> validate_concentration(std::uint64_t seed);
std::vector<CheckReport> validate_signed_sum(std::uint64_t seed);
std::vector<CheckReport> validate_gain(std::uint64_t seed);
std::vector<CheckReport> validate_sigma_profile(std::uint64_t seed);
std::vector<CheckReport> validate_norm_signal_gap(std::uint64_t seed);
std::vector<CheckReport> validate_estimator(std::uint64_t seed);

}  // namespace sketchattack::harness

#endif  // SKETCHATTACK_HARNESS_VALIDATE_HPP_
