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

#ifndef SKETCHATTACK_HARNESS_RECORDS_HPP_
#define SKETCHATTACK_HARNESS_RECORDS_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sketchattack/types.hpp"

namespace sketchattack::harness {

inline constexpr std::string_view kRecordsHeader =
    "k,estimator,sigma,trial,step,deviation,err_rate,seed";

// One telemetry row. wall_time is kept out of the CSV so that files are
// byte-stable across runs.
struct CampaignRecord {
  Index k = 0;
  std::string estimator;
  double sigma = 0.0;
  Index trial = 0;
  Index step = 0;
  double deviation = 0.0;
  double err_rate = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
};

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

void write_record(std::ostream& out, const CampaignRecord& record);

struct ParsedRecords {
  std::vector<CampaignRecord> rows;
};

// Parses a records CSV; throws std::invalid_argument on schema mismatch.
ParsedRecords parse_records(std::string_view text);

}  // namespace sketchattack::harness

#endif  // SKETCHATTACK_HARNESS_RECORDS_HPP_
