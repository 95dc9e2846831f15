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

#ifndef SKETCHATTACK_HARNESS_TRADEOFF_HPP_
#define SKETCHATTACK_HARNESS_TRADEOFF_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "sketchattack/sketch_matrix.hpp"
#include "sketchattack/types.hpp"

namespace sketchattack::harness {

struct TradeoffRow {
  Index k = 0;
  double sigma = 0.0;
  double sigma0 = 0.0;   // 1 / sqrt(k)
  double sigma_t = 0.0;  // sqrt(1 / k + sigma^2)
  // Sample standard deviation of the squared robust estimate over `draws`
  // resampled matrices.
  double empirical = 0.0;
  Index draws = 0;
};

struct TradeoffOptions {
  std::vector<Index> ks;
  std::vector<double> sigmas;
  Index draws = 20000;
  std::uint64_t seed = 0;
  JlVariant variant = JlVariant::kSign;
};

// Each draw samples two fresh JL columns and sketches the unit input
// (e_0 + e_1) / sqrt(2). For sign entries the squared sketch norm of that
// input has variance exactly 1 / k; Gaussian entries give 2 / k.
std::vector<TradeoffRow> compute_tradeoff(const TradeoffOptions& options);

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows);
void write_tradeoff_csv(const std::filesystem::path& path,
                        const std::vector<TradeoffRow>& rows);

}  // namespace sketchattack::harness

#endif  // SKETCHATTACK_HARNESS_TRADEOFF_HPP_
