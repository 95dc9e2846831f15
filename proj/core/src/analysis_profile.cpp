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

#include <algorithm>
#include <cmath>
#include <limits>

#include "sketchattack/analysis.hpp"

namespace sketchattack {

SigmaProfile sigma_t_profile(const SketchMatrix& a, double c0) {
  const Index n = a.n();
  const double k = static_cast<double>(a.k());
  SigmaProfile profile;
  profile.floor = a.k() >= 2 ? c0 / (k * std::log(k))
                             : std::numeric_limits<double>::infinity();
  profile.entries.reserve(static_cast<std::size_t>(n));
  std::vector<double> values;
  std::vector<Index> others(static_cast<std::size_t>(n - 1));
  for (Index h = 0; h < n; ++h) {
    for (Index j = 0, p = 0; j < n; ++j) {
      if (j != h) others[static_cast<std::size_t>(p++)] = j;
    }
    const OptimalEstimator est = build_optimal(a, h, others, 1.0);
    SigmaProfileEntry entry;
    entry.h = h;
    entry.zero_column = est.column_zero();
    if (entry.zero_column) {
      ++profile.zero_columns;
    } else {
      entry.sigma_t_squared = est.sigma_t_squared();
      values.push_back(entry.sigma_t_squared);
    }
    profile.entries.push_back(entry);
  }
  if (!values.empty()) {
    std::sort(values.begin(), values.end());
    profile.p10 = values[static_cast<std::size_t>(
        std::floor(0.1 * static_cast<double>(values.size() - 1)))];
    profile.max_sigma_t_squared = values.back();
    const auto above = values.end() -
                       std::lower_bound(values.begin(), values.end(), profile.floor);
    profile.fraction_above =
        static_cast<double>(above) / static_cast<double>(values.size());
  }
  return profile;
}

}  // namespace sketchattack
