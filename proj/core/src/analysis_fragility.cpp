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
#include <stdexcept>

#include "sketchattack/analysis.hpp"

namespace sketchattack {

FragilityReport fragility_report(const MatrixView& a) {
  const Index k = a.rows();
  const Index m = a.cols();
  if (k < 2) throw std::invalid_argument("fragility needs k >= 2");
  if (m < 1) throw std::invalid_argument("fragility needs at least one column");
  if (!a.allFinite()) throw std::invalid_argument("matrix has a non-finite entry");

  const Eigen::MatrixXd squared = a.cwiseAbs2();
  std::vector<std::vector<double>> sorted_rows(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    auto& row = sorted_rows[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(m), 0.0);
    for (Index j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = squared(i, j);
    std::sort(row.begin(), row.end());
  }

  FragilityReport report;
  const double kk = static_cast<double>(k);
  report.unit_threshold = static_cast<double>(m) / (10.0 * kk * std::log2(kk));
  report.columns.reserve(static_cast<std::size_t>(m));
  Index fragile = 0;
  for (Index h = 0; h < m; ++h) {
    ColumnFragility col;
    col.h = h;
    for (Index i = 0; i < k; ++i) {
      if (a(i, h) == 0.0) continue;
      const auto& row = sorted_rows[static_cast<std::size_t>(i)];
      const auto first = std::lower_bound(row.begin(), row.end(), squared(i, h));
      col.active_rows.push_back(i);
      col.dominated_counts.push_back(static_cast<Index>(row.end() - first));
    }
    col.sorted_counts = col.dominated_counts;
    std::sort(col.sorted_counts.begin(), col.sorted_counts.end());
    col.fragile = true;
    for (std::size_t i = 0; i < col.sorted_counts.size(); ++i) {
      const double need = static_cast<double>(i + 1) * report.unit_threshold;
      if (static_cast<double>(col.sorted_counts[i]) < need) {
        col.fragile = false;
        break;
      }
    }
    if (col.fragile) ++fragile;
    report.columns.push_back(std::move(col));
  }
  report.fragile_fraction = static_cast<double>(fragile) / static_cast<double>(m);
  return report;
}

}  // namespace sketchattack
