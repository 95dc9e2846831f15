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
#include "sketchattack/query_stream.hpp"

namespace sketchattack {
namespace {

constexpr Index kBlock = 64;

// Calls visit(w, sketch) for each of `trials` queries.
template <typename Visit>
void ForEachQuery(const SketchMatrix& a, const QuerySpec& spec, Index trials,
                  std::uint64_t seed, Visit&& visit) {
  QueryStream stream(a, spec, seed);
  QueryStream::Block block;
  Eigen::VectorXd sketch(a.k());
  for (Index first = 0; first < trials; first += kBlock) {
    stream.fill(first, std::min(kBlock, trials - first), block);
    for (Index j = 0; j < block.count; ++j) {
      stream.sketch(block, j, sketch);
      visit(block.w[j], sketch);
    }
  }
}

}  // namespace

GainEstimate measure_gain(const SketchMatrix& a, const QuerySpec& spec,
                          Responder& responder, const OptimalEstimator& est,
                          Index trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("gain needs trials >= 2");
  if (est.h() != spec.h() || est.support() != spec.support()) {
    throw std::invalid_argument("estimator was built for a different (h, M)");
  }
  double mean = 0.0;
  double m2 = 0.0;
  Index count = 0;
  ForEachQuery(a, spec, trials, seed, [&](double w, const Eigen::VectorXd& y) {
    const double x = responder.respond(y).s * (estimate_signal(est, y) - w);
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  });
  GainEstimate out;
  out.trials = count;
  out.gain = mean;
  out.std_error = std::sqrt(m2 / static_cast<double>(count - 1) /
                            static_cast<double>(count));
  return out;
}

std::vector<PsiBin> estimate_psi(const SketchMatrix& a, const QuerySpec& spec,
                                 Responder& responder, Index trials,
                                 std::uint64_t seed, const PsiOptions& options) {
  if (trials < 1 || options.bins < 1) {
    throw std::invalid_argument("psi estimate needs trials and bins >= 1");
  }
  const OptimalEstimator est = build_optimal(a, spec);
  std::vector<double> stats;
  std::vector<int> responses;
  stats.reserve(static_cast<std::size_t>(trials));
  responses.reserve(static_cast<std::size_t>(trials));
  ForEachQuery(a, spec, trials, seed, [&](double, const Eigen::VectorXd& y) {
    responses.push_back(responder.respond(y).s);
    stats.push_back(estimate_signal(est, y));
  });
  const auto [lo_it, hi_it] = std::minmax_element(stats.begin(), stats.end());
  const double lo = *lo_it;
  const double width = std::max(*hi_it - lo, 1e-300) / static_cast<double>(options.bins);

  std::vector<PsiBin> bins(static_cast<std::size_t>(options.bins));
  std::vector<double> sums(bins.size(), 0.0);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    auto b = static_cast<std::size_t>((stats[i] - lo) / width);
    b = std::min(b, bins.size() - 1);
    ++bins[b].count;
    sums[b] += responses[i];
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].lo = lo + width * static_cast<double>(b);
    bins[b].hi = bins[b].lo + width;
    bins[b].center = bins[b].lo + width / 2.0;
    if (bins[b].count >= options.min_count) {
      bins[b].mean = sums[b] / static_cast<double>(bins[b].count);
    }
  }
  return bins;
}

}  // namespace sketchattack
