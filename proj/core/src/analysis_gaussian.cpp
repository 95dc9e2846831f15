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
#include "sketchattack/linalg.hpp"
#include "sketchattack/rng.hpp"

namespace sketchattack {

SignedSumCheck signed_sum_bound_check(Index m, Index r, double t, Index trials,
                                      std::uint64_t seed, Index sign_vectors) {
  if (m < 1 || r < 1 || trials < 1) {
    throw std::invalid_argument("signed sum check needs m, r, trials >= 1");
  }
  SignedSumCheck out;
  out.trials = trials;
  out.probability_bound = 2.0 * std::exp(-t * t / 2.0);
  const double root_r = std::sqrt(static_cast<double>(r));
  const double bound = (root_r + std::sqrt(static_cast<double>(m)) + t) * root_r;
  Eigen::MatrixXd x(m, r);
  Eigen::VectorXd s(r);
  for (Index trial = 0; trial < trials; ++trial) {
    Engine engine = make_stream(seed, StreamTag::kCheck,
                                static_cast<std::uint64_t>(trial));
    NormalSampler normal;
    for (Index j = 0; j < r; ++j) {
      for (Index i = 0; i < m; ++i) x(i, j) = normal(engine);
    }
    const double sigma_max = spectral_norm(x);
    const double top = sigma_max * root_r;
    if (top > bound) ++out.violations;
    out.max_ratio = std::max(out.max_ratio, top / bound);
    for (Index p = 0; p < sign_vectors; ++p) {
      for (Index j = 0; j < r; ++j) s[j] = (engine() >> 63) ? 1.0 : -1.0;
      if ((x * s).norm() > top * (1.0 + 1e-8)) ++out.deterministic_failures;
    }
  }
  out.violation_frequency =
      static_cast<double>(out.violations) / static_cast<double>(trials);
  return out;
}

ConcentrationCheck noise_norm_concentration(Index m, Index trials,
                                            double epsilon, std::uint64_t seed) {
  if (m < 1 || trials < 1) throw std::invalid_argument("need m, trials >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  ConcentrationCheck out;
  out.trials = trials;
  for (Index t = 0; t < trials; ++t) {
    const double energy = noise_energy(m, seed, static_cast<std::uint64_t>(t));
    if (std::abs(energy - 1.0) >= epsilon) ++out.hits;
  }
  const double n = static_cast<double>(trials);
  out.frequency = static_cast<double>(out.hits) / n;
  out.bound = 2.0 * std::exp(-static_cast<double>(m) * epsilon * epsilon / 4.0);
  const double p = std::min(out.bound, 1.0);
  out.std_error = std::sqrt(p * (1.0 - p) / n);
  out.pass = out.frequency <= out.bound + 3.0 * out.std_error;
  return out;
}

NormSignalGapCheck check_norm_signal_gap(Index k, const QuerySpec& spec,
                                         Index trials, std::uint64_t seed,
                                         const NormSignalGapOptions& options) {
  if (k < 1 || trials < 1) throw std::invalid_argument("need k, trials >= 1");
  NormSignalGapCheck out;
  out.queries = trials;
  out.epsilon = 1.0 / (10.0 * std::sqrt(static_cast<double>(k)));
  const double alpha = spec.alpha();
  const double c = options.zero_noise ? 0.0 : spec.c();
  const double c2 = c * c;
  out.squared_threshold = 1.0 - c2 * (1.0 + out.epsilon);
  out.squared_width = 2.0 * alpha + alpha * alpha + 2.0 * c2 * out.epsilon;
  if (out.squared_threshold > 0.0) {
    out.induced_width_ratio =
        (std::sqrt(out.squared_threshold + out.squared_width) -
         std::sqrt(out.squared_threshold)) /
        alpha;
  }
  for (Index t = 0; t < trials; ++t) {
    const auto index = static_cast<std::uint64_t>(t);
    const double w = sample_signal(spec, seed, index);
    const double energy = options.zero_noise ? 0.0 : noise_energy(spec.m(), seed, index);
    if (!options.zero_noise) {
      out.max_noise_fluctuation =
          std::max(out.max_noise_fluctuation, std::abs(energy - 1.0));
    }
    const double norm = std::sqrt(w * w + c2 * energy);
    const GapLabel on_norm = gap_label(norm, 1.0, alpha);
    const GapLabel on_signal =
        gap_label(w * w, out.squared_threshold, out.squared_width);
    for (int s : {-1, 1}) {
      if (is_correct(on_norm, s) && !is_correct(on_signal, s)) ++out.violations;
    }
  }
  return out;
}

NormSignalGapCheck check_norm_signal_gap(const SketchMatrix& a,
                                         const QuerySpec& spec, Index trials,
                                         std::uint64_t seed,
                                         const NormSignalGapOptions& options) {
  if (a.n() != spec.n()) {
    throw std::invalid_argument("query spec dimension does not match matrix");
  }
  return check_norm_signal_gap(a.k(), spec, trials, seed, options);
}

}  // namespace sketchattack
