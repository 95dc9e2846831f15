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

#ifndef SKETCHATTACK_QUERY_MODEL_HPP_
#define SKETCHATTACK_QUERY_MODEL_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sketchattack/types.hpp"

namespace sketchattack {

// Gaussian noise on an ordered support M with per-coordinate variance 1/m.
class NoiseSpec {
 public:
  explicit NoiseSpec(std::vector<Index> support);

  const std::vector<Index>& support() const { return *support_; }
  Index m() const { return static_cast<Index>(support_->size()); }
  double variance() const { return 1.0 / static_cast<double>(m()); }

 private:
  std::shared_ptr<const std::vector<Index>> support_;
};

// Attack configuration. Indices are 0-based.
class QuerySpec {
 public:
  // Throws std::invalid_argument when h is out of range or in M, M has
  // duplicates or out-of-range entries, c <= 0, or alpha is outside (0, 1).
  static QuerySpec make(Index n, Index h, std::vector<Index> support, double c,
                        double alpha);

  Index n() const { return n_; }
  Index h() const { return h_; }
  const std::vector<Index>& support() const { return noise_.support(); }
  Index m() const { return noise_.m(); }
  const NoiseSpec& noise() const { return noise_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double peak() const { return peak_; }

  std::string to_json() const;
  // Rejects documents whose a, b, C disagree with the recomputed values.
  static QuerySpec from_json(const std::string& text);

 private:
  QuerySpec(Index n, Index h, NoiseSpec noise, double c, double alpha);

  Index n_;
  Index h_;
  NoiseSpec noise_;
  double c_;
  double alpha_;
  double a_;
  double b_;
  double peak_;
};

struct SignalMixture {
  double left;
  double plateau;
  double right;
};

SignalMixture signal_mixture(const QuerySpec& spec);

struct QueryVector {
  Eigen::VectorXd v;
  double w = 0.0;
  Eigen::VectorXd z;
  double true_norm = 0.0;
};

// Writes the m noise coordinates of query `index` in support order.
void fill_noise_coordinates(Index m, std::uint64_t seed, std::uint64_t index,
                            std::span<double> out);
// Squared norm of the same coordinates, without storing them.
double noise_energy(Index m, std::uint64_t seed, std::uint64_t index);

Eigen::VectorXd sample_noise(const NoiseSpec& spec, Index n,
                             std::uint64_t seed, std::uint64_t index);
double signal_pdf(const QuerySpec& spec, double w);
double signal_cdf(const QuerySpec& spec, double w);
double sample_signal(const QuerySpec& spec, std::uint64_t seed,
                     std::uint64_t index);
QueryVector sample_query(const QuerySpec& spec, std::uint64_t seed,
                         std::uint64_t index);

enum class GapLabel { kMinus, kPlus, kFree };

GapLabel gap_label(double x, double y, double alpha);
bool is_correct(GapLabel label, int response);

// Tolerated responder error rate for a gap of width alpha.
inline double default_delta(double alpha) { return alpha * alpha / 10.0; }

}  // namespace sketchattack

#endif  // SKETCHATTACK_QUERY_MODEL_HPP_
