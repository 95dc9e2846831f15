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

#ifndef SKETCHATTACK_QUERY_STREAM_HPP_
#define SKETCHATTACK_QUERY_STREAM_HPP_

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "sketchattack/query_model.hpp"
#include "sketchattack/sketch_matrix.hpp"

namespace sketchattack {

// Generates blocks of queries together with their sketches. Query t is
// identical to sample_query(spec, seed, t); the noise is kept in compressed
// support coordinates.
class QueryStream {
 public:
  struct Block {
    Index first = 0;
    Index count = 0;
    Eigen::VectorXd w;
    Eigen::MatrixXd noise;         // m x count
    Eigen::MatrixXd noise_sketch;  // k x count, equals A_M * noise
    Eigen::VectorXd energy;        // squared norm of each noise column
  };

  QueryStream(const SketchMatrix& a, const QuerySpec& spec, std::uint64_t seed);

  // Replaces the signal draw with a constant weight.
  void set_fixed_signal(double w) { fixed_signal_ = w; }

  void fill(Index first, Index count, Block& block) const;

  // out = w_j * A_h + c * noise_sketch_j.
  void sketch(const Block& block, Index j, Eigen::VectorXd& out) const;

  const QuerySpec& spec() const { return spec_; }
  const Eigen::VectorXd& signal_column() const { return signal_column_; }
  const Eigen::MatrixXd& noise_columns() const { return noise_columns_; }

 private:
  QuerySpec spec_;
  std::uint64_t seed_;
  std::optional<double> fixed_signal_;
  Eigen::VectorXd signal_column_;
  Eigen::MatrixXd noise_columns_;
};

}  // namespace sketchattack

#endif  // SKETCHATTACK_QUERY_STREAM_HPP_
