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

#ifndef SKETCHATTACK_SKETCH_MATRIX_HPP_
#define SKETCHATTACK_SKETCH_MATRIX_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sketchattack/types.hpp"

namespace sketchattack {

enum class SketchFamily : std::uint8_t {
  kExplicit = 0,
  kJlGaussian = 1,
  kJlSign = 2,
  kAms = 3,
};

enum class JlVariant { kGaussian, kSign };

std::string_view family_name(SketchFamily family);
SketchFamily parse_family(std::string_view name);

// An immutable k x n sketching matrix with k <= n and finite entries.
class SketchMatrix {
 public:
  Index k() const { return entries_.rows(); }
  Index n() const { return entries_.cols(); }
  const RowMatrix& entries() const { return entries_; }
  SketchFamily family() const { return family_; }
  std::uint64_t seed() const { return seed_; }

  Eigen::VectorXd column(Index j) const;

  // Column-major k x |columns| copy of the selected columns.
  Eigen::MatrixXd gather_columns(std::span<const Index> columns) const;

 private:
  friend SketchMatrix make_explicit(RowMatrix entries);
  friend SketchMatrix sample_jl(Index k, Index n, JlVariant variant,
                                std::uint64_t seed);
  friend SketchMatrix sample_ams(Index k, Index n, std::uint64_t seed);
  friend SketchMatrix load_sketch_matrix(const std::filesystem::path& path);

  SketchMatrix(RowMatrix entries, SketchFamily family, std::uint64_t seed);

  RowMatrix entries_;
  SketchFamily family_;
  std::uint64_t seed_;
};

SketchMatrix make_explicit(RowMatrix entries);
SketchMatrix make_explicit(const std::vector<std::vector<double>>& rows);

// Rows i.i.d.; entries N(0, 1/k) or uniform on {-1/sqrt(k), +1/sqrt(k)}.
// Column j is drawn from its own stream, so sample_jl_column reproduces it
// without materializing the matrix.
SketchMatrix sample_jl(Index k, Index n, JlVariant variant, std::uint64_t seed);
Eigen::VectorXd sample_jl_column(Index k, JlVariant variant,
                                 std::uint64_t seed, Index j);

// Each row is sign(h_i(j)) / sqrt(k) for a degree-3 polynomial hash h_i over
// the Mersenne prime 2^61 - 1.
SketchMatrix sample_ams(Index k, Index n, std::uint64_t seed);

Eigen::VectorXd apply(const SketchMatrix& a, const VectorView& v);

void save_sketch_matrix(const SketchMatrix& a,
                        const std::filesystem::path& path);
SketchMatrix load_sketch_matrix(const std::filesystem::path& path);

}  // namespace sketchattack

#endif  // SKETCHATTACK_SKETCH_MATRIX_HPP_
