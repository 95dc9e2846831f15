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

#include "sketchattack/sketch_matrix.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "binary_io.hpp"
#include "sketchattack/rng.hpp"

namespace sketchattack {
namespace {

using internal::ReadLe;
using internal::WriteLe;

constexpr std::array<char, 4> kMagic = {'S', 'K', 'M', 'X'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

__extension__ typedef unsigned __int128 Uint128;

std::uint64_t MulMod61(std::uint64_t a, std::uint64_t b) {
  const Uint128 product = static_cast<Uint128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(product & kMersenne61) +
                    static_cast<std::uint64_t>(product >> 61);
  if (r >= kMersenne61) r -= kMersenne61;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

std::uint64_t AddMod61(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

std::uint64_t UniformMod61(Engine& engine) {
  for (;;) {
    const std::uint64_t x = engine() >> 3;
    if (x < kMersenne61) return x;
  }
}

void CheckDims(Index k, Index n) {
  if (k < 1 || n < 1) {
    throw std::invalid_argument("sketch dimensions must be positive");
  }
  if (k > n) {
    throw std::invalid_argument("sketch needs k <= n, got k=" +
                                std::to_string(k) + " n=" + std::to_string(n));
  }
}

}  // namespace

std::string_view family_name(SketchFamily family) {
  switch (family) {
    case SketchFamily::kExplicit:
      return "explicit";
    case SketchFamily::kJlGaussian:
      return "jl-gaussian";
    case SketchFamily::kJlSign:
      return "jl-sign";
    case SketchFamily::kAms:
      return "ams";
  }
  return "unknown";
}

SketchFamily parse_family(std::string_view name) {
  for (auto f : {SketchFamily::kExplicit, SketchFamily::kJlGaussian,
                 SketchFamily::kJlSign, SketchFamily::kAms}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown sketch family: " + std::string(name));
}

SketchMatrix::SketchMatrix(RowMatrix entries, SketchFamily family,
                           std::uint64_t seed)
    : entries_(std::move(entries)), family_(family), seed_(seed) {}

Eigen::VectorXd SketchMatrix::column(Index j) const {
  if (j < 0 || j >= n()) throw std::out_of_range("column index out of range");
  return entries_.col(j);
}

Eigen::MatrixXd SketchMatrix::gather_columns(
    std::span<const Index> columns) const {
  Eigen::MatrixXd out(k(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Index j = columns[c];
    if (j < 0 || j >= n()) {
      throw std::out_of_range("column index out of range");
    }
    out.col(static_cast<Index>(c)) = entries_.col(j);
  }
  return out;
}

SketchMatrix make_explicit(RowMatrix entries) {
  CheckDims(entries.rows(), entries.cols());
  if (!entries.allFinite()) {
    throw std::invalid_argument("sketch matrix has a non-finite entry");
  }
  return SketchMatrix(std::move(entries), SketchFamily::kExplicit, 0);
}

SketchMatrix make_explicit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw std::invalid_argument("sketch matrix must be non-empty");
  }
  const std::size_t width = rows.front().size();
  RowMatrix entries(static_cast<Index>(rows.size()),
                    static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw std::invalid_argument("ragged row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < width; ++j) {
      entries(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return make_explicit(std::move(entries));
}

Eigen::VectorXd sample_jl_column(Index k, JlVariant variant,
                                 std::uint64_t seed, Index j) {
  if (k < 1 || j < 0) throw std::invalid_argument("invalid JL column request");
  Engine engine = make_stream(seed, StreamTag::kMatrix,
                              static_cast<std::uint64_t>(j));
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  Eigen::VectorXd col(k);
  if (variant == JlVariant::kGaussian) {
    NormalSampler normal;
    for (Index i = 0; i < k; ++i) col[i] = normal(engine) * scale;
  } else {
    std::uint64_t bits = 0;
    int remaining = 0;
    for (Index i = 0; i < k; ++i) {
      if (remaining == 0) {
        bits = engine();
        remaining = 64;
      }
      col[i] = (bits & 1U) ? scale : -scale;
      bits >>= 1;
      --remaining;
    }
  }
  return col;
}

SketchMatrix sample_jl(Index k, Index n, JlVariant variant,
                       std::uint64_t seed) {
  CheckDims(k, n);
  RowMatrix entries(k, n);
  for (Index j = 0; j < n; ++j) {
    entries.col(j) = sample_jl_column(k, variant, seed, j);
  }
  const auto family = variant == JlVariant::kGaussian ? SketchFamily::kJlGaussian
                                                      : SketchFamily::kJlSign;
  return SketchMatrix(std::move(entries), family, seed);
}

SketchMatrix sample_ams(Index k, Index n, std::uint64_t seed) {
  CheckDims(k, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  RowMatrix entries(k, n);
  for (Index i = 0; i < k; ++i) {
    Engine engine = make_stream(seed, StreamTag::kMatrix,
                                static_cast<std::uint64_t>(i));
    std::array<std::uint64_t, 4> coeff;
    for (auto& c : coeff) c = UniformMod61(engine);
    for (Index j = 0; j < n; ++j) {
      const std::uint64_t x = static_cast<std::uint64_t>(j) % kMersenne61;
      std::uint64_t h = coeff[3];
      for (int d = 2; d >= 0; --d) h = AddMod61(MulMod61(h, x), coeff[d]);
      entries(i, j) = (h & 1U) ? scale : -scale;
    }
  }
  return SketchMatrix(std::move(entries), SketchFamily::kAms, seed);
}

Eigen::VectorXd apply(const SketchMatrix& a, const VectorView& v) {
  if (v.size() != a.n()) {
    throw std::invalid_argument("apply: vector length " +
                                std::to_string(v.size()) + " != n=" +
                                std::to_string(a.n()));
  }
  return a.entries() * v;
}

void save_sketch_matrix(const SketchMatrix& a,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  WriteLe<std::uint32_t>(out, kFormatVersion);
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(a.k()));
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(a.n()));
  WriteLe<std::uint8_t>(out, static_cast<std::uint8_t>(a.family()));
  WriteLe<std::uint64_t>(out, a.seed());
  const RowMatrix& e = a.entries();
  for (Index i = 0; i < e.rows(); ++i) {
    for (Index j = 0; j < e.cols(); ++j) WriteLe<double>(out, e(i, j));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

SketchMatrix load_sketch_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("bad sketch matrix magic in " + path.string());
  }
  if (ReadLe<std::uint32_t>(in) != kFormatVersion) {
    throw IoError("unsupported sketch matrix version");
  }
  const auto k = ReadLe<std::uint64_t>(in);
  const auto n = ReadLe<std::uint64_t>(in);
  const auto family = ReadLe<std::uint8_t>(in);
  const auto seed = ReadLe<std::uint64_t>(in);
  if (family > static_cast<std::uint8_t>(SketchFamily::kAms)) {
    throw IoError("unknown sketch family tag");
  }
  if (k == 0 || n == 0 || k > n || k * n > (std::uint64_t{1} << 34)) {
    throw IoError("implausible sketch matrix dimensions");
  }
  RowMatrix entries(static_cast<Index>(k), static_cast<Index>(n));
  for (Index i = 0; i < entries.rows(); ++i) {
    for (Index j = 0; j < entries.cols(); ++j) entries(i, j) = ReadLe<double>(in);
  }
  if (!entries.allFinite()) throw IoError("non-finite entry in matrix file");
  return SketchMatrix(std::move(entries), static_cast<SketchFamily>(family),
                      seed);
}

}  // namespace sketchattack
