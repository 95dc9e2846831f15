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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "sketchattack/linalg.hpp"
#include "sketchattack/rng.hpp"
#include "sketchattack/sketch_matrix.hpp"
#include "test_util.hpp"

namespace sketchattack {
namespace {

using Rows = std::vector<std::vector<double>>;

using testing::gaussian_matrix;
using testing::Moments;

TEST(Rng, DerivedStreamsDifferByTagAndIndex) {
  const auto a = derive_seed(1, StreamTag::kNoise, 0);
  EXPECT_EQ(a, derive_seed(1, StreamTag::kNoise, 0));
  EXPECT_NE(a, derive_seed(1, StreamTag::kNoise, 1));
  EXPECT_NE(a, derive_seed(1, StreamTag::kSignal, 0));
  EXPECT_NE(a, derive_seed(2, StreamTag::kNoise, 0));
}

TEST(Rng, UniformStaysInUnitInterval) {
  Engine e = make_stream(3, StreamTag::kCheck, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(e);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(MakeExplicit, IdentityPrefix) {
  const SketchMatrix a = make_explicit(Rows{{1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(a.k(), 2);
  EXPECT_EQ(a.n(), 3);
  EXPECT_EQ(a.family(), SketchFamily::kExplicit);
  EXPECT_EQ(a.entries()(1, 1), 1.0);
}

TEST(MakeExplicit, OneByOne) {
  const SketchMatrix a = make_explicit(Rows{{5}});
  EXPECT_EQ(a.k(), 1);
  EXPECT_EQ(a.entries()(0, 0), 5.0);
}

TEST(MakeExplicit, RejectsBadInput) {
  EXPECT_THROW(make_explicit(Rows{{1, std::nan("")}}), std::invalid_argument);
  EXPECT_THROW(make_explicit(Rows{{1, INFINITY}}), std::invalid_argument);
  EXPECT_THROW(make_explicit(Rows{{1, 2}, {3}}), std::invalid_argument);
  EXPECT_THROW(make_explicit(Rows{{1}, {2}}), std::invalid_argument);  // k > n
  EXPECT_THROW(make_explicit(std::vector<std::vector<double>>{}), std::invalid_argument);
}

TEST(SampleJl, Reproducible) {
  const SketchMatrix a = sample_jl(4, 8, JlVariant::kGaussian, 7);
  const SketchMatrix b = sample_jl(4, 8, JlVariant::kGaussian, 7);
  EXPECT_EQ(a.k(), 4);
  EXPECT_EQ(a.n(), 8);
  EXPECT_TRUE(a.entries() == b.entries());
  EXPECT_FALSE(a.entries() == sample_jl(4, 8, JlVariant::kGaussian, 8).entries());
  EXPECT_EQ(a.family(), SketchFamily::kJlGaussian);
}

TEST(SampleJl, ColumnMatchesStandaloneSampler) {
  for (auto variant : {JlVariant::kGaussian, JlVariant::kSign}) {
    const SketchMatrix a = sample_jl(6, 20, variant, 99);
    for (Index j : {0, 7, 19}) {
      EXPECT_TRUE(a.column(j) == sample_jl_column(6, variant, 99, j));
    }
  }
}

TEST(SampleJl, SignEntriesHaveExactMagnitude) {
  const SketchMatrix a = sample_jl(9, 50, JlVariant::kSign, 1);
  const double s = 1.0 / std::sqrt(9.0);
  for (Index i = 0; i < a.k(); ++i) {
    for (Index j = 0; j < a.n(); ++j) EXPECT_EQ(std::abs(a.entries()(i, j)), s);
  }
}

TEST(SampleJl, RejectsInvalidDims) {
  EXPECT_THROW(sample_jl(5, 4, JlVariant::kGaussian, 1), std::invalid_argument);
  EXPECT_THROW(sample_jl(0, 4, JlVariant::kSign, 1), std::invalid_argument);
}

// Squared sketch norm of a fixed unit vector is unbiased across resamples.
void ExpectUnbiased(SketchFamily family, Index k) {
  const Index trials = 100000, n = 32;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[0] = 1.0;
  Moments mom;
  for (Index t = 0; t < trials; ++t) {
    const auto seed = derive_seed(11, StreamTag::kMatrix, static_cast<std::uint64_t>(t));
    const SketchMatrix a = family == SketchFamily::kAms ? sample_ams(k, n, seed)
                           : family == SketchFamily::kJlSign
                               ? sample_jl(k, n, JlVariant::kSign, seed)
                               : sample_jl(k, n, JlVariant::kGaussian, seed);
    mom.add(apply(a, v).squaredNorm());
  }
  if (family == SketchFamily::kJlGaussian) {
    EXPECT_LT(std::abs(mom.mean - 1.0), 3.0 * mom.std_error());
  }
  EXPECT_LT(std::abs(mom.mean - 1.0),
            4.0 * std::sqrt(2.0 / (static_cast<double>(k) * trials)) + 1e-15);
}

TEST(SampleJl, GaussianSquaredNormUnbiased) { ExpectUnbiased(SketchFamily::kJlGaussian, 16); }
TEST(SampleJl, SignSquaredNormUnbiased) { ExpectUnbiased(SketchFamily::kJlSign, 16); }
TEST(SampleAms, SquaredNormUnbiased) { ExpectUnbiased(SketchFamily::kAms, 16); }

TEST(SampleAms, UnbiasedOnDenseInput) {
  const Index k = 8, n = 12, trials = 40000;
  Eigen::VectorXd v(n);
  v << 1, -2, 0.5, 3, 0, 1, 2, -1, 0, 0.25, -3, 1;
  v.normalize();
  Moments mom;
  for (Index t = 0; t < trials; ++t) {
    const SketchMatrix a = sample_ams(k, n, derive_seed(5, StreamTag::kMatrix, t));
    mom.add(apply(a, v).squaredNorm());
  }
  EXPECT_LT(std::abs(mom.mean - 1.0), 4.0 * mom.std_error());
}

TEST(SampleAms, ReproducibleSignEntries) {
  const SketchMatrix a = sample_ams(4, 8, 1);
  EXPECT_TRUE(a.entries() == sample_ams(4, 8, 1).entries());
  EXPECT_EQ(a.family(), SketchFamily::kAms);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 8; ++j) EXPECT_EQ(std::abs(a.entries()(i, j)), 0.5);
  }
}

TEST(Apply, HandExamples) {
  const SketchMatrix id = make_explicit(Rows{{1, 0}, {0, 1}});
  EXPECT_TRUE(apply(id, Eigen::Vector2d(3, 4)) == Eigen::Vector2d(3, 4));
  const SketchMatrix ones = make_explicit(Rows{{1, 1, 1}});
  EXPECT_EQ(apply(ones, Eigen::Vector3d(1, 2, 3))[0], 6.0);
  const SketchMatrix g = sample_jl(3, 5, JlVariant::kGaussian, 2);
  EXPECT_EQ(apply(g, Eigen::VectorXd::Zero(5)).norm(), 0.0);
  EXPECT_THROW(apply(g, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST(Apply, Linear) {
  const SketchMatrix a = sample_jl(7, 30, JlVariant::kGaussian, 4);
  Engine rng(1);
  NormalSampler normal;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd u(30), v(30);
    for (Index i = 0; i < 30; ++i) {
      u[i] = normal(rng);
      v[i] = normal(rng);
    }
    const double x = normal(rng), y = normal(rng);
    const Eigen::VectorXd lhs = apply(a, x * u + y * v);
    const Eigen::VectorXd rhs = x * apply(a, u) + y * apply(a, v);
    EXPECT_LE((lhs - rhs).norm(), 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST(SpectralNorm, HandExamples) {
  EXPECT_NEAR(spectral_norm(Eigen::Matrix2d{{3, 0}, {0, 1}}), 3.0, 1e-12);
  EXPECT_NEAR(spectral_norm(Eigen::Matrix2d{{0, 1}, {1, 0}}), 1.0, 1e-12);
  EXPECT_THROW(spectral_norm(Eigen::MatrixXd(0, 0)), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(spectral_norm(bad), std::invalid_argument);
}

TEST(SpectralNorm, MatchesJacobiSvd) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Eigen::MatrixXd m = gaussian_matrix(5, 7, s);
    const double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0];
    EXPECT_NEAR(spectral_norm(m), oracle, 1e-8 * oracle);
  }
}

TEST(SpectralNorm, BoundsEveryRayleighRatio) {
  const Eigen::MatrixXd m = gaussian_matrix(6, 9, 21);
  const double s = spectral_norm(m);
  Engine rng(2);
  NormalSampler normal;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd v(9);
    for (Index i = 0; i < 9; ++i) v[i] = normal(rng);
    EXPECT_LE((m * v).norm() / v.norm(), s + 1e-8);
  }
}

TEST(OrthogonalizeRows, TransformReproducesOrthogonalRows) {
  Eigen::MatrixXd rows = gaussian_matrix(5, 12, 3);
  rows.row(3) = 2.0 * rows.row(1) - rows.row(0);  // dependent row
  const RowOrthogonalization o = orthogonalize_rows(rows);
  EXPECT_LE((o.transform * rows - o.orthogonal).norm(), 1e-10 * rows.norm());
  EXPECT_TRUE(o.zero_row[3]);
  EXPECT_EQ(o.orthogonal.row(3).norm(), 0.0);
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < i; ++j) {
      EXPECT_LE(std::abs(o.orthogonal.row(i).dot(o.orthogonal.row(j))), 1e-10);
    }
  }
}

TEST(SketchMatrixFile, RoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "sketchattack_roundtrip.skmx";
  const SketchMatrix a = sample_jl(3, 11, JlVariant::kSign, 42);
  save_sketch_matrix(a, path);
  const SketchMatrix b = load_sketch_matrix(path);
  EXPECT_TRUE(a.entries() == b.entries());
  EXPECT_EQ(b.family(), SketchFamily::kJlSign);
  EXPECT_EQ(b.seed(), 42U);

  // Header is magic, version u32, k u64, n u64, family u8, seed u64.
  EXPECT_EQ(std::filesystem::file_size(path), 4U + 4 + 8 + 8 + 1 + 8 + 3 * 11 * 8);
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "SKMX");
  std::filesystem::remove(path);
}

TEST(SketchMatrixFile, RejectsGarbage) {
  const auto path = std::filesystem::temp_directory_path() / "sketchattack_garbage.skmx";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE and some more bytes here";
  }
  EXPECT_THROW(load_sketch_matrix(path), IoError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_sketch_matrix(path), IoError);
}

TEST(Family, NamesRoundTrip) {
  for (auto f : {SketchFamily::kExplicit, SketchFamily::kJlGaussian, SketchFamily::kJlSign,
                 SketchFamily::kAms}) {
    EXPECT_EQ(parse_family(family_name(f)), f);
  }
  EXPECT_THROW(parse_family("countsketch"), std::invalid_argument);
}

}  // namespace
}  // namespace sketchattack
