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

#include "sketchattack/query_stream.hpp"

#include <span>
#include <stdexcept>

namespace sketchattack {

QueryStream::QueryStream(const SketchMatrix& a, const QuerySpec& spec,
                         std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  if (spec.n() != a.n()) {
    throw std::invalid_argument("query spec dimension does not match matrix");
  }
  signal_column_ = a.column(spec.h());
  noise_columns_ = a.gather_columns(spec.support());
}

void QueryStream::fill(Index first, Index count, Block& block) const {
  const Index m = spec_.m();
  block.first = first;
  block.count = count;
  block.w.resize(count);
  block.noise.resize(m, count);
  block.energy.resize(count);
  for (Index j = 0; j < count; ++j) {
    const auto t = static_cast<std::uint64_t>(first + j);
    block.w[j] = fixed_signal_ ? *fixed_signal_ : sample_signal(spec_, seed_, t);
    fill_noise_coordinates(
        m, seed_, t,
        std::span<double>(block.noise.col(j).data(), static_cast<std::size_t>(m)));
    block.energy[j] = block.noise.col(j).squaredNorm();
  }
  block.noise_sketch.resize(noise_columns_.rows(), count);
  block.noise_sketch.noalias() = noise_columns_ * block.noise;
}

void QueryStream::sketch(const Block& block, Index j,
                         Eigen::VectorXd& out) const {
  out.noalias() = block.w[j] * signal_column_;
  out.noalias() += spec_.c() * block.noise_sketch.col(j);
}

}  // namespace sketchattack
