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

#ifndef SKETCHATTACK_RNG_HPP_
#define SKETCHATTACK_RNG_HPP_

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace sketchattack {

// Purpose tags for stream derivation. The numeric values are part of the
// reproducibility contract.
enum class StreamTag : std::uint64_t {
  kMatrix = 0x6d617472,
  kNoise = 0x6e6f6973,
  kSignal = 0x7369676e,
  kResponder = 0x72657370,
  kTrial = 0x74726961,
  kSupport = 0x73757070,
  kCheck = 0x63686563,
};

using Engine = boost::random::mt19937_64;

// Mixes (seed, tag, index) into an engine seed. Distinct triples give
// statistically independent streams.
std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag,
                          std::uint64_t index) noexcept;

Engine make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Standard normal draws (ziggurat).
class NormalSampler {
 public:
  double operator()(Engine& engine) { return dist_(engine); }

 private:
  boost::random::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace sketchattack

#endif  // SKETCHATTACK_RNG_HPP_
