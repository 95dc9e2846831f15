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

#include "sketchattack/rng.hpp"

namespace sketchattack {
namespace {

constexpr std::uint64_t SplitMix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag,
                          std::uint64_t index) noexcept {
  std::uint64_t x = SplitMix(seed);
  x = SplitMix(x ^ static_cast<std::uint64_t>(tag));
  return SplitMix(x ^ SplitMix(index + 0x632be59bd9b4e019ULL));
}

Engine make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return Engine(derive_seed(seed, tag, index));
}

}  // namespace sketchattack
