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

#include <vector>

#include <benchmark/benchmark.h>

#include "sketchattack/attack.hpp"
#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_stream.hpp"
#include "sketchattack/responders.hpp"

namespace sketchattack {
namespace {

std::vector<Index> Prefix(Index m) {
  std::vector<Index> s(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) s[static_cast<std::size_t>(j)] = j;
  return s;
}

void BM_Apply(benchmark::State& state) {
  const Index k = state.range(0), n = state.range(1);
  const SketchMatrix a = sample_jl(k, n, JlVariant::kGaussian, 1);
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(apply(a, v));
  state.SetItemsProcessed(state.iterations() * k * n);
}
BENCHMARK(BM_Apply)->Args({64, 16385})->Args({32, 4097});

void BM_NoiseFill(benchmark::State& state) {
  const Index m = state.range(0);
  std::vector<double> out(static_cast<std::size_t>(m));
  std::uint64_t index = 0;
  for (auto _ : state) {
    fill_noise_coordinates(m, 7, index++, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_NoiseFill)->Arg(4096)->Arg(16384);

void BM_BuildOptimal(benchmark::State& state) {
  const Index k = state.range(0), m = state.range(1);
  const SketchMatrix a = sample_jl(k, m + 1, JlVariant::kGaussian, 2);
  const std::vector<Index> support = Prefix(m);
  for (auto _ : state) benchmark::DoNotOptimize(build_optimal(a, m, support, 1.0));
}
BENCHMARK(BM_BuildOptimal)->Args({8, 1024})->Args({32, 4096})->Unit(benchmark::kMillisecond);

void BM_AttackStep(benchmark::State& state) {
  const Index k = state.range(0), m = state.range(1), r = 1024;
  const SketchMatrix a = sample_jl(k, m + 1, JlVariant::kGaussian, 3);
  const QuerySpec spec = QuerySpec::make(m + 1, m, Prefix(m), 1.0, 0.4);
  const OptimalEstimator est = build_optimal(a, spec);
  auto psi = optimal_gap_responder(est, spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_attack(a, spec, *psi, r, 4));
  }
  state.SetItemsProcessed(state.iterations() * r);
}
BENCHMARK(BM_AttackStep)->Args({32, 4096})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sketchattack

BENCHMARK_MAIN();
