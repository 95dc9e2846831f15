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

#include "sketchattack/query_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sketchattack/rng.hpp"

namespace sketchattack {
namespace {

bool NearlyEqual(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

NoiseSpec::NoiseSpec(std::vector<Index> support)
    : support_(std::make_shared<const std::vector<Index>>(std::move(support))) {
  if (support_->empty()) throw std::invalid_argument("noise support is empty");
}

QuerySpec::QuerySpec(Index n, Index h, NoiseSpec noise, double c, double alpha)
    : n_(n), h_(h), noise_(std::move(noise)), c_(c), alpha_(alpha) {
  a_ = 1.0 - 10.0 * alpha_ / c_;
  b_ = 1.0 + alpha_ + 10.0 * alpha_ / c_;
  peak_ = 2.0 / (b_ - a_ + alpha_);
  if (!(a_ < 1.0 && 1.0 < 1.0 + alpha_ && 1.0 + alpha_ < b_)) {
    throw std::invalid_argument("signal density parameters out of order");
  }
}

QuerySpec QuerySpec::make(Index n, Index h, std::vector<Index> support,
                          double c, double alpha) {
  if (n < 1) throw std::invalid_argument("query dimension must be positive");
  if (h < 0 || h >= n) throw std::invalid_argument("signal index out of range");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("noise scale c must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("gap width alpha must lie in (0, 1)");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Index j : support) {
    if (j < 0 || j >= n) throw std::invalid_argument("support index out of range");
    if (j == h) throw std::invalid_argument("signal index lies in the support");
    if (seen[static_cast<std::size_t>(j)]++) {
      throw std::invalid_argument("duplicate support index " +
                                  std::to_string(j));
    }
  }
  return QuerySpec(n, h, NoiseSpec(std::move(support)), c, alpha);
}

std::string QuerySpec::to_json() const {
  nlohmann::json doc;
  doc["n"] = n_;
  doc["h"] = h_;
  doc["M"] = support();
  doc["c"] = c_;
  doc["alpha"] = alpha_;
  doc["a"] = a_;
  doc["b"] = b_;
  doc["C"] = peak_;
  return doc.dump();
}

QuerySpec QuerySpec::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("query spec JSON: ") + e.what());
  }
  try {
    QuerySpec spec = make(doc.at("n").get<Index>(), doc.at("h").get<Index>(),
                          doc.at("M").get<std::vector<Index>>(),
                          doc.at("c").get<double>(), doc.at("alpha").get<double>());
    const std::pair<const char*, double> derived[] = {
        {"a", spec.a()}, {"b", spec.b()}, {"C", spec.peak()}};
    for (const auto& [key, value] : derived) {
      if (doc.contains(key) && !NearlyEqual(doc[key].get<double>(), value)) {
        throw std::invalid_argument(std::string("query spec field ") + key +
                                    " is inconsistent with c and alpha");
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("query spec JSON: ") + e.what());
  }
}

SignalMixture signal_mixture(const QuerySpec& spec) {
  SignalMixture mix;
  mix.left = spec.peak() * (1.0 - spec.a()) / 2.0;
  mix.plateau = spec.peak() * spec.alpha();
  mix.right = 1.0 - (mix.left + mix.plateau);
  return mix;
}

void fill_noise_coordinates(Index m, std::uint64_t seed, std::uint64_t index,
                            std::span<double> out) {
  if (m < 1) throw std::invalid_argument("noise support is empty");
  if (static_cast<Index>(out.size()) != m) {
    throw std::invalid_argument("noise buffer has the wrong length");
  }
  Engine engine = make_stream(seed, StreamTag::kNoise, index);
  NormalSampler normal;
  const double scale = std::sqrt(1.0 / static_cast<double>(m));
  for (double& x : out) x = normal(engine) * scale;
}

double noise_energy(Index m, std::uint64_t seed, std::uint64_t index) {
  if (m < 1) throw std::invalid_argument("noise support is empty");
  Engine engine = make_stream(seed, StreamTag::kNoise, index);
  NormalSampler normal;
  const double scale = std::sqrt(1.0 / static_cast<double>(m));
  double energy = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double x = normal(engine) * scale;
    energy += x * x;
  }
  return energy;
}

Eigen::VectorXd sample_noise(const NoiseSpec& spec, Index n,
                             std::uint64_t seed, std::uint64_t index) {
  std::vector<double> coords(static_cast<std::size_t>(spec.m()));
  fill_noise_coordinates(spec.m(), seed, index, coords);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  const auto& support = spec.support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= n) throw std::invalid_argument("support exceeds length n");
    z[support[i]] = coords[i];
  }
  return z;
}

double signal_pdf(const QuerySpec& spec, double w) {
  const double a = spec.a();
  const double b = spec.b();
  const double top = 1.0 + spec.alpha();
  const double peak = spec.peak();
  if (w < a || w > b) return 0.0;
  if (w <= 1.0) return peak * (w - a) / (1.0 - a);
  if (w < top) return peak;
  return peak * (b - w) / (b - top);
}

double signal_cdf(const QuerySpec& spec, double w) {
  const double a = spec.a();
  const double b = spec.b();
  const double top = 1.0 + spec.alpha();
  const double peak = spec.peak();
  if (w <= a) return 0.0;
  if (w >= b) return 1.0;
  if (w <= 1.0) return peak * (w - a) * (w - a) / (2.0 * (1.0 - a));
  const double left = peak * (1.0 - a) / 2.0;
  if (w < top) return left + peak * (w - 1.0);
  return 1.0 - peak * (b - w) * (b - w) / (2.0 * (b - top));
}

double sample_signal(const QuerySpec& spec, std::uint64_t seed,
                     std::uint64_t index) {
  Engine engine = make_stream(seed, StreamTag::kSignal, index);
  const SignalMixture mix = signal_mixture(spec);
  const double pick = uniform01(engine);
  const double u = uniform01(engine);
  if (pick < mix.left) return spec.a() + (1.0 - spec.a()) * std::sqrt(u);
  if (pick < mix.left + mix.plateau) return 1.0 + spec.alpha() * u;
  const double top = 1.0 + spec.alpha();
  return spec.b() - (spec.b() - top) * std::sqrt(1.0 - u);
}

QueryVector sample_query(const QuerySpec& spec, std::uint64_t seed,
                         std::uint64_t index) {
  QueryVector q;
  q.w = sample_signal(spec, seed, index);
  q.z = sample_noise(spec.noise(), spec.n(), seed, index);
  q.v = spec.c() * q.z;
  q.v[spec.h()] = q.w;
  q.true_norm = q.v.norm();
  return q;
}

GapLabel gap_label(double x, double y, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gap width must be positive");
  if (x <= y) return GapLabel::kMinus;
  if (x >= y + alpha) return GapLabel::kPlus;
  return GapLabel::kFree;
}

bool is_correct(GapLabel label, int response) {
  switch (label) {
    case GapLabel::kFree:
      return true;
    case GapLabel::kMinus:
      return response == -1;
    case GapLabel::kPlus:
      return response == 1;
  }
  return false;
}

}  // namespace sketchattack
