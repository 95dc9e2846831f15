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

#include "sketchattack/harness/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/QR>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "sketchattack/analysis.hpp"
#include "sketchattack/harness/parallel.hpp"
#include "sketchattack/optimal_estimator.hpp"
#include "sketchattack/query_stream.hpp"
#include "sketchattack/responders.hpp"
#include "sketchattack/rng.hpp"
#include "sketchattack/sketch_matrix.hpp"

namespace sketchattack::harness {
namespace {

using nlohmann::json;

// One-sided 99% normal quantile.
constexpr double kZ99 = 2.3263478740408408;

std::uint64_t CheckSeed(std::uint64_t seed, std::uint64_t id) {
  return derive_seed(seed, StreamTag::kCheck, id);
}

CheckReport AtMost(std::string name, json params, double statistic, double bound) {
  return {std::move(name), std::move(params), statistic, bound, "<=",
          statistic <= bound, json::object()};
}

CheckReport AtLeast(std::string name, json params, double statistic, double bound) {
  return {std::move(name), std::move(params), statistic, bound, ">=",
          statistic >= bound, json::object()};
}

Index UniformIndex(Engine& rng, Index lo, Index hi) {
  return boost::random::uniform_int_distribution<Index>(lo, hi)(rng);
}

double UniformReal(Engine& rng, double lo, double hi) {
  return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
}

RowMatrix GaussianMatrix(Index rows, Index cols, Engine& rng) {
  NormalSampler normal;
  RowMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = normal(rng);
  }
  return a;
}

std::vector<Index> RandomSubset(Engine& rng, std::vector<Index> pool, Index size) {
  for (Index i = 0; i < size; ++i) {
    const Index j = UniformIndex(rng, i, static_cast<Index>(pool.size()) - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(size));
  return pool;
}

// sigma_t^2 for the support prefix of length p.
double PrefixSigmaSquared(const SketchMatrix& a, Index h,
                          const std::vector<Index>& order, Index p) {
  std::vector<Index> m(order.begin(), order.begin() + p);
  return build_optimal(a, h, std::move(m), 1.0).sigma_t_squared();
}

}  // namespace

json CheckReport::to_json() const {
  return {{"check_name", check_name}, {"params", params},
          {"statistic", statistic},   {"bound", bound},
          {"comparison", comparison}, {"pass", pass},
          {"details", details}};
}

bool ValidationManifest::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

json ValidationManifest::to_json() const {
  json doc;
  doc["suite"] = suite;
  doc["seed"] = seed;
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(c.to_json());
  doc["checks"] = arr;
  doc["pass"] = pass();
  return doc;
}

const std::vector<std::string_view>& validation_suites() {
  static const std::vector<std::string_view> kSuites = {
      "fragility", "concentration",   "signed-sum", "gain",
      "sigma-profile", "norm-signal-gap", "estimator"};
  return kSuites;
}

bool is_validation_selector(std::string_view selector) {
  if (selector == "all") return true;
  const auto& s = validation_suites();
  return std::find(s.begin(), s.end(), selector) != s.end();
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> validate_fragility(std::uint64_t seed) {
  std::vector<CheckReport> out;
  const Index k = 8;
  const double log2k = std::log2(static_cast<double>(k));
  const Index m = static_cast<Index>(std::ceil(20.0 * k * log2k * log2k));

  {
    const Index seeds = 20;
    double worst = 1.0;
    json fractions = json::array();
    for (Index s = 0; s < seeds; ++s) {
      const SketchMatrix a = sample_jl(k, m, JlVariant::kGaussian,
                                       CheckSeed(seed, 100 + static_cast<std::uint64_t>(s)));
      const double f = fragility_report(Eigen::MatrixXd(a.entries())).fragile_fraction;
      worst = std::min(worst, f);
      fractions.push_back(f);
    }
    auto r = AtLeast("fragility_random_gaussian",
                     {{"k", k}, {"m", m}, {"seeds", seeds}}, worst, 0.9);
    r.details["fractions"] = fractions;
    out.push_back(std::move(r));
  }
  {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, m);
    for (Index i = 0; i < k; ++i) a(i, i) = 1.0;
    const double f = fragility_report(a).fragile_fraction;
    const double expected = static_cast<double>(m - k) / static_cast<double>(m);
    CheckReport r{"fragility_identity_prefix", {{"k", k}, {"m", m}}, f, expected, "==",
                  f == expected, json::object()};
    out.push_back(std::move(r));
  }
  {
    // Rescaling rows by nonzero constants leaves every column's verdict alone.
    Engine rng = make_stream(seed, StreamTag::kCheck, 120);
    const SketchMatrix a = sample_jl(k, m, JlVariant::kGaussian, CheckSeed(seed, 121));
    Eigen::MatrixXd base = a.entries();
    Eigen::MatrixXd scaled = base;
    for (Index i = 0; i < k; ++i) {
      const double s = UniformReal(rng, 0.1, 10.0) * (UniformReal(rng, 0, 1) < 0.5 ? -1 : 1);
      scaled.row(i) *= s;
    }
    const auto r0 = fragility_report(base);
    const auto r1 = fragility_report(scaled);
    Index mismatches = 0;
    for (std::size_t j = 0; j < r0.columns.size(); ++j) {
      if (r0.columns[j].fragile != r1.columns[j].fragile ||
          r0.columns[j].sorted_counts != r1.columns[j].sorted_counts) {
        ++mismatches;
      }
    }
    out.push_back(AtMost("fragility_row_rescaling_invariance", {{"k", k}, {"m", m}},
                         static_cast<double>(mismatches), 0.0));
  }
  return out;
}

std::vector<CheckReport> validate_concentration(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    const Index m = 1000, trials = 1000000;
    const double eps = 0.2;
    const auto c = noise_norm_concentration(m, trials, eps, CheckSeed(seed, 200));
    CheckReport r{"concentration_tail_bound",
                  {{"m", m}, {"trials", trials}, {"epsilon", eps}},
                  c.frequency,
                  c.bound + 3.0 * c.std_error,
                  "<=",
                  c.pass,
                  {{"hits", c.hits}, {"bound", c.bound}, {"std_error", c.std_error}}};
    out.push_back(std::move(r));
  }
  {
    // Same seed for every epsilon, so the tail events are nested.
    const Index m = 100, trials = 100000;
    const std::vector<double> eps = {0.1, 0.2, 0.3};
    std::vector<double> freq;
    bool each_bounded = true;
    for (double e : eps) {
      const auto c = noise_norm_concentration(m, trials, e, CheckSeed(seed, 201));
      freq.push_back(c.frequency);
      each_bounded = each_bounded && c.pass;
    }
    const bool monotone = freq[0] >= freq[1] && freq[1] >= freq[2];
    CheckReport r{"concentration_monotone_in_epsilon",
                  {{"m", m}, {"trials", trials}, {"epsilon", eps}},
                  freq[0] - freq[2],
                  0.0,
                  ">=",
                  monotone && each_bounded,
                  {{"frequencies", freq}, {"each_within_bound", each_bounded}}};
    out.push_back(std::move(r));
  }
  {
    const auto c = noise_norm_concentration(1, 10000, 0.5, CheckSeed(seed, 202));
    out.push_back(AtMost("concentration_vacuous_bound",
                         {{"m", 1}, {"trials", 10000}, {"epsilon", 0.5}}, c.frequency,
                         c.bound + 3.0 * c.std_error));
  }
  return out;
}

std::vector<CheckReport> validate_signed_sum(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    const Index m = 400, r = 100, trials = 1000;
    const double t = std::sqrt(static_cast<double>(r));
    const auto c = signed_sum_bound_check(m, r, t, trials, CheckSeed(seed, 300));
    auto rep = AtMost("signed_sum_t_sqrt_r",
                      {{"m", m}, {"r", r}, {"t", t}, {"trials", trials}},
                      static_cast<double>(c.violations + c.deterministic_failures), 0.0);
    rep.details = {{"violations", c.violations},
                   {"deterministic_failures", c.deterministic_failures},
                   {"max_ratio", c.max_ratio}};
    out.push_back(std::move(rep));
  }
  {
    const Index m = 50, r = 1, trials = 10000;
    const double t = 3.0;
    const auto c = signed_sum_bound_check(m, r, t, trials, CheckSeed(seed, 301));
    const double p = c.probability_bound;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    auto rep = AtMost("signed_sum_single_column_tail",
                      {{"m", m}, {"r", r}, {"t", t}, {"trials", trials}},
                      c.violation_frequency, p + 3.0 * se);
    rep.pass = rep.pass && c.deterministic_failures == 0;
    rep.details = {{"probability_bound", p},
                   {"deterministic_failures", c.deterministic_failures}};
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<CheckReport> validate_gain(std::uint64_t seed) {
  std::vector<CheckReport> out;
  const Index k = 32, n = 1025, h = n - 1;
  const double c = 1.0, alpha = 0.4;
  const Index gain_trials = 200000, err_trials = 20000;
  const double delta = default_delta(alpha);
  const SketchMatrix a = sample_jl(k, n, JlVariant::kGaussian, CheckSeed(seed, 400));

  Engine rng = make_stream(seed, StreamTag::kCheck, 401);
  std::vector<Index> order(static_cast<std::size_t>(n - 1));
  std::iota(order.begin(), order.end(), Index{0});
  order = RandomSubset(rng, order, n - 1);

  // Nested prefixes whose sigma_t is closest to sigma_full / 4 and / 2.
  const double full_sq = PrefixSigmaSquared(a, h, order, n - 1);
  std::vector<Index> sizes;
  for (double scale : {0.25, 0.5}) {
    const double target = full_sq * scale * scale;
    Index best = k;
    double best_gap = INFINITY;
    for (Index p = k; p < n - 1; ++p) {
      const double s = PrefixSigmaSquared(a, h, order, p);
      const double gap = std::abs(std::log(std::max(s, 1e-300) / target));
      if (gap < best_gap) {
        best_gap = gap;
        best = p;
      }
    }
    sizes.push_back(best);
  }
  sizes.push_back(n - 1);

  struct Point {
    Index m;
    double sigma_sq;
    GainEstimate gain;
    double err;
  };
  std::vector<Point> points;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<Index> support(order.begin(), order.begin() + sizes[i]);
    const QuerySpec spec = QuerySpec::make(n, h, support, c, alpha);
    const OptimalEstimator est = build_optimal(a, spec);
    auto psi = optimal_gap_responder(est, spec);
    const double err = measure_err(*psi, a, spec, err_trials, CheckSeed(seed, 410 + i));
    const GainEstimate g =
        measure_gain(a, spec, *psi, est, gain_trials, CheckSeed(seed, 420 + i));
    points.push_back({sizes[i], est.sigma_t_squared(), g, err});

    const json params = {{"k", k}, {"m", sizes[i]}, {"c", c}, {"alpha", alpha},
                         {"trials", gain_trials}, {"sigma_t_squared", est.sigma_t_squared()}};
    auto premise = AtMost("gain_err_premise_m" + std::to_string(sizes[i]), params, err, delta);
    premise.params["err_trials"] = err_trials;
    out.push_back(std::move(premise));
    auto pos = AtLeast("gain_positive_m" + std::to_string(sizes[i]), params,
                       g.gain - kZ99 * g.std_error, 0.0);
    pos.comparison = ">";
    pos.pass = g.gain - kZ99 * g.std_error > 0.0;
    pos.details = {{"gain", g.gain}, {"std_error", g.std_error}};
    out.push_back(std::move(pos));
  }

  {
    const Point& full = points.back();
    double worst = 1.0;
    json ratios = json::array();
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double gain_ratio = points[i].gain.gain / full.gain.gain;
      const double sigma_ratio = points[i].sigma_sq / full.sigma_sq;
      const double q = gain_ratio / sigma_ratio;
      // Distance from 1 on a log scale; factor 2 in either direction passes.
      worst = std::max(worst, std::max(q, 1.0 / q));
      ratios.push_back({{"m", points[i].m}, {"gain_ratio", gain_ratio},
                        {"sigma_squared_ratio", sigma_ratio}});
    }
    auto r = AtMost("gain_sigma_squared_scaling",
                    {{"k", k}, {"sizes", sizes}, {"trials", gain_trials}}, worst, 2.0);
    if (!std::isfinite(worst)) r.pass = false;
    r.details["ratios"] = ratios;
    out.push_back(std::move(r));
  }

  const QuerySpec spec = QuerySpec::make(
      n, h, std::vector<Index>(order.begin(), order.end()), c, alpha);
  const OptimalEstimator est = build_optimal(a, spec);
  {
    ConstantResponder plus(+1);
    const GainEstimate g = measure_gain(a, spec, plus, est, gain_trials, CheckSeed(seed, 430));
    auto r = AtMost("gain_constant_responder_zero", {{"k", k}, {"trials", gain_trials}},
                    std::abs(g.gain), 3.0 * g.std_error);
    r.details = {{"gain", g.gain}, {"std_error", g.std_error}};
    out.push_back(std::move(r));
  }
  {
    auto psi = optimal_gap_responder(est, spec);
    FunctionResponder flipped([&](const VectorView& y) { return -psi->respond(y).s; });
    const std::uint64_t s = CheckSeed(seed, 431);
    const GainEstimate g_flip = measure_gain(a, spec, flipped, est, 50000, s);
    const GainEstimate g_opt = measure_gain(a, spec, *psi, est, 50000, s);
    auto r = AtMost("gain_sign_flip_symmetry", {{"k", k}, {"trials", 50000}},
                    std::abs(g_flip.gain + g_opt.gain), 1e-12 * std::abs(g_opt.gain));
    r.pass = r.pass && g_flip.gain < 0.0;
    r.details = {{"gain_optimal", g_opt.gain}, {"gain_flipped", g_flip.gain}};
    out.push_back(std::move(r));
  }
  {
    // Psi should sit at -1 well below the threshold and +1 well above it.
    auto psi = optimal_gap_responder(est, spec);
    const double theta = 1.0 + alpha / 2.0;
    const double margin = 3.0 * c * est.sigma_t();
    const auto bins = estimate_psi(a, spec, *psi, 100000, CheckSeed(seed, 432));
    double worst = 0.0;
    Index used = 0;
    for (const auto& b : bins) {
      if (!b.mean) continue;
      if (b.hi < theta - margin) {
        worst = std::max(worst, std::abs(*b.mean + 1.0));
        ++used;
      } else if (b.lo > theta + margin) {
        worst = std::max(worst, std::abs(*b.mean - 1.0));
        ++used;
      }
    }
    auto r = AtMost("psi_threshold_shape", {{"k", k}, {"trials", 100000}, {"bins", 64}},
                    worst, 0.05);
    r.pass = r.pass && used > 0;
    r.details = {{"bins_checked", used}, {"threshold", theta}, {"margin", margin}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> validate_sigma_profile(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    const Index k = 8, n = 2049;
    const double c0 = 0.01;
    const SketchMatrix a = sample_jl(k, n, JlVariant::kGaussian, CheckSeed(seed, 500));
    const SigmaProfile p = sigma_t_profile(a, c0);
    const json params = {{"k", k}, {"n", n}, {"c0", c0}};
    auto floor_check = AtLeast("sigma_profile_floor_fraction", params, p.fraction_above, 0.9);
    floor_check.details = {{"floor", p.floor}, {"p10", p.p10},
                           {"zero_columns", p.zero_columns}};
    out.push_back(std::move(floor_check));
    // Gaussian columns with small norm push sigma_t^2 past 10 / k at k = 8,
    // so the upper bound is checked on sign entries with unit column norms.
    const SketchMatrix sign = sample_jl(k, n, JlVariant::kSign, CheckSeed(seed, 502));
    const SigmaProfile ps = sigma_t_profile(sign, c0);
    auto max_check = AtMost("sigma_profile_max", {{"k", k}, {"n", n}, {"family", "jl-sign"}},
                            ps.max_sigma_t_squared, 10.0 / static_cast<double>(k));
    max_check.details = {{"gaussian_max", p.max_sigma_t_squared},
                         {"sign_fraction_above", ps.fraction_above}};
    out.push_back(std::move(max_check));
  }
  {
    const Index instances = 100;
    Engine rng = make_stream(seed, StreamTag::kCheck, 501);
    NormalSampler normal;
    double worst_orth = 0.0, worst_affine = 0.0, worst_norm_slack = INFINITY,
           worst_first = 0.0, worst_recon = 0.0;
    Index failures = 0;
    for (Index t = 0; t < instances; ++t) {
      const Index count = UniformIndex(rng, 1, 8);
      const Index kk = UniformIndex(rng, 2, 64);
      const Index dim = count + 1 + UniformIndex(rng, 0, 4);
      Eigen::MatrixXd g(dim, count + 1);
      for (Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
                                Eigen::MatrixXd::Identity(dim, count + 1);
      // Shared unit direction plus orthogonal tails gives inner products 1.
      std::vector<Eigen::VectorXd> v;
      const double lnk = std::log(static_cast<double>(kk));
      for (Index i = 0; i < count; ++i) {
        const double need = static_cast<double>(i + 1) * (2.0 + lnk);
        const double tail_sq = need + UniformReal(rng, 0.5, 3.0) * static_cast<double>(i + 1);
        v.push_back(q.col(0) + std::sqrt(tail_sq) * q.col(i + 1));
      }
      try {
        const AffineOrthogonalization res = affine_orthogonalize(v, kk);
        worst_first = std::max(worst_first, (res.u[0] - v[0]).norm());
        for (Index i = 0; i < count; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          Eigen::VectorXd recon = Eigen::VectorXd::Zero(dim);
          for (Index j = 0; j <= i; ++j) {
            recon += res.coefficients(i, j) * v[static_cast<std::size_t>(j)];
          }
          worst_recon = std::max(worst_recon, (recon - res.u[ui]).norm() /
                                                  std::max(1.0, res.u[ui].norm()));
          worst_affine = std::max(
              worst_affine, std::abs(res.coefficients.row(i).head(i + 1).sum() - 1.0));
          worst_norm_slack = std::min(
              worst_norm_slack, res.u[ui].squaredNorm() - (v[ui].squaredNorm() - 1.0));
          for (Index j = 0; j < i; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            worst_orth = std::max(worst_orth, std::abs(res.u[ui].dot(res.u[uj])) /
                                                  (res.u[ui].norm() * res.u[uj].norm()));
          }
        }
      } catch (const std::exception&) {
        ++failures;
      }
    }
    const bool pass = failures == 0 && worst_orth <= 1e-8 && worst_affine <= 1e-8 &&
                      worst_norm_slack >= -1e-6 && worst_first == 0.0 && worst_recon <= 1e-8;
    CheckReport r{"affine_orthogonalize_postconditions",
                  {{"instances", instances}},
                  worst_orth,
                  1e-8,
                  "<=",
                  pass,
                  {{"max_relative_inner_product", worst_orth},
                   {"max_affine_sum_error", worst_affine},
                   {"min_norm_slack", worst_norm_slack},
                   {"max_reconstruction_error", worst_recon},
                   {"first_vector_change", worst_first},
                   {"exceptions", failures}}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> validate_norm_signal_gap(std::uint64_t seed) {
  std::vector<CheckReport> out;
  const Index k = 32, m = 1000000, trials = 10000;
  const double c = 0.5, alpha = 0.1;
  std::vector<Index> support(static_cast<std::size_t>(m));
  std::iota(support.begin(), support.end(), Index{0});
  const QuerySpec spec = QuerySpec::make(m + 1, m, std::move(support), c, alpha);
  const json params = {{"k", k}, {"m", m}, {"trials", trials}, {"c", c}, {"alpha", alpha}};
  {
    const auto res = check_norm_signal_gap(k, spec, trials, CheckSeed(seed, 600));
    auto r = AtMost("norm_signal_gap_large_m", params, static_cast<double>(res.violations), 0.0);
    r.details = {{"epsilon", res.epsilon},
                 {"squared_threshold", res.squared_threshold},
                 {"squared_width", res.squared_width},
                 {"induced_width_ratio", res.induced_width_ratio},
                 {"max_noise_fluctuation", res.max_noise_fluctuation}};
    out.push_back(std::move(r));
  }
  {
    NormSignalGapOptions opts;
    opts.zero_noise = true;
    const auto res = check_norm_signal_gap(k, spec, trials, CheckSeed(seed, 601), opts);
    out.push_back(AtMost("norm_signal_gap_zero_noise", params,
                         static_cast<double>(res.violations), 0.0));
  }
  return out;
}

std::vector<CheckReport> validate_estimator(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    // Monte Carlo bias and variance on small random instances.
    const Index instances = 20, samples = 100000;
    Engine rng = make_stream(seed, StreamTag::kCheck, 700);
    Index bias_fail = 0, var_fail = 0;
    double worst_bias_z = 0.0, worst_var_rel = 0.0;
    json cases = json::array();
    for (Index t = 0; t < instances; ++t) {
      const Index k = UniformIndex(rng, 2, 8);
      const Index m = UniformIndex(rng, 1, 50);
      const Index n = std::max(k, m + 1 + UniformIndex(rng, 0, 5));
      const double c = UniformReal(rng, 0.5, 2.0);
      const SketchMatrix a = make_explicit(GaussianMatrix(k, n, rng));
      const Index h = UniformIndex(rng, 0, n - 1);
      std::vector<Index> pool;
      for (Index j = 0; j < n; ++j) {
        if (j != h) pool.push_back(j);
      }
      const QuerySpec spec = QuerySpec::make(n, h, RandomSubset(rng, pool, m), c, 0.2);
      const OptimalEstimator est = build_optimal(a, spec);

      QueryStream stream(a, spec, CheckSeed(seed, 710 + static_cast<std::uint64_t>(t)));
      QueryStream::Block block;
      Eigen::VectorXd y(k);
      double mean = 0.0, m2 = 0.0;
      Index count = 0;
      for (Index first = 0; first < samples; first += 256) {
        stream.fill(first, std::min<Index>(256, samples - first), block);
        for (Index j = 0; j < block.count; ++j) {
          stream.sketch(block, j, y);
          const double x = estimate_signal(est, y) - block.w[j];
          ++count;
          const double d = x - mean;
          mean += d / static_cast<double>(count);
          m2 += d * (x - mean);
        }
      }
      const double var = m2 / static_cast<double>(count - 1);
      const double se = std::sqrt(var / static_cast<double>(count));
      const double expected = c * c * est.sigma_t_squared();
      const double bias_z = se > 0.0 ? std::abs(mean) / se : 0.0;
      // Exact recovery leaves only rounding error.
      const bool bias_ok = expected == 0.0 ? std::abs(mean) < 1e-10 : bias_z < 3.0;
      const double var_rel = expected == 0.0 ? var : std::abs(var - expected) / expected;
      const bool var_ok = expected == 0.0 ? var < 1e-20 : var_rel <= 0.05;
      if (expected > 0.0) worst_bias_z = std::max(worst_bias_z, bias_z);
      worst_var_rel = std::max(worst_var_rel, var_rel);
      bias_fail += bias_ok ? 0 : 1;
      var_fail += var_ok ? 0 : 1;
      cases.push_back({{"k", k}, {"m", m}, {"n", n}, {"c", c}, {"bias", mean},
                       {"std_error", se}, {"variance", var}, {"expected_variance", expected},
                       {"exact_recovery", est.exact_recovery()}});
    }
    auto bias = AtMost("estimator_unbiased",
                       {{"instances", instances}, {"samples", samples}}, worst_bias_z, 3.0);
    bias.comparison = "<";
    bias.pass = bias_fail == 0;
    bias.details = {{"failures", bias_fail}, {"cases", cases}};
    out.push_back(std::move(bias));
    auto var = AtMost("estimator_variance_match",
                      {{"instances", instances}, {"samples", samples}}, worst_var_rel, 0.05);
    var.pass = var_fail == 0;
    var.details = {{"failures", var_fail}};
    out.push_back(std::move(var));
  }
  {
    // Pseudo-inverse route against the row-orthogonalization route.
    const Index matrices = 50;
    Engine rng = make_stream(seed, StreamTag::kCheck, 720);
    double worst = 0.0;
    for (Index t = 0; t < matrices; ++t) {
      const Index k = UniformIndex(rng, 2, 10);
      const Index n = UniformIndex(rng, k + 1, 60);
      const std::uint64_t ms = CheckSeed(seed, 730 + static_cast<std::uint64_t>(t));
      const SketchMatrix a = t % 2 == 0 ? make_explicit(GaussianMatrix(k, n, rng))
                                        : sample_jl(k, n, JlVariant::kSign, ms);
      const Index h = UniformIndex(rng, 0, n - 1);
      std::vector<Index> rest;
      for (Index j = 0; j < n; ++j) {
        if (j != h) rest.push_back(j);
      }
      const double gls = build_optimal(a, h, rest, 1.0).sigma_t_squared();
      const double ch = sigma_t_squared_by_characterization(a, h);
      const double scale = std::max({std::abs(gls), std::abs(ch), 1e-300});
      worst = std::max(worst, std::abs(gls - ch) / scale);
    }
    out.push_back(AtMost("estimator_gls_vs_characterization", {{"matrices", matrices}},
                         worst, 1e-7));
  }
  {
    // No unbiased linear estimator on a grid around g* has lower variance.
    const Index instances = 60;
    Engine rng = make_stream(seed, StreamTag::kCheck, 740);
    Index better = 0, grid_points = 0;
    double worst_identity = 0.0;
    for (Index t = 0; t < instances; ++t) {
      const Index k = UniformIndex(rng, 1, 3);
      const Index m = UniformIndex(rng, 1, 6);
      const Index n = std::max(k, m + 1);
      const SketchMatrix a = make_explicit(GaussianMatrix(k, n, rng));
      std::vector<Index> support(static_cast<std::size_t>(m));
      std::iota(support.begin(), support.end(), Index{0});
      const OptimalEstimator est = build_optimal(a, n - 1, support, 1.0);
      const Eigen::VectorXd ah = a.entries().col(n - 1);
      const Eigen::MatrixXd am = a.gather_columns(support);
      const Eigen::MatrixXd sigma = am * am.transpose() / static_cast<double>(m);
      const Eigen::VectorXd& g = est.extraction();
      const double best = g.dot(sigma * g);
      const double scale = std::max(g.squaredNorm() * sigma.norm(), 1e-300);
      worst_identity =
          std::max(worst_identity, std::abs(best - est.sigma_t_squared()) / scale);
      // Basis of the directions that keep <g, a_h> = 1.
      const Eigen::MatrixXd full =
          Eigen::HouseholderQR<Eigen::MatrixXd>(ah).householderQ() *
          Eigen::MatrixXd::Identity(k, k);
      const Eigen::MatrixXd null = full.rightCols(k - 1);
      const double step = std::max(g.norm(), 1.0) / 10.0;
      const Index per_axis = 21;
      const Index total = k == 1 ? 1 : (k == 2 ? per_axis : per_axis * per_axis);
      for (Index p = 0; p < total; ++p) {
        Eigen::VectorXd cand = g;
        Index rem = p;
        for (Index d = 0; d < k - 1; ++d) {
          const Index idx = rem % per_axis;
          rem /= per_axis;
          cand += static_cast<double>(idx - per_axis / 2) * step * null.col(d);
        }
        ++grid_points;
        const double slack = 1e-10 * std::max(best, 1e-12) + 1e-14;
        if (cand.dot(sigma * cand) < best - slack) ++better;
      }
    }
    auto r = AtMost("estimator_bruteforce_optimality",
                    {{"instances", instances}, {"k_max", 3}, {"m_max", 6}},
                    static_cast<double>(better), 0.0);
    r.pass = r.pass && worst_identity <= 1e-9;
    r.details = {{"grid_points", grid_points}, {"variance_identity_error", worst_identity}};
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

ValidationManifest run_validation(std::string_view selector,
                                  const ValidationOptions& options) {
  if (!is_validation_selector(selector)) {
    throw std::invalid_argument("unknown validation suite '" + std::string(selector) + "'");
  }
  using SuiteFn = std::vector<CheckReport> (*)(std::uint64_t);
  const std::vector<std::pair<std::string_view, SuiteFn>> table = {
      {"fragility", validate_fragility},
      {"concentration", validate_concentration},
      {"signed-sum", validate_signed_sum},
      {"gain", validate_gain},
      {"sigma-profile", validate_sigma_profile},
      {"norm-signal-gap", validate_norm_signal_gap},
      {"estimator", validate_estimator}};
  std::vector<SuiteFn> selected;
  for (const auto& [name, fn] : table) {
    if (selector == "all" || selector == name) selected.push_back(fn);
  }
  std::vector<std::vector<CheckReport>> results(selected.size());
  parallel_for(selected.size(), options.threads,
               [&](std::size_t i) { results[i] = selected[i](options.seed); });

  ValidationManifest manifest;
  manifest.suite = std::string(selector);
  manifest.seed = options.seed;
  for (auto& r : results) {
    manifest.checks.insert(manifest.checks.end(), std::make_move_iterator(r.begin()),
                           std::make_move_iterator(r.end()));
  }
  return manifest;
}

}  // namespace sketchattack::harness
