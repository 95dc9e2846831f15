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

#include "sketchattack/harness/tradeoff.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sketchattack/harness/records.hpp"
#include "sketchattack/responders.hpp"
#include "sketchattack/rng.hpp"

namespace sketchattack::harness {

std::vector<TradeoffRow> compute_tradeoff(const TradeoffOptions& o) {
  if (o.draws < 2) throw std::invalid_argument("tradeoff needs at least 2 draws");
  std::vector<TradeoffRow> rows;
  for (std::size_t ki = 0; ki < o.ks.size(); ++ki) {
    const Index k = o.ks[ki];
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::uint64_t k_seed = derive_seed(o.seed, StreamTag::kMatrix, ki);
    for (std::size_t si = 0; si < o.sigmas.size(); ++si) {
      const double sigma = o.sigmas[si];
      if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be finite and >= 0");
      }
      Engine rng = make_stream(derive_seed(o.seed, StreamTag::kResponder, ki),
                               StreamTag::kResponder, si);
      double mean = 0.0, m2 = 0.0;
      Index count = 0;
      // Matrix draws are shared across sigma values for the same k.
      for (Index d = 0; d < o.draws; ++d) {
        const std::uint64_t ms =
            derive_seed(k_seed, StreamTag::kMatrix, static_cast<std::uint64_t>(d));
        const Eigen::VectorXd y = (sample_jl_column(k, o.variant, ms, 0) +
                                   sample_jl_column(k, o.variant, ms, 1)) *
                                  inv_sqrt2;
        const double s = robust_estimate(y, sigma, rng);
        const double x = s * s;
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
      }
      TradeoffRow row;
      row.k = k;
      row.sigma = sigma;
      row.sigma0 = 1.0 / std::sqrt(static_cast<double>(k));
      row.sigma_t = std::sqrt(1.0 / static_cast<double>(k) + sigma * sigma);
      row.empirical = std::sqrt(m2 / static_cast<double>(count - 1));
      row.draws = o.draws;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows) {
  out << "k,sigma,sigma0,sigma_t,empirical,draws\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.sigma) << ',' << format_double(r.sigma0)
        << ',' << format_double(r.sigma_t) << ',' << format_double(r.empirical)
        << ',' << r.draws << '\n';
  }
}

void write_tradeoff_csv(const std::filesystem::path& path,
                        const std::vector<TradeoffRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_tradeoff_csv(out, rows);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sketchattack::harness
