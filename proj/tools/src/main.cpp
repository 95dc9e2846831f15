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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sketchattack/harness/campaign.hpp"
#include "sketchattack/harness/config.hpp"
#include "sketchattack/harness/tradeoff.hpp"
#include "sketchattack/harness/validate.hpp"
#include "sketchattack/types.hpp"

namespace fs = std::filesystem;
namespace sh = sketchattack::harness;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
};

int CmdAttack(const Globals& g, const std::string& config_path) {
  sh::CampaignConfig config;
  try {
    config = sh::load_config(config_path);
  } catch (const sh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sketchattack::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  if (g.seed) config.seed = *g.seed;
  if (g.out_dir) config.output_dir = *g.out_dir;

  sh::RunOptions options;
  options.threads = g.threads;
  options.keep_transcripts = config.write_transcripts;
  sh::CampaignResult result;
  try {
    result = sh::run_campaign(config, options);
  } catch (const sh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sketchattack::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    sh::write_campaign(config, result);
  } catch (const sketchattack::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  for (const auto& s : result.summary["series"]) {
    std::cout << s["estimator"].get<std::string>() << " sigma=" << s["sigma"]
              << " final_mean_deviation=" << s["final_mean_deviation"] << '\n';
  }
  std::cout << "wrote " << (config.output_dir / "records.csv").string() << '\n';
  return 0;
}

int CmdValidate(const Globals& g, const std::string& suite) {
  if (!sh::is_validation_selector(suite)) {
    std::cerr << "unknown suite '" << suite << "'\n";
    return kExitConfig;
  }
  sh::ValidationOptions options;
  options.threads = g.threads;
  if (g.seed) options.seed = *g.seed;
  const sh::ValidationManifest manifest = sh::run_validation(suite, options);
  for (const auto& c : manifest.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.check_name
              << " statistic=" << c.statistic << ' ' << c.comparison << ' ' << c.bound
              << '\n';
  }
  const fs::path dir = g.out_dir ? fs::path(*g.out_dir) : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / "validation_manifest.json", std::ios::trunc);
  if (ec || !out) {
    std::cerr << "io error: cannot write manifest in " << dir.string() << '\n';
    return kExitIo;
  }
  out << manifest.to_json().dump(2) << '\n';
  return manifest.pass() ? 0 : kExitFailure;
}

int CmdTradeoff(const Globals& g, const std::vector<sketchattack::Index>& ks,
                const std::vector<double>& sigmas, sketchattack::Index draws,
                const std::string& family) {
  sh::TradeoffOptions options;
  options.ks = ks;
  options.sigmas = sigmas;
  options.draws = draws;
  options.seed = g.seed.value_or(0);
  if (family == "jl-gaussian") {
    options.variant = sketchattack::JlVariant::kGaussian;
  } else if (family != "jl-sign") {
    std::cerr << "tradeoff family must be jl-sign or jl-gaussian\n";
    return kExitConfig;
  }
  std::vector<sh::TradeoffRow> rows;
  try {
    rows = sh::compute_tradeoff(options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  sh::write_tradeoff_csv(std::cout, rows);
  if (g.out_dir) {
    std::error_code ec;
    fs::create_directories(*g.out_dir, ec);
    try {
      if (ec) throw sketchattack::IoError(ec.message());
      sh::write_tradeoff_csv(fs::path(*g.out_dir) / "tradeoff.csv", rows);
    } catch (const sketchattack::IoError& e) {
      std::cerr << "io error: " << e.what() << '\n';
      return kExitIo;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive attacks on linear sketches"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* out_opt = app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  std::string config_path;
  auto* attack = app.add_subcommand("attack", "run an attack campaign");
  attack->add_option("config", config_path, "campaign config JSON")->required();

  std::string suite;
  auto* validate = app.add_subcommand("validate", "run validation suites");
  validate->add_option("suite", suite, "all or a single suite")->required();

  std::vector<sketchattack::Index> ks;
  std::vector<double> sigmas;
  sketchattack::Index draws = 20000;
  std::string family = "jl-sign";
  auto* tradeoff = app.add_subcommand("tradeoff", "accuracy against noise scale");
  tradeoff->add_option("--k", ks, "sketch sizes")->required()->check(CLI::PositiveNumber);
  tradeoff->add_option("--sigma", sigmas, "noise scales")->required()->check(
      CLI::NonNegativeNumber);
  tradeoff->add_option("--draws", draws, "Monte Carlo draws")->check(CLI::Range(2, 1 << 30));
  tradeoff->add_option("--family", family, "jl-sign or jl-gaussian");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*seed_opt) g.seed = seed;
  if (*out_opt) g.out_dir = out_dir;

  try {
    if (*attack) return CmdAttack(g, config_path);
    if (*validate) return CmdValidate(g, suite);
    if (*tradeoff) return CmdTradeoff(g, ks, sigmas, draws, family);
  } catch (const sketchattack::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}
