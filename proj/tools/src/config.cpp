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

#include "sketchattack/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sketchattack/query_model.hpp"
#include "sketchattack/rng.hpp"

namespace sketchattack::harness {
namespace {

using nlohmann::json;

const std::vector<std::string_view> kKnownKeys = {
    "k",     "n",      "matrix", "estimators", "attack",       "r",
    "c",     "alpha",  "w_fixed", "m",         "trials",       "gamma",
    "delta", "output_dir", "seed", "record_every", "write_transcripts"};

template <typename T>
T Get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

Index GetIndex(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<Index>();
}

double GetFinite(const json& doc, const char* key) {
  const double v = Get<double>(doc, key);
  if (!std::isfinite(v)) throw ConfigError(std::string("field '") + key + "' not finite");
  return v;
}

EstimatorKind ParseEstimatorKind(const std::string& s) {
  if (s == "standard") return EstimatorKind::kStandard;
  if (s == "robust") return EstimatorKind::kRobust;
  if (s == "optimal-gap") return EstimatorKind::kOptimalGap;
  if (s == "random") return EstimatorKind::kRandom;
  throw ConfigError("unknown estimator type '" + s + "'");
}

void Validate(const CampaignConfig& c) {
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (c.n <= c.k) throw ConfigError("n must exceed k");
  if (c.r < 1) throw ConfigError("r must be >= 1");
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.record_every < 1) throw ConfigError("record_every must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(c.c > 0.0)) throw ConfigError("c must be positive");
  if (c.gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (c.delta && !(*c.delta >= 0.0 && *c.delta <= 1.0)) {
    throw ConfigError("delta must lie in [0, 1]");
  }
  if (c.estimators.empty()) throw ConfigError("at least one estimator is required");
  for (const auto& e : c.estimators) {
    if (!(e.sigma >= 0.0) || !std::isfinite(e.sigma)) {
      throw ConfigError("estimator sigma must be finite and >= 0");
    }
    if (c.attack == AttackKind::kLightweight &&
        (e.kind == EstimatorKind::kOptimalGap || e.kind == EstimatorKind::kRandom)) {
      throw ConfigError("the lightweight attack accepts only norm estimators");
    }
  }
  if (c.attack == AttackKind::kLightweight && c.c != 1.0) {
    throw ConfigError("the lightweight attack uses c = 1");
  }
  if (c.m) {
    if (c.attack != AttackKind::kFull) throw ConfigError("m applies to the full attack only");
    if (*c.m < 1 || *c.m > c.n - 1) throw ConfigError("m must lie in [1, n - 1]");
  }
  if (c.matrix.from_file && c.matrix.path.empty()) {
    throw ConfigError("matrix family 'file' needs a path");
  }
}

}  // namespace

std::string_view estimator_tag(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kStandard: return "standard";
    case EstimatorKind::kRobust: return "robust";
    case EstimatorKind::kOptimalGap: return "optimal-gap";
    case EstimatorKind::kRandom: return "random";
  }
  return "unknown";
}

double CampaignConfig::effective_delta() const {
  return delta ? *delta : default_delta(alpha);
}

std::uint64_t CampaignConfig::matrix_seed() const {
  return matrix.seed ? *matrix.seed : derive_seed(seed, StreamTag::kMatrix, 0);
}

std::uint64_t CampaignConfig::trial_seed(Index trial) const {
  return derive_seed(seed, StreamTag::kTrial, static_cast<std::uint64_t>(trial));
}

CampaignConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto k : kKnownKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown config field '" + key + "'");
  }
  for (const char* required : {"k", "n", "estimators", "r", "trials"}) {
    if (!doc.contains(required)) {
      throw ConfigError(std::string("missing field '") + required + "'");
    }
  }

  CampaignConfig c;
  c.k = GetIndex(doc, "k");
  c.n = GetIndex(doc, "n");
  c.r = GetIndex(doc, "r");
  c.trials = GetIndex(doc, "trials");

  if (doc.contains("matrix")) {
    const json& mat = doc.at("matrix");
    if (!mat.is_object()) throw ConfigError("matrix must be an object");
    const auto family = mat.contains("family") ? Get<std::string>(mat, "family")
                                               : std::string("jl-sign");
    if (family == "file") {
      c.matrix.from_file = true;
      c.matrix.family = SketchFamily::kExplicit;
      if (mat.contains("path")) c.matrix.path = Get<std::string>(mat, "path");
    } else {
      try {
        c.matrix.family = parse_family(family);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (c.matrix.family == SketchFamily::kExplicit) {
        throw ConfigError("explicit matrices are loaded with family 'file'");
      }
    }
    if (mat.contains("seed")) c.matrix.seed = Get<std::uint64_t>(mat, "seed");
  }

  const json& ests = doc.at("estimators");
  if (!ests.is_array()) throw ConfigError("estimators must be an array");
  for (const json& e : ests) {
    if (!e.is_object() || !e.contains("type")) {
      throw ConfigError("each estimator needs a type");
    }
    EstimatorConfig ec;
    ec.kind = ParseEstimatorKind(Get<std::string>(e, "type"));
    if (e.contains("sigma")) ec.sigma = GetFinite(e, "sigma");
    if (ec.kind != EstimatorKind::kRobust && ec.sigma != 0.0) {
      throw ConfigError("sigma applies to robust estimators only");
    }
    if (e.contains("threshold")) ec.threshold = GetFinite(e, "threshold");
    c.estimators.push_back(ec);
  }

  if (doc.contains("attack")) {
    const auto kind = Get<std::string>(doc, "attack");
    if (kind == "lightweight") {
      c.attack = AttackKind::kLightweight;
    } else if (kind == "full") {
      c.attack = AttackKind::kFull;
    } else {
      throw ConfigError("attack must be 'lightweight' or 'full'");
    }
  }
  if (doc.contains("c")) c.c = GetFinite(doc, "c");
  if (doc.contains("alpha")) c.alpha = GetFinite(doc, "alpha");
  if (doc.contains("w_fixed")) c.w_fixed = GetFinite(doc, "w_fixed");
  if (doc.contains("m")) c.m = GetIndex(doc, "m");
  if (doc.contains("gamma")) c.gamma = GetFinite(doc, "gamma");
  if (doc.contains("delta")) c.delta = GetFinite(doc, "delta");
  if (doc.contains("output_dir")) c.output_dir = Get<std::string>(doc, "output_dir");
  if (doc.contains("seed")) c.seed = Get<std::uint64_t>(doc, "seed");
  if (doc.contains("record_every")) c.record_every = GetIndex(doc, "record_every");
  if (doc.contains("write_transcripts")) {
    c.write_transcripts = Get<bool>(doc, "write_transcripts");
  }
  Validate(c);
  return c;
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  CampaignConfig c = parse_config(text.str());
  if (c.matrix.from_file && c.matrix.path.is_relative()) {
    c.matrix.path = path.parent_path() / c.matrix.path;
  }
  return c;
}

std::string config_to_json(const CampaignConfig& c) {
  json doc;
  doc["k"] = c.k;
  doc["n"] = c.n;
  json mat;
  mat["family"] = c.matrix.from_file ? "file" : std::string(family_name(c.matrix.family));
  mat["seed"] = c.matrix_seed();
  if (c.matrix.from_file) mat["path"] = c.matrix.path.string();
  doc["matrix"] = mat;
  json ests = json::array();
  for (const auto& e : c.estimators) {
    json je;
    je["type"] = estimator_tag(e.kind);
    je["sigma"] = e.sigma;
    if (e.threshold) je["threshold"] = *e.threshold;
    ests.push_back(je);
  }
  doc["estimators"] = ests;
  doc["attack"] = c.attack == AttackKind::kFull ? "full" : "lightweight";
  doc["r"] = c.r;
  doc["c"] = c.c;
  doc["alpha"] = c.alpha;
  doc["w_fixed"] = c.w_fixed;
  if (c.m) doc["m"] = *c.m;
  doc["trials"] = c.trials;
  doc["gamma"] = c.gamma;
  doc["delta"] = c.effective_delta();
  doc["output_dir"] = c.output_dir.string();
  doc["seed"] = c.seed;
  doc["record_every"] = c.record_every;
  doc["write_transcripts"] = c.write_transcripts;
  return doc.dump(2);
}

}  // namespace sketchattack::harness
