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

#include <array>
#include <fstream>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "sketchattack/attack.hpp"

namespace sketchattack {
namespace {

using internal::ReadLe;
using internal::WriteLe;

constexpr std::array<char, 4> kMagic = {'S', 'K', 'T', 'R'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kHasAdv = 1;
constexpr std::uint8_t kHasTrace = 2;

void WriteDoubles(std::ostream& out, const double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) WriteLe<double>(out, data[i]);
}

std::vector<double> ReadDoubles(std::istream& in, std::size_t count) {
  std::vector<double> values(count);
  for (auto& v : values) v = ReadLe<double>(in);
  return values;
}

}  // namespace

void save_transcript(const AttackTranscript& tr,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const QuerySpec& spec = tr.spec;
  const bool trace = !tr.per_step_deviation.empty();
  out.write(kMagic.data(), kMagic.size());
  WriteLe<std::uint32_t>(out, kVersion);
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(spec.n()));
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(spec.h()));
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(spec.m()));
  WriteLe<double>(out, spec.c());
  WriteLe<double>(out, spec.alpha());
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(tr.r));
  WriteLe<std::uint64_t>(out, tr.seed);
  WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(tr.err_count));
  WriteLe<std::uint8_t>(out, static_cast<std::uint8_t>(
                                 (tr.z_adv ? kHasAdv : 0) | (trace ? kHasTrace : 0)));
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(tr.responder_tag.size()));
  out.write(tr.responder_tag.data(),
            static_cast<std::streamsize>(tr.responder_tag.size()));
  for (Index j : spec.support()) WriteLe<std::uint64_t>(out, static_cast<std::uint64_t>(j));
  out.write(reinterpret_cast<const char*>(tr.responses.data()),
            static_cast<std::streamsize>(tr.responses.size()));
  WriteDoubles(out, tr.signals.data(), tr.signals.size());
  WriteDoubles(out, tr.signed_sum.data(), static_cast<std::size_t>(tr.signed_sum.size()));
  if (tr.z_adv) {
    WriteDoubles(out, tr.z_adv->data(), static_cast<std::size_t>(tr.z_adv->size()));
  }
  if (trace) {
    WriteDoubles(out, tr.per_step_deviation.data(), tr.per_step_deviation.size());
    WriteDoubles(out, tr.step_noise_deviation.data(), tr.step_noise_deviation.size());
  }
  if (!out) throw IoError("write failed for " + path.string());
}

AttackTranscript load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("bad transcript magic in " + path.string());
  }
  if (ReadLe<std::uint32_t>(in) != kVersion) {
    throw IoError("unsupported transcript version");
  }
  const auto n = static_cast<Index>(ReadLe<std::uint64_t>(in));
  const auto h = static_cast<Index>(ReadLe<std::uint64_t>(in));
  const auto m = ReadLe<std::uint64_t>(in);
  const double c = ReadLe<double>(in);
  const double alpha = ReadLe<double>(in);
  const auto r = ReadLe<std::uint64_t>(in);
  const auto seed = ReadLe<std::uint64_t>(in);
  const auto err_count = ReadLe<std::uint64_t>(in);
  const auto flags = ReadLe<std::uint8_t>(in);
  const auto tag_len = ReadLe<std::uint32_t>(in);
  if (m > static_cast<std::uint64_t>(n) || tag_len > 4096 || r > (1ULL << 40)) {
    throw IoError("implausible transcript header");
  }
  std::string tag(tag_len, '\0');
  if (!in.read(tag.data(), tag_len)) throw IoError("truncated transcript");
  std::vector<Index> support(m);
  for (auto& j : support) j = static_cast<Index>(ReadLe<std::uint64_t>(in));

  AttackTranscript tr = [&] {
    try {
      return AttackTranscript(QuerySpec::make(n, h, std::move(support), c, alpha));
    } catch (const std::invalid_argument& e) {
      throw IoError(std::string("invalid transcript spec: ") + e.what());
    }
  }();
  tr.r = static_cast<Index>(r);
  tr.seed = seed;
  tr.err_count = static_cast<Index>(err_count);
  tr.responder_tag = std::move(tag);
  tr.responses.resize(r);
  if (!in.read(reinterpret_cast<char*>(tr.responses.data()),
               static_cast<std::streamsize>(r))) {
    throw IoError("truncated transcript");
  }
  tr.signals = ReadDoubles(in, r);
  const auto sum = ReadDoubles(in, static_cast<std::size_t>(n));
  tr.signed_sum = Eigen::Map<const Eigen::VectorXd>(sum.data(), n);
  if (flags & kHasAdv) {
    const auto adv = ReadDoubles(in, static_cast<std::size_t>(n));
    tr.z_adv = Eigen::Map<const Eigen::VectorXd>(adv.data(), n);
  }
  if (flags & kHasTrace) {
    tr.per_step_deviation = ReadDoubles(in, r);
    tr.step_noise_deviation = ReadDoubles(in, r);
  }
  return tr;
}

std::string transcript_summary_json(const AttackTranscript& tr,
                                    const AttackOutcome& outcome) {
  nlohmann::json doc;
  doc["r"] = tr.r;
  doc["err_rate"] = outcome.err_rate;
  doc["deviation_of_adv"] = outcome.deviation_of_adv;
  doc["gamma_achieved"] = outcome.gamma_achieved;
  doc["seed"] = tr.seed;
  doc["kind"] = std::string(outcome_name(outcome.kind));
  doc["responder"] = tr.responder_tag;
  doc["degenerate"] = tr.degenerate();
  return doc.dump(2);
}

}  // namespace sketchattack
