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

#include "sketchattack/harness/records.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace sketchattack::harness {
namespace {

template <typename T>
T ParseField(std::string_view field, std::size_t line) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("bad field '" + std::string(field) + "' on line " +
                                std::to_string(line));
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buffer, ptr);
}

void write_record(std::ostream& out, const CampaignRecord& r) {
  out << r.k << ',' << r.estimator << ',' << format_double(r.sigma) << ','
      << r.trial << ',' << r.step << ',' << format_double(r.deviation) << ','
      << format_double(r.err_rate) << ',' << r.seed << '\n';
}

ParsedRecords parse_records(std::string_view text) {
  ParsedRecords out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view() : text.substr(end + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != kRecordsHeader) throw std::invalid_argument("unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 8) {
      throw std::invalid_argument("wrong field count on line " + std::to_string(line_no));
    }
    CampaignRecord r;
    r.k = ParseField<Index>(fields[0], line_no);
    r.estimator = std::string(fields[1]);
    r.sigma = ParseField<double>(fields[2], line_no);
    r.trial = ParseField<Index>(fields[3], line_no);
    r.step = ParseField<Index>(fields[4], line_no);
    r.deviation = ParseField<double>(fields[5], line_no);
    r.err_rate = ParseField<double>(fields[6], line_no);
    r.seed = ParseField<std::uint64_t>(fields[7], line_no);
    out.rows.push_back(std::move(r));
  }
  if (line_no == 0) throw std::invalid_argument("empty CSV");
  return out;
}

}  // namespace sketchattack::harness
