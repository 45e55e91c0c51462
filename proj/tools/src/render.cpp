// Copyright 2026 The Omnistream Authors. All Rights Reserved.
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


#include <algorithm>
#include <charconv>
#include <cmath>

#include "cli_internal.hpp"

namespace omnistream::cli {

double round6(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, round6(x));
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(row[i]);
  }
  out += '\n';
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  csv_row(out, t.header);
  for (const auto& row : t.rows) csv_row(out, row);
  return out;
}

std::string to_text(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  widen(t.header);
  for (const auto& row : t.rows) widen(row);

  std::string out;
  auto line = [&](const std::vector<std::string>& row) {
    std::string l;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) l += "  ";
      l += row[i];
      if (i + 1 < row.size()) l.append(width[i] - row[i].size(), ' ');
    }
    l.erase(l.find_last_not_of(' ') + 1);
    out += l;
    out += '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
  return out;
}

nlohmann::ordered_json report_json(const sim::ScenarioReport& r) {
  nlohmann::ordered_json j;
  j["ttft_ms"] = round6(r.ttft_ms);
  j["ttfc_ms"] = round6(r.ttfc_ms);
  j["first_packet_ms"] = round6(r.first_packet_ms);
  j["thinker_tpop_ms"] = round6(r.thinker_tpop_ms);
  j["talker_tpop_ms"] = round6(r.talker_tpop_ms);
  j["thinker_tps"] = round6(r.thinker_tps);
  j["talker_tps"] = round6(r.talker_tps);
  j["generation_rtf"] = round6(r.generation_rtf);
  j["text_tokens"] = r.text_tokens;
  j["speech_frames"] = r.speech_frames;
  j["codec_chunks"] = r.codec_chunks;
  j["prefill_chunks"] = r.prefill_chunks;
  return j;
}

}  // namespace omnistream::cli
