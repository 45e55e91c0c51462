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


#include <cmath>
#include <limits>
#include <set>

#include "cli_internal.hpp"
#include "omnistream/cli/cli.hpp"

namespace omnistream::cli {

namespace {

using nlohmann::json;

// Bounds that keep later integer arithmetic well away from overflow.
constexpr std::int64_t kMaxCount = 1'000'000'000'000;
constexpr std::int64_t kMaxGridSide = 1'000'000;
constexpr double kMaxSeconds = 1e9;

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

std::string indexed(const std::string& prefix, std::size_t i) {
  return prefix + "[" + std::to_string(i) + "]";
}

// Collects schema problems instead of stopping at the first one.
class Reader {
 public:
  void issue(std::string path, std::string message) {
    issues_.push_back({std::move(path), std::move(message)});
  }

  bool expect_object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    issue(path.empty() ? "$" : path, "expected an object");
    return false;
  }

  void reject_unknown(const json& obj, const std::string& path,
                      std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) issue(join(path, key), "unknown field");
    }
  }

  std::optional<std::int64_t> integer(const json& v, const std::string& path, std::int64_t lo,
                                      std::int64_t hi) {
    if (!v.is_number_integer()) {
      issue(path, "expected an integer");
      return std::nullopt;
    }
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
      issue(path, "integer out of range");
      return std::nullopt;
    }
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) {
      issue(path, "integer out of range");
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> number(const json& v, const std::string& path, double limit) {
    if (!v.is_number()) {
      issue(path, "expected a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || std::fabs(x) > limit) {
      issue(path, "number out of range");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::string> string(const json& v, const std::string& path) {
    if (!v.is_string()) {
      issue(path, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<bool> boolean(const json& v, const std::string& path) {
    if (!v.is_boolean()) {
      issue(path, "expected true or false");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  bool ok() const noexcept { return issues_.empty(); }
  std::vector<FieldIssue> take() { return std::move(issues_); }

 private:
  std::vector<FieldIssue> issues_;
};

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw InputError(ErrorCode::kParseError, {{"$", "malformed JSON at byte " + std::to_string(e.byte)}});
  }
}

constexpr std::string_view kSegmentFields[] = {"kind", "token_count", "grid", "frame_timestamps",
                                               "duration"};

bool field_allowed(MediaKind kind, std::string_view field) {
  if (field == "kind") return true;
  switch (kind) {
    case MediaKind::kText: return field == "token_count";
    case MediaKind::kImage: return field == "grid";
    case MediaKind::kVideo: return field == "grid" || field == "frame_timestamps";
    case MediaKind::kAudio: return field == "duration";
  }
  return false;
}

std::optional<Grid> read_grid(Reader& r, const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) {
    r.issue(path, "expected [rows, cols]");
    return std::nullopt;
  }
  const auto rows = r.integer(v[0], indexed(path, 0), -kMaxGridSide, kMaxGridSide);
  const auto cols = r.integer(v[1], indexed(path, 1), -kMaxGridSide, kMaxGridSide);
  if (!rows || !cols) return std::nullopt;
  return Grid{*rows, *cols};
}

MediaSegment read_segment(Reader& r, const json& v, const std::string& path) {
  MediaSegment seg;
  if (!r.expect_object(v, path)) return seg;

  std::optional<MediaKind> kind;
  if (!v.contains("kind")) {
    r.issue(join(path, "kind"), "required field is missing");
  } else if (auto name = r.string(v["kind"], join(path, "kind"))) {
    kind = parse_media_kind(*name);
    if (!kind) r.issue(join(path, "kind"), "expected TEXT, IMAGE, VIDEO or AUDIO");
  }

  for (const auto& [key, _] : v.items()) {
    bool known = false;
    for (auto f : kSegmentFields) known = known || f == key;
    if (!known) {
      r.issue(join(path, key), "unknown field");
    } else if (kind && !field_allowed(*kind, key)) {
      r.issue(join(path, key), "field not allowed for " + std::string(to_string(*kind)));
    }
  }
  if (!kind) return seg;
  seg.kind = *kind;

  auto required = [&](std::string_view field) -> const json* {
    if (!v.contains(field)) {
      r.issue(join(path, field), "required field is missing");
      return nullptr;
    }
    return &v[std::string(field)];
  };

  switch (*kind) {
    case MediaKind::kText:
      if (const json* f = required("token_count")) {
        seg.token_count = r.integer(*f, join(path, "token_count"), -kMaxCount, kMaxCount);
      }
      break;
    case MediaKind::kImage:
      if (const json* f = required("grid")) seg.grid = read_grid(r, *f, join(path, "grid"));
      break;
    case MediaKind::kVideo:
      if (const json* f = required("grid")) seg.grid = read_grid(r, *f, join(path, "grid"));
      if (const json* f = required("frame_timestamps")) {
        const std::string fp = join(path, "frame_timestamps");
        if (!f->is_array()) {
          r.issue(fp, "expected an array of seconds");
        } else if (f->size() > static_cast<std::size_t>(kMaxCount / kMaxGridSide)) {
          r.issue(fp, "too many frames");
        } else {
          std::vector<std::int64_t> ts;
          for (std::size_t i = 0; i < f->size(); ++i) {
            if (auto s = r.number((*f)[i], indexed(fp, i), kMaxSeconds)) ts.push_back(seconds_to_ms(*s));
          }
          seg.frame_timestamps_ms = std::move(ts);
        }
      }
      break;
    case MediaKind::kAudio:
      if (const json* f = required("duration")) {
        if (auto s = r.number(*f, join(path, "duration"), kMaxSeconds)) seg.duration_ms = seconds_to_ms(*s);
      }
      break;
  }
  return seg;
}

MediaManifest read_manifest(Reader& r, const json& v, const std::string& prefix) {
  MediaManifest m;
  if (!r.expect_object(v, prefix)) return m;
  r.reject_unknown(v, prefix, {"segments", "audio_frame_seconds", "context_limit"});

  const std::string sp = join(prefix, "segments");
  if (!v.contains("segments")) {
    r.issue(sp, "required field is missing");
  } else if (!v["segments"].is_array()) {
    r.issue(sp, "expected an array");
  } else {
    const json& segs = v["segments"];
    for (std::size_t i = 0; i < segs.size(); ++i) m.segments.push_back(read_segment(r, segs[i], indexed(sp, i)));
  }
  if (v.contains("audio_frame_seconds")) {
    if (auto s = r.number(v["audio_frame_seconds"], join(prefix, "audio_frame_seconds"), kMaxSeconds)) {
      m.audio_frame_ms = seconds_to_ms(*s);
    }
  }
  if (v.contains("context_limit")) {
    if (auto n = r.integer(v["context_limit"], join(prefix, "context_limit"), 0, kMaxCount)) {
      m.context_limit = *n;
    }
  }
  return m;
}

// Field names as written in the JSON schema.
std::string json_field(const std::string& field) {
  return field == "frame_timestamps_ms" ? "frame_timestamps" : field;
}

void check_manifest_values(const MediaManifest& m, const std::string& prefix) {
  const auto violations = manifest_validate(m);
  if (violations.empty()) return;
  std::vector<FieldIssue> issues;
  for (const auto& v : violations) {
    std::string path = v.segment ? indexed(join(prefix, "segments"), *v.segment) + "." + json_field(v.field)
                                 : join(prefix, json_field(v.field));
    issues.push_back({std::move(path), v.message});
  }
  throw InputError(ErrorCode::kValidationError, std::move(issues));
}

codec::CodecLayout read_layout(Reader& r, const json& v, const std::string& path) {
  codec::CodecLayout l;
  if (!r.expect_object(v, path)) return l;
  r.reject_unknown(v, path, {"num_codebooks", "codebook_size", "frame_rate_hz", "chunk_frames"});
  constexpr std::int64_t kMax32 = std::numeric_limits<std::int32_t>::max();
  if (v.contains("num_codebooks")) {
    if (auto n = r.integer(v["num_codebooks"], join(path, "num_codebooks"), 1, 4096)) l.num_codebooks = static_cast<std::int32_t>(*n);
  }
  if (v.contains("codebook_size")) {
    if (auto n = r.integer(v["codebook_size"], join(path, "codebook_size"), 2, kMax32)) l.codebook_size = static_cast<std::int32_t>(*n);
  }
  if (v.contains("frame_rate_hz")) {
    if (auto x = r.number(v["frame_rate_hz"], join(path, "frame_rate_hz"), 1e6)) l.frame_rate_hz = *x;
  }
  if (v.contains("chunk_frames")) {
    if (auto n = r.integer(v["chunk_frames"], join(path, "chunk_frames"), 1, 1'000'000)) l.chunk_frames = static_cast<std::int32_t>(*n);
  }
  return l;
}

sim::Scenario read_scenario(Reader& r, const json& v, const std::string& path) {
  sim::Scenario s;
  if (!r.expect_object(v, path)) return s;
  r.reject_unknown(v, path,
                   {"name", "manifest", "input_mode", "aria_ratio", "text_len", "concurrency", "layout"});
  if (v.contains("name")) {
    if (auto n = r.string(v["name"], join(path, "name"))) s.name = *n;
  }
  if (v.contains("manifest")) s.manifest = read_manifest(r, v["manifest"], join(path, "manifest"));
  if (v.contains("input_mode")) {
    if (auto m = r.string(v["input_mode"], join(path, "input_mode"))) {
      try {
        s.input_mode = sim::parse_input_mode(*m);
      } catch (const Error&) {
        r.issue(join(path, "input_mode"), "expected PRELOADED or REAL_TIME_STREAM");
      }
    }
  }
  if (v.contains("aria_ratio")) {
    if (auto text = r.string(v["aria_ratio"], join(path, "aria_ratio"))) {
      try {
        s.aria_ratio = Rational::parse(*text);
      } catch (const Error& e) {
        r.issue(join(path, "aria_ratio"), e.what());
      }
    }
  }
  if (v.contains("text_len")) {
    if (auto n = r.integer(v["text_len"], join(path, "text_len"), 0, kMaxTextLen)) s.text_len = *n;
  }
  if (v.contains("concurrency")) {
    if (auto n = r.integer(v["concurrency"], join(path, "concurrency"), 0, 1'000'000)) {
      s.concurrency = static_cast<int>(*n);
    }
  }
  if (v.contains("layout")) s.layout = read_layout(r, v["layout"], join(path, "layout"));
  return s;
}

void finish(Reader& r) {
  if (!r.ok()) throw InputError(ErrorCode::kSchemaError, r.take());
}

}  // namespace

InputError::InputError(ErrorCode code, std::vector<FieldIssue> issues)
    : Error(code, describe_issues(issues)), issues_(std::move(issues)) {}

std::string describe_issues(const std::vector<FieldIssue>& issues) {
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "; ";
    out += i.path + ": " + i.message;
  }
  return out;
}

MediaManifest parse_manifest(std::string_view bytes) {
  const json doc = parse_json(bytes);
  Reader r;
  MediaManifest m = read_manifest(r, doc, "");
  finish(r);
  check_manifest_values(m, "");
  return m;
}

sim::Scenario parse_scenario(std::string_view bytes) {
  const json doc = parse_json(bytes);
  Reader r;
  sim::Scenario s = read_scenario(r, doc, "");
  finish(r);
  check_manifest_values(s.manifest, "manifest");
  return s;
}

std::vector<sim::Scenario> parse_scenario_list(std::string_view bytes) {
  const json doc = parse_json(bytes);
  Reader r;
  std::vector<sim::Scenario> out;
  if (r.expect_object(doc, "")) {
    r.reject_unknown(doc, "", {"scenarios"});
    if (!doc.contains("scenarios")) {
      r.issue("scenarios", "required field is missing");
    } else if (!doc["scenarios"].is_array()) {
      r.issue("scenarios", "expected an array");
    } else {
      for (std::size_t i = 0; i < doc["scenarios"].size(); ++i) {
        out.push_back(read_scenario(r, doc["scenarios"][i], indexed("scenarios", i)));
      }
    }
  }
  finish(r);
  for (std::size_t i = 0; i < out.size(); ++i) {
    check_manifest_values(out[i].manifest, indexed("scenarios", i) + ".manifest");
  }
  return out;
}

sim::StageModel parse_stages(std::string_view bytes) {
  const json doc = parse_json(bytes);
  Reader r;
  sim::StageModel m;
  if (r.expect_object(doc, "")) {
    r.reject_unknown(doc, "", {"name", "levels", "codec_decode_ms", "codec_jitter", "encoder_chunk_ms",
                               "prefill_chunk_seconds"});
    if (doc.contains("name")) {
      if (auto n = r.string(doc["name"], "name")) m.name = *n;
    }
    if (!doc.contains("levels")) {
      r.issue("levels", "required field is missing");
    } else if (!doc["levels"].is_array()) {
      r.issue("levels", "expected an array");
    } else {
      const json& levels = doc["levels"];
      for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string lp = indexed("levels", i);
        if (!r.expect_object(levels[i], lp)) continue;
        r.reject_unknown(levels[i], lp, {"concurrency", "thinker_ttft_ms", "thinker_tpop_ms", "talker_tpop_ms"});
        std::optional<std::int64_t> conc;
        sim::LevelLatency lat;
        bool complete = true;
        auto field = [&](const char* key, double& dst) {
          if (!levels[i].contains(key)) {
            r.issue(join(lp, key), "required field is missing");
            complete = false;
          } else if (auto x = r.number(levels[i][key], join(lp, key), 1e9)) {
            dst = *x;
          } else {
            complete = false;
          }
        };
        if (!levels[i].contains("concurrency")) {
          r.issue(join(lp, "concurrency"), "required field is missing");
        } else {
          conc = r.integer(levels[i]["concurrency"], join(lp, "concurrency"), 1, 1'000'000);
        }
        field("thinker_ttft_ms", lat.thinker_ttft_ms);
        field("thinker_tpop_ms", lat.thinker_tpop_ms);
        field("talker_tpop_ms", lat.talker_tpop_ms);
        if (conc && complete && !m.levels.emplace(static_cast<int>(*conc), lat).second) {
          r.issue(join(lp, "concurrency"), "duplicate concurrency level");
        }
      }
    }
    if (doc.contains("codec_decode_ms")) {
      const json& c = doc["codec_decode_ms"];
      if (!c.is_array() || c.size() != 2) {
        r.issue("codec_decode_ms", "expected [lo, hi]");
      } else {
        const auto lo = r.number(c[0], "codec_decode_ms[0]", 1e9);
        const auto hi = r.number(c[1], "codec_decode_ms[1]", 1e9);
        if (lo && hi) {
          m.codec_decode_lo_ms = *lo;
          m.codec_decode_hi_ms = *hi;
        }
      }
    }
    if (doc.contains("codec_jitter")) {
      if (auto b = r.boolean(doc["codec_jitter"], "codec_jitter")) m.codec_jitter = *b;
    }
    if (doc.contains("encoder_chunk_ms")) {
      if (auto x = r.number(doc["encoder_chunk_ms"], "encoder_chunk_ms", 1e9)) m.encoder_chunk_ms = *x;
    }
    if (doc.contains("prefill_chunk_seconds")) {
      if (auto x = r.number(doc["prefill_chunk_seconds"], "prefill_chunk_seconds", kMaxSeconds)) {
        m.prefill_chunk_seconds = *x;
      }
    }
  }
  finish(r);
  try {
    m.validate();
  } catch (const Error& e) {
    throw InputError(ErrorCode::kValidationError, {{"$", e.what()}});
  }
  return m;
}

std::string stages_to_json(const sim::StageModel& stages) {
  nlohmann::ordered_json doc;
  doc["name"] = stages.name;
  auto levels = nlohmann::ordered_json::array();
  for (const auto& [conc, lat] : stages.levels) {
    nlohmann::ordered_json l;
    l["concurrency"] = conc;
    l["thinker_ttft_ms"] = lat.thinker_ttft_ms;
    l["thinker_tpop_ms"] = lat.thinker_tpop_ms;
    l["talker_tpop_ms"] = lat.talker_tpop_ms;
    levels.push_back(std::move(l));
  }
  doc["levels"] = std::move(levels);
  doc["codec_decode_ms"] = {stages.codec_decode_lo_ms, stages.codec_decode_hi_ms};
  doc["codec_jitter"] = stages.codec_jitter;
  doc["encoder_chunk_ms"] = stages.encoder_chunk_ms;
  doc["prefill_chunk_seconds"] = stages.prefill_chunk_seconds;
  return doc.dump(2) + "\n";
}

}  // namespace omnistream::cli
