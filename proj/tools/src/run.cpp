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
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_internal.hpp"
#include "omnistream/aria.hpp"
#include "omnistream/mrope.hpp"
#include "omnistream/sim/sweep.hpp"

namespace omnistream::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Bad command line: exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure outside the library's error model, e.g. unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string output;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
};

// ---------------------------------------------------------------------------
// value parsing for --set / --vary

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::int64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) throw UsageError(key + ": expected an integer, got '" + v + "'");
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x)) {
    throw UsageError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw UsageError(key + ": expected true or false, got '" + v + "'");
}

std::int32_t to_int32(const std::string& key, const std::string& v) {
  const auto x = to_int(key, v);
  if (x < std::numeric_limits<std::int32_t>::min() || x > std::numeric_limits<std::int32_t>::max()) {
    throw UsageError(key + ": value out of range");
  }
  return static_cast<std::int32_t>(x);
}

template <typename Fn>
auto parse_or_usage(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw UsageError(key + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// override registry

struct MediaSettings {
  mrope::TimestampConfig ts;
  mrope::PositionOptions pos;
  std::int64_t tokens_per_video_frame = mrope::kDefaultTokensPerVideoFrame;
  std::optional<std::int64_t> audio_frame_ms;
  std::optional<std::int64_t> context_limit;
};

using MediaSetter = std::function<void(MediaSettings&, const std::string&, const std::string&)>;
using ScenarioSetter = std::function<void(sim::Scenario&, const std::string&, const std::string&)>;
using StageSetter = std::function<void(sim::StageModel&, const std::string&, const std::string&)>;

const std::map<std::string, MediaSetter>& media_keys() {
  static const std::map<std::string, MediaSetter> keys{
      {"timestamps.enabled", [](auto& s, auto& k, auto& v) { s.ts.enabled = to_bool(k, v); }},
      {"timestamps.format", [](auto& s, auto&, auto& v) { s.ts.format = v; }},
      {"timestamps.tokens_per_stamp", [](auto& s, auto& k, auto& v) { s.ts.tokens_per_stamp = to_int(k, v); }},
      {"timestamps.interval_min_seconds",
       [](auto& s, auto& k, auto& v) { s.ts.audio_interval_min_ms = seconds_to_ms(to_double(k, v)); }},
      {"timestamps.interval_max_seconds",
       [](auto& s, auto& k, auto& v) { s.ts.audio_interval_max_ms = seconds_to_ms(to_double(k, v)); }},
      {"positions.audio_rounding",
       [](auto& s, auto& k, auto& v) { s.pos.audio_rounding = parse_or_usage(k, [&] { return mrope::parse_rounding(v); }); }},
      {"positions.av_chunk_seconds",
       [](auto& s, auto& k, auto& v) { s.pos.av_chunk_ms = seconds_to_ms(to_double(k, v)); }},
      {"manifest.audio_frame_seconds",
       [](auto& s, auto& k, auto& v) { s.audio_frame_ms = seconds_to_ms(to_double(k, v)); }},
      {"manifest.context_limit", [](auto& s, auto& k, auto& v) { s.context_limit = to_int(k, v); }},
  };
  return keys;
}

const std::map<std::string, ScenarioSetter>& scenario_keys() {
  static const std::map<std::string, ScenarioSetter> keys{
      {"scenario.name", [](auto& s, auto&, auto& v) { s.name = v; }},
      {"scenario.input_mode",
       [](auto& s, auto& k, auto& v) { s.input_mode = parse_or_usage(k, [&] { return sim::parse_input_mode(v); }); }},
      {"scenario.aria_ratio",
       [](auto& s, auto& k, auto& v) { s.aria_ratio = parse_or_usage(k, [&] { return Rational::parse(v); }); }},
      {"scenario.text_len",
       [](auto& s, auto& k, auto& v) {
         s.text_len = to_int(k, v);
         if (s.text_len > kMaxTextLen) throw UsageError(k + ": at most " + std::to_string(kMaxTextLen));
       }},
      {"scenario.concurrency", [](auto& s, auto& k, auto& v) { s.concurrency = to_int32(k, v); }},
      {"codec.num_codebooks", [](auto& s, auto& k, auto& v) { s.layout.num_codebooks = to_int32(k, v); }},
      {"codec.codebook_size", [](auto& s, auto& k, auto& v) { s.layout.codebook_size = to_int32(k, v); }},
      {"codec.frame_rate_hz", [](auto& s, auto& k, auto& v) { s.layout.frame_rate_hz = to_double(k, v); }},
      {"codec.chunk_frames", [](auto& s, auto& k, auto& v) { s.layout.chunk_frames = to_int32(k, v); }},
  };
  return keys;
}

// Per-level latencies apply to every configured concurrency level.
const std::map<std::string, StageSetter>& stage_keys() {
  static const std::map<std::string, StageSetter> keys{
      {"stages.preset", [](auto&, auto&, auto&) {}},  // resolved before the others
      {"stages.thinker_ttft_ms",
       [](auto& m, auto& k, auto& v) { for (auto& [_, l] : m.levels) l.thinker_ttft_ms = to_double(k, v); }},
      {"stages.thinker_tpop_ms",
       [](auto& m, auto& k, auto& v) { for (auto& [_, l] : m.levels) l.thinker_tpop_ms = to_double(k, v); }},
      {"stages.talker_tpop_ms",
       [](auto& m, auto& k, auto& v) { for (auto& [_, l] : m.levels) l.talker_tpop_ms = to_double(k, v); }},
      {"stages.codec_decode_lo_ms", [](auto& m, auto& k, auto& v) { m.codec_decode_lo_ms = to_double(k, v); }},
      {"stages.codec_decode_hi_ms", [](auto& m, auto& k, auto& v) { m.codec_decode_hi_ms = to_double(k, v); }},
      {"stages.codec_jitter", [](auto& m, auto& k, auto& v) { m.codec_jitter = to_bool(k, v); }},
      {"stages.encoder_chunk_ms", [](auto& m, auto& k, auto& v) { m.encoder_chunk_ms = to_double(k, v); }},
      {"stages.prefill_chunk_seconds",
       [](auto& m, auto& k, auto& v) { m.prefill_chunk_seconds = to_double(k, v); }},
  };
  return keys;
}

using Override = std::pair<std::string, std::string>;

std::vector<Override> split_sets(const std::vector<std::string>& sets, const std::string& flag) {
  std::vector<Override> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError(flag + " expects key=value, got '" + s + "'");
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

template <typename... Maps>
void require_known(const std::vector<Override>& overrides, const std::string& command, const Maps&... maps) {
  for (const auto& [key, _] : overrides) {
    if (!(maps.count(key) || ...)) throw UsageError("unknown key '" + key + "' for " + command);
  }
}

// ---------------------------------------------------------------------------
// I/O

std::string read_input(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw UsageError("input file not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(bytes.data(), static_cast<std::streamsize>(bytes.size())) || !f.flush()) {
    throw IoError("cannot write " + path);
  }
}

void emit(const Common& c, std::ostream& out, const std::string& bytes) {
  if (c.output.empty()) {
    out << bytes;
  } else {
    write_file(c.output, bytes);
  }
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// schedule

struct ScheduleArgs {
  std::int64_t text = 0;
  std::optional<std::int64_t> speech;
  std::optional<std::string> ratio;
  std::int64_t prefix_text = 0;
  std::int64_t prefix_speech = 0;
};

std::string run_schedule(const Common& c, const ScheduleArgs& a) {
  if (!c.sets.empty()) throw UsageError("schedule takes no --set keys");
  if (!a.speech && !a.ratio) throw UsageError("schedule needs --speech, --ratio or both");
  std::optional<Rational> ratio;
  if (a.ratio) ratio = parse_or_usage("--ratio", [&] { return Rational::parse(*a.ratio); });

  aria::AriaBudget budget;
  if (a.speech && ratio) {
    budget = aria::AriaBudget::with_ratio(a.text, *a.speech, *ratio);
  } else if (a.speech) {
    budget = aria::AriaBudget::from_totals(a.text, *a.speech);
  } else {
    if (a.text < 0 || a.text > kMaxTextLen) throw Error(ErrorCode::kInvalidArgument, "text count out of range");
    budget = aria::AriaBudget::with_ratio(a.text, a.text * ratio->num() / ratio->den(), *ratio);
  }
  const PrefixCount prefix{a.prefix_text, a.prefix_speech};
  const auto plan = aria::resume(budget, prefix);
  const std::string line = plan.str();

  if (c.format == "text") return line + "\n";
  if (c.format == "csv") return to_csv({{"plan"}, {{line}}});
  ojson j;
  ojson echo;
  echo["text"] = budget.text_total;
  echo["speech"] = budget.speech_total;
  echo["ratio"] = budget.ratio.str();
  echo["prefix_text"] = prefix.text_emitted;
  echo["prefix_speech"] = prefix.speech_emitted;
  j["config_echo"] = std::move(echo);
  j["plan"] = line;
  j["first_speech_text_need"] =
      budget.ratio.num() == 0 ? ojson(nullptr) : ojson(aria::first_speech_text_need(budget.ratio));
  return dump(j);
}

// ---------------------------------------------------------------------------
// positions / budget

MediaSettings media_settings(const Common& c, const std::vector<Override>& overrides) {
  MediaSettings s;
  s.ts.seed = c.seed;
  for (const auto& [k, v] : overrides) {
    if (auto it = media_keys().find(k); it != media_keys().end()) it->second(s, k, v);
  }
  return s;
}

MediaManifest load_manifest(const Common& c, const MediaSettings& s) {
  if (c.input.empty()) throw UsageError("--input is required");
  MediaManifest m = parse_manifest(read_input(c.input));
  if (s.audio_frame_ms) m.audio_frame_ms = *s.audio_frame_ms;
  if (s.context_limit) m.context_limit = *s.context_limit;
  return m;
}

ojson media_echo(const Common& c, const MediaSettings& s, const MediaManifest& m) {
  ojson e;
  e["seed"] = c.seed;
  ojson ts;
  ts["enabled"] = s.ts.enabled;
  ts["format"] = s.ts.format;
  ts["tokens_per_stamp"] = s.ts.tokens_per_stamp;
  ts["interval_seconds"] = {ms_to_seconds(s.ts.audio_interval_min_ms), ms_to_seconds(s.ts.audio_interval_max_ms)};
  e["timestamps"] = std::move(ts);
  ojson pos;
  pos["audio_frame_seconds"] = ms_to_seconds(m.audio_frame_ms);
  pos["audio_rounding"] = std::string(mrope::to_string(s.pos.audio_rounding));
  pos["av_chunk_seconds"] = ms_to_seconds(s.pos.av_chunk_ms);
  e["positions"] = std::move(pos);
  e["segments"] = m.segments.size();
  return e;
}

// Positions are materialised one entry per token; refuse absurd tables.
constexpr std::int64_t kMaxPositionEntries = 50'000'000;

std::string run_positions(const Common& c, const std::vector<Override>& overrides) {
  require_known(overrides, "positions", media_keys());
  const MediaSettings s = media_settings(c, overrides);
  const MediaManifest m = load_manifest(c, s);

  std::int64_t widest_frame = 0;
  for (const auto& seg : m.segments) {
    if (seg.kind == MediaKind::kVideo && seg.grid) widest_frame = std::max(widest_frame, seg.grid->rows * seg.grid->cols);
  }
  const auto bound = mrope::context_budget(m, s.ts, widest_frame, s.pos);
  if (bound.total > kMaxPositionEntries) {
    throw Error(ErrorCode::kInvalidArgument, "position table would have " + std::to_string(bound.total) +
                                                 " entries (limit " + std::to_string(kMaxPositionEntries) + ")");
  }
  const auto table = mrope::assign_positions(m, s.ts, s.pos);

  if (c.format == "text") return table.to_text(s.ts);
  if (c.format == "csv") {
    Table t{{"kind", "segment", "tid", "hid", "wid", "stamp"}, {}};
    for (const auto& e : table.entries) {
      t.rows.push_back({std::string(mrope::to_string(e.kind)), std::to_string(e.segment), std::to_string(e.pos.tid),
                        std::to_string(e.pos.hid), std::to_string(e.pos.wid),
                        e.kind == mrope::TokenKind::kTimestamp ? s.ts.render(e.stamp_ms) : ""});
    }
    return to_csv(t);
  }
  ojson j;
  j["config_echo"] = media_echo(c, s, m);
  auto entries = ojson::array();
  for (const auto& e : table.entries) {
    ojson x;
    x["kind"] = std::string(mrope::to_string(e.kind));
    x["segment"] = e.segment;
    x["tid"] = e.pos.tid;
    x["hid"] = e.pos.hid;
    x["wid"] = e.pos.wid;
    if (e.kind == mrope::TokenKind::kTimestamp) x["stamp"] = s.ts.render(e.stamp_ms);
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  return dump(j);
}

std::string run_budget(const Common& c, const std::vector<Override>& overrides) {
  static const std::map<std::string, int> budget_only{{"budget.tokens_per_video_frame", 0}};
  require_known(overrides, "budget", media_keys(), budget_only);
  MediaSettings s = media_settings(c, overrides);
  for (const auto& [k, v] : overrides) {
    if (k == "budget.tokens_per_video_frame") s.tokens_per_video_frame = to_int(k, v);
  }
  const MediaManifest m = load_manifest(c, s);
  const auto b = mrope::context_budget(m, s.ts, s.tokens_per_video_frame, s.pos);

  Table t{{"segment", "kind", "tokens", "timestamp_tokens"}, {}};
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    t.rows.push_back({std::to_string(i), std::string(to_string(m.segments[i].kind)),
                      std::to_string(b.per_segment_tokens[i]), std::to_string(b.per_segment_timestamp_tokens[i])});
  }
  if (c.format == "csv") {
    t.rows.push_back({"total", "", std::to_string(b.total), std::to_string(b.timestamp_tokens)});
    return to_csv(t);
  }
  if (c.format == "text") {
    std::string out = m.segments.empty() ? "" : to_text(t);
    out += "total " + std::to_string(b.total) + "\n";
    out += "timestamp_tokens " + std::to_string(b.timestamp_tokens) + "\n";
    out += "limit " + std::to_string(b.limit) + "\n";
    out += std::string("fits ") + (b.fits ? "true" : "false") + "\n";
    return out;
  }
  ojson j;
  ojson echo = media_echo(c, s, m);
  echo["tokens_per_video_frame"] = s.tokens_per_video_frame;
  echo["context_limit"] = m.context_limit;
  j["config_echo"] = std::move(echo);
  auto segs = ojson::array();
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    ojson x;
    x["index"] = i;
    x["kind"] = std::string(to_string(m.segments[i].kind));
    x["tokens"] = b.per_segment_tokens[i];
    x["timestamp_tokens"] = b.per_segment_timestamp_tokens[i];
    segs.push_back(std::move(x));
  }
  j["segments"] = std::move(segs);
  j["timestamp_tokens"] = b.timestamp_tokens;
  j["total"] = b.total;
  j["limit"] = b.limit;
  j["fits"] = b.fits;
  return dump(j);
}

// ---------------------------------------------------------------------------
// simulate / sweep

struct SimArgs {
  std::string stages_path;
  std::string trace_path;
  unsigned workers = 1;
  std::vector<std::string> vary;
};

sim::StageModel load_stages(const SimArgs& a, const std::vector<Override>& overrides) {
  std::optional<std::string> preset;
  for (const auto& [k, v] : overrides) {
    if (k == "stages.preset") preset = v;
  }
  if (preset && !a.stages_path.empty()) throw UsageError("use either --stages or stages.preset, not both");
  sim::StageModel m = a.stages_path.empty()
                          ? parse_or_usage("stages.preset", [&] { return sim::stage_preset(preset.value_or("flash_audio")); })
                          : parse_stages(read_input(a.stages_path));
  for (const auto& [k, v] : overrides) {
    if (auto it = stage_keys().find(k); it != stage_keys().end()) it->second(m, k, v);
  }
  return m;
}

void apply_scenario(sim::Scenario& s, const std::vector<Override>& overrides) {
  for (const auto& [k, v] : overrides) {
    if (auto it = scenario_keys().find(k); it != scenario_keys().end()) it->second(s, k, v);
  }
}

ojson layout_json(const codec::CodecLayout& l) {
  ojson j;
  j["num_codebooks"] = l.num_codebooks;
  j["codebook_size"] = l.codebook_size;
  j["frame_rate_hz"] = l.frame_rate_hz;
  j["chunk_frames"] = l.chunk_frames;
  return j;
}

ojson scenario_json(const sim::Scenario& s) {
  ojson j;
  j["name"] = s.name;
  j["input_mode"] = std::string(sim::to_string(s.input_mode));
  j["aria_ratio"] = s.aria_ratio.str();
  j["text_len"] = s.text_len;
  j["speech_len"] = s.speech_len();
  j["concurrency"] = s.concurrency;
  j["segments"] = s.manifest.segments.size();
  j["media_seconds"] = ms_to_seconds(s.manifest.media_duration_ms());
  j["layout"] = layout_json(s.layout);
  return j;
}

ojson stages_echo(const sim::StageModel& m) {
  ojson j;
  j["name"] = m.name;
  auto levels = ojson::array();
  for (const auto& [conc, l] : m.levels) {
    ojson x;
    x["concurrency"] = conc;
    x["thinker_ttft_ms"] = l.thinker_ttft_ms;
    x["thinker_tpop_ms"] = l.thinker_tpop_ms;
    x["talker_tpop_ms"] = l.talker_tpop_ms;
    levels.push_back(std::move(x));
  }
  j["levels"] = std::move(levels);
  j["codec_decode_ms"] = {m.codec_decode_lo_ms, m.codec_decode_hi_ms};
  j["codec_jitter"] = m.codec_jitter;
  j["encoder_chunk_ms"] = m.encoder_chunk_ms;
  j["prefill_chunk_seconds"] = m.prefill_chunk_seconds;
  return j;
}

// Times are measured from stream start. TTFC counted from the first text
// token instead is reported alongside.
ojson metric_notes(const sim::ScenarioReport& r) {
  ojson j;
  j["time_origin"] = "stream_start";
  j["ttfc_from_first_token_ms"] = round6(r.ttfc_ms - r.ttft_ms);
  j["tps"] = "aggregate over concurrent streams";
  return j;
}

const std::vector<std::string> kRowHeader{
    "name",          "input_mode",      "aria_ratio",      "text_len",    "concurrency", "chunk_frames",
    "status",        "ttft_ms",         "ttfc_ms",         "first_packet_ms", "thinker_tpop_ms",
    "talker_tpop_ms", "thinker_tps",    "talker_tps",      "generation_rtf",  "error"};

std::vector<std::string> report_row(const sim::Scenario& s, const sim::ScenarioReport* r, const std::string& error) {
  std::vector<std::string> row{s.name,
                               std::string(sim::to_string(s.input_mode)),
                               s.aria_ratio.str(),
                               std::to_string(s.text_len),
                               std::to_string(s.concurrency),
                               std::to_string(s.layout.chunk_frames),
                               r ? "ok" : "failed"};
  for (double v : {r ? r->ttft_ms : 0.0, r ? r->ttfc_ms : 0.0, r ? r->first_packet_ms : 0.0,
                   r ? r->thinker_tpop_ms : 0.0, r ? r->talker_tpop_ms : 0.0, r ? r->thinker_tps : 0.0,
                   r ? r->talker_tps : 0.0, r ? r->generation_rtf : 0.0}) {
    row.push_back(r ? fmt(v) : "");
  }
  row.push_back(error);
  return row;
}

std::vector<sim::Scenario> base_scenarios(const Common& c, bool list) {
  if (c.input.empty()) return {sim::Scenario{}};
  const std::string bytes = read_input(c.input);
  if (list) return parse_scenario_list(bytes);
  return {parse_scenario(bytes)};
}

std::string run_simulate(const Common& c, const SimArgs& a, const std::vector<Override>& overrides) {
  require_known(overrides, "simulate", scenario_keys(), stage_keys());
  const sim::StageModel stages = load_stages(a, overrides);
  sim::Scenario s = base_scenarios(c, false).front();
  apply_scenario(s, overrides);
  s.seed = c.seed;
  if (s.name.empty()) s.name = "scenario";
  const auto result = sim::simulate(s, stages);
  if (!a.trace_path.empty()) write_file(a.trace_path, result.trace.to_text());

  const auto& r = result.report;
  if (c.format == "csv") return to_csv({kRowHeader, {report_row(s, &r, "")}});
  if (c.format == "text") {
    std::string out;
    const ojson fields = report_json(r);
    for (const auto& [k, v] : fields.items()) out += k + " " + (v.is_number_float() ? fmt(v.get<double>()) : v.dump()) + "\n";
    return out;
  }
  ojson j;
  ojson echo;
  echo["seed"] = c.seed;
  echo["scenario"] = scenario_json(s);
  echo["stages"] = stages_echo(stages);
  j["config_echo"] = std::move(echo);
  j["report"] = report_json(r);
  j["notes"] = metric_notes(r);
  return dump(j);
}

std::string run_sweep(const Common& c, const SimArgs& a, const std::vector<Override>& overrides) {
  require_known(overrides, "sweep", scenario_keys(), stage_keys());
  if (a.workers < 1) throw UsageError("--workers must be at least 1");
  const sim::StageModel stages = load_stages(a, overrides);

  // --vary key=v1,v2,... ; the cartesian product in flag order.
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [k, list] : split_sets(a.vary, "--vary")) {
    if (!scenario_keys().count(k)) throw UsageError("--vary supports scenario.* and codec.* keys, got '" + k + "'");
    std::vector<std::string> values;
    std::stringstream ss(list);
    for (std::string v; std::getline(ss, v, ',');) values.push_back(v);
    if (values.empty()) throw UsageError("--vary " + k + " has no values");
    sim::Scenario probe;
    for (const auto& v : values) scenario_keys().at(k)(probe, k, v);
    axes.emplace_back(k, std::move(values));
  }

  std::vector<sim::Scenario> scenarios;
  std::size_t index = 0;
  for (sim::Scenario base : base_scenarios(c, true)) {
    apply_scenario(base, overrides);
    base.seed = c.seed;
    if (base.name.empty()) base.name = "s" + std::to_string(index);
    ++index;
    std::vector<sim::Scenario> rows{base};
    for (const auto& [k, values] : axes) {
      std::vector<sim::Scenario> next;
      for (const auto& row : rows) {
        for (const auto& v : values) {
          sim::Scenario x = row;
          scenario_keys().at(k)(x, k, v);
          x.name += " " + k.substr(k.find('.') + 1) + "=" + v;
          next.push_back(std::move(x));
        }
      }
      rows = std::move(next);
    }
    scenarios.insert(scenarios.end(), rows.begin(), rows.end());
  }

  const auto results = sim::sweep(scenarios, stages, a.workers);
  Table t{kRowHeader, {}};
  for (const auto& row : results) t.rows.push_back(report_row(row.scenario, row.report ? &*row.report : nullptr, row.error));
  if (c.format == "csv") return to_csv(t);
  if (c.format == "text") return to_text(t);

  ojson j;
  ojson echo;
  echo["seed"] = c.seed;
  echo["workers"] = a.workers;
  echo["stages"] = stages_echo(stages);
  j["config_echo"] = std::move(echo);
  auto rows = ojson::array();
  for (const auto& row : results) {
    ojson x;
    x["scenario"] = scenario_json(row.scenario);
    x["status"] = row.report ? "ok" : "failed";
    x["report"] = row.report ? report_json(*row.report) : ojson(nullptr);
    x["error"] = row.error;
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return dump(j);
}

// ---------------------------------------------------------------------------

ojson error_report(std::string_view code, const std::string& message, const std::vector<FieldIssue>& issues = {}) {
  ojson e;
  e["code"] = std::string(code);
  e["message"] = message;
  if (!issues.empty()) {
    auto list = ojson::array();
    for (const auto& i : issues) {
      ojson x;
      x["path"] = i.path;
      x["message"] = i.message;
      list.push_back(std::move(x));
    }
    e["issues"] = std::move(list);
  }
  ojson j;
  j["error"] = std::move(e);
  return j;
}

void add_common(CLI::App* sub, Common& c, bool with_input) {
  if (with_input) sub->add_option("--input,-i", c.input, "Input JSON file");
  sub->add_option("--output,-o", c.output, "Write the report here instead of stdout");
  sub->add_option("--format,-f", c.format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--seed", c.seed, "Seed for every random choice (default 0)");
  sub->add_option("--set", c.sets, "Override a configuration key (key=value, repeatable)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming text/speech interleaving, position IDs and latency simulation.", "omnistream"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common common;
  ScheduleArgs sched;
  SimArgs sim_args;

  auto* schedule = app.add_subcommand("schedule", "Interleave text and speech under the ratio bound");
  add_common(schedule, common, false);
  schedule->add_option("--text", sched.text, "Text token count")->required();
  schedule->add_option("--speech", sched.speech, "Speech frame count");
  schedule->add_option("--ratio", sched.ratio, "Speech/text ratio a/b (default: speech/text)");
  schedule->add_option("--prefix-text", sched.prefix_text, "Text tokens already emitted");
  schedule->add_option("--prefix-speech", sched.prefix_speech, "Speech frames already emitted");

  auto* positions = app.add_subcommand("positions", "Assign (t, h, w) position IDs to a manifest");
  add_common(positions, common, true);

  auto* budget = app.add_subcommand("budget", "Count context tokens for a manifest");
  add_common(budget, common, true);

  auto* simulate = app.add_subcommand("simulate", "Simulate one streaming request");
  add_common(simulate, common, true);
  simulate->add_option("--stages", sim_args.stages_path, "Stage latency JSON file");
  simulate->add_option("--trace", sim_args.trace_path, "Write the event trace here");

  auto* sweep = app.add_subcommand("sweep", "Simulate many scenarios");
  add_common(sweep, common, true);
  sweep->add_option("--stages", sim_args.stages_path, "Stage latency JSON file");
  sweep->add_option("--workers", sim_args.workers, "Worker threads");
  sweep->add_option("--vary", sim_args.vary, "Sweep a scenario key over a list (key=v1,v2,...)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::string report;
    if (schedule->parsed()) {
      report = run_schedule(common, sched);
    } else if (positions->parsed()) {
      report = run_positions(common, split_sets(common.sets, "--set"));
    } else if (budget->parsed()) {
      report = run_budget(common, split_sets(common.sets, "--set"));
    } else if (simulate->parsed()) {
      report = run_simulate(common, sim_args, split_sets(common.sets, "--set"));
    } else {
      report = run_sweep(common, sim_args, split_sets(common.sets, "--set"));
    }
    emit(common, out, report);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "omnistream: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << dump(error_report(to_string(e.code()), e.what(), e.issues()));
  } catch (const Error& e) {
    err << dump(error_report(to_string(e.code()), e.what()));
  } catch (const IoError& e) {
    err << dump(error_report("IoError", e.what()));
  } catch (const std::bad_alloc&) {
    err << dump(error_report("Internal", "out of memory"));
  } catch (const std::exception& e) {
    err << dump(error_report("Internal", e.what()));
  }
  return kExitDomainError;
}

}  // namespace omnistream::cli
