// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "golden/cases.hpp"
#include "omnistream/aria.hpp"
#include "omnistream/codec.hpp"
#include "omnistream/error.hpp"
#include "omnistream/mrope.hpp"
#include "omnistream/rng.hpp"
#include "omnistream/sim/latency_dag.hpp"
#include "omnistream/sim/simulator.hpp"
#include "omnistream/sim/stage_model.hpp"
#include "oracles/aria_oracle.hpp"
#include "oracles/manifest_gen.hpp"

using namespace omnistream;

namespace {

// Pinned tolerances and sizes.
constexpr int kAriaExhaustiveMaxTokens = 12;
constexpr int kAriaRandomBudgets = 10'000;
constexpr std::int64_t kAriaRandomMaxTokens = 10'000;
constexpr double kAriaTimeLimitSeconds = 60.0;
constexpr double kRtfToleranceFlash = 0.002;
constexpr double kRtfTolerancePlus = 0.03;
constexpr double kFirstPacketCeilingMs = 235.0;
constexpr int kCriticalPathScenarios = 50;
constexpr std::int64_t kContextLimit = 262'144;
constexpr std::int64_t kTenHoursBaseTokens = 225'000;
constexpr int kFuzzedManifests = 1'000;
constexpr int kFuzzedFrameSequences = 1'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

// std::int64_t is printed with %lld.
template <class T>
auto promote(T v) {
  if constexpr (std::is_same_v<T, long>) {
    return static_cast<long long>(v);
  } else {
    return v;
  }
}

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, promote(args)...);
  return buf;
}

// ---------------------------------------------------------------------------

std::string aria_case(std::int64_t t, std::int64_t s) {
  const auto budget = aria::AriaBudget::from_totals(t, s);
  const auto plan = aria::plan_eager(budget);
  if (aria::check_plan(plan.slots, budget)) return format("check_plan rejects T=%lld S=%lld", t, s);
  return plan.str();
}

Outcome aria_safety_optimality() {
  const auto start = std::chrono::steady_clock::now();
  int exhaustive = 0;
  for (int n = 0; n <= kAriaExhaustiveMaxTokens; ++n) {
    for (int s = 0; s <= n; ++s) {
      const int t = n - s;
      if (t == 0 && s > 0) continue;  // speech without text has no plan
      const auto budget = aria::AriaBudget::from_totals(t, s);
      const std::string got = aria_case(t, s);
      if (got.size() != static_cast<std::size_t>(n)) return fail(got);
      const auto valid = oracle::all_valid_plans(t, s, budget.ratio.num(), budget.ratio.den());
      const auto earliest = oracle::earliest_positions_bruteforce(valid, s);
      std::size_t k = 0;
      for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i] != 'S') continue;
        if (earliest[k] != i) return fail(format("T=%d S=%d: speech %zu at %zu, earliest %zu", t, s, k, i, earliest[k]));
        ++k;
      }
      ++exhaustive;
    }
  }

  SplitMix64 rng(20260101);
  for (int i = 0; i < kAriaRandomBudgets; ++i) {
    const std::int64_t n = rng.uniform(1, kAriaRandomMaxTokens);
    const std::int64_t t = rng.uniform(1, n);
    const std::int64_t s = n - t;
    const auto budget = aria::AriaBudget::from_totals(t, s);
    const std::string got = aria_case(t, s);
    const auto want = oracle::earliest_plan_closed_form(t, s, budget.ratio.num(), budget.ratio.den());
    if (got != want) return fail(format("T=%lld S=%lld differs from the earliest-placement oracle", t, s));
    if (!oracle::prefixes_ok(got, budget.ratio.num(), budget.ratio.den())) {
      return fail(format("T=%lld S=%lld breaks the prefix bound", t, s));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= kAriaTimeLimitSeconds) return fail(format("took %.1f s", secs));
  return {true, format("%d exhaustive + %d random budgets in %.2f s", exhaustive, kAriaRandomBudgets, secs)};
}

// ---------------------------------------------------------------------------

Outcome rtf_anchor() {
  struct Anchor {
    const char* preset;
    int concurrency;
    double aggregate_tps;
    double rtf;
    double tol;
  };
  const std::array anchors{
      Anchor{"flash_audio", 1, 70, 0.178, kRtfToleranceFlash},
      Anchor{"flash_audio", 4, 237, 0.211, kRtfToleranceFlash},
      Anchor{"flash_audio", 8, 389, 0.257, kRtfToleranceFlash},
      Anchor{"plus_audio", 1, 67, 0.187, kRtfTolerancePlus},
      Anchor{"plus_audio", 4, 191, 0.267, kRtfTolerancePlus},
      Anchor{"plus_audio", 8, 320, 0.334, kRtfTolerancePlus},
  };
  std::string detail;
  bool pass = true;
  for (const auto& a : anchors) {
    auto stages = sim::stage_preset(a.preset);
    stages.levels.at(a.concurrency).talker_tpop_ms =
        sim::tpop_ms_from_aggregate_tps(a.aggregate_tps, a.concurrency);
    sim::Scenario s;
    s.concurrency = a.concurrency;
    const double rtf = sim::simulate(s, stages).report.generation_rtf;
    const bool ok = std::fabs(rtf - a.rtf) <= a.tol;
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += format("%s@%d %.4f%s", a.preset, a.concurrency, rtf, ok ? "" : " (out of tolerance)");
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------

Outcome latency_bound() {
  sim::StageModel stages;
  stages.name = "flash_audio_1";
  stages.levels[1] = {80.0, 5.6, 14.2};
  stages.codec_decode_lo_ms = 3.0;
  stages.codec_decode_hi_ms = 5.0;
  double worst = 0.0;
  int runs = 0;
  for (bool jitter : {false, true}) {
    stages.codec_jitter = jitter;
    for (std::int64_t den = 1; den <= 12; ++den) {
      for (std::int64_t num = den; num <= 24; ++num) {
        for (std::int64_t text_len : {1, 2, 7, 64}) {
          sim::Scenario s;
          s.aria_ratio = Rational(num, den);
          s.text_len = text_len;
          s.seed = static_cast<std::uint64_t>(num * 1000 + den);
          const double fp = sim::simulate(s, stages).report.first_packet_ms;
          if (!(fp > 0.0 && fp <= kFirstPacketCeilingMs)) {
            return fail(format("R=%lld/%lld text %lld: first packet %.3f ms", num, den, text_len, fp));
          }
          worst = std::max(worst, fp);
          ++runs;
        }
      }
    }
  }
  return {true, format("%d runs, max first packet %.3f ms", runs, worst)};
}

// ---------------------------------------------------------------------------

Outcome critical_path() {
  SplitMix64 rng(50);
  const auto names = sim::stage_preset_names();
  int checked = 0;
  while (checked < kCriticalPathScenarios) {
    auto stages = sim::stage_preset(names[static_cast<std::size_t>(rng.uniform(0, 3))]);
    stages.codec_jitter = rng.uniform(0, 1) == 1;
    stages.encoder_chunk_ms = static_cast<double>(rng.uniform(0, 500)) / 10.0;
    sim::Scenario s;
    s.seed = rng.next();
    s.concurrency = std::array{1, 4, 8}[static_cast<std::size_t>(rng.uniform(0, 2))];
    s.text_len = rng.uniform(1, 24);
    s.aria_ratio = Rational(rng.uniform(1, 5), rng.uniform(1, 3));
    s.layout.chunk_frames = static_cast<std::int32_t>(rng.uniform(1, 6));
    s.input_mode = rng.uniform(0, 1) == 1 ? sim::InputMode::kRealTimeStream : sim::InputMode::kPreloaded;
    if (rng.uniform(0, 1) == 1) s.manifest.segments.push_back(MediaSegment::audio(rng.uniform(1, 6000)));
    if (s.speech_len() == 0) continue;
    const auto fp = sim::build_first_packet_dag(s, stages);
    const std::int64_t want = fp.dag.longest_path(fp.source, fp.sink);
    const std::int64_t got = std::llround(sim::simulate(s, stages).report.first_packet_ms * 1000.0);
    if (want != got) return fail(format("scenario %d: simulate %lld us, graph %lld us", checked, got, want));
    ++checked;
  }
  return {true, format("%d scenarios equal to the microsecond", checked)};
}

// ---------------------------------------------------------------------------

Outcome context_budget_anchor() {
  mrope::TimestampConfig stamps;
  mrope::TimestampConfig no_stamps;
  no_stamps.enabled = false;

  MediaManifest ten_hours;
  ten_hours.segments.push_back(MediaSegment::audio(36'000'000));
  const auto bare = mrope::context_budget(ten_hours, no_stamps);
  const auto stamped = mrope::context_budget(ten_hours, stamps);

  MediaManifest av;
  std::vector<std::int64_t> frames;
  for (std::int64_t sec = 0; sec < 400; ++sec) frames.push_back(sec * 1000);
  av.segments.push_back(MediaSegment::video(18, 32, frames));
  av.segments.push_back(MediaSegment::audio(400'000));
  const auto video = mrope::context_budget(av, stamps);

  const std::string detail =
      format("10h audio %lld bare, %lld stamped; 400s video+audio %lld (limit %lld)", bare.total,
             stamped.total, video.total, kContextLimit);
  if (bare.total != kTenHoursBaseTokens) return fail(detail);
  if (bare.total > kContextLimit || !bare.fits) return fail(detail);
  if (stamped.total > kContextLimit || !stamped.fits) return fail(detail);
  if (video.total > kContextLimit || !video.fits) return fail(detail);
  if (bare.limit != kContextLimit || stamped.limit != kContextLimit) return fail(detail);
  return {true, detail};
}

// ---------------------------------------------------------------------------

Outcome position_invariants() {
  SplitMix64 rng(1000);
  for (int i = 0; i < kFuzzedManifests; ++i) {
    const auto m = oracle::random_manifest(rng);
    mrope::TimestampConfig ts;
    ts.seed = rng.next();
    ts.enabled = rng.uniform(0, 3) != 0;
    mrope::PositionOptions opt;
    opt.av_chunk_ms = rng.uniform(160, 4000);
    const auto a = mrope::assign_positions(m, ts, opt);
    const auto b = mrope::assign_positions(m, ts, opt);
    const auto gap = oracle::contiguity_failure(a);
    if (!gap.empty()) return fail(format("manifest %d: %s", i, gap.c_str()));
    if (!oracle::audio_resolution_ok(a)) return fail(format("manifest %d: audio ids skip a frame", i));
    if (a.entries != b.entries) return fail(format("manifest %d: not deterministic", i));
  }
  return {true, format("%d manifests", kFuzzedManifests)};
}

// ---------------------------------------------------------------------------

Outcome codec_conservation() {
  SplitMix64 rng(8);
  std::int64_t frames_total = 0;
  for (std::int32_t c : {1, 2, 4, 8}) {
    for (int i = 0; i < kFuzzedFrameSequences; ++i) {
      codec::CodecLayout l;
      l.num_codebooks = static_cast<std::int32_t>(rng.uniform(1, 16));
      l.codebook_size = static_cast<std::int32_t>(rng.uniform(2, 4096));
      l.chunk_frames = c;
      codec::FrameAssembler fa(l);
      codec::Chunker ch(l);
      std::vector<codec::CodecFrame> frames;
      std::vector<codec::CodecChunk> chunks;
      std::vector<codec::Code> res(static_cast<std::size_t>(l.num_codebooks - 1));
      const std::int64_t n = rng.uniform(0, 80);
      for (std::int64_t k = 0; k < n; ++k) {
        for (auto& r : res) r = static_cast<codec::Code>(rng.uniform(0, l.codebook_size - 1));
        frames.push_back(fa.make_frame(static_cast<codec::Code>(rng.uniform(0, l.codebook_size - 1)), res));
        if (auto out = ch.push(frames.back())) chunks.push_back(std::move(*out));
      }
      if (auto out = ch.flush()) chunks.push_back(std::move(*out));

      std::vector<codec::CodecFrame> joined;
      for (std::size_t k = 0; k < chunks.size(); ++k) {
        const auto& chunk = chunks[k];
        const bool last = k + 1 == chunks.size();
        if (chunk.frames.empty() || chunk.first_frame_index != static_cast<std::int64_t>(joined.size())) {
          return fail(format("C=%d sequence %d: chunk %zu misplaced", c, i, k));
        }
        if (chunk.frames.size() > static_cast<std::size_t>(c) ||
            (!last && chunk.frames.size() != static_cast<std::size_t>(c))) {
          return fail(format("C=%d sequence %d: chunk %zu has %zu frames", c, i, k, chunk.frames.size()));
        }
        joined.insert(joined.end(), chunk.frames.begin(), chunk.frames.end());
      }
      if (joined != frames) return fail(format("C=%d sequence %d: frames not conserved", c, i));

      const std::string text = codec::serialize_chunks(chunks);
      const auto parsed = codec::parse_chunks(text, l);
      if (parsed != chunks || codec::serialize_chunks(parsed) != text) {
        return fail(format("C=%d sequence %d: round-trip differs", c, i));
      }
      frames_total += n;
    }
  }
  return {true, format("%d sequences per C, %lld frames", kFuzzedFrameSequences, frames_total)};
}

// ---------------------------------------------------------------------------

Outcome cli_golden() {
  const auto scratch = std::filesystem::temp_directory_path() / "omnistream_acceptance";
  std::filesystem::create_directories(scratch);
  for (const auto& c : golden::cases()) {
    const auto diff = golden::check_case(c, OMNISTREAM_DATA_DIR, OMNISTREAM_GOLDEN_DIR, scratch, false);
    if (!diff.empty()) return fail(c.name + ": " + diff);
  }
  return {true, format("%zu invocations", golden::cases().size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"aria_safety_optimality", aria_safety_optimality},
      {"rtf_anchor", rtf_anchor},
      {"first_packet_bound", latency_bound},
      {"critical_path_oracle", critical_path},
      {"context_budget_anchor", context_budget_anchor},
      {"position_invariants", position_invariants},
      {"codec_conservation", codec_conservation},
      {"cli_golden_suite", cli_golden},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
