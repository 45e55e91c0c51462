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

#include "omnistream/sim/simulator.hpp"

#include <algorithm>
#include <deque>

#include "omnistream/aria.hpp"
#include "int128.hpp"
#include "omnistream/error.hpp"
#include "omnistream/sim/event_queue.hpp"

namespace omnistream::sim {

std::string_view to_string(InputMode mode) {
  return mode == InputMode::kPreloaded ? "PRELOADED" : "REAL_TIME_STREAM";
}

InputMode parse_input_mode(std::string_view text) {
  if (text == "PRELOADED") return InputMode::kPreloaded;
  if (text == "REAL_TIME_STREAM") return InputMode::kRealTimeStream;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown input mode '" + std::string(text) + "' (PRELOADED|REAL_TIME_STREAM)");
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kEncChunkDone: return "ENC_CHUNK_DONE";
    case EventKind::kTextToken: return "TEXT_TOKEN";
    case EventKind::kSpeechFrame: return "SPEECH_FRAME";
    case EventKind::kCodecChunkDone: return "CODEC_CHUNK_DONE";
  }
  return "UNKNOWN";
}

std::int64_t Scenario::speech_len() const {
  return static_cast<std::int64_t>(static_cast<detail::Int128>(text_len) * aria_ratio.num() /
                                   aria_ratio.den());
}

std::vector<StreamSymbol> EventTrace::stream() const {
  std::vector<StreamSymbol> out;
  for (const TraceEvent& e : events) {
    if (e.kind == EventKind::kTextToken) out.push_back(StreamSymbol::kText);
    if (e.kind == EventKind::kSpeechFrame) out.push_back(StreamSymbol::kSpeech);
  }
  return out;
}

std::string EventTrace::to_text() const {
  std::string out;
  out.reserve(events.size() * 24);
  for (const TraceEvent& e : events) {
    out += std::to_string(e.time_us);
    out += ' ';
    out += to_string(e.kind);
    out += ' ';
    out += std::to_string(e.index);
    out += '\n';
  }
  return out;
}

std::vector<std::int64_t> prefill_arrivals_us(const Scenario& scenario, const StageModel& stages) {
  const std::int64_t media_ms = scenario.manifest.media_duration_ms();
  const std::int64_t chunk_ms = std::max<std::int64_t>(1, seconds_to_ms(stages.prefill_chunk_seconds));
  const std::int64_t chunks = (media_ms + chunk_ms - 1) / chunk_ms;
  std::vector<std::int64_t> out(static_cast<std::size_t>(chunks), 0);
  if (scenario.input_mode == InputMode::kRealTimeStream) {
    for (std::int64_t k = 0; k < chunks; ++k) {
      out[static_cast<std::size_t>(k)] = std::min((k + 1) * chunk_ms, media_ms) * 1000;
    }
  }
  return out;
}

namespace {

// Tie-break for simultaneous events: upstream stages first, so a token that
// becomes available at time t is visible to anything else happening at t.
enum Priority : int { kEncoder = 0, kThinker = 1, kTalker = 2, kCodec = 3 };

class Run {
 public:
  Run(const Scenario& scn, const StageModel& stages)
      : scn_(scn),
        stages_(stages),
        lat_(stages.level(scn.concurrency)),
        text_total_(scn.text_len),
        speech_total_(scn.speech_len()),
        ttft_us_(ms_to_us(lat_.thinker_ttft_ms)),
        thinker_tpop_us_(ms_to_us(lat_.thinker_tpop_ms)),
        talker_tpop_us_(ms_to_us(lat_.talker_tpop_ms)),
        encoder_us_(ms_to_us(stages.encoder_chunk_ms)),
        frame_start_us_(static_cast<std::size_t>(speech_total_), 0) {}

  SimulationResult operator()() {
    const auto arrivals = prefill_arrivals_us(scn_, stages_);
    prefill_chunks_ = static_cast<std::int64_t>(arrivals.size());
    if (arrivals.empty()) {
      schedule_text(0, ttft_us_);
    } else {
      for (std::size_t k = 0; k < arrivals.size(); ++k) {
        queue_.schedule(arrivals[k], kEncoder, [this, k] {
          encoder_pending_.push_back(static_cast<std::int64_t>(k));
          try_encode();
        });
      }
    }
    queue_.run();
    ScenarioReport r = report();
    return {std::move(trace_), r};
  }

 private:
  void record(EventKind kind, std::int64_t index) {
    trace_.events.push_back({queue_.now(), kind, index});
  }

  void try_encode() {
    if (encoder_busy_ || encoder_pending_.empty()) return;
    const std::int64_t k = encoder_pending_.front();
    encoder_pending_.pop_front();
    encoder_busy_ = true;
    queue_.schedule(queue_.now() + encoder_us_, kEncoder, [this, k] {
      record(EventKind::kEncChunkDone, k);
      encoder_busy_ = false;
      if (k + 1 == prefill_chunks_) schedule_text(0, queue_.now() + ttft_us_);
      try_encode();
    });
  }

  void schedule_text(std::int64_t i, std::int64_t at) {
    queue_.schedule(at, kThinker, [this, i] {
      record(EventKind::kTextToken, i);
      ++text_emitted_;
      if (i + 1 < text_total_) schedule_text(i + 1, queue_.now() + thinker_tpop_us_);
      try_talk();
    });
  }

  void try_talk() {
    if (talker_busy_ || frames_started_ >= speech_total_) return;
    if (text_emitted_ < aria::text_needed_for_speech(frames_started_, scn_.aria_ratio)) return;
    const std::int64_t k = frames_started_++;
    talker_busy_ = true;
    frame_start_us_[static_cast<std::size_t>(k)] = queue_.now();
    queue_.schedule(queue_.now() + talker_tpop_us_, kTalker, [this, k] {
      record(EventKind::kSpeechFrame, k);
      talker_busy_ = false;
      ++frames_done_;
      if (frames_done_ % scn_.layout.chunk_frames == 0 || frames_done_ == speech_total_) {
        codec_pending_.push_back(chunks_ready_++);
        try_decode();
      }
      try_talk();
    });
  }

  void try_decode() {
    if (codec_busy_ || codec_pending_.empty()) return;
    const std::int64_t j = codec_pending_.front();
    codec_pending_.pop_front();
    codec_busy_ = true;
    queue_.schedule(queue_.now() + codec_decode_us(stages_, scn_.seed, j), kCodec, [this, j] {
      record(EventKind::kCodecChunkDone, j);
      codec_busy_ = false;
      try_decode();
    });
  }

  ScenarioReport report() const {
    ScenarioReport r;
    r.text_tokens = text_total_;
    r.speech_frames = speech_total_;
    r.prefill_chunks = prefill_chunks_;

    std::vector<std::int64_t> text_t;
    std::vector<std::int64_t> frame_t;
    bool have_packet = false;
    for (const TraceEvent& e : trace_.events) {
      switch (e.kind) {
        case EventKind::kTextToken: text_t.push_back(e.time_us); break;
        case EventKind::kSpeechFrame: frame_t.push_back(e.time_us); break;
        case EventKind::kCodecChunkDone:
          ++r.codec_chunks;
          if (!have_packet) {
            r.first_packet_ms = us_to_ms(e.time_us);
            have_packet = true;
          }
          break;
        case EventKind::kEncChunkDone: break;
      }
    }
    const double conc = scn_.concurrency;

    r.ttft_ms = us_to_ms(text_t.front());
    if (text_t.size() >= 2) {
      const std::int64_t span = text_t.back() - text_t.front();
      r.thinker_tpop_ms = us_to_ms(span) / static_cast<double>(text_t.size() - 1);
      if (span > 0) r.thinker_tps = conc * static_cast<double>(text_t.size() - 1) / (span / 1e6);
    } else {
      r.thinker_tpop_ms = us_to_ms(thinker_tpop_us_);
    }

    const std::size_t first_chunk_frames =
        std::min<std::size_t>(static_cast<std::size_t>(scn_.layout.chunk_frames), frame_t.size());
    r.ttfc_ms = us_to_ms(frame_t[first_chunk_frames - 1]);

    std::int64_t busy = 0;
    for (std::size_t k = 0; k < frame_t.size(); ++k) busy += frame_t[k] - frame_start_us_[k];
    r.talker_tpop_ms = us_to_ms(busy) / static_cast<double>(frame_t.size());

    const std::int64_t wall = frame_t.back() - frame_start_us_.front();
    const double audio = codec::audio_seconds(static_cast<std::int64_t>(frame_t.size()), scn_.layout);
    r.generation_rtf = (wall / 1e6) / audio;
    if (wall > 0) r.talker_tps = conc * static_cast<double>(frame_t.size()) / (wall / 1e6);
    return r;
  }

  const Scenario& scn_;
  const StageModel& stages_;
  const LevelLatency& lat_;
  const std::int64_t text_total_;
  const std::int64_t speech_total_;
  const std::int64_t ttft_us_;
  const std::int64_t thinker_tpop_us_;
  const std::int64_t talker_tpop_us_;
  const std::int64_t encoder_us_;

  EventQueue queue_;
  EventTrace trace_;
  std::int64_t prefill_chunks_ = 0;
  std::deque<std::int64_t> encoder_pending_;
  bool encoder_busy_ = false;
  std::int64_t text_emitted_ = 0;
  bool talker_busy_ = false;
  std::int64_t frames_started_ = 0;
  std::int64_t frames_done_ = 0;
  std::vector<std::int64_t> frame_start_us_;
  std::int64_t chunks_ready_ = 0;
  std::deque<std::int64_t> codec_pending_;
  bool codec_busy_ = false;
};

}  // namespace

void validate_scenario(const Scenario& scenario, const StageModel& stages) {
  stages.validate();
  scenario.layout.validate();
  require_valid(scenario.manifest);
  if (scenario.text_len < 1) throw Error(ErrorCode::kInvalidArgument, "text_len must be >= 1");
  if (scenario.concurrency < 1) throw Error(ErrorCode::kInvalidArgument, "concurrency must be >= 1");
  (void)stages.level(scenario.concurrency);
  if (scenario.speech_len() < 1) {
    throw Error(ErrorCode::kInfeasibleRatio, "ratio " + scenario.aria_ratio.str() + " with " +
                                                 std::to_string(scenario.text_len) +
                                                 " text tokens admits no speech");
  }
}

SimulationResult simulate(const Scenario& scenario, const StageModel& stages) {
  validate_scenario(scenario, stages);
  return Run(scenario, stages)();
}

}  // namespace omnistream::sim
