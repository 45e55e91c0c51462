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

// Discrete-event model of one streaming request:
//
//   encoder prefill chunks -> Thinker text tokens -> Talker speech frames
//   (gated by the speech/text ratio bound) -> codec decode per chunk
//
// Every time is integer microseconds from stream start.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "omnistream/codec.hpp"
#include "omnistream/media.hpp"
#include "omnistream/rational.hpp"
#include "omnistream/sim/stage_model.hpp"

namespace omnistream::sim {

enum class InputMode : std::uint8_t {
  kPreloaded,       // all media available at t = 0
  kRealTimeStream,  // prefill chunk k arrives once its media has played
};

std::string_view to_string(InputMode mode);
/// "PRELOADED" or "REAL_TIME_STREAM"; throws Error(kInvalidArgument).
InputMode parse_input_mode(std::string_view text);

struct Scenario {
  std::string name;
  MediaManifest manifest;
  InputMode input_mode = InputMode::kPreloaded;
  Rational aria_ratio{2, 1};
  std::int64_t text_len = 64;
  codec::CodecLayout layout;
  int concurrency = 1;
  std::uint64_t seed = 0;

  /// Speech frames for the request: floor(text_len * ratio).
  std::int64_t speech_len() const;
};

enum class EventKind : std::uint8_t { kEncChunkDone, kTextToken, kSpeechFrame, kCodecChunkDone };

std::string_view to_string(EventKind kind);

struct TraceEvent {
  std::int64_t time_us = 0;
  EventKind kind = EventKind::kTextToken;
  std::int64_t index = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct EventTrace {
  std::vector<TraceEvent> events;

  /// TEXT/SPEECH interleaving in emission order.
  std::vector<StreamSymbol> stream() const;
  /// "time_us KIND index" per line.
  std::string to_text() const;
};

struct ScenarioReport {
  double ttft_ms = 0;          // first text token
  double ttfc_ms = 0;          // Talker finishes the frames of the first chunk
  double first_packet_ms = 0;  // first chunk decoded: first playable audio
  double thinker_tpop_ms = 0;
  double talker_tpop_ms = 0;
  double thinker_tps = 0;  // aggregate over all concurrent streams
  double talker_tps = 0;   // aggregate over all concurrent streams
  double generation_rtf = 0;
  std::int64_t text_tokens = 0;
  std::int64_t speech_frames = 0;
  std::int64_t codec_chunks = 0;
  std::int64_t prefill_chunks = 0;
};

struct SimulationResult {
  EventTrace trace;
  ScenarioReport report;
};

/// Checks everything simulate() needs; throws the same errors it would.
void validate_scenario(const Scenario& scenario, const StageModel& stages);

/// Throws Error(kUnconfiguredConcurrency), Error(kInfeasibleRatio) when the
/// scenario yields no speech, Error(kInvalidManifest) or
/// Error(kInvalidArgument) for bad configuration.
SimulationResult simulate(const Scenario& scenario, const StageModel& stages);

/// Prefill chunk arrival times (us) for the scenario's input mode.
std::vector<std::int64_t> prefill_arrivals_us(const Scenario& scenario, const StageModel& stages);

}  // namespace omnistream::sim
