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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace omnistream::sim {

/// Milliseconds to the simulator's integer microsecond clock.
std::int64_t ms_to_us(double ms);
double us_to_ms(std::int64_t us);

/// Per-request stage latencies measured at one concurrency level.
struct LevelLatency {
  double thinker_ttft_ms = 0.0;
  double thinker_tpop_ms = 0.0;
  double talker_tpop_ms = 0.0;  // Talker backbone + MTP residual prediction

  friend bool operator==(const LevelLatency&, const LevelLatency&) = default;
};

/// Latency model of one deployment variant. Concurrency enters only through
/// the per-level table; there is no queueing model.
struct StageModel {
  std::string name;
  std::map<int, LevelLatency> levels;
  double codec_decode_lo_ms = 3.0;
  double codec_decode_hi_ms = 5.0;
  /// false: every chunk costs the interval midpoint. true: each chunk draws
  /// uniformly (integer microseconds) from [lo, hi] using the scenario seed.
  bool codec_jitter = false;
  double encoder_chunk_ms = 0.0;
  double prefill_chunk_seconds = 2.0;

  /// Throws Error(kInvalidArgument) on negative latencies or an empty table.
  void validate() const;

  /// Throws Error(kUnconfiguredConcurrency) for a level missing from the table.
  const LevelLatency& level(int concurrency) const;

  friend bool operator==(const StageModel&, const StageModel&) = default;
};

/// Decode latency of codec chunk `chunk_index` in microseconds.
std::int64_t codec_decode_us(const StageModel& stages, std::uint64_t seed,
                             std::int64_t chunk_index);

/// Published stage measurements for the two model variants at concurrency
/// 1, 4 and 8 with audio or video input. Names: flash_audio, flash_video,
/// plus_audio, plus_video. Encoder cost is folded into the measured TTFT, so
/// encoder_chunk_ms is 0. Throws Error(kInvalidArgument) for unknown names.
StageModel stage_preset(std::string_view name);
std::vector<std::string> stage_preset_names();

/// Per-stream TPOP implied by an aggregate tokens/s figure at a concurrency.
double tpop_ms_from_aggregate_tps(double aggregate_tps, int concurrency);

}  // namespace omnistream::sim
