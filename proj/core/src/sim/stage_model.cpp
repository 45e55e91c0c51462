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

#include "omnistream/sim/stage_model.hpp"

#include <cmath>

#include "omnistream/error.hpp"
#include "omnistream/rng.hpp"

namespace omnistream::sim {

std::int64_t ms_to_us(double ms) { return static_cast<std::int64_t>(std::llround(ms * 1000.0)); }
double us_to_ms(std::int64_t us) { return static_cast<double>(us) / 1000.0; }

void StageModel::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (levels.empty()) fail("stage model has no concurrency levels");
  for (const auto& [conc, l] : levels) {
    if (conc < 1) fail("concurrency levels must be positive");
    if (l.thinker_ttft_ms < 0 || l.thinker_tpop_ms < 0 || l.talker_tpop_ms < 0) {
      fail("stage latencies must be non-negative (level " + std::to_string(conc) + ")");
    }
  }
  if (codec_decode_lo_ms < 0 || codec_decode_hi_ms < codec_decode_lo_ms) {
    fail("codec decode interval needs 0 <= lo <= hi");
  }
  if (encoder_chunk_ms < 0) fail("encoder_chunk_ms must be non-negative");
  if (!(prefill_chunk_seconds > 0)) fail("prefill_chunk_seconds must be positive");
}

const LevelLatency& StageModel::level(int concurrency) const {
  const auto it = levels.find(concurrency);
  if (it == levels.end()) {
    throw Error(ErrorCode::kUnconfiguredConcurrency,
                "stage model '" + name + "' has no entry for concurrency " +
                    std::to_string(concurrency));
  }
  return it->second;
}

std::int64_t codec_decode_us(const StageModel& stages, std::uint64_t seed,
                             std::int64_t chunk_index) {
  const std::int64_t lo = ms_to_us(stages.codec_decode_lo_ms);
  const std::int64_t hi = ms_to_us(stages.codec_decode_hi_ms);
  if (!stages.codec_jitter) return (lo + hi) / 2;
  SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(chunk_index) + 1));
  return rng.uniform(lo, hi);
}

namespace {

StageModel make(std::string name, std::map<int, LevelLatency> levels) {
  StageModel m;
  m.name = std::move(name);
  m.levels = std::move(levels);
  return m;
}

}  // namespace

StageModel stage_preset(std::string_view name) {
  // {ttft, thinker tpop, talker tpop} per concurrency level.
  if (name == "flash_audio") {
    return make("flash_audio", {{1, {80, 5.6, 14.2}}, {4, {86, 8.2, 16.9}}, {8, {103, 9.6, 20.5}}});
  }
  if (name == "flash_video") {
    return make("flash_video",
                {{1, {255, 5.9, 14.2}}, {4, {446, 9.2, 17.0}}, {8, {765, 15.8, 20.6}}});
  }
  if (name == "plus_audio") {
    return make("plus_audio",
                {{1, {162, 17.4, 14.9}}, {4, {183, 25.6, 21.0}}, {8, {260, 33.3, 25.8}}});
  }
  if (name == "plus_video") {
    return make("plus_video",
                {{1, {377, 18.5, 14.9}}, {4, {907, 26.9, 21.3}}, {8, {1243, 40.2, 27.1}}});
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stage preset '" + std::string(name) + "'");
}

std::vector<std::string> stage_preset_names() {
  return {"flash_audio", "flash_video", "plus_audio", "plus_video"};
}

double tpop_ms_from_aggregate_tps(double aggregate_tps, int concurrency) {
  if (!(aggregate_tps > 0) || concurrency < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tps and concurrency must be positive");
  }
  return 1000.0 * concurrency / aggregate_tps;
}

}  // namespace omnistream::sim
