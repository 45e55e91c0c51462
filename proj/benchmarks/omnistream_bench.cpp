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

#include <benchmark/benchmark.h>

#include <vector>

#include "omnistream/aria.hpp"
#include "omnistream/codec.hpp"
#include "omnistream/mrope.hpp"
#include "omnistream/rng.hpp"
#include "omnistream/sim/simulator.hpp"
#include "omnistream/sim/stage_model.hpp"

using namespace omnistream;

namespace {

void BM_PlanEager(benchmark::State& state) {
  const auto budget = aria::AriaBudget::from_totals(state.range(0), 2 * state.range(0) + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aria::plan_eager(budget));
  }
  state.SetItemsProcessed(state.iterations() * (3 * state.range(0) + 1));
}
BENCHMARK(BM_PlanEager)->Range(64, 1 << 16);

MediaManifest av_manifest(std::int64_t seconds) {
  MediaManifest m;
  m.segments.push_back(MediaSegment::text(32));
  std::vector<std::int64_t> frames;
  for (std::int64_t s = 0; s < seconds; ++s) frames.push_back(s * 1000);
  m.segments.push_back(MediaSegment::video(8, 8, frames));
  m.segments.push_back(MediaSegment::audio(seconds * 1000));
  return m;
}

void BM_AssignPositions(benchmark::State& state) {
  const auto m = av_manifest(state.range(0));
  const mrope::TimestampConfig ts;
  std::int64_t tokens = 0;
  for (auto _ : state) {
    const auto t = mrope::assign_positions(m, ts);
    tokens = static_cast<std::int64_t>(t.entries.size());
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * tokens);
}
BENCHMARK(BM_AssignPositions)->Range(8, 1024);

void BM_ContextBudget(benchmark::State& state) {
  MediaManifest m;
  m.segments.push_back(MediaSegment::audio(state.range(0) * 1000));
  const mrope::TimestampConfig ts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrope::context_budget(m, ts));
  }
}
BENCHMARK(BM_ContextBudget)->Range(60, 36'000);

void BM_Simulate(benchmark::State& state) {
  const auto stages = sim::stage_preset("flash_audio");
  sim::Scenario s;
  s.text_len = state.range(0);
  s.layout.chunk_frames = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::simulate(s, stages));
  }
  state.SetItemsProcessed(state.iterations() * s.speech_len());
}
BENCHMARK(BM_Simulate)->Range(16, 4096);

void BM_ChunkAndSerialize(benchmark::State& state) {
  codec::CodecLayout l;
  l.chunk_frames = static_cast<std::int32_t>(state.range(0));
  SplitMix64 rng(1);
  codec::FrameAssembler fa(l);
  std::vector<codec::CodecFrame> frames;
  std::vector<codec::Code> res(static_cast<std::size_t>(l.num_codebooks - 1));
  for (int i = 0; i < 1024; ++i) {
    for (auto& r : res) r = static_cast<codec::Code>(rng.uniform(0, l.codebook_size - 1));
    frames.push_back(fa.make_frame(static_cast<codec::Code>(rng.uniform(0, l.codebook_size - 1)), res));
  }
  for (auto _ : state) {
    codec::Chunker ch(l);
    std::vector<codec::CodecChunk> chunks;
    for (const auto& f : frames) {
      if (auto c = ch.push(f)) chunks.push_back(std::move(*c));
    }
    if (auto c = ch.flush()) chunks.push_back(std::move(*c));
    benchmark::DoNotOptimize(codec::serialize_chunks(chunks));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames.size()));
}
BENCHMARK(BM_ChunkAndSerialize)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
