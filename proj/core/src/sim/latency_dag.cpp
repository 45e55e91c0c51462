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

#include "omnistream/sim/latency_dag.hpp"

#include <algorithm>
#include <limits>

#include "omnistream/aria.hpp"
#include "omnistream/error.hpp"

namespace omnistream::sim {

LatencyDag::NodeId LatencyDag::add_node(std::string label) {
  labels_.push_back(std::move(label));
  out_.emplace_back();
  return labels_.size() - 1;
}

void LatencyDag::add_edge(NodeId from, NodeId to, std::int64_t weight) {
  if (from >= size() || to >= size()) throw Error(ErrorCode::kInvalidArgument, "edge references unknown node");
  if (weight < 0) throw Error(ErrorCode::kInvalidArgument, "edge weights must be non-negative");
  out_[from].push_back({to, weight});
}

std::int64_t LatencyDag::longest_path(NodeId source, NodeId sink) const {
  if (source >= size() || sink >= size()) throw Error(ErrorCode::kInvalidArgument, "unknown node");

  // Kahn's algorithm over the whole graph so any cycle is reported.
  std::vector<std::size_t> indegree(size(), 0);
  for (const auto& edges : out_) {
    for (const Edge& e : edges) ++indegree[e.to];
  }
  std::vector<NodeId> order;
  order.reserve(size());
  for (NodeId n = 0; n < size(); ++n) {
    if (indegree[n] == 0) order.push_back(n);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const Edge& e : out_[order[head]]) {
      if (--indegree[e.to] == 0) order.push_back(e.to);
    }
  }
  if (order.size() != size()) throw Error(ErrorCode::kCycleDetected, "latency graph contains a cycle");

  constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::min();
  std::vector<std::int64_t> dist(size(), kUnreached);
  dist[source] = 0;
  for (NodeId n : order) {
    if (dist[n] == kUnreached) continue;
    for (const Edge& e : out_[n]) dist[e.to] = std::max(dist[e.to], dist[n] + e.weight);
  }
  if (dist[sink] == kUnreached) throw Error(ErrorCode::kInvalidArgument, "sink not reachable from source");
  return dist[sink];
}

double critical_path_ms(const LatencyDag& dag, LatencyDag::NodeId source, LatencyDag::NodeId sink) {
  return us_to_ms(dag.longest_path(source, sink));
}

FirstPacketDag build_first_packet_dag(const Scenario& scenario, const StageModel& stages) {
  validate_scenario(scenario, stages);
  const LevelLatency& lat = stages.level(scenario.concurrency);
  const std::int64_t encoder = ms_to_us(stages.encoder_chunk_ms);
  const std::int64_t ttft = ms_to_us(lat.thinker_ttft_ms);
  const std::int64_t thinker = ms_to_us(lat.thinker_tpop_ms);
  const std::int64_t talker = ms_to_us(lat.talker_tpop_ms);

  FirstPacketDag out;
  LatencyDag& g = out.dag;
  out.source = g.add_node("stream_start");

  // Encoder: chunk k starts when it has arrived and chunk k-1 is done.
  const auto arrivals = prefill_arrivals_us(scenario, stages);
  LatencyDag::NodeId prefill_done = out.source;
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    const auto node = g.add_node("enc" + std::to_string(k));
    g.add_edge(out.source, node, arrivals[k] + encoder);
    if (k > 0) g.add_edge(prefill_done, node, encoder);
    prefill_done = node;
  }

  // Frames needed for the first chunk and the text tokens that gate them.
  const std::int64_t frames = std::min<std::int64_t>(scenario.layout.chunk_frames, scenario.speech_len());
  const std::int64_t texts = aria::text_needed_for_speech(frames - 1, scenario.aria_ratio);

  std::vector<LatencyDag::NodeId> text_nodes;
  for (std::int64_t i = 0; i < texts; ++i) {
    const auto node = g.add_node("text" + std::to_string(i));
    if (i == 0) {
      g.add_edge(prefill_done, node, ttft);
    } else {
      g.add_edge(text_nodes.back(), node, thinker);
    }
    text_nodes.push_back(node);
  }

  LatencyDag::NodeId prev_frame = 0;
  for (std::int64_t k = 0; k < frames; ++k) {
    const auto node = g.add_node("frame" + std::to_string(k));
    const std::int64_t gate = aria::text_needed_for_speech(k, scenario.aria_ratio);
    g.add_edge(text_nodes[static_cast<std::size_t>(gate - 1)], node, talker);
    if (k > 0) g.add_edge(prev_frame, node, talker);
    prev_frame = node;
  }

  out.sink = g.add_node("codec0");
  g.add_edge(prev_frame, out.sink, codec_decode_us(stages, scenario.seed, 0));
  return out;
}

}  // namespace omnistream::sim
