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
#include <string>
#include <vector>

#include "omnistream/sim/simulator.hpp"

namespace omnistream::sim {

/// Weighted dependency graph. An edge u -> v with weight w means v cannot
/// complete before u completes plus w.
class LatencyDag {
 public:
  using NodeId = std::size_t;

  NodeId add_node(std::string label = {});
  /// Throws Error(kInvalidArgument) for unknown nodes or negative weights.
  void add_edge(NodeId from, NodeId to, std::int64_t weight);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(NodeId n) const { return labels_.at(n); }

  /// Longest path weight from `source` to `sink`. Throws
  /// Error(kCycleDetected) on a cycle and Error(kInvalidArgument) when the
  /// sink is unreachable.
  std::int64_t longest_path(NodeId source, NodeId sink) const;

 private:
  struct Edge {
    NodeId to;
    std::int64_t weight;
  };
  std::vector<std::string> labels_;
  std::vector<std::vector<Edge>> out_;
};

/// Dependencies of the first playable audio packet, built directly from the
/// stage rules (no event simulation). Weights are microseconds.
struct FirstPacketDag {
  LatencyDag dag;
  LatencyDag::NodeId source = 0;
  LatencyDag::NodeId sink = 0;
};

FirstPacketDag build_first_packet_dag(const Scenario& scenario, const StageModel& stages);

/// Longest source-to-sink path in milliseconds.
double critical_path_ms(const LatencyDag& dag, LatencyDag::NodeId source, LatencyDag::NodeId sink);

}  // namespace omnistream::sim
