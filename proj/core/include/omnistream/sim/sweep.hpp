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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omnistream/sim/simulator.hpp"

namespace omnistream::sim {

struct SweepRow {
  Scenario scenario;
  std::optional<ScenarioReport> report;  // empty when the row failed
  std::string error;                     // "Code: message" for failed rows
};

/// One row per scenario in input order. A failing scenario marks its row
/// and the sweep continues. `workers` > 1 runs scenarios on that many
/// threads; the output does not depend on scheduling.
std::vector<SweepRow> sweep(std::span<const Scenario> scenarios, const StageModel& stages,
                            unsigned workers = 1);

}  // namespace omnistream::sim
