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

#include "omnistream/sim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "omnistream/error.hpp"

namespace omnistream::sim {

namespace {

void run_row(SweepRow& row, const StageModel& stages) {
  try {
    row.report = simulate(row.scenario, stages).report;
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    row.error = std::string("Internal: ") + e.what();
  }
}

}  // namespace

std::vector<SweepRow> sweep(std::span<const Scenario> scenarios, const StageModel& stages,
                            unsigned workers) {
  std::vector<SweepRow> rows;
  rows.reserve(scenarios.size());
  for (const Scenario& s : scenarios) rows.push_back({s, std::nullopt, {}});

  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(1, rows.size())));
  if (workers == 1) {
    for (SweepRow& row : rows) run_row(row, stages);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) run_row(rows[i], stages);
    });
  }
  pool.clear();
  return rows;
}

}  // namespace omnistream::sim
