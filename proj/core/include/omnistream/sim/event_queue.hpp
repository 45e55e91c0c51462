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
#include <functional>
#include <queue>
#include <vector>

namespace omnistream::sim {

/// Deterministic event queue. Events fire in (time, priority, insertion)
/// order, so simultaneous events always resolve the same way.
class EventQueue {
 public:
  using Callback = std::function<void()>;

  void schedule(std::int64_t time_us, int priority, Callback fn) {
    heap_.push(Item{time_us, priority, seq_++, std::move(fn)});
  }

  /// Runs until the queue drains. Returns the number of events fired.
  std::size_t run() {
    std::size_t fired = 0;
    while (!heap_.empty()) {
      Item item = heap_.top();
      heap_.pop();
      now_ = item.time_us;
      item.fn();
      ++fired;
    }
    return fired;
  }

  std::int64_t now() const noexcept { return now_; }
  bool empty() const noexcept { return heap_.empty(); }

 private:
  struct Item {
    std::int64_t time_us;
    int priority;
    std::uint64_t seq;
    Callback fn;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const noexcept {
      if (a.time_us != b.time_us) return a.time_us > b.time_us;
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Item, std::vector<Item>, Later> heap_;
  std::uint64_t seq_ = 0;
  std::int64_t now_ = 0;
};

}  // namespace omnistream::sim
