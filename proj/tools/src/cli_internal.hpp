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

#include <string>
#include <vector>

#include <json.hpp>

#include "omnistream/cli/cli.hpp"
#include "omnistream/sim/simulator.hpp"

namespace omnistream::cli {

inline constexpr std::int64_t kMaxTextLen = 1'000'000;

std::string describe_issues(const std::vector<FieldIssue>& issues);

/// Rounded to 6 decimals so reports do not carry float noise.
double round6(double x);
/// Shortest decimal form of round6(x).
std::string fmt(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 quoting; CRLF-free, "\n" line ends.
std::string to_csv(const Table& t);
/// Space-aligned columns.
std::string to_text(const Table& t);

nlohmann::ordered_json report_json(const sim::ScenarioReport& r);

}  // namespace omnistream::cli
