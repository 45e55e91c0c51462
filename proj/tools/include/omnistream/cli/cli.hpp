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


// Front end for the omnistream binary. Everything here is also used
// in-process by the golden tests.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "omnistream/error.hpp"
#include "omnistream/media.hpp"
#include "omnistream/sim/simulator.hpp"
#include "omnistream/sim/stage_model.hpp"

namespace omnistream::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

struct FieldIssue {
  std::string path;  // e.g. "segments[0].frame_timestamps"
  std::string message;

  friend bool operator==(const FieldIssue&, const FieldIssue&) = default;
};

/// Error carrying every problem found in one input document.
class InputError : public Error {
 public:
  InputError(ErrorCode code, std::vector<FieldIssue> issues);

  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// Manifest JSON:
///   {"segments": [...], "audio_frame_seconds": 0.16, "context_limit": 262144}
/// Segment fields: "kind" (TEXT|IMAGE|VIDEO|AUDIO), "token_count" (TEXT),
/// "grid" [rows, cols] (IMAGE, VIDEO), "frame_timestamps" [seconds...]
/// (VIDEO), "duration" seconds (AUDIO).
///
/// Throws InputError with kParseError (not JSON), kSchemaError (unknown,
/// missing, misplaced or mistyped fields) or kValidationError (values that
/// break manifest invariants).
MediaManifest parse_manifest(std::string_view bytes);

/// Scenario JSON; every field optional:
///   {"name", "manifest": {...}, "input_mode", "aria_ratio": "2/1",
///    "text_len", "concurrency",
///    "layout": {"num_codebooks", "codebook_size", "frame_rate_hz", "chunk_frames"}}
sim::Scenario parse_scenario(std::string_view bytes);

/// {"scenarios": [scenario, ...]}
std::vector<sim::Scenario> parse_scenario_list(std::string_view bytes);

/// Stage file JSON:
///   {"name", "levels": [{"concurrency", "thinker_ttft_ms", "thinker_tpop_ms",
///    "talker_tpop_ms"}, ...], "codec_decode_ms": [lo, hi], "codec_jitter",
///    "encoder_chunk_ms", "prefill_chunk_seconds"}
sim::StageModel parse_stages(std::string_view bytes);

/// Stage model as the JSON accepted by parse_stages.
std::string stages_to_json(const sim::StageModel& stages);

/// Runs one command line (without the program name). Reports go to `out`
/// (or --output), diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omnistream::cli
