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

// Multimodal (temporal, height, width) position IDs.
//
// Layout rules:
//   * Segments are laid out as blocks. A VIDEO segment directly followed by
//     an AUDIO segment forms one audio-video block; every other segment is a
//     block of its own.
//   * Every block starts at 1 + the largest ID used by the previous block.
//   * TEXT: tid == hid == wid, increasing by one per token.
//   * IMAGE: one tid for the whole image, hid/wid walk the grid.
//   * VIDEO: tid follows the frame timestamp at one ID per temporal unit
//     (160 ms by default); hid/wid as for an image.
//   * AUDIO: one ID per audio frame.
//   * Audio-video blocks interleave in fixed windows: the window's video
//     frames, then its audio frames.
//   * Timestamp pseudo-tokens precede each video frame, each audio-video
//     window, and random points of standalone audio.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "omnistream/media.hpp"

namespace omnistream::mrope {

enum class Rounding : std::uint8_t { kCeil, kFloor, kNearest };

std::string_view to_string(Rounding r);
/// Accepts "ceil", "floor", "nearest". Throws Error(kInvalidArgument).
Rounding parse_rounding(std::string_view text);

/// Audio frames covering `duration_ms`; kCeil keeps the trailing partial
/// frame, kNearest rounds half up.
std::int64_t audio_frame_count(std::int64_t duration_ms, std::int64_t frame_ms,
                               Rounding rounding = Rounding::kCeil);

/// Temporal ID of a video frame relative to the start of its segment,
/// round-half-up(timestamp / unit).
std::int64_t video_frame_tid(std::int64_t timestamp_ms,
                             std::int64_t unit_ms = kDefaultAudioFrameMs);

struct TimestampConfig {
  bool enabled = true;
  /// printf-style template with exactly one %f conversion (precision
  /// optional); "%%" is a literal percent sign.
  std::string format = "[%.2fs]";
  std::int64_t tokens_per_stamp = 5;
  std::int64_t audio_interval_min_ms = 4000;
  std::int64_t audio_interval_max_ms = 12000;
  std::uint64_t seed = 0;

  /// Throws Error(kInvalidArgument) on a bad template or interval.
  void validate() const;
  std::string render(std::int64_t ms) const;
};

struct PositionOptions {
  Rounding audio_rounding = Rounding::kCeil;
  std::int64_t av_chunk_ms = 2000;
};

enum class TokenKind : std::uint8_t { kText, kImage, kVideo, kAudio, kTimestamp };

std::string_view to_string(TokenKind kind);

struct PositionTriple {
  std::int64_t tid = 0;
  std::int64_t hid = 0;
  std::int64_t wid = 0;

  std::int64_t max() const noexcept;
  std::int64_t min() const noexcept;
  friend bool operator==(const PositionTriple&, const PositionTriple&) = default;
};

struct PositionEntry {
  std::uint32_t block = 0;
  std::uint32_t segment = 0;
  std::int64_t token = 0;  // index among this segment's tokens of the same class
  TokenKind kind = TokenKind::kText;
  PositionTriple pos;
  std::int64_t stamp_ms = -1;  // timestamp value; TIMESTAMP entries only

  friend bool operator==(const PositionEntry&, const PositionEntry&) = default;
};

struct PositionTable {
  std::vector<PositionEntry> entries;

  /// One line per entry: "KIND tid hid wid", timestamp entries append the
  /// rendered stamp.
  std::string to_text(const TimestampConfig& ts) const;
};

/// Throws Error(kInvalidManifest) when manifest_validate reports anything.
PositionTable assign_positions(const MediaManifest& manifest, const TimestampConfig& ts,
                               const PositionOptions& options = {});

inline constexpr std::int64_t kDefaultTokensPerVideoFrame = 300;

struct BudgetReport {
  std::vector<std::int64_t> per_segment_tokens;
  std::vector<std::int64_t> per_segment_timestamp_tokens;
  std::int64_t timestamp_tokens = 0;
  std::int64_t total = 0;
  std::int64_t limit = 0;
  bool fits = true;
};

/// Token count for the manifest without materialising positions. Video is
/// charged `tokens_per_video_frame` per frame regardless of its grid.
BudgetReport context_budget(const MediaManifest& manifest, const TimestampConfig& ts,
                            std::int64_t tokens_per_video_frame = kDefaultTokensPerVideoFrame,
                            const PositionOptions& options = {});

/// Offsets (ms from segment start) of the random timestamps placed into a
/// standalone audio segment covering `covered_ms` of audio.
std::vector<std::int64_t> audio_stamp_offsets(std::int64_t duration_ms, std::int64_t covered_ms,
                                              const TimestampConfig& ts);

}  // namespace omnistream::mrope
