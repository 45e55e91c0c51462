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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omnistream {

// Durations and timestamps are integer milliseconds. Seconds only appear at
// I/O boundaries, converted with these two helpers.
std::int64_t seconds_to_ms(double seconds);
double ms_to_seconds(std::int64_t ms);

inline constexpr std::int64_t kDefaultAudioFrameMs = 160;
inline constexpr std::int64_t kDefaultContextLimit = 262'144;

enum class StreamSymbol : std::uint8_t { kText, kSpeech };

/// Counts of symbols emitted so far in an interleaved stream.
struct PrefixCount {
  std::int64_t text_emitted = 0;
  std::int64_t speech_emitted = 0;

  void record(StreamSymbol s) noexcept {
    if (s == StreamSymbol::kText) {
      ++text_emitted;
    } else {
      ++speech_emitted;
    }
  }

  friend bool operator==(const PrefixCount&, const PrefixCount&) = default;
};

enum class MediaKind : std::uint8_t { kText, kImage, kVideo, kAudio };

std::string_view to_string(MediaKind kind);
std::optional<MediaKind> parse_media_kind(std::string_view text);

struct Grid {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  friend bool operator==(const Grid&, const Grid&) = default;
};

/// One input segment. Only the fields belonging to `kind` should be set;
/// manifest_validate reports anything else.
struct MediaSegment {
  MediaKind kind = MediaKind::kText;
  std::optional<std::int64_t> token_count;                      // TEXT
  std::optional<Grid> grid;                                      // IMAGE, VIDEO
  std::optional<std::vector<std::int64_t>> frame_timestamps_ms;  // VIDEO
  std::optional<std::int64_t> duration_ms;                       // AUDIO

  static MediaSegment text(std::int64_t tokens);
  static MediaSegment image(std::int64_t rows, std::int64_t cols);
  static MediaSegment video(std::int64_t rows, std::int64_t cols,
                            std::vector<std::int64_t> timestamps_ms);
  static MediaSegment audio(std::int64_t duration_ms);

  friend bool operator==(const MediaSegment&, const MediaSegment&) = default;
};

struct MediaManifest {
  std::vector<MediaSegment> segments;
  std::int64_t audio_frame_ms = kDefaultAudioFrameMs;
  std::int64_t context_limit = kDefaultContextLimit;

  /// A VIDEO segment immediately followed by an AUDIO segment is treated as
  /// one audio-video pair (the video and its soundtrack).
  bool starts_av_pair(std::size_t index) const noexcept;
  bool ends_av_pair(std::size_t index) const noexcept;

  /// Length of the temporal media timeline. Paired video/audio overlap;
  /// all other temporal segments are laid end to end. TEXT and IMAGE add 0.
  std::int64_t media_duration_ms() const noexcept;

  friend bool operator==(const MediaManifest&, const MediaManifest&) = default;
};

struct ManifestViolation {
  std::optional<std::size_t> segment;  // empty for manifest-level problems
  std::string field;
  std::string message;

  friend bool operator==(const ManifestViolation&, const ManifestViolation&) = default;
};

/// Full list of invariant violations, empty when the manifest is valid.
std::vector<ManifestViolation> manifest_validate(const MediaManifest& manifest);

/// Throws Error(kInvalidManifest) carrying the first violation.
void require_valid(const MediaManifest& manifest);

}  // namespace omnistream
