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

#include "omnistream/media.hpp"

#include <algorithm>
#include <cmath>

#include "omnistream/error.hpp"

namespace omnistream {

std::int64_t seconds_to_ms(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * 1000.0));
}

double ms_to_seconds(std::int64_t ms) { return static_cast<double>(ms) / 1000.0; }

std::string_view to_string(MediaKind kind) {
  switch (kind) {
    case MediaKind::kText: return "TEXT";
    case MediaKind::kImage: return "IMAGE";
    case MediaKind::kVideo: return "VIDEO";
    case MediaKind::kAudio: return "AUDIO";
  }
  return "UNKNOWN";
}

std::optional<MediaKind> parse_media_kind(std::string_view text) {
  if (text == "TEXT") return MediaKind::kText;
  if (text == "IMAGE") return MediaKind::kImage;
  if (text == "VIDEO") return MediaKind::kVideo;
  if (text == "AUDIO") return MediaKind::kAudio;
  return std::nullopt;
}

MediaSegment MediaSegment::text(std::int64_t tokens) {
  MediaSegment s;
  s.kind = MediaKind::kText;
  s.token_count = tokens;
  return s;
}

MediaSegment MediaSegment::image(std::int64_t rows, std::int64_t cols) {
  MediaSegment s;
  s.kind = MediaKind::kImage;
  s.grid = Grid{rows, cols};
  return s;
}

MediaSegment MediaSegment::video(std::int64_t rows, std::int64_t cols,
                                 std::vector<std::int64_t> timestamps_ms) {
  MediaSegment s;
  s.kind = MediaKind::kVideo;
  s.grid = Grid{rows, cols};
  s.frame_timestamps_ms = std::move(timestamps_ms);
  return s;
}

MediaSegment MediaSegment::audio(std::int64_t duration_ms) {
  MediaSegment s;
  s.kind = MediaKind::kAudio;
  s.duration_ms = duration_ms;
  return s;
}

bool MediaManifest::starts_av_pair(std::size_t index) const noexcept {
  return index + 1 < segments.size() && segments[index].kind == MediaKind::kVideo &&
         segments[index + 1].kind == MediaKind::kAudio;
}

bool MediaManifest::ends_av_pair(std::size_t index) const noexcept {
  return index > 0 && starts_av_pair(index - 1);
}

namespace {

std::int64_t temporal_span_ms(const MediaSegment& s) {
  switch (s.kind) {
    case MediaKind::kAudio: return s.duration_ms.value_or(0);
    case MediaKind::kVideo:
      if (s.frame_timestamps_ms && !s.frame_timestamps_ms->empty()) {
        return s.frame_timestamps_ms->back();
      }
      return 0;
    default: return 0;
  }
}

}  // namespace

std::int64_t MediaManifest::media_duration_ms() const noexcept {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (starts_av_pair(i)) {
      total += std::max(temporal_span_ms(segments[i]), temporal_span_ms(segments[i + 1]));
      ++i;
      continue;
    }
    total += temporal_span_ms(segments[i]);
  }
  return total;
}

std::vector<ManifestViolation> manifest_validate(const MediaManifest& manifest) {
  std::vector<ManifestViolation> out;
  auto add = [&out](std::optional<std::size_t> seg, std::string field, std::string msg) {
    out.push_back({seg, std::move(field), std::move(msg)});
  };

  if (manifest.audio_frame_ms <= 0) {
    add(std::nullopt, "audio_frame_seconds", "audio frame length must be positive");
  }
  if (manifest.context_limit <= 0) {
    add(std::nullopt, "context_limit", "context limit must be positive");
  }

  for (std::size_t i = 0; i < manifest.segments.size(); ++i) {
    const MediaSegment& s = manifest.segments[i];
    const bool wants_tokens = s.kind == MediaKind::kText;
    const bool wants_grid = s.kind == MediaKind::kImage || s.kind == MediaKind::kVideo;
    const bool wants_timestamps = s.kind == MediaKind::kVideo;
    const bool wants_duration = s.kind == MediaKind::kAudio;

    auto presence = [&](bool wanted, bool present, const char* field) {
      if (wanted && !present) add(i, field, "required field is missing");
      if (!wanted && present) {
        add(i, field, std::string("field not allowed for ") + std::string(to_string(s.kind)));
      }
    };
    presence(wants_tokens, s.token_count.has_value(), "token_count");
    presence(wants_grid, s.grid.has_value(), "grid");
    presence(wants_timestamps, s.frame_timestamps_ms.has_value(), "frame_timestamps");
    presence(wants_duration, s.duration_ms.has_value(), "duration");

    if (wants_tokens && s.token_count && *s.token_count <= 0) {
      add(i, "token_count", "token count must be positive");
    }
    if (wants_grid && s.grid && (s.grid->rows <= 0 || s.grid->cols <= 0)) {
      add(i, "grid", "grid rows and cols must be positive");
    }
    if (wants_timestamps && s.frame_timestamps_ms) {
      const auto& ts = *s.frame_timestamps_ms;
      if (ts.empty()) add(i, "frame_timestamps", "video needs at least one frame");
      if (std::any_of(ts.begin(), ts.end(), [](std::int64_t t) { return t < 0; })) {
        add(i, "frame_timestamps", "timestamps must be non-negative");
      }
      if (std::adjacent_find(ts.begin(), ts.end(), [](std::int64_t a, std::int64_t b) {
            return b <= a;
          }) != ts.end()) {
        add(i, "frame_timestamps", "timestamps not strictly increasing");
      }
    }
    if (wants_duration && s.duration_ms && *s.duration_ms <= 0) {
      add(i, "duration", "duration must be positive");
    }
  }
  return out;
}

void require_valid(const MediaManifest& manifest) {
  const auto violations = manifest_validate(manifest);
  if (violations.empty()) return;
  const auto& v = violations.front();
  std::string where = v.segment ? "segments[" + std::to_string(*v.segment) + "]." : "";
  throw Error(ErrorCode::kInvalidManifest, where + v.field + ": " + v.message);
}

}  // namespace omnistream
