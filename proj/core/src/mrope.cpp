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

#include "omnistream/mrope.hpp"

#include <algorithm>
#include <cstdio>

#include "omnistream/error.hpp"
#include "omnistream/rng.hpp"

namespace omnistream::mrope {

std::string_view to_string(Rounding r) {
  switch (r) {
    case Rounding::kCeil: return "ceil";
    case Rounding::kFloor: return "floor";
    case Rounding::kNearest: return "nearest";
  }
  return "ceil";
}

Rounding parse_rounding(std::string_view text) {
  if (text == "ceil") return Rounding::kCeil;
  if (text == "floor") return Rounding::kFloor;
  if (text == "nearest") return Rounding::kNearest;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown rounding mode '" + std::string(text) + "' (ceil|floor|nearest)");
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kText: return "TEXT";
    case TokenKind::kImage: return "IMAGE";
    case TokenKind::kVideo: return "VIDEO";
    case TokenKind::kAudio: return "AUDIO";
    case TokenKind::kTimestamp: return "TIMESTAMP";
  }
  return "UNKNOWN";
}

std::int64_t PositionTriple::max() const noexcept { return std::max({tid, hid, wid}); }
std::int64_t PositionTriple::min() const noexcept { return std::min({tid, hid, wid}); }

std::int64_t audio_frame_count(std::int64_t duration_ms, std::int64_t frame_ms,
                               Rounding rounding) {
  if (frame_ms <= 0) throw Error(ErrorCode::kInvalidArgument, "audio frame length must be positive");
  if (duration_ms <= 0) return 0;
  switch (rounding) {
    case Rounding::kCeil: return (duration_ms + frame_ms - 1) / frame_ms;
    case Rounding::kFloor: return duration_ms / frame_ms;
    case Rounding::kNearest: return (2 * duration_ms + frame_ms) / (2 * frame_ms);
  }
  return 0;
}

std::int64_t video_frame_tid(std::int64_t timestamp_ms, std::int64_t unit_ms) {
  if (unit_ms <= 0) throw Error(ErrorCode::kInvalidArgument, "temporal unit must be positive");
  // round half up: floor(t/u + 1/2) == floor((2t + u) / 2u)
  return (2 * timestamp_ms + unit_ms) / (2 * unit_ms);
}

// --- timestamp rendering ---------------------------------------------------

namespace {

struct StampTemplate {
  std::string prefix;
  std::string suffix;
  int precision = 6;
};

StampTemplate parse_template(const std::string& format) {
  StampTemplate out;
  bool seen = false;
  std::string* sink = &out.prefix;
  for (std::size_t i = 0; i < format.size(); ++i) {
    const char c = format[i];
    if (c != '%') {
      sink->push_back(c);
      continue;
    }
    if (i + 1 < format.size() && format[i + 1] == '%') {
      sink->push_back('%');
      ++i;
      continue;
    }
    if (seen) throw Error(ErrorCode::kInvalidArgument, "timestamp format has more than one conversion");
    std::size_t j = i + 1;
    if (j < format.size() && format[j] == '.') {
      ++j;
      int precision = 0;
      std::size_t digits = 0;
      while (j < format.size() && format[j] >= '0' && format[j] <= '9' && digits < 2) {
        precision = precision * 10 + (format[j] - '0');
        ++j;
        ++digits;
      }
      if (digits == 0 || precision > 9) {
        throw Error(ErrorCode::kInvalidArgument, "timestamp precision must be 0..9");
      }
      out.precision = precision;
    }
    if (j >= format.size() || format[j] != 'f') {
      throw Error(ErrorCode::kInvalidArgument, "timestamp format supports only %f / %.Nf");
    }
    seen = true;
    i = j;
    sink = &out.suffix;
  }
  if (!seen) throw Error(ErrorCode::kInvalidArgument, "timestamp format needs one %f conversion");
  return out;
}

}  // namespace

void TimestampConfig::validate() const {
  if (tokens_per_stamp < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tokens_per_stamp must be at least 1");
  }
  if (audio_interval_min_ms <= 0 || audio_interval_min_ms > audio_interval_max_ms) {
    throw Error(ErrorCode::kInvalidArgument, "audio stamp interval needs 0 < min <= max");
  }
  (void)parse_template(format);
}

std::string TimestampConfig::render(std::int64_t ms) const {
  const StampTemplate t = parse_template(format);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", t.precision, ms_to_seconds(ms));
  return t.prefix + buf + t.suffix;
}

std::vector<std::int64_t> audio_stamp_offsets(std::int64_t duration_ms, std::int64_t covered_ms,
                                              const TimestampConfig& ts) {
  std::vector<std::int64_t> out;
  if (!ts.enabled) return out;
  const std::int64_t limit = std::min(duration_ms, covered_ms);
  // Seeded from the segment's own length so a segment's stamps do not depend
  // on what else is in the manifest.
  SplitMix64 rng(mix_seed(ts.seed, static_cast<std::uint64_t>(duration_ms)));
  for (std::int64_t at = 0; at < limit;
       at += rng.uniform(ts.audio_interval_min_ms, ts.audio_interval_max_ms)) {
    out.push_back(at);
  }
  return out;
}

// --- layout ----------------------------------------------------------------

namespace {

struct AvWindow {
  std::int64_t start_ms = 0;
  std::size_t video_begin = 0;
  std::size_t video_end = 0;
  std::int64_t audio_begin = 0;
  std::int64_t audio_end = 0;
};

// Non-empty interleave windows of an audio-video pair, in time order.
std::vector<AvWindow> av_windows(const std::vector<std::int64_t>& video_ts,
                                 std::int64_t audio_frames, std::int64_t frame_ms,
                                 std::int64_t chunk_ms) {
  std::vector<AvWindow> out;
  std::size_t vi = 0;
  std::int64_t ai = 0;
  while (vi < video_ts.size() || ai < audio_frames) {
    std::int64_t k = INT64_MAX;
    if (vi < video_ts.size()) k = std::min(k, video_ts[vi] / chunk_ms);
    if (ai < audio_frames) k = std::min(k, ai * frame_ms / chunk_ms);
    const std::int64_t end = (k + 1) * chunk_ms;
    AvWindow w{k * chunk_ms, vi, vi, ai, ai};
    while (vi < video_ts.size() && video_ts[vi] < end) ++vi;
    while (ai < audio_frames && ai * frame_ms < end) ++ai;
    w.video_end = vi;
    w.audio_end = ai;
    out.push_back(w);
  }
  return out;
}

class TableBuilder {
 public:
  TableBuilder(const MediaManifest& m, const TimestampConfig& ts, const PositionOptions& opt)
      : m_(m), ts_(ts), opt_(opt) {}

  PositionTable build() {
    for (std::size_t i = 0; i < m_.segments.size(); ++i) {
      block_max_ = -1;
      if (m_.starts_av_pair(i)) {
        av_pair(i);
        ++i;
      } else {
        switch (m_.segments[i].kind) {
          case MediaKind::kText: text(i); break;
          case MediaKind::kImage: image(i); break;
          case MediaKind::kVideo: video(i); break;
          case MediaKind::kAudio: audio(i); break;
        }
      }
      if (block_max_ >= 0) {
        start_ = block_max_ + 1;
        ++block_;
      }
    }
    return std::move(table_);
  }

 private:
  void push(std::size_t segment, std::int64_t token, TokenKind kind, PositionTriple pos,
            std::int64_t stamp_ms = -1) {
    table_.entries.push_back({block_, static_cast<std::uint32_t>(segment), token, kind, pos,
                              stamp_ms});
    block_max_ = std::max(block_max_, pos.max());
  }

  void stamp(std::size_t segment, std::int64_t& counter, std::int64_t tid, std::int64_t ms) {
    if (!ts_.enabled) return;
    for (std::int64_t k = 0; k < ts_.tokens_per_stamp; ++k) {
      push(segment, counter++, TokenKind::kTimestamp, {tid, tid, tid}, ms);
    }
  }

  void frame_grid(std::size_t segment, std::int64_t frame, const Grid& g, std::int64_t tid) {
    for (std::int64_t r = 0; r < g.rows; ++r) {
      for (std::int64_t c = 0; c < g.cols; ++c) {
        push(segment, (frame * g.rows + r) * g.cols + c, TokenKind::kVideo,
             {tid, start_ + r, start_ + c});
      }
    }
  }

  void text(std::size_t i) {
    const std::int64_t n = *m_.segments[i].token_count;
    for (std::int64_t k = 0; k < n; ++k) push(i, k, TokenKind::kText, {start_ + k, start_ + k, start_ + k});
  }

  void image(std::size_t i) {
    const Grid g = *m_.segments[i].grid;
    for (std::int64_t r = 0; r < g.rows; ++r) {
      for (std::int64_t c = 0; c < g.cols; ++c) {
        push(i, r * g.cols + c, TokenKind::kImage, {start_, start_ + r, start_ + c});
      }
    }
  }

  void video(std::size_t i) {
    const auto& seg = m_.segments[i];
    const auto& ts = *seg.frame_timestamps_ms;
    std::int64_t stamps = 0;
    for (std::size_t f = 0; f < ts.size(); ++f) {
      const std::int64_t tid = start_ + video_frame_tid(ts[f], m_.audio_frame_ms);
      stamp(i, stamps, tid, ts[f]);
      frame_grid(i, static_cast<std::int64_t>(f), *seg.grid, tid);
    }
  }

  void audio(std::size_t i) {
    const std::int64_t duration = *m_.segments[i].duration_ms;
    const std::int64_t frames = audio_frame_count(duration, m_.audio_frame_ms, opt_.audio_rounding);
    const auto offsets = audio_stamp_offsets(duration, frames * m_.audio_frame_ms, ts_);
    std::int64_t stamps = 0;
    std::size_t next_stamp = 0;
    for (std::int64_t j = 0; j < frames; ++j) {
      while (next_stamp < offsets.size() && offsets[next_stamp] / m_.audio_frame_ms == j) {
        stamp(i, stamps, start_ + j, offsets[next_stamp]);
        ++next_stamp;
      }
      push(i, j, TokenKind::kAudio, {start_ + j, start_ + j, start_ + j});
    }
  }

  void av_pair(std::size_t vi) {
    const std::size_t ai = vi + 1;
    const auto& video_seg = m_.segments[vi];
    const auto& ts = *video_seg.frame_timestamps_ms;
    const std::int64_t frames = audio_frame_count(*m_.segments[ai].duration_ms,
                                                  m_.audio_frame_ms, opt_.audio_rounding);
    std::int64_t stamps = 0;
    for (const AvWindow& w : av_windows(ts, frames, m_.audio_frame_ms, opt_.av_chunk_ms)) {
      std::int64_t first_tid = INT64_MAX;
      if (w.video_begin < w.video_end) {
        first_tid = video_frame_tid(ts[w.video_begin], m_.audio_frame_ms);
      }
      if (w.audio_begin < w.audio_end) first_tid = std::min(first_tid, w.audio_begin);
      stamp(vi, stamps, start_ + first_tid, w.start_ms);
      for (std::size_t f = w.video_begin; f < w.video_end; ++f) {
        frame_grid(vi, static_cast<std::int64_t>(f), *video_seg.grid,
                   start_ + video_frame_tid(ts[f], m_.audio_frame_ms));
      }
      for (std::int64_t j = w.audio_begin; j < w.audio_end; ++j) {
        push(ai, j, TokenKind::kAudio, {start_ + j, start_ + j, start_ + j});
      }
    }
  }

  const MediaManifest& m_;
  const TimestampConfig& ts_;
  const PositionOptions& opt_;
  PositionTable table_;
  std::int64_t start_ = 0;
  std::int64_t block_max_ = -1;
  std::uint32_t block_ = 0;
};

void check_options(const PositionOptions& opt) {
  if (opt.av_chunk_ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "audio-video chunk length must be positive");
  }
}

}  // namespace

PositionTable assign_positions(const MediaManifest& manifest, const TimestampConfig& ts,
                               const PositionOptions& options) {
  require_valid(manifest);
  ts.validate();
  check_options(options);
  return TableBuilder(manifest, ts, options).build();
}

std::string PositionTable::to_text(const TimestampConfig& ts) const {
  std::string out;
  out.reserve(entries.size() * 16);
  for (const PositionEntry& e : entries) {
    out += to_string(e.kind);
    out += ' ';
    out += std::to_string(e.pos.tid);
    out += ' ';
    out += std::to_string(e.pos.hid);
    out += ' ';
    out += std::to_string(e.pos.wid);
    if (e.kind == TokenKind::kTimestamp) {
      out += ' ';
      out += ts.render(e.stamp_ms);
    }
    out += '\n';
  }
  return out;
}

BudgetReport context_budget(const MediaManifest& manifest, const TimestampConfig& ts,
                            std::int64_t tokens_per_video_frame, const PositionOptions& options) {
  require_valid(manifest);
  ts.validate();
  check_options(options);
  if (tokens_per_video_frame < 0) {
    throw Error(ErrorCode::kInvalidArgument, "tokens_per_video_frame must be non-negative");
  }

  const auto& segs = manifest.segments;
  const std::int64_t frame_ms = manifest.audio_frame_ms;
  const std::int64_t stamp_cost = ts.enabled ? ts.tokens_per_stamp : 0;

  BudgetReport r;
  r.per_segment_tokens.assign(segs.size(), 0);
  r.per_segment_timestamp_tokens.assign(segs.size(), 0);

  for (std::size_t i = 0; i < segs.size(); ++i) {
    const MediaSegment& s = segs[i];
    switch (s.kind) {
      case MediaKind::kText: r.per_segment_tokens[i] = *s.token_count; break;
      case MediaKind::kImage: r.per_segment_tokens[i] = s.grid->rows * s.grid->cols; break;
      case MediaKind::kVideo:
        r.per_segment_tokens[i] =
            static_cast<std::int64_t>(s.frame_timestamps_ms->size()) * tokens_per_video_frame;
        break;
      case MediaKind::kAudio:
        r.per_segment_tokens[i] = audio_frame_count(*s.duration_ms, frame_ms, options.audio_rounding);
        break;
    }
  }

  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (manifest.starts_av_pair(i)) {
      const auto windows = av_windows(*segs[i].frame_timestamps_ms, r.per_segment_tokens[i + 1],
                                      frame_ms, options.av_chunk_ms);
      r.per_segment_timestamp_tokens[i] = static_cast<std::int64_t>(windows.size()) * stamp_cost;
      ++i;
    } else if (segs[i].kind == MediaKind::kVideo) {
      r.per_segment_timestamp_tokens[i] =
          static_cast<std::int64_t>(segs[i].frame_timestamps_ms->size()) * stamp_cost;
    } else if (segs[i].kind == MediaKind::kAudio) {
      const std::int64_t covered = r.per_segment_tokens[i] * frame_ms;
      r.per_segment_timestamp_tokens[i] =
          static_cast<std::int64_t>(audio_stamp_offsets(*segs[i].duration_ms, covered, ts).size()) *
          stamp_cost;
    }
  }

  for (std::size_t i = 0; i < segs.size(); ++i) {
    r.timestamp_tokens += r.per_segment_timestamp_tokens[i];
    r.total += r.per_segment_tokens[i] + r.per_segment_timestamp_tokens[i];
  }
  r.limit = manifest.context_limit;
  r.fits = r.total <= r.limit;
  return r;
}

}  // namespace omnistream::mrope
