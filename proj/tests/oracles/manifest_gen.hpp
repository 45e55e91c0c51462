// Random manifests and independent scans of position tables.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "omnistream/media.hpp"
#include "omnistream/mrope.hpp"
#include "omnistream/rng.hpp"

namespace oracle {

inline omnistream::MediaManifest random_manifest(omnistream::SplitMix64& rng, int max_segments = 6) {
  using omnistream::MediaSegment;
  omnistream::MediaManifest m;
  const auto n = rng.uniform(1, max_segments);
  for (std::int64_t i = 0; i < n; ++i) {
    switch (rng.uniform(0, 4)) {
      case 0: m.segments.push_back(MediaSegment::text(rng.uniform(1, 40))); break;
      case 1: m.segments.push_back(MediaSegment::image(rng.uniform(1, 6), rng.uniform(1, 6))); break;
      case 2:
      case 3: {
        std::vector<std::int64_t> ts;
        std::int64_t at = rng.uniform(0, 700);
        const auto frames = rng.uniform(1, 12);
        for (std::int64_t f = 0; f < frames; ++f) {
          ts.push_back(at);
          at += rng.uniform(1, 1500);
        }
        m.segments.push_back(MediaSegment::video(rng.uniform(1, 4), rng.uniform(1, 4), ts));
        // Half the videos carry their soundtrack.
        if (rng.uniform(0, 1) == 1) m.segments.push_back(MediaSegment::audio(rng.uniform(1, 20'000)));
        break;
      }
      default: m.segments.push_back(MediaSegment::audio(rng.uniform(1, 40'000))); break;
    }
  }
  return m;
}

struct BlockSpan {
  std::int64_t min = INT64_MAX;
  std::int64_t max = INT64_MIN;
};

// Min and max ID per block, from a plain scan of the table.
inline std::map<std::uint32_t, BlockSpan> block_spans(const omnistream::mrope::PositionTable& t) {
  std::map<std::uint32_t, BlockSpan> spans;
  for (const auto& e : t.entries) {
    auto& s = spans[e.block];
    s.min = std::min({s.min, e.pos.tid, e.pos.hid, e.pos.wid});
    s.max = std::max({s.max, e.pos.tid, e.pos.hid, e.pos.wid});
  }
  return spans;
}

// Empty string when every block starts at 1 + previous block max (and the
// first block at 0); otherwise a description of the first failure.
inline std::string contiguity_failure(const omnistream::mrope::PositionTable& t) {
  const auto spans = block_spans(t);
  std::int64_t expected = 0;
  std::uint32_t expected_block = 0;
  for (const auto& [block, span] : spans) {
    if (block != expected_block) return "block ids not consecutive at " + std::to_string(block);
    if (span.min != expected) {
      return "block " + std::to_string(block) + " starts at " + std::to_string(span.min) +
             ", expected " + std::to_string(expected);
    }
    expected = span.max + 1;
    ++expected_block;
  }
  return {};
}

// Audio entries of one segment advance their tid one per frame.
inline bool audio_resolution_ok(const omnistream::mrope::PositionTable& t) {
  std::map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> first;  // segment -> (token, tid)
  for (const auto& e : t.entries) {
    if (e.kind != omnistream::mrope::TokenKind::kAudio) continue;
    if (e.pos.tid != e.pos.hid || e.pos.tid != e.pos.wid) return false;
    auto [it, inserted] = first.try_emplace(e.segment, e.token, e.pos.tid);
    if (!inserted && e.pos.tid - it->second.second != e.token - it->second.first) return false;
  }
  return true;
}

}  // namespace oracle
