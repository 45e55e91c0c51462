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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace omnistream::codec {

using Code = std::int32_t;

/// Shape of the multi-codebook speech stream.
struct CodecLayout {
  std::int32_t num_codebooks = 16;   // base codebook + residuals
  std::int32_t codebook_size = 2048;
  double frame_rate_hz = 12.5;
  std::int32_t chunk_frames = 1;

  /// Throws Error(kInvalidArgument) unless Q >= 1, V >= 2, F > 0, C >= 1.
  void validate() const;
  friend bool operator==(const CodecLayout&, const CodecLayout&) = default;
};

/// One speech frame: the Talker's base code plus the residual codes the MTP
/// stage predicts for the same step.
struct CodecFrame {
  std::int64_t index = 0;
  Code base = 0;
  std::vector<Code> residuals;

  friend bool operator==(const CodecFrame&, const CodecFrame&) = default;
};

struct CodecChunk {
  std::int64_t first_frame_index = 0;
  std::vector<CodecFrame> frames;
  bool is_final = false;

  friend bool operator==(const CodecChunk&, const CodecChunk&) = default;
};

/// Validates codes and hands out consecutive frame indices.
class FrameAssembler {
 public:
  explicit FrameAssembler(CodecLayout layout, std::int64_t first_index = 0);

  /// Throws Error(kResidualArity) or Error(kCodeOutOfRange).
  CodecFrame make_frame(Code base, std::span<const Code> residuals);

  std::int64_t next_index() const noexcept { return next_index_; }
  const CodecLayout& layout() const noexcept { return layout_; }

 private:
  CodecLayout layout_;
  std::int64_t next_index_;
};

/// Groups frames into chunks of `chunk_frames` for the waveform renderer.
/// Streaming state; one owner at a time.
class Chunker {
 public:
  explicit Chunker(CodecLayout layout);

  /// Returns a chunk once `chunk_frames` frames are buffered. Frame indices
  /// must be consecutive; anything else throws Error(kOutOfOrderFrame).
  std::optional<CodecChunk> push(CodecFrame frame);

  /// Emits the buffered partial chunk, marked final, if there is one.
  std::optional<CodecChunk> flush();

  std::size_t buffered() const noexcept { return pending_.size(); }

 private:
  CodecLayout layout_;
  std::vector<CodecFrame> pending_;
  std::optional<std::int64_t> last_index_;
};

/// frame_count / frame_rate_hz.
double audio_seconds(std::int64_t frame_count, const CodecLayout& layout);

/// "index base r1 ... r(Q-1)" per line.
std::string serialize_frames(std::span<const CodecFrame> frames);
/// Frame lines, one blank line between consecutive chunks.
std::string serialize_chunks(std::span<const CodecChunk> chunks);

/// Strict inverse of serialize_frames; checks arity and code range against
/// `layout`. Throws Error(kParseError).
std::vector<CodecFrame> parse_frames(std::string_view text, const CodecLayout& layout);
/// Inverse of serialize_chunks. A chunk shorter than chunk_frames is final.
std::vector<CodecChunk> parse_chunks(std::string_view text, const CodecLayout& layout);

}  // namespace omnistream::codec
