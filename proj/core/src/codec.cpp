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

#include "omnistream/codec.hpp"

#include <charconv>

#include "omnistream/error.hpp"

namespace omnistream::codec {

void CodecLayout::validate() const {
  if (num_codebooks < 1) throw Error(ErrorCode::kInvalidArgument, "num_codebooks must be >= 1");
  if (codebook_size < 2) throw Error(ErrorCode::kInvalidArgument, "codebook_size must be >= 2");
  if (!(frame_rate_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "frame_rate_hz must be > 0");
  if (chunk_frames < 1) throw Error(ErrorCode::kInvalidArgument, "chunk_frames must be >= 1");
}

FrameAssembler::FrameAssembler(CodecLayout layout, std::int64_t first_index)
    : layout_(layout), next_index_(first_index) {
  layout_.validate();
}

CodecFrame FrameAssembler::make_frame(Code base, std::span<const Code> residuals) {
  const auto expected = static_cast<std::size_t>(layout_.num_codebooks - 1);
  if (residuals.size() != expected) {
    throw Error(ErrorCode::kResidualArity, "expected " + std::to_string(expected) +
                                               " residual codes, got " +
                                               std::to_string(residuals.size()));
  }
  auto in_range = [this](Code c) { return c >= 0 && c < layout_.codebook_size; };
  if (!in_range(base)) {
    throw Error(ErrorCode::kCodeOutOfRange, "base code " + std::to_string(base) + " out of range");
  }
  for (Code c : residuals) {
    if (!in_range(c)) {
      throw Error(ErrorCode::kCodeOutOfRange, "residual code " + std::to_string(c) + " out of range");
    }
  }
  return CodecFrame{next_index_++, base, {residuals.begin(), residuals.end()}};
}

Chunker::Chunker(CodecLayout layout) : layout_(layout) {
  layout_.validate();
  pending_.reserve(static_cast<std::size_t>(layout_.chunk_frames));
}

std::optional<CodecChunk> Chunker::push(CodecFrame frame) {
  if (last_index_ && frame.index != *last_index_ + 1) {
    throw Error(ErrorCode::kOutOfOrderFrame, "frame " + std::to_string(frame.index) +
                                                 " pushed after frame " +
                                                 std::to_string(*last_index_));
  }
  last_index_ = frame.index;
  pending_.push_back(std::move(frame));
  if (pending_.size() < static_cast<std::size_t>(layout_.chunk_frames)) return std::nullopt;

  CodecChunk chunk{pending_.front().index, std::move(pending_), false};
  pending_ = {};
  pending_.reserve(static_cast<std::size_t>(layout_.chunk_frames));
  return chunk;
}

std::optional<CodecChunk> Chunker::flush() {
  if (pending_.empty()) return std::nullopt;
  CodecChunk chunk{pending_.front().index, std::move(pending_), true};
  pending_ = {};
  return chunk;
}

double audio_seconds(std::int64_t frame_count, const CodecLayout& layout) {
  return static_cast<double>(frame_count) / layout.frame_rate_hz;
}

namespace {

void append_frame(std::string& out, const CodecFrame& f) {
  out += std::to_string(f.index);
  out += ' ';
  out += std::to_string(f.base);
  for (Code c : f.residuals) {
    out += ' ';
    out += std::to_string(c);
  }
  out += '\n';
}

template <typename Int>
Int parse_field(std::string_view tok, std::size_t line_no) {
  Int v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": bad integer '" + std::string(tok) + "'");
  }
  return v;
}

CodecFrame parse_frame_line(std::string_view line, std::size_t line_no, const CodecLayout& layout) {
  std::vector<std::string_view> toks;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t sp = line.find(' ', pos);
    const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
    toks.push_back(line.substr(pos, end - pos));
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  if (toks.size() != static_cast<std::size_t>(layout.num_codebooks) + 1) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected " +
                                            std::to_string(layout.num_codebooks + 1) + " fields");
  }
  CodecFrame f;
  f.index = parse_field<std::int64_t>(toks[0], line_no);
  f.base = parse_field<Code>(toks[1], line_no);
  for (std::size_t i = 2; i < toks.size(); ++i) f.residuals.push_back(parse_field<Code>(toks[i], line_no));
  auto bad = [&](Code c) { return c < 0 || c >= layout.codebook_size; };
  if (bad(f.base)) throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": code out of range");
  for (Code c : f.residuals) {
    if (bad(c)) throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": code out of range");
  }
  return f;
}

// Splits on '\n'; every line including the last must be newline-terminated.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  if (text.empty()) return lines;
  if (text.back() != '\n') throw Error(ErrorCode::kParseError, "missing trailing newline");
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

std::string serialize_frames(std::span<const CodecFrame> frames) {
  std::string out;
  for (const CodecFrame& f : frames) append_frame(out, f);
  return out;
}

std::string serialize_chunks(std::span<const CodecChunk> chunks) {
  std::string out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i > 0) out += '\n';
    for (const CodecFrame& f : chunks[i].frames) append_frame(out, f);
  }
  return out;
}

std::vector<CodecFrame> parse_frames(std::string_view text, const CodecLayout& layout) {
  layout.validate();
  std::vector<CodecFrame> frames;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) throw Error(ErrorCode::kParseError, "line " + std::to_string(i + 1) + ": empty");
    frames.push_back(parse_frame_line(lines[i], i + 1, layout));
  }
  return frames;
}

std::vector<CodecChunk> parse_chunks(std::string_view text, const CodecLayout& layout) {
  layout.validate();
  std::vector<CodecChunk> chunks;
  CodecChunk current;
  auto close = [&](std::size_t line_no) {
    if (current.frames.empty()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": empty chunk");
    }
    current.first_frame_index = current.frames.front().index;
    current.is_final = current.frames.size() < static_cast<std::size_t>(layout.chunk_frames);
    chunks.push_back(std::move(current));
    current = {};
  };
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      close(i + 1);
      continue;
    }
    current.frames.push_back(parse_frame_line(lines[i], i + 1, layout));
  }
  if (!lines.empty()) close(lines.size());
  return chunks;
}

}  // namespace omnistream::codec
