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

// Adaptive-rate interleaving of text and speech tokens.
//
// A single stream carries both text and speech symbols. For every prefix with
// t text and s speech symbols, the stream must satisfy
//
//     s * ratio.den <= ratio.num * t
//
// where ratio is the item-level speech/text ratio S/T. The multiplicative form
// makes t = 0 well defined: no speech may precede the first text symbol.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omnistream/media.hpp"
#include "omnistream/rational.hpp"

namespace omnistream::aria {

struct AriaBudget {
  std::int64_t text_total = 0;
  std::int64_t speech_total = 0;
  Rational ratio;

  /// ratio = S/T in lowest terms. T == 0 is accepted only when S == 0.
  static AriaBudget from_totals(std::int64_t text_total, std::int64_t speech_total);

  /// Totals with an externally supplied bound. A complete plan exists only
  /// when S * den <= num * T.
  static AriaBudget with_ratio(std::int64_t text_total, std::int64_t speech_total,
                               Rational ratio);

  friend bool operator==(const AriaBudget&, const AriaBudget&) = default;
};

/// True when the prefix respects the bound.
bool prefix_ok(PrefixCount prefix, const Rational& ratio) noexcept;

/// True when one more speech symbol after `prefix` would still respect it.
bool admits_speech(PrefixCount prefix, const Rational& ratio) noexcept;

struct InterleavePlan {
  std::vector<StreamSymbol> slots;
  AriaBudget budget;

  /// Compact form, one character per slot: 'T' text, 'S' speech.
  std::string str() const;
};

std::string to_string(std::span<const StreamSymbol> slots);
/// Throws Error(kInvalidArgument) on characters other than 'T'/'S'.
std::vector<StreamSymbol> parse_slots(std::string_view text);

struct ConstraintViolation {
  enum class Kind : std::uint8_t {
    kPrefixRatio,     // prefix at `index` breaks the bound
    kCountMismatch,   // complete sequence does not match the budget totals
  };
  Kind kind = Kind::kPrefixRatio;
  std::size_t index = 0;  // slot index; slots.size() for a count mismatch
  PrefixCount prefix;     // counts including the slot at `index`

  friend bool operator==(const ConstraintViolation&, const ConstraintViolation&) = default;
};

/// Scans left to right and reports the first violation, if any.
std::optional<ConstraintViolation> check_plan(std::span<const StreamSymbol> slots,
                                              const AriaBudget& budget);

/// Complete plan with every speech symbol at its earliest feasible slot.
/// Throws Error(kInfeasibleRatio) when the budget cannot be completed.
InterleavePlan plan_eager(const AriaBudget& budget);

/// Eager continuation after an already emitted prefix. Only the remaining
/// slots are returned. Throws Error(kInvalidPrefix) for a prefix that breaks
/// the bound or exceeds the totals.
InterleavePlan resume(const AriaBudget& budget, PrefixCount prefix);

/// Minimal number of text symbols that must precede the first speech symbol,
/// ceil(den / num). Throws Error(kZeroRatio) when num == 0.
std::int64_t first_speech_text_need(const Rational& ratio);

/// Text symbols required before speech symbol number `speech_index` (0-based)
/// may be emitted: ceil((speech_index + 1) * den / num).
std::int64_t text_needed_for_speech(std::int64_t speech_index, const Rational& ratio);

/// Slot-by-slot eager planner for open-ended streams where totals may be
/// unknown. Single owner; not thread safe.
class IncrementalPlanner {
 public:
  explicit IncrementalPlanner(Rational ratio,
                              std::optional<std::int64_t> text_total = std::nullopt,
                              std::optional<std::int64_t> speech_total = std::nullopt);

  /// Next symbol under the eager policy given which symbol kinds still have
  /// material available. Returns nullopt when neither can be emitted.
  std::optional<StreamSymbol> next(bool text_available, bool speech_available);

  /// Records an externally chosen symbol. Throws Error(kInvalidPrefix) if the
  /// symbol would break the bound or overrun a known total.
  void emit(StreamSymbol symbol);

  bool can_emit_speech() const noexcept;
  PrefixCount prefix() const noexcept { return prefix_; }
  const Rational& ratio() const noexcept { return ratio_; }

 private:
  Rational ratio_;
  std::optional<std::int64_t> text_total_;
  std::optional<std::int64_t> speech_total_;
  PrefixCount prefix_;
};

}  // namespace omnistream::aria
