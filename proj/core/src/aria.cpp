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

#include "omnistream/aria.hpp"

#include "int128.hpp"
#include "omnistream/error.hpp"

namespace omnistream::aria {

namespace {

using i128 = detail::Int128;

void check_totals(std::int64_t text_total, std::int64_t speech_total) {
  if (text_total < 0 || speech_total < 0) {
    throw Error(ErrorCode::kInvalidArgument, "token totals must be non-negative");
  }
}

bool completable(const AriaBudget& b) {
  return static_cast<i128>(b.speech_total) * b.ratio.den() <=
         static_cast<i128>(b.ratio.num()) * b.text_total;
}

std::string describe(const AriaBudget& b) {
  return "T=" + std::to_string(b.text_total) + " S=" + std::to_string(b.speech_total) +
         " R=" + b.ratio.str();
}

// Eager fill from `prefix` to the budget totals, appended to `out`.
void fill_eager(const AriaBudget& b, PrefixCount prefix, std::vector<StreamSymbol>& out) {
  out.reserve(out.size() + static_cast<std::size_t>((b.text_total - prefix.text_emitted) +
                                                    (b.speech_total - prefix.speech_emitted)));
  while (prefix.text_emitted < b.text_total || prefix.speech_emitted < b.speech_total) {
    StreamSymbol next = StreamSymbol::kText;
    if (prefix.speech_emitted < b.speech_total && admits_speech(prefix, b.ratio)) {
      next = StreamSymbol::kSpeech;
    } else if (prefix.text_emitted >= b.text_total) {
      throw Error(ErrorCode::kInfeasibleRatio,
                  "speech cannot be completed under the ratio bound (" + describe(b) + ")");
    }
    out.push_back(next);
    prefix.record(next);
  }
}

}  // namespace

AriaBudget AriaBudget::from_totals(std::int64_t text_total, std::int64_t speech_total) {
  check_totals(text_total, speech_total);
  if (text_total == 0) {
    if (speech_total > 0) {
      throw Error(ErrorCode::kInfeasibleRatio, "speech tokens require at least one text token");
    }
    return {0, 0, Rational(0, 1)};
  }
  return {text_total, speech_total, Rational(speech_total, text_total)};
}

AriaBudget AriaBudget::with_ratio(std::int64_t text_total, std::int64_t speech_total,
                                  Rational ratio) {
  check_totals(text_total, speech_total);
  return {text_total, speech_total, ratio};
}

bool prefix_ok(PrefixCount prefix, const Rational& ratio) noexcept {
  return static_cast<i128>(prefix.speech_emitted) * ratio.den() <=
         static_cast<i128>(ratio.num()) * prefix.text_emitted;
}

bool admits_speech(PrefixCount prefix, const Rational& ratio) noexcept {
  ++prefix.speech_emitted;
  return prefix_ok(prefix, ratio);
}

std::string to_string(std::span<const StreamSymbol> slots) {
  std::string out;
  out.reserve(slots.size());
  for (StreamSymbol s : slots) out.push_back(s == StreamSymbol::kText ? 'T' : 'S');
  return out;
}

std::string InterleavePlan::str() const { return to_string(slots); }

std::vector<StreamSymbol> parse_slots(std::string_view text) {
  std::vector<StreamSymbol> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == 'T') {
      out.push_back(StreamSymbol::kText);
    } else if (c == 'S') {
      out.push_back(StreamSymbol::kSpeech);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("unexpected plan character '") + c + "'");
    }
  }
  return out;
}

std::optional<ConstraintViolation> check_plan(std::span<const StreamSymbol> slots,
                                              const AriaBudget& budget) {
  PrefixCount prefix;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    prefix.record(slots[i]);
    if (!prefix_ok(prefix, budget.ratio)) {
      return ConstraintViolation{ConstraintViolation::Kind::kPrefixRatio, i, prefix};
    }
  }
  if (prefix.text_emitted != budget.text_total || prefix.speech_emitted != budget.speech_total) {
    return ConstraintViolation{ConstraintViolation::Kind::kCountMismatch, slots.size(), prefix};
  }
  return std::nullopt;
}

InterleavePlan plan_eager(const AriaBudget& budget) {
  if (budget.speech_total > 0 && (budget.text_total == 0 || !completable(budget))) {
    throw Error(ErrorCode::kInfeasibleRatio,
                "no complete schedule satisfies the ratio bound (" + describe(budget) + ")");
  }
  InterleavePlan plan{{}, budget};
  fill_eager(budget, PrefixCount{}, plan.slots);
  return plan;
}

InterleavePlan resume(const AriaBudget& budget, PrefixCount prefix) {
  if (prefix.text_emitted < 0 || prefix.speech_emitted < 0 ||
      prefix.text_emitted > budget.text_total || prefix.speech_emitted > budget.speech_total) {
    throw Error(ErrorCode::kInvalidPrefix, "prefix counts exceed the budget totals");
  }
  if (!prefix_ok(prefix, budget.ratio)) {
    throw Error(ErrorCode::kInvalidPrefix, "prefix already violates the ratio bound");
  }
  if (budget.speech_total > prefix.speech_emitted && !completable(budget)) {
    throw Error(ErrorCode::kInfeasibleRatio,
                "no complete schedule satisfies the ratio bound (" + describe(budget) + ")");
  }
  InterleavePlan plan{{}, budget};
  fill_eager(budget, prefix, plan.slots);
  return plan;
}

std::int64_t text_needed_for_speech(std::int64_t speech_index, const Rational& ratio) {
  if (ratio.num() == 0) {
    throw Error(ErrorCode::kZeroRatio, "a zero ratio never admits speech");
  }
  const i128 need = static_cast<i128>(speech_index + 1) * ratio.den();
  return static_cast<std::int64_t>((need + ratio.num() - 1) / ratio.num());
}

std::int64_t first_speech_text_need(const Rational& ratio) {
  return text_needed_for_speech(0, ratio);
}

IncrementalPlanner::IncrementalPlanner(Rational ratio, std::optional<std::int64_t> text_total,
                                       std::optional<std::int64_t> speech_total)
    : ratio_(ratio), text_total_(text_total), speech_total_(speech_total) {}

bool IncrementalPlanner::can_emit_speech() const noexcept {
  if (speech_total_ && prefix_.speech_emitted >= *speech_total_) return false;
  return admits_speech(prefix_, ratio_);
}

std::optional<StreamSymbol> IncrementalPlanner::next(bool text_available, bool speech_available) {
  if (speech_available && can_emit_speech()) {
    prefix_.record(StreamSymbol::kSpeech);
    return StreamSymbol::kSpeech;
  }
  if (text_available && (!text_total_ || prefix_.text_emitted < *text_total_)) {
    prefix_.record(StreamSymbol::kText);
    return StreamSymbol::kText;
  }
  return std::nullopt;
}

void IncrementalPlanner::emit(StreamSymbol symbol) {
  if (symbol == StreamSymbol::kSpeech) {
    if (!can_emit_speech()) {
      throw Error(ErrorCode::kInvalidPrefix, "speech symbol not admitted at this prefix");
    }
  } else if (text_total_ && prefix_.text_emitted >= *text_total_) {
    throw Error(ErrorCode::kInvalidPrefix, "text total already reached");
  }
  prefix_.record(symbol);
}

}  // namespace omnistream::aria
