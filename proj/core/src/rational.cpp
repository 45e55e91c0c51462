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

#include "omnistream/rational.hpp"

#include <charconv>
#include <numeric>

#include "int128.hpp"
#include "omnistream/error.hpp"

namespace omnistream {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInfeasibleRatio: return "InfeasibleRatio";
    case ErrorCode::kInvalidPrefix: return "InvalidPrefix";
    case ErrorCode::kZeroRatio: return "ZeroRatio";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kResidualArity: return "ResidualArity";
    case ErrorCode::kCodeOutOfRange: return "CodeOutOfRange";
    case ErrorCode::kOutOfOrderFrame: return "OutOfOrderFrame";
    case ErrorCode::kUnconfiguredConcurrency: return "UnconfiguredConcurrency";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kValidationError: return "ValidationError";
  }
  return "Unknown";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "rational denominator must be positive");
  }
  if (num < 0) {
    throw Error(ErrorCode::kInvalidArgument, "rational numerator must be non-negative");
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed rational component '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rational::str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

bool rational_le(const Rational& a, const Rational& b) noexcept {
  const detail::Int128 lhs = static_cast<detail::Int128>(a.num()) * b.den();
  const detail::Int128 rhs = static_cast<detail::Int128>(b.num()) * a.den();
  return lhs <= rhs;
}

}  // namespace omnistream
