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
#include <string>
#include <string_view>

namespace omnistream {

/// Non-negative exact fraction num/den, always held in lowest terms.
///
/// Used for speech-to-text ratios. Comparisons cross-multiply in 128-bit
/// integers, so they are exact for every representable value.
class Rational {
 public:
  constexpr Rational() noexcept = default;

  /// Throws Error(kInvalidArgument) when num < 0 or den <= 0.
  Rational(std::int64_t num, std::int64_t den);

  /// Accepts "a/b" or a bare integer "a".
  static Rational parse(std::string_view text);

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// a <= b, decided by a.num * b.den <= b.num * a.den.
bool rational_le(const Rational& a, const Rational& b) noexcept;

}  // namespace omnistream
