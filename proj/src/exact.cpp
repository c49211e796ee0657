// Copyright 2026 The recurdim Authors
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

#include "recurdim/exact.hpp"

#include <cctype>
#include <string>

#include "recurdim/error.hpp"

namespace recurdim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  BigInt digits = 0;
  long scale = 0;
  bool seen_digit = false;
  bool after_point = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (after_point) ++scale;
      seen_digit = true;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("malformed number '" + std::string(text) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') {
      throw ParseError("malformed number '" + std::string(text) + "'");
    }
    const std::string exponent(s.substr(i + 1));
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exponent, &used);
    } catch (...) {
      throw ParseError("malformed exponent in '" + std::string(text) + "'");
    }
    if (used != exponent.size() || e > 4000 || e < -4000) {
      throw ParseError("malformed exponent in '" + std::string(text) + "'");
    }
    scale -= e;
  }
  Rational value(digits);
  BigInt ten_power = 1;
  for (long k = 0; k < (scale < 0 ? -scale : scale); ++k) ten_power *= 10;
  value = scale >= 0 ? value / Rational(ten_power) : value * Rational(ten_power);
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  const Rational num = parse_decimal(s.substr(0, slash));
  const Rational den = parse_decimal(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace recurdim
