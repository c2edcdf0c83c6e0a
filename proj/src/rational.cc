// Copyright 2026 The Frugal UFL Authors
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

#include "frugal_ufl/rational.h"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace frugal_ufl {
namespace {

mpz_class PowerOfTen(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void BadNumber(std::string_view text) {
  throw std::invalid_argument("not an exact decimal or fraction: '" +
                              std::string(text) + "'");
}

// Inserts a decimal point so that `digits` holds value * 10^scale.
std::string PlaceDecimalPoint(std::string digits, long scale, bool negative) {
  if (scale > 0) {
    if (static_cast<long>(digits.size()) <= scale) {
      digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1,
                    '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
  } else if (scale < 0) {
    digits.append(static_cast<std::size_t>(-scale), '0');
  }
  return negative ? "-" + digits : digits;
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::domain_error("zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.IsZero()) throw std::domain_error("division by zero");
  value_ /= other.value_;
  return *this;
}

Rational Rational::Parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) BadNumber(text);

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::string_view num = s.substr(0, slash);
    const std::string_view den = s.substr(slash + 1);
    if (!AllDigits(num) || !AllDigits(den)) BadNumber(text);
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) BadNumber(text);
    mpq_class q(negative ? mpz_class(-n) : n, d);
    return Rational(std::move(q));
  }

  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!AllDigits(exp_text) || exp_text.size() > 6) BadNumber(text);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }

  std::string digits;
  long fraction_digits = 0;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !AllDigits(whole)) ||
        (!frac.empty() && !AllDigits(frac)) || (whole.empty() && frac.empty()))
      BadNumber(text);
    digits = std::string(whole) + std::string(frac);
    fraction_digits = static_cast<long>(frac.size());
  } else {
    if (!AllDigits(s)) BadNumber(text);
    digits = std::string(s);
  }

  mpz_class n(digits, 10);
  if (negative) n = -n;
  const long scale = fraction_digits - exponent;
  mpq_class q;
  if (scale >= 0) {
    q = mpq_class(n, PowerOfTen(static_cast<unsigned long>(scale)));
  } else {
    q = mpq_class(n * PowerOfTen(static_cast<unsigned long>(-scale)));
  }
  return Rational(std::move(q));
}

std::string Rational::ToFraction() const {
  if (IsInteger()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::ToExactString() const {
  mpz_class den = value_.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(),
                                  mpz_class(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(),
                                   mpz_class(5).get_mpz_t());
  if (den != 1) return ToFraction();
  const unsigned long scale = std::max(twos, fives);
  mpz_class scaled = value_.get_num() * PowerOfTen(scale) / value_.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  return PlaceDecimalPoint(scaled.get_str(), static_cast<long>(scale),
                           negative);
}

std::string Rational::ToDecimal(int significant_digits) const {
  if (significant_digits < 1) significant_digits = 1;
  if (IsZero()) return "0";
  mpq_class magnitude = abs(value_);

  long exponent = static_cast<long>(std::floor(std::log10(magnitude.get_d())));
  auto ten_to = [](long e) {
    return e >= 0 ? mpq_class(PowerOfTen(static_cast<unsigned long>(e)))
                  : mpq_class(1, PowerOfTen(static_cast<unsigned long>(-e)));
  };
  while (ten_to(exponent) > magnitude) --exponent;
  while (ten_to(exponent + 1) <= magnitude) ++exponent;

  long shift = significant_digits - 1 - exponent;
  auto round_scaled = [&](long sh) {
    mpq_class scaled = magnitude * ten_to(sh);
    mpz_class twice = 2 * scaled.get_num() + scaled.get_den();
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), twice.get_mpz_t(),
               mpz_class(2 * scaled.get_den()).get_mpz_t());
    return out;
  };
  mpz_class rounded = round_scaled(shift);
  if (rounded >= PowerOfTen(static_cast<unsigned long>(significant_digits))) {
    ++exponent;
    shift = significant_digits - 1 - exponent;
    rounded = round_scaled(shift);
  }
  const bool negative = IsNegative();
  if (exponent >= -6 && exponent < 21) {
    return PlaceDecimalPoint(rounded.get_str(), shift, negative);
  }
  std::string mantissa =
      PlaceDecimalPoint(rounded.get_str(), significant_digits - 1, negative);
  return mantissa + "e" + std::to_string(exponent);
}

mpz_class CeilScaledSqrt(const Rational& value, int digits) {
  if (value.IsNegative()) throw std::domain_error("sqrt of negative value");
  mpq_class target = value.raw() * mpq_class(PowerOfTen(2ul * digits));
  mpz_class floor_target;
  mpz_fdiv_q(floor_target.get_mpz_t(), target.get_num_mpz_t(),
             target.get_den_mpz_t());
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), floor_target.get_mpz_t());
  if (mpq_class(root * root) >= target) return root;
  return root + 1;
}

const Rational& Cost::value() const {
  if (!value_) throw std::domain_error("infinite cost has no numeric value");
  return *value_;
}

}  // namespace frugal_ufl
