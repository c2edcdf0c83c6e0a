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

#ifndef FRUGAL_UFL_RATIONAL_H_
#define FRUGAL_UFL_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace frugal_ufl {

// Exact rational number. Every cost, distance, bid and payment in the engine
// is one of these; comparisons never involve rounding.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(runtime/explicit)
  Rational(long numerator, long denominator);
  explicit Rational(const mpq_class& value) : value_(value) {
    value_.canonicalize();
  }
  explicit Rational(mpq_class&& value) : value_(std::move(value)) {
    value_.canonicalize();
  }

  // Accepts "12", "-0.125", "3.5e-2" and "7/17". Throws std::invalid_argument
  // on anything else; binary floating point never enters.
  static Rational Parse(std::string_view text);

  // "p/q", or "p" when the denominator is 1.
  std::string ToFraction() const;
  // Lossless rendering: a finite decimal when the denominator has only the
  // prime factors 2 and 5, otherwise "p/q". Parse() inverts it exactly.
  std::string ToExactString() const;
  // Rounded rendering with the given number of significant digits.
  std::string ToDecimal(int significant_digits = 12) const;
  double ToDouble() const { return value_.get_d(); }

  bool IsZero() const { return sgn(value_) == 0; }
  bool IsNegative() const { return sgn(value_) < 0; }
  bool IsPositive() const { return sgn(value_) > 0; }
  bool IsInteger() const { return value_.get_den() == 1; }

  const mpz_class& numerator() const { return value_.get_num(); }
  const mpz_class& denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  Rational& operator+=(const Rational& other) {
    value_ += other.value_;
    return *this;
  }
  Rational& operator-=(const Rational& other) {
    value_ -= other.value_;
    return *this;
  }
  Rational& operator*=(const Rational& other) {
    value_ *= other.value_;
    return *this;
  }
  // Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    return Rational(mpq_class(-a.value_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.ToExactString();
  }

 private:
  mpq_class value_;
};

inline const Rational& Min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& Max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

// Smallest integer n with n >= sqrt(value) * 10^digits. Exact; used to
// round Euclidean distances up onto a decimal grid, which keeps the
// triangle inequality intact (ceil(a + b) <= ceil(a) + ceil(b)).
mpz_class CeilScaledSqrt(const Rational& value, int digits);

// A cost that may be the "no feasible facility" sentinel. The sentinel is
// never converted to a number; value() throws on it.
class Cost {
 public:
  Cost(Rational value) : value_(std::move(value)) {}  // NOLINT
  static Cost Infinite() { return Cost(); }

  bool is_finite() const { return value_.has_value(); }
  bool is_infinite() const { return !value_.has_value(); }
  const Rational& value() const;

  std::string ToString() const {
    return value_ ? value_->ToExactString() : std::string("inf");
  }

  friend bool operator==(const Cost& a, const Cost& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    if (a.is_infinite()) return std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    return *a.value_ <=> *b.value_;
  }

 private:
  Cost() = default;
  std::optional<Rational> value_;
};

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_RATIONAL_H_
