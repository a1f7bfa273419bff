// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace breather {

// Exact rational with 64-bit parts; arithmetic throws DomainError on overflow.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  // Accepts "p/q", integers and finite decimals ("0.4", "-1.25e-1").
  static Rational parse(const std::string& text);
  // Continued-fraction reconstruction; nullopt if no p/q with q <= max_den is
  // within rel_tol of x.
  static std::optional<Rational> from_double(double x, std::int64_t max_den = 1000000,
                                             double rel_tol = 1e-12);

  // Exact square root when both parts are perfect squares.
  std::optional<Rational> sqrt() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  int sign() const { return (num_ > 0) - (num_ < 0); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// A real parameter that remembers its exact rational value when one is known.
struct Number {
  double value = 0.0;
  std::optional<Rational> exact;

  Number() = default;
  Number(double v) : value(v) {}
  Number(const Rational& r) : value(r.to_double()), exact(r) {}

  static Number parse(const std::string& text);
  std::string str() const;
};

Number operator+(const Number& a, const Number& b);
Number operator-(const Number& a, const Number& b);
Number operator*(const Number& a, const Number& b);
Number operator/(const Number& a, const Number& b);

std::int64_t isqrt_exact(std::int64_t v);  // -1 if v is not a perfect square

}  // namespace breather
