// SPDX-License-Identifier: Apache-2.0
#include "breather/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "breather/error.hpp"

namespace breather {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max())
    throw Error(ErrorKind::DomainError, "rational overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw Error(ErrorKind::DomainError, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::DomainError, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  std::string s = trim(text);
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational p = parse(s.substr(0, slash));
    Rational q = parse(s.substr(slash + 1));
    if (q.num() == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
    return p / q;
  }
  // decimal with optional exponent
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  i128 mant = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (ch >= '0' && ch <= '9') {
      mant = mant * 10 + (ch - '0');
      if (mant > (i128(1) << 100)) throw Error(ErrorKind::ParseError, "too many digits in '" + s + "'");
      if (dot) --scale;
      digits = true;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw Error(ErrorKind::ParseError, "not a number: '" + s + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw Error(ErrorKind::ParseError, "not a number: '" + s + "'");
    char* end = nullptr;
    long e = std::strtol(s.c_str() + i + 1, &end, 10);
    if (end == s.c_str() + i + 1 || *end != '\0') throw Error(ErrorKind::ParseError, "bad exponent in '" + s + "'");
    if (e > 40 || e < -40) throw Error(ErrorKind::ParseError, "exponent out of range in '" + s + "'");
    scale += static_cast<int>(e);
  }
  i128 num = neg ? -mant : mant;
  i128 den = 1;
  while (scale > 0) {
    num *= 10;
    --scale;
  }
  while (scale < 0) {
    den *= 10;
    ++scale;
  }
  return make(num, den);
}

std::optional<Rational> Rational::from_double(double x, std::int64_t max_den, double rel_tol) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational(0);
  double ax = std::fabs(x);
  // convergents h/k of the continued fraction of |x|
  long double rem = ax;
  i128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    long double a = std::floor(rem);
    if (a > 1e15L) break;
    i128 ai = static_cast<i128>(a);
    i128 h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::fabs(approx - ax) <= rel_tol * ax) {
      Rational r = make(h1, k1);
      return x < 0 ? -r : r;
    }
    long double frac = rem - a;
    if (frac <= 0) break;
    rem = 1.0L / frac;
  }
  return std::nullopt;
}

std::int64_t isqrt_exact(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(v))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
    if (static_cast<i128>(c) * c == v) return c;
  return -1;
}

std::optional<Rational> Rational::sqrt() const {
  std::int64_t p = isqrt_exact(num_), q = isqrt_exact(den_);
  if (p < 0 || q < 0) return std::nullopt;
  return Rational(p, q);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::DomainError, "rational division by zero");
  return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}
bool operator<(const Rational& a, const Rational& b) {
  return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

Number Number::parse(const std::string& text) { return Number(Rational::parse(text)); }

std::string Number::str() const {
  if (exact) return exact->str();
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

namespace {
template <class Op, class FOp>
Number combine(const Number& a, const Number& b, Op op, FOp fop) {
  if (a.exact && b.exact) {
    try {
      return Number(op(*a.exact, *b.exact));
    } catch (const Error&) {
    }
  }
  return Number(fop(a.value, b.value));
}
}  // namespace

Number operator+(const Number& a, const Number& b) {
  return combine(a, b, [](auto x, auto y) { return x + y; }, [](double x, double y) { return x + y; });
}
Number operator-(const Number& a, const Number& b) {
  return combine(a, b, [](auto x, auto y) { return x - y; }, [](double x, double y) { return x - y; });
}
Number operator*(const Number& a, const Number& b) {
  return combine(a, b, [](auto x, auto y) { return x * y; }, [](double x, double y) { return x * y; });
}
Number operator/(const Number& a, const Number& b) {
  return combine(a, b, [](auto x, auto y) { return x / y; }, [](double x, double y) { return x / y; });
}

}  // namespace breather
