#include "speclint/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "speclint/errors.hpp"

namespace speclint {

namespace {

std::int64_t checked64(__int128 v, const char *what) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw Error(std::string("rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

Rational make_reduced(__int128 n, __int128 d, const char *what) {
  if (d == 0) {
    throw Error("rational with zero denominator");
  }
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return Rational(checked64(n, what), checked64(d, what));
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  Rational r = make_reduced(n, d, "constructor");
  num_ = r.num_;
  den_ = r.den_;
}

std::string Rational::str() const {
  if (den_ == 1) {
    return std::to_string(num_);
  }
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string &text) {
  if (text.empty()) {
    throw Error("empty rational literal");
  }
  size_t slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      size_t p1 = 0, p2 = 0;
      std::int64_t n = std::stoll(text.substr(0, slash), &p1);
      std::int64_t d = std::stoll(text.substr(slash + 1), &p2);
      if (p1 != slash || p2 != text.size() - slash - 1) {
        throw Error("malformed fraction '" + text + "'");
      }
      return Rational(n, d);
    }
    size_t dot = text.find('.');
    if (dot == std::string::npos) {
      size_t p = 0;
      std::int64_t n = std::stoll(text, &p);
      if (p != text.size()) {
        throw Error("malformed integer '" + text + "'");
      }
      return Rational(n);
    }
    // Decimal: sign, integer part, fractional part.
    bool neg = text[0] == '-';
    std::string digits = text;
    digits.erase(dot, 1);
    if (neg) {
      digits.erase(0, 1);
    }
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos) {
      throw Error("malformed decimal '" + text + "'");
    }
    size_t frac_digits = text.size() - dot - 1;
    std::int64_t n = digits.empty() ? 0 : std::stoll(digits);
    std::int64_t d = 1;
    for (size_t i = 0; i < frac_digits; ++i) {
      if (d > INT64_MAX / 10) {
        throw Error("decimal '" + text + "' has too many digits");
      }
      d *= 10;
    }
    return Rational(neg ? -n : n, d);
  } catch (const std::invalid_argument &) {
    throw Error("malformed rational '" + text + "'");
  } catch (const std::out_of_range &) {
    throw Error("rational '" + text + "' out of range");
  }
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error("non-finite value cannot become a rational");
  }
  if (x == std::floor(x) && std::abs(x) < 9.0e15) {
    return Rational(static_cast<std::int64_t>(x));
  }
  // Continued-fraction expansion, stop once the convergent is within
  // 1e-12 relative error.
  const double target = x;
  double frac = x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fa = std::floor(frac);
    if (std::abs(fa) > 4.0e14) {
      break;
    }
    auto a = static_cast<std::int64_t>(fa);
    std::int64_t p2 = a * p1 + p0;
    std::int64_t q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - target) <= 1e-12 * std::max(1.0, std::abs(target))) {
      return Rational(p1, q1);
    }
    double rem = frac - fa;
    if (rem == 0.0) {
      break;
    }
    frac = 1.0 / rem;
  }
  return Rational(p1, q1 == 0 ? 1 : q1);
}

Rational operator+(const Rational &a, const Rational &b) {
  __int128 n = static_cast<__int128>(a.num_) * b.den_ +
               static_cast<__int128>(b.num_) * a.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return make_reduced(n, d, "addition");
}

Rational operator-(const Rational &a, const Rational &b) { return a + (-b); }

Rational operator*(const Rational &a, const Rational &b) {
  __int128 n = static_cast<__int128>(a.num_) * b.num_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return make_reduced(n, d, "multiplication");
}

Rational operator/(const Rational &a, const Rational &b) {
  if (b.num_ == 0) {
    throw Error("rational division by zero");
  }
  __int128 n = static_cast<__int128>(a.num_) * b.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.num_;
  return make_reduced(n, d, "division");
}

bool operator<(const Rational &a, const Rational &b) {
  return static_cast<__int128>(a.num_) * b.den_ <
         static_cast<__int128>(b.num_) * a.den_;
}

Rational Rational::gcd(const Rational &a, const Rational &b) {
  __int128 n = std::abs(static_cast<__int128>(a.num_) * b.den_);
  __int128 m = std::abs(static_cast<__int128>(b.num_) * a.den_);
  while (m != 0) {
    __int128 t = n % m;
    n = m;
    m = t;
  }
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return make_reduced(n, d, "gcd");
}

bool Rational::divisible_by(const Rational &step) const {
  if (step.num_ <= 0) {
    throw Error("divisibility check against non-positive step");
  }
  Rational q = *this / step;
  return q.is_integer();
}

} // namespace speclint
