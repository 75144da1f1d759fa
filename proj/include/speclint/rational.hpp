#pragma once

#include <cstdint>
#include <string>

namespace speclint {

/* Exact rational with a positive denominator, always kept in lowest terms.
 * Used for formula interval bounds and trace timestamps, where alignment
 * must be exact. Magnitudes are desk scale; arithmetic goes through
 * 128-bit intermediates to dodge overflow. */
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /* Canonical text: "30" when integral, "3/10" otherwise. */
  std::string str() const;

  /* Accepts integers ("30"), decimals ("0.5"), and fractions ("3/4").
   * Throws Error on malformed input. */
  static Rational parse(const std::string &text);

  /* Nearest rational to a double, exact for integers, continued-fraction
   * approximation (1e-12 relative) otherwise. Used when ingesting JSON
   * timestamps from external simulators. */
  static Rational from_double(double x);

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator-(const Rational &a, const Rational &b);
  friend Rational operator*(const Rational &a, const Rational &b);
  friend Rational operator/(const Rational &a, const Rational &b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational &a, const Rational &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational &a, const Rational &b) {
    return !(a == b);
  }
  friend bool operator<(const Rational &a, const Rational &b);
  friend bool operator<=(const Rational &a, const Rational &b) {
    return a < b || a == b;
  }
  friend bool operator>(const Rational &a, const Rational &b) { return b < a; }
  friend bool operator>=(const Rational &a, const Rational &b) {
    return b <= a;
  }

  /* gcd(a/b, c/d) = gcd(ad, cb)/(bd); gcd(0, x) = |x|. */
  static Rational gcd(const Rational &a, const Rational &b);

  /* True iff this is an integer multiple of step (step > 0). */
  bool divisible_by(const Rational &step) const;

private:
  std::int64_t num_;
  std::int64_t den_;
};

} // namespace speclint
