#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace addicone {

/// Exact rational number with arbitrary-precision numerator/denominator.
/// Always kept in canonical form: gcd(num, den) == 1 and den > 0.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(static_cast<long>(n)) {}
  Rational(long n, long d) : q_(n, d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    q_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "n" or "n/d" (optional sign, arbitrary precision).
  static Rational parse(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: bad literal '" + s + "'");
    if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator in '" + s + "'");
    q.canonicalize();
    return Rational(q, already_canonical_tag{});
  }

  std::string str() const { return q_.get_str(); }
  double to_double() const { return q_.get_d(); }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational num() const { return Rational(mpq_class(q_.get_num()), already_canonical_tag{}); }
  Rational den() const { return Rational(mpq_class(q_.get_den()), already_canonical_tag{}); }

  /// Truncated conversion; throws unless the value is an integer fitting in long.
  long to_long() const {
    if (!is_integer() || !q_.get_num().fits_slong_p())
      throw std::domain_error("Rational: not a small integer: " + str());
    return q_.get_num().get_si();
  }

  Rational operator-() const { return Rational(mpq_class(-q_), already_canonical_tag{}); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

  const mpq_class& raw() const { return q_; }

 private:
  struct already_canonical_tag {};
  Rational(mpq_class q, already_canonical_tag) : q_(std::move(q)) {}
  mpq_class q_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.q_; }

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Exact dyadic rational equal to the given double (doubles are base-2 rationals).
inline Rational rational_from_double(double x) {
  mpq_class q(x);
  q.canonicalize();
  return Rational(q);
}

}  // namespace addicone
