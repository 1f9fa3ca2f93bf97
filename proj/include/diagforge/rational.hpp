#ifndef DIAGFORGE_RATIONAL_HPP
#define DIAGFORGE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <vector>

namespace diagforge {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact fraction, always in lowest terms with positive denominator (the
// canonical form maintained by the backing type).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(const BigInt& n) : v_(n) {}
  Rational(const BigInt& num, const BigInt& den) : v_(num, den) {}
  explicit Rational(const BigRational& v) : v_(v) {}

  // Exact binary expansion of the double; no rounding.
  static Rational from_double(double x) { return Rational(BigRational(x)); }

  // Parses "p/q" or "p".
  static Rational parse(const std::string& s);

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const {
    return boost::multiprecision::denominator(v_);
  }

  double to_double() const { return v_.convert_to<double>(); }
  std::string str() const { return v_.str(); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }

  Rational inverse() const { return Rational(BigRational(1) / v_); }
  Rational abs() const { return v_ < 0 ? Rational(-v_) : *this; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.v_ + b.v_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.v_ - b.v_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.v_ * b.v_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return Rational(a.v_ / b.v_);
  }
  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.v_ != b.v_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.v_ <= b.v_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.v_ > b.v_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.v_ >= b.v_;
  }

 private:
  BigRational v_;
};

// Largest integer ≤ q.
BigInt rational_floor(const Rational& q);

// Smallest-denominator rational in the interval between lo and hi; each
// endpoint is excluded when its *_strict flag is set. Requires a nonempty
// interval. Among denominator ties the value closer to lo is returned.
Rational simplest_rational_in(const Rational& lo, const Rational& hi,
                              bool lo_strict, bool hi_strict);

// Smallest-denominator rational within tol of x (closed interval).
Rational rationalize(double x, double tol);

// Complex number with exact rational parts.
struct RationalComplex {
  Rational re;
  Rational im;

  RationalComplex() = default;
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static RationalComplex from_complex_exact(const std::complex<double>& z) {
    return {Rational::from_double(z.real()), Rational::from_double(z.imag())};
  }
  static RationalComplex rationalized(const std::complex<double>& z,
                                      double tol) {
    return {rationalize(z.real(), tol), rationalize(z.imag(), tol)};
  }

  std::complex<double> to_complex() const {
    return {re.to_double(), im.to_double()};
  }

  friend RationalComplex operator+(const RationalComplex& a,
                                   const RationalComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend RationalComplex operator-(const RationalComplex& a,
                                   const RationalComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend RationalComplex operator*(const Rational& s,
                                   const RationalComplex& z) {
    return {s * z.re, s * z.im};
  }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

// Rounds a real partition-of-unity vector to a/N with Σa = N. Searches the
// smallest N whose rounding error stays below tol.
struct RationalizedPartition {
  std::vector<BigInt> counts;
  BigInt denominator;
  double max_error = 0.0;
};

RationalizedPartition rationalize_partition(const std::vector<double>& values,
                                            double tol, long max_denominator);

// Same search, but returns the first denominator reproducing the values to
// machine accuracy when one exists below the cap; exactness-sensitive
// constructions want the true denominator rather than a coarser fraction
// that also meets tol.
RationalizedPartition rationalize_partition_prefer_exact(
    const std::vector<double>& values, double tol, long max_denominator);

}  // namespace diagforge

#endif
