#include "diagforge/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "diagforge/errors.hpp"

namespace diagforge {

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty rational literal");
  try {
    return Rational(BigRational(s));
  } catch (const std::exception&) {
    throw InvalidInput("bad rational literal: \"" + s + "\"");
  }
}

BigInt rational_floor(const Rational& q) {
  BigInt n = q.numerator();
  BigInt d = q.denominator();
  BigInt t = n / d;  // truncates toward zero
  if (n < 0 && t * d != n) t -= 1;
  return t;
}

Rational simplest_rational_in(const Rational& lo, const Rational& hi,
                              bool lo_strict, bool hi_strict) {
  if (lo > hi || (lo == hi && (lo_strict || hi_strict)))
    throw InvalidInput("empty interval in simplest_rational_in");

  BigInt fl = rational_floor(lo);
  BigInt z = (lo.is_integer() && !lo_strict) ? lo.numerator() : fl + 1;
  Rational zq(z);
  if (zq < hi || (zq == hi && !hi_strict)) return zq;

  // The interval sits inside (fl, fl+1): recurse on reciprocals.
  Rational lo2 = lo - Rational(fl);
  Rational hi2 = hi - Rational(fl);
  if (lo2.is_zero()) {
    // (fl, fl + hi2): reciprocals range over [1/hi2, infinity), so the
    // simplest choice is the smallest admissible integer.
    Rational inv = hi2.inverse();
    BigInt z2 = (inv.is_integer() && !hi_strict) ? inv.numerator()
                                                 : rational_floor(inv) + 1;
    return Rational(fl) + Rational(BigInt(1), z2);
  }
  Rational inner =
      simplest_rational_in(hi2.inverse(), lo2.inverse(), hi_strict, lo_strict);
  return Rational(fl) + inner.inverse();
}

Rational rationalize(double x, double tol) {
  if (!std::isfinite(x)) throw InvalidInput("cannot rationalize non-finite");
  if (tol <= 0.0) return Rational::from_double(x);
  Rational lo = Rational::from_double(x) - Rational::from_double(tol);
  Rational hi = Rational::from_double(x) + Rational::from_double(tol);
  return simplest_rational_in(lo, hi, false, false);
}

namespace {

// Rounds values*N to integer counts summing to N; false when the repair
// cannot settle the total.
bool round_partition_at(const std::vector<double>& values, long N,
                        std::vector<long>& a, double& err) {
  const int n = static_cast<int>(values.size());
  a.assign(n, 0);
  long sum = 0;
  std::vector<double> frac(n);
  for (int k = 0; k < n; ++k) {
    double target = values[k] * static_cast<double>(N);
    a[k] = std::lround(target);
    if (a[k] < 0) a[k] = 0;
    if (a[k] > N) a[k] = N;
    sum += a[k];
    frac[k] = target - static_cast<double>(a[k]);
  }
  // Nudge the entries rounded hardest in the helpful direction.
  while (sum != N) {
    int step = sum < N ? 1 : -1;
    int pick = -1;
    double best = -2.0;
    for (int k = 0; k < n; ++k) {
      long cand = a[k] + step;
      if (cand < 0 || cand > N) continue;
      double f = step > 0 ? frac[k] : -frac[k];
      if (f > best) {
        best = f;
        pick = k;
      }
    }
    if (pick < 0) return false;
    a[pick] += step;
    frac[pick] -= static_cast<double>(step);
    sum += step;
  }
  err = 0.0;
  for (int k = 0; k < n; ++k)
    err = std::max(err, std::abs(values[k] - static_cast<double>(a[k]) /
                                                 static_cast<double>(N)));
  return true;
}

void check_partition_values(const std::vector<double>& values) {
  if (values.empty()) throw InvalidInput("empty partition");
  for (double v : values)
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
      throw InvalidInput("partition value outside [0,1]");
}

}  // namespace

RationalizedPartition rationalize_partition(const std::vector<double>& values,
                                            double tol, long max_denominator) {
  check_partition_values(values);
  std::vector<long> a;
  double err = 0.0;
  for (long N = 1; N <= max_denominator; ++N) {
    if (!round_partition_at(values, N, a, err)) continue;
    if (err < tol) {
      RationalizedPartition best;
      best.counts.assign(a.begin(), a.end());
      best.denominator = N;
      best.max_error = err;
      return best;
    }
  }
  throw ToleranceUnreachable(
      "no partition denominator up to " + std::to_string(max_denominator) +
      " meets tolerance " + std::to_string(tol));
}

RationalizedPartition rationalize_partition_prefer_exact(
    const std::vector<double>& values, double tol, long max_denominator) {
  check_partition_values(values);
  std::vector<long> a;
  double err = 0.0;
  RationalizedPartition fallback;
  bool have_fallback = false;
  for (long N = 1; N <= max_denominator; ++N) {
    if (!round_partition_at(values, N, a, err)) continue;
    if (err <= 1e-13) {
      RationalizedPartition exact;
      exact.counts.assign(a.begin(), a.end());
      exact.denominator = N;
      exact.max_error = err;
      return exact;
    }
    if (!have_fallback && err < tol) {
      fallback.counts.assign(a.begin(), a.end());
      fallback.denominator = N;
      fallback.max_error = err;
      have_fallback = true;
    }
  }
  if (have_fallback) return fallback;
  throw ToleranceUnreachable(
      "no partition denominator up to " + std::to_string(max_denominator) +
      " meets tolerance " + std::to_string(tol));
}

}  // namespace diagforge
