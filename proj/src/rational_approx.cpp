#include "diagforge/rational_approx.hpp"

#include <algorithm>

#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

std::vector<Rational> to_rationals(const std::vector<double>& xs) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(Rational::from_double(x));
  return out;
}

Rational vec_sum(const std::vector<Rational>& xs) {
  Rational s = 0;
  for (const auto& x : xs) s += x;
  return s;
}

}  // namespace

std::vector<Rational> approx_rationals_step(const std::vector<Rational>& r,
                                            double eps) {
  const int n = static_cast<int>(r.size());
  if (n == 0) throw InvalidInput("approx_rationals_step: empty input");
  if (eps <= 0.0) throw InvalidInput("approx_rationals_step: eps must be > 0");
  for (const auto& rk : r)
    if (rk <= Rational(0) || rk >= Rational(1))
      throw InvalidInput("approx_rationals_step: entries must lie in (0,1)");

  const Rational half(1, 2);
  const Rational eps_q = Rational::from_double(eps);
  Rational delta = r[0] * half;
  for (const auto& rk : r) delta = std::min(delta, rk * half);

  const Rational rsum = vec_sum(r);
  for (int iter = 0; iter <= 64; ++iter) {
    std::vector<Rational> q(n);
    for (int k = 0; k < n; ++k) {
      // any rational in [r_k/2, r_k/2 + delta); the simplest keeps later
      // matrix models small
      Rational lo = r[k] * half;
      q[k] = simplest_rational_in(lo, lo + delta, false, true);
    }
    const Rational qsum = vec_sum(q);
    const Rational remsum = rsum - qsum;
    bool ok = qsum > Rational(0) && remsum > Rational(0);
    for (int k = 0; ok && k < n; ++k) {
      Rational target = r[k] / rsum;
      if ((target - q[k] / qsum).abs() >= eps_q) ok = false;
      if (ok && (target - (r[k] - q[k]) / remsum).abs() >= eps_q) ok = false;
    }
    if (ok) return q;
    delta = delta * half;
  }
  throw ToleranceUnreachable(
      "approx_rationals_step: 64 halvings exhausted; input scaling is "
      "pathological for eps=" +
      std::to_string(eps));
}

std::vector<Rational> approx_rationals_step(const std::vector<double>& r,
                                            double eps) {
  return approx_rationals_step(to_rationals(r), eps);
}

RationalTable approx_rationals_table(const std::vector<Rational>& p, double eps,
                                     int depth) {
  const int n = static_cast<int>(p.size());
  if (n == 0) throw InvalidInput("approx_rationals_table: empty input");
  if (depth < 1) throw InvalidInput("approx_rationals_table: depth must be >= 1");
  Rational total = vec_sum(p);
  if ((total - Rational(1)).abs() > Rational::from_double(1e-12))
    throw InvalidInput("approx_rationals_table: entries must sum to 1");

  RationalTable table;
  std::vector<Rational> rem = p;
  double eps_j = eps / 2.0;
  for (int j = 0; j < depth; ++j) {
    std::vector<Rational> q = approx_rationals_step(rem, eps_j);
    for (int k = 0; k < n; ++k) rem[k] -= q[k];
    table.rows.push_back(std::move(q));
    eps_j /= 2.0;
  }
  table.remainder = std::move(rem);
  return table;
}

RationalTable approx_rationals_table(const std::vector<double>& p, double eps,
                                     int depth) {
  return approx_rationals_table(to_rationals(p), eps, depth);
}

}  // namespace diagforge
