#ifndef DIAGFORGE_RATIONAL_APPROX_HPP
#define DIAGFORGE_RATIONAL_APPROX_HPP

#include <vector>

#include "diagforge/rational.hpp"

namespace diagforge {

// One halving step: rationals q_k in [r_k/2, r_k) whose ratio vector and
// whose remainder ratio vector both stay within eps of r_k / sum(r). The
// interval width delta starts at min(r_k/2) and halves until both ratio
// bounds verify; more than 64 halvings raises ToleranceUnreachable.
//
// Exact-rational interface: callers with double data convert via
// Rational::from_double (exact), so the bracketing q_k in [r_k/2, r_k) holds
// with no floating slack.
std::vector<Rational> approx_rationals_step(const std::vector<Rational>& r,
                                            double eps);
std::vector<Rational> approx_rationals_step(const std::vector<double>& r,
                                            double eps);

struct RationalTable {
  // rows[j][k]: the j-th refinement of p_k; all entries nonnegative.
  std::vector<std::vector<Rational>> rows;
  // remainder[k] = p_k - sum_j rows[j][k], in [0, 2^-J p_k]; appending it as
  // a final row makes the column sums exactly p_k.
  std::vector<Rational> remainder;
};

// Iterated halving table of depth J for a probability vector p: every row's
// ratio vector stays within eps of p, and partial column sums satisfy
//   sum_{j<=l} rows[j][k]  in  [(1 - 2^-l) p_k, p_k).
RationalTable approx_rationals_table(const std::vector<Rational>& p, double eps,
                                     int depth);
RationalTable approx_rationals_table(const std::vector<double>& p, double eps,
                                     int depth);

}  // namespace diagforge

#endif
