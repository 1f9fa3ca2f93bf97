#ifndef DIAGFORGE_SIMPLEX_HPP
#define DIAGFORGE_SIMPLEX_HPP

#include <vector>

#include "diagforge/rational.hpp"

namespace diagforge {

// Outcome of an exact feasibility solve for A x = b, x >= 0. Exactly one of
// the two certificates is populated: a solution with A x = b verified
// exactly, or a dual vector y with y^T A <= 0 componentwise and y^T b > 0.
struct FeasibilityOutcome {
  bool feasible = false;
  std::vector<Rational> solution;
  std::vector<Rational> farkas;
  Rational pairing;  // y^T b when infeasible
};

// Phase-one simplex with Bland's rule over exact rationals. rows[i] is one
// equality constraint; both certificates are re-verified before returning.
FeasibilityOutcome solve_exact_feasibility(
    const std::vector<std::vector<Rational>>& rows,
    const std::vector<Rational>& rhs);

}  // namespace diagforge

#endif
