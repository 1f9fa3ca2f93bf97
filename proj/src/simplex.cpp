#include "diagforge/simplex.hpp"

#include <stdexcept>

#include "diagforge/errors.hpp"

namespace diagforge {

FeasibilityOutcome solve_exact_feasibility(
    const std::vector<std::vector<Rational>>& rows,
    const std::vector<Rational>& rhs) {
  const int m = static_cast<int>(rows.size());
  if (rhs.size() != rows.size())
    throw InvalidInput("constraint rows and right-hand sides differ");
  const int nv = m == 0 ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != nv)
      throw InvalidInput("ragged constraint matrix");

  FeasibilityOutcome out;
  if (m == 0) {
    out.feasible = true;
    out.solution.assign(nv, Rational(0));
    return out;
  }

  // Tableau [A | I | b] with rhs made nonnegative; remember the sign flips to
  // map the dual back to the caller's orientation.
  const int cols = nv + m + 1;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols, 0));
  std::vector<int> sign(m, 1);
  for (int i = 0; i < m; ++i) {
    sign[i] = rhs[i] < Rational(0) ? -1 : 1;
    for (int j = 0; j < nv; ++j)
      t[i][j] = sign[i] < 0 ? -rows[i][j] : rows[i][j];
    t[i][nv + i] = 1;
    t[i][cols - 1] = sign[i] < 0 ? -rhs[i] : rhs[i];
  }

  // Minimize the artificial total: reduced costs start at c_j - 1^T A_j.
  std::vector<Rational> obj(cols, 0);
  for (int j = 0; j < nv; ++j) {
    Rational s = 0;
    for (int i = 0; i < m; ++i) s += t[i][j];
    obj[j] = -s;
  }

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = nv + i;

  auto pivot = [&](int pr, int pc) {
    Rational inv = t[pr][pc].inverse();
    for (int j = 0; j < cols; ++j) t[pr][j] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == pr || t[i][pc].is_zero()) continue;
      Rational f = t[i][pc];
      for (int j = 0; j < cols; ++j) t[i][j] -= f * t[pr][j];
    }
    Rational fo = obj[pc];
    if (!fo.is_zero())
      for (int j = 0; j < cols; ++j) obj[j] -= fo * t[pr][j];
    basis[pr] = pc;
  };

  // Bland's rule: smallest eligible indices, no cycling.
  while (true) {
    int enter = -1;
    for (int j = 0; j < nv + m; ++j)
      if (obj[j] < Rational(0)) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Rational best;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= Rational(0)) continue;
      Rational ratio = t[i][cols - 1] / t[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) throw std::logic_error("phase-one objective unbounded");
    pivot(leave, enter);
  }

  Rational value = 0;  // remaining artificial mass at optimum
  for (int i = 0; i < m; ++i)
    if (basis[i] >= nv) value += t[i][cols - 1];

  if (value > Rational(0)) {
    // Infeasible: the simplex multipliers certify it. For artificial column
    // i the reduced cost is 1 - y_i.
    std::vector<Rational> y(m);
    for (int i = 0; i < m; ++i) {
      y[i] = Rational(1) - obj[nv + i];
      if (sign[i] < 0) y[i] = -y[i];
    }
    // re-verify against the caller's data
    Rational pair = 0;
    for (int i = 0; i < m; ++i) pair += y[i] * rhs[i];
    if (!(pair > Rational(0)))
      throw std::logic_error("farkas pairing failed verification");
    for (int j = 0; j < nv; ++j) {
      Rational dot = 0;
      for (int i = 0; i < m; ++i) dot += y[i] * rows[i][j];
      if (dot > Rational(0))
        throw std::logic_error("farkas column failed verification");
    }
    out.feasible = false;
    out.farkas = std::move(y);
    out.pairing = pair;
    return out;
  }

  out.feasible = true;
  out.solution.assign(nv, Rational(0));
  for (int i = 0; i < m; ++i)
    if (basis[i] < nv) out.solution[basis[i]] = t[i][cols - 1];
  for (int i = 0; i < m; ++i) {
    Rational dot = 0;
    for (int j = 0; j < nv; ++j) dot += rows[i][j] * out.solution[j];
    if (dot != rhs[i])
      throw std::logic_error("feasible solution failed verification");
  }
  for (const Rational& x : out.solution)
    if (x < Rational(0))
      throw std::logic_error("negative component in feasible solution");
  return out;
}

}  // namespace diagforge
