#ifndef DIAGFORGE_MATRIX_CHECKS_HPP
#define DIAGFORGE_MATRIX_CHECKS_HPP

#include <string>
#include <vector>

#include "diagforge/types.hpp"

namespace diagforge {

double hermitian_residual(const CMatrix& m);
double unitary_residual(const CMatrix& m);
double idempotent_residual(const CMatrix& m);
double normality_residual(const CMatrix& m);

inline bool is_hermitian(const CMatrix& m, double tol) {
  return hermitian_residual(m) <= tol;
}
inline bool is_unitary(const CMatrix& m, double tol) {
  return unitary_residual(m) <= tol;
}
inline bool is_projection(const CMatrix& m, double tol) {
  return hermitian_residual(m) <= tol && idempotent_residual(m) <= tol;
}
inline bool is_normal(const CMatrix& m, double tol) {
  return normality_residual(m) <= tol;
}

// Normalized trace tr(m)/n.
Complex normalized_trace(const CMatrix& m);

// Image of m under the conditional expectation onto the diagonal subalgebra,
// reported as a vector.
std::vector<Complex> conditional_expectation_diag(const CMatrix& m);

// Residual ledger for a family of would-be pairwise-orthogonal projections
// summing to the identity.
struct FamilyCheck {
  double hermitian = 0.0;    // max over members of ||P - P*||_max
  double idempotent = 0.0;   // max over members of ||P^2 - P||_max
  double orthogonal = 0.0;   // max over pairs of ||P_j P_k||_max
  double completeness = 0.0; // ||sum P_k - I||_max
  double tol = 0.0;
  bool pass = false;

  double worst() const;
};

FamilyCheck verify_projection_family(const std::vector<CMatrix>& family,
                                     double tol);

}  // namespace diagforge

#endif
