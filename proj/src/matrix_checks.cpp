#include "diagforge/matrix_checks.hpp"

#include <algorithm>

#include "diagforge/errors.hpp"

namespace diagforge {

double hermitian_residual(const CMatrix& m) {
  return max_norm(m - m.adjoint());
}

double unitary_residual(const CMatrix& m) {
  return max_norm(m.adjoint() * m -
                  CMatrix::Identity(m.rows(), m.cols()));
}

double idempotent_residual(const CMatrix& m) { return max_norm(m * m - m); }

double normality_residual(const CMatrix& m) {
  return max_norm(m * m.adjoint() - m.adjoint() * m);
}

Complex normalized_trace(const CMatrix& m) {
  return m.trace() / static_cast<double>(m.rows());
}

std::vector<Complex> conditional_expectation_diag(const CMatrix& m) {
  std::vector<Complex> d(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) d[i] = m(i, i);
  return d;
}

double FamilyCheck::worst() const {
  return std::max({hermitian, idempotent, orthogonal, completeness});
}

FamilyCheck verify_projection_family(const std::vector<CMatrix>& family,
                                     double tol) {
  if (family.empty()) throw InvalidInput("empty projection family");
  const Eigen::Index dim = family.front().rows();
  for (const CMatrix& p : family)
    if (p.rows() != dim || p.cols() != dim)
      throw DimensionMismatch("projection family members differ in dimension");

  FamilyCheck out;
  out.tol = tol;
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const CMatrix& p : family) {
    out.hermitian = std::max(out.hermitian, hermitian_residual(p));
    out.idempotent = std::max(out.idempotent, idempotent_residual(p));
    sum += p;
  }
  for (size_t j = 0; j < family.size(); ++j)
    for (size_t k = j + 1; k < family.size(); ++k)
      out.orthogonal = std::max(out.orthogonal, max_norm(family[j] * family[k]));
  out.completeness = max_norm(sum - CMatrix::Identity(dim, dim));
  out.pass = out.worst() <= tol;
  return out;
}

}  // namespace diagforge
