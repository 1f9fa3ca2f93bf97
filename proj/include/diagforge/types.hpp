#ifndef DIAGFORGE_TYPES_HPP
#define DIAGFORGE_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace diagforge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Default tolerances: algebraic checks on projections, and residuals of
// unitaries we construct ourselves.
inline constexpr double kProjectionTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-12;

// Hard cap on any matrix-model dimension; overridable per call and via
// DIAGFORGE_MAX_DIM in the CLI.
inline constexpr int kDefaultMaxDim = 4096;

inline bool complex_lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Entrywise max modulus; the workhorse residual norm.
inline double max_norm(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace diagforge

#endif
