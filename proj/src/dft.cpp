#include "diagforge/dft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "diagforge/errors.hpp"
#include "diagforge/matrix_checks.hpp"

namespace diagforge {

CMatrix dft_unitary(int n) {
  if (n < 1) throw InvalidInput("dft_unitary requires n >= 1");
  CMatrix v(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double base = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      // (p+1)(q+1) mod n keeps the angle small for accuracy at large n.
      long long e = (static_cast<long long>(p + 1) * (q + 1)) % n;
      double theta = base * static_cast<double>(e);
      v(p, q) = scale * Complex(std::cos(theta), std::sin(theta));
    }
  }
  return v;
}

namespace {

// Contiguous index ranges of values (already sorted) that are closer than tol
// to their neighbor.
std::vector<std::pair<int, int>> cluster_ranges(const std::vector<double>& vals,
                                                double tol) {
  std::vector<std::pair<int, int>> ranges;
  int n = static_cast<int>(vals.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || vals[i] - vals[i - 1] > tol) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  return ranges;
}

}  // namespace

NormalDiagonalization diagonalize_normal(const CMatrix& n, double tol) {
  if (n.rows() != n.cols()) throw InvalidInput("matrix is not square");
  const double res = normality_residual(n);
  if (res > tol)
    throw NotNormal("normality residual " + std::to_string(res) +
                    " exceeds tolerance " + std::to_string(tol));

  const Eigen::Index dim = n.rows();
  const double scale = std::max(n.norm(), 1e-300);
  const double cluster_tol = 1e-8 * scale;

  CMatrix herm = 0.5 * (n + n.adjoint());
  CMatrix skew = (n - n.adjoint()) / Complex(0.0, 2.0);

  Eigen::SelfAdjointEigenSolver<CMatrix> stage1(herm);
  CMatrix w = stage1.eigenvectors();
  std::vector<double> hvals(dim);
  for (Eigen::Index i = 0; i < dim; ++i) hvals[i] = stage1.eigenvalues()(i);

  // The skew part commutes with the Hermitian part, so it is block diagonal
  // across eigenvalue clusters of stage one; diagonalize it per block.
  CMatrix skew_rot = w.adjoint() * skew * w;
  for (auto [lo, hi] : cluster_ranges(hvals, cluster_tol)) {
    int len = hi - lo;
    if (len <= 1) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> stage2(
        skew_rot.block(lo, lo, len, len));
    w.middleCols(lo, len) = w.middleCols(lo, len) * stage2.eigenvectors();
  }

  CMatrix rotated = w.adjoint() * n * w;
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return complex_lex_less(rotated(a, a), rotated(b, b));
  });

  NormalDiagonalization out;
  out.unitary.resize(dim, dim);
  out.eigenvalues.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.unitary.col(i) = w.col(order[i]);
    out.eigenvalues[i] = rotated(order[i], order[i]);
  }
  CMatrix check = out.unitary.adjoint() * n * out.unitary;
  for (Eigen::Index i = 0; i < dim; ++i) check(i, i) = 0.0;
  out.offdiag_residual = max_norm(check);
  return out;
}

FlattenResult flatten_constant_diagonal(const CMatrix& n, double tol) {
  FlattenResult out;
  out.diag = diagonalize_normal(n, tol);
  out.unitary = out.diag.unitary * dft_unitary(static_cast<int>(n.rows()));
  return out;
}

std::vector<std::pair<Complex, std::vector<int>>> eigenvalue_clusters(
    const std::vector<Complex>& eigenvalues, double tol) {
  std::vector<std::pair<Complex, std::vector<int>>> clusters;
  for (int i = 0; i < static_cast<int>(eigenvalues.size()); ++i) {
    bool placed = false;
    for (auto& [rep, members] : clusters) {
      if (std::abs(eigenvalues[i] - rep) <= tol) {
        members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({eigenvalues[i], {i}});
  }
  return clusters;
}

CMatrix spectral_projection(const CMatrix& w, const std::vector<int>& members) {
  CMatrix p = CMatrix::Zero(w.rows(), w.rows());
  for (int i : members) p.noalias() += w.col(i) * w.col(i).adjoint();
  return p;
}

}  // namespace diagforge
