#ifndef DIAGFORGE_DFT_HPP
#define DIAGFORGE_DFT_HPP

#include <utility>
#include <vector>

#include "diagforge/types.hpp"

namespace diagforge {

// The n-point Fourier unitary V with V(p,q) = zeta^{(p+1)(q+1)} / sqrt(n),
// zeta = exp(2*pi*i/n). Every entry has modulus 1/sqrt(n), so conjugating any
// diagonal matrix by V equalizes its diagonal at the normalized trace.
CMatrix dft_unitary(int n);

struct NormalDiagonalization {
  CMatrix unitary;                   // W with W* N W ~ diag(eigenvalues)
  std::vector<Complex> eigenvalues;  // lexicographic by (Re, Im)
  double offdiag_residual = 0.0;     // ||W* N W - diag||_max
};

// Diagonalizes a normal matrix by splitting it into commuting Hermitian and
// skew parts: the Hermitian part is diagonalized first, then the skew part is
// diagonalized inside each eigenvalue cluster of the first stage. Clusters
// merge eigenvalues closer than 1e-8 * ||N||_F. Throws NotNormal when the
// normality residual exceeds tol.
NormalDiagonalization diagonalize_normal(const CMatrix& n, double tol);

struct FlattenResult {
  CMatrix unitary;  // U = W V
  NormalDiagonalization diag;
};

// Unitary U such that every diagonal entry of U* B U equals the normalized
// trace of B, simultaneously for every polynomial B in N and N*.
FlattenResult flatten_constant_diagonal(const CMatrix& n, double tol);

// Distinct eigenvalues of a diagonalization, clustered at the given absolute
// tolerance, with the member indices of each cluster.
std::vector<std::pair<Complex, std::vector<int>>> eigenvalue_clusters(
    const std::vector<Complex>& eigenvalues, double tol);

// Spectral projection of the cluster with the given member indices, in the
// eigenbasis W: the projection W diag(indicator) W*.
CMatrix spectral_projection(const CMatrix& w, const std::vector<int>& members);

}  // namespace diagforge

#endif
