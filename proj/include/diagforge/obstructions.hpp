#ifndef DIAGFORGE_OBSTRUCTIONS_HPP
#define DIAGFORGE_OBSTRUCTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "diagforge/schurhorn.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

// ---------------------------------------------------------------------------
// The 3x3 obstruction: no unitary conjugate of diag(0, 1, i) has diagonal
// (1/2, i/2, (1+i)/2). The search reports the empirical residual floor over
// randomized descent on the unitary group; evidence, not proof.
// ---------------------------------------------------------------------------

struct ArvesonSearchResult {
  double floor = 0.0;     // best max-norm residual found
  CMatrix best_unitary;
  std::uint64_t seed = 0;
  int restarts = 0;
  int iters = 0;
};

// Minimizes max_i |(U* N U)_{ii} - A_i| over U(3) by gradient descent on the
// squared deviation with QR retraction and backtracking line search.
// Deterministic per (seed, restart index); the reported floor is a running
// minimum, so more restarts or iterations never increase it.
ArvesonSearchResult arveson_search(int restarts, int iters, std::uint64_t seed);

// Same search against an arbitrary 3x3 target diagonal.
ArvesonSearchResult arveson_search_target(const std::vector<Complex>& target,
                                          int restarts, int iters,
                                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// The four-point square obstruction, certified exactly.
// ---------------------------------------------------------------------------

struct SquareCertificate {
  bool infeasible = false;
  std::vector<Rational> farkas;
  Rational pairing;
  // the direct extreme-point argument: both equations force the weight at 0
  // to be 1/2, against an available spectral weight of 1/4
  Rational forced_weight;     // 1/2
  Rational available_weight;  // 1/4
  FeasibilityReport lp;
};

// Spectral distribution (1/4)(d_0 + d_1 + d_i + d_{1+i}) against the target
// (1/2)(d_0 + d_{1+i}): infeasible, with an exact dual certificate.
SquareCertificate square_infeasibility_certificate();

// ---------------------------------------------------------------------------
// Side-by-side contrast: the finite 3x3 floor stays positive while the
// truncated constructions reach the same data within eps.
// ---------------------------------------------------------------------------

struct ContrastReport {
  double carpenter_residual = 0.0;  // truncated partition synthesis
  int carpenter_dim = 0;
  double synthesis_residual = 0.0;  // truncated diagonal synthesis
  int synthesis_dim = 0;
  double floor = 0.0;               // 3x3 empirical floor
  bool floor_exceeds_residuals = false;
  std::vector<std::string> notes;
};

ContrastReport contrast_demo(double eps, int restarts = 40, int iters = 500,
                             std::uint64_t seed = 0,
                             long long max_dim = kDefaultMaxDim);

}  // namespace diagforge

#endif
