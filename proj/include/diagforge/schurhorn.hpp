#ifndef DIAGFORGE_SCHURHORN_HPP
#define DIAGFORGE_SCHURHORN_HPP

#include <optional>
#include <string>
#include <vector>

#include "diagforge/projection_family.hpp"
#include "diagforge/rational.hpp"
#include "diagforge/simplex.hpp"
#include "diagforge/spectral_data.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

// ---------------------------------------------------------------------------
// Necessity: diagonals live in the convex hull of the spectrum.
// ---------------------------------------------------------------------------

struct NecessityReport {
  bool ok = true;
  Complex worst_point;      // entry farthest from the hull
  double worst_distance = 0.0;
};

// True iff every entry lies within tol of the hull of the spectral vertices
// (essential spectrum in the discrete model, the value set in the tracial
// model).
NecessityReport check_necessity(const std::vector<Complex>& diag,
                                const SpectralData& n, double tol);

// ---------------------------------------------------------------------------
// Tracial feasibility: the exact linear system behind step diagonals.
// ---------------------------------------------------------------------------

// One step of the target diagonal: value beta_j carried with weight w_j.
struct TargetBlock {
  Complex value;
  Rational weight;
};

struct FeasibilityReport {
  bool feasible = false;
  // gamma[j][k]: row sums 1, trace marginals sum_j w_j gamma[j][k] = omega_k,
  // value rows sum_k z_k gamma[j][k] = beta_j; all exact.
  std::vector<std::vector<Rational>> witness;
  std::vector<Rational> farkas;  // dual certificate on infeasibility
  Rational pairing;
  // the exact data the solve ran on (floats rationalized at 1e-12)
  std::vector<RationalComplex> z;
  std::vector<RationalComplex> beta;
};

FeasibilityReport feasibility_partition(const SpectralData& n,
                                        const std::vector<TargetBlock>& blocks);

// Three non-collinear spectrum points: feasibility collapses to the trace
// match plus hull membership, and the witness rows are the unique
// barycentric weights.
struct ThreePointCheck {
  bool applicable = false;  // exactly three non-collinear points
  bool feasible = false;
  bool trace_match = false;
  std::vector<bool> in_hull;
  std::vector<std::vector<Rational>> witness;
};

ThreePointCheck feasibility_three_point(const SpectralData& n,
                                        const std::vector<TargetBlock>& blocks);

// ---------------------------------------------------------------------------
// Synthesis in the tracial matrix model.
// ---------------------------------------------------------------------------

struct SynthCell {
  int offset = 0;
  int size = 0;
  std::vector<long long> counts;  // model multiplicity of each z_k in the cell
  Complex realized;               // constant diagonal value of the cell
  Complex target;                 // beta_j
};

struct SynthTraceEntry {
  Rational target;    // omega_k
  Rational achieved;  // model multiplicity / D
  bool exact = false;
};

struct SynthTracial {
  int model_dim = 0;
  std::vector<SynthCell> cells;
  std::vector<Complex> diagonal;
  double residual = 0.0;
  std::vector<SynthTraceEntry> spectral_ledger;
  FeasibilityReport feasibility;
  bool exact_gamma = false;  // witness realized without coarsening
};

SynthTracial synth_diagonal_tracial(const SpectralData& n,
                                    const std::vector<TargetBlock>& blocks,
                                    double eps,
                                    long long max_dim = kDefaultMaxDim);

// Dense model operator and conjugating unitary for a synthesized result;
// intended for verification at small model dimensions.
std::pair<CMatrix, CMatrix> synth_tracial_materialize(const SynthTracial& s,
                                                      const SpectralData& n);

}  // namespace diagforge

#endif
