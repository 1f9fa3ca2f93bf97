#ifndef DIAGFORGE_CARPENTER_HPP
#define DIAGFORGE_CARPENTER_HPP

#include <string>
#include <vector>

#include "diagforge/projection_family.hpp"
#include "diagforge/rational.hpp"
#include "diagforge/spectral_data.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

// ---------------------------------------------------------------------------
// Single block: projections whose diagonals are (alpha_k, beta_k, ..., beta_k)
// up to eps.
// ---------------------------------------------------------------------------

// Rationalization a/N1 of alpha, b/N2 of beta, and the averaging constant N0.
// The assembled dimension is N1 + (N1-1) N0 N2; when the two rationalizations
// agree the first flattening stage alone suffices and the dimension is N1.
struct BlockPlan {
  std::vector<BigInt> a;
  BigInt n1 = 1;
  double err_alpha = 0.0;
  std::vector<BigInt> b;
  BigInt n2 = 1;
  double err_beta = 0.0;
  BigInt n0 = 1;
  bool shortcut = false;  // a/N1 == b/N2 member-wise
  // Paired blocks of size N0 N2 instead of N0 N2 + 1, paying for the extra
  // first-stage slot by borrowing one rank from the member with the largest
  // b_k. Keeps the slot count per block divisible by N2, which the
  // truncation bookkeeping needs; the approximation error is the same order.
  bool borrow_rank = false;
  int borrow_from = -1;
  std::vector<double> alpha;  // original targets
  std::vector<double> beta;

  long long dim() const;
  long long paired_block_size() const;  // N0 N2 + 1, or N0 N2 when borrowing
  // realized diagonal values
  double first_entry(int k) const;  // a_k / N1
  double bulk_entry(int k) const;   // (a_k/N1 + bulk rank_k) / block size
};

struct BlockOptions {
  // Reuse a fixed rationalization of beta (the discrete pipeline shares one
  // per value class); empty means rationalize freely.
  std::vector<BigInt> forced_b;
  BigInt forced_n2 = 0;
  double forced_err_beta = 0.0;
  long long max_dim = kDefaultMaxDim;
  // The discrete pipeline disables the single-stage shortcut so every head
  // block consumes bulk slots in whole multiples of the class denominator.
  bool allow_shortcut = true;
  bool borrow_rank = false;
};

BlockPlan plan_carpenter_block(const std::vector<double>& alpha,
                               const std::vector<double>& beta, double eps,
                               const BlockOptions& opts = {});
ProjectionFamily build_carpenter_block(const BlockPlan& plan);

struct CarpenterBlockResult {
  long long dim = 0;
  ProjectionFamily family;
  BlockPlan plan;
  double diag_residual = 0.0;  // sup over members and positions vs targets
  FamilyCheck check;
  std::vector<int> zero_members;  // identically zero projections kept in place
};

// Pairwise-orthogonal projections on dimension ell summing to the identity
// with diag(P_k) within eps of (alpha_k, beta_k, ..., beta_k).
CarpenterBlockResult carpenter_block(const std::vector<double>& alpha,
                                     const std::vector<double>& beta,
                                     double eps,
                                     long long max_dim = kDefaultMaxDim);

// ---------------------------------------------------------------------------
// Discrete pipeline: truncation of an eventually periodic partition of unity.
// ---------------------------------------------------------------------------

struct DiscreteStageCosts {
  double clamp = 0.0;
  double essential_snap = 0.0;  // zero in the periodic-tail model
  double cover_snap = 0.0;      // zero in the periodic-tail model
  double block = 0.0;
  double assembly = 0.0;
};

struct CarpenterDiscreteResult {
  int truncation_dim = 0;  // M
  ProjectionFamily family;
  // spec position covered by each construction coordinate (a bijection on
  // [0, M))
  std::vector<int> index_map;
  double diag_residual = 0.0;  // sup_k sup_i |spec_k[i] - diag(P_k)[sigma(i)]|
  FamilyCheck check;
  DiscreteStageCosts stage_costs;
  double stage_budget = 0.0;  // eps/5
  int periods = 0;            // R, with M = head + R * period
  std::vector<std::string> notes;
};

CarpenterDiscreteResult carpenter_discrete(const JointPartitionSpec& joint,
                                           double eps,
                                           long long max_dim = kDefaultMaxDim);

// ---------------------------------------------------------------------------
// Tracial matrix model.
// ---------------------------------------------------------------------------

struct TraceLedgerEntry {
  Rational target;
  Rational achieved;
  double deviation = 0.0;
  bool exact = false;
};

struct CarpenterTracialResult {
  int model_dim = 0;  // D, a multiple of the partition dimension
  ProjectionFamily family;
  double diag_residual = 0.0;
  FamilyCheck check;
  std::vector<TraceLedgerEntry> trace_ledger;
  // per-cell rational surrogates used for the ranks, as strings "a/N"
  std::vector<std::vector<std::string>> surrogates;
  bool exact_model = false;  // all cells rationalized with zero error
};

CarpenterTracialResult carpenter_tracial(const TracialPartition& part,
                                         double eps,
                                         long long max_dim = kDefaultMaxDim);

// ---------------------------------------------------------------------------
// Dyadic tower model.
// ---------------------------------------------------------------------------

struct CarpenterUhfResult {
  int level = 0;  // j, model dimension 2^j
  int base_level = 0;  // m, the input lives in M_{2^m}
  ProjectionFamily family;
  double diag_residual = 0.0;
  FamilyCheck check;
  std::vector<Rational> traces;  // dyadic, denominator 2^j
  std::vector<int> zero_members;
};

// columns[k] has length 2^m; pointwise sums are 1.
CarpenterUhfResult carpenter_uhf(const std::vector<std::vector<double>>& columns,
                                 double eps,
                                 long long max_dim = kDefaultMaxDim);

}  // namespace diagforge

#endif
