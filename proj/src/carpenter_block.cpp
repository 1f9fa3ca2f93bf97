#include <algorithm>
#include <cmath>

#include "diagforge/carpenter.hpp"
#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

long long to_ll(const BigInt& x) { return x.convert_to<long long>(); }

void validate_partition_pair(const std::vector<double>& alpha,
                             const std::vector<double>& beta, double eps) {
  if (alpha.empty() || alpha.size() != beta.size())
    throw InvalidInput("alpha and beta must be nonempty and equally sized");
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  double sa = 0.0, sb = 0.0;
  for (double v : alpha) {
    if (v < -1e-12 || v > 1.0 + 1e-12)
      throw InfeasibleInput("alpha entries must lie in [0,1]");
    sa += v;
  }
  for (double v : beta) {
    if (v < -1e-12 || v > 1.0 + 1e-12)
      throw InfeasibleInput("beta entries must lie in [0,1]");
    sb += v;
  }
  if (std::abs(sa - 1.0) > 1e-12 || std::abs(sb - 1.0) > 1e-12)
    throw InfeasibleInput("alpha and beta must each sum to 1");
}

std::vector<long long> range_starts(const std::vector<BigInt>& counts) {
  std::vector<long long> starts(counts.size() + 1, 0);
  for (size_t k = 0; k < counts.size(); ++k)
    starts[k + 1] = starts[k] + to_ll(counts[k]);
  return starts;
}

// Projection obtained by conjugating the 0/1 diagonal supported on the given
// row range of a unitary.
CMatrix rows_projection(const CMatrix& u, long long row_lo, long long row_hi) {
  if (row_hi <= row_lo) return CMatrix::Zero(u.cols(), u.cols());
  auto c = u.middleRows(row_lo, row_hi - row_lo);
  return c.adjoint() * c;
}

// Bulk ranks inside one paired block: N0 b_k, minus the borrowed unit.
std::vector<BigInt> paired_ranks(const BlockPlan& plan) {
  std::vector<BigInt> r(plan.b.size());
  for (size_t k = 0; k < plan.b.size(); ++k) {
    r[k] = plan.n0 * plan.b[k];
    if (plan.borrow_rank && static_cast<int>(k) == plan.borrow_from) r[k] -= 1;
  }
  return r;
}

}  // namespace

long long BlockPlan::paired_block_size() const {
  long long base = n0.convert_to<long long>() * n2.convert_to<long long>();
  return borrow_rank ? base : base + 1;
}

long long BlockPlan::dim() const {
  long long n1ll = n1.convert_to<long long>();
  if (shortcut) return n1ll;
  return 1 + (n1ll - 1) * paired_block_size();
}

double BlockPlan::first_entry(int k) const {
  return Rational(a[k], n1).to_double();
}

double BlockPlan::bulk_entry(int k) const {
  if (shortcut) return first_entry(k);
  BigInt rank = n0 * b[k];
  if (borrow_rank && k == borrow_from) rank -= 1;
  Rational avg =
      (Rational(a[k], n1) + Rational(rank)) / Rational(paired_block_size());
  return avg.to_double();
}

BlockPlan plan_carpenter_block(const std::vector<double>& alpha,
                               const std::vector<double>& beta, double eps,
                               const BlockOptions& opts) {
  validate_partition_pair(alpha, beta, eps);
  const int n = static_cast<int>(alpha.size());

  BlockPlan plan;
  plan.alpha = alpha;
  plan.beta = beta;
  plan.borrow_rank = opts.borrow_rank;

  const double margin = eps * (1.0 - 1e-9);

  if (opts.forced_n2 > 0) {
    plan.b = opts.forced_b;
    plan.n2 = opts.forced_n2;
    plan.err_beta = opts.forced_err_beta;
  } else {
    long cap = static_cast<long>(std::ceil((n + 1) / (0.45 * eps))) + 2;
    RationalizedPartition rb = rationalize_partition(beta, 0.45 * eps, cap);
    plan.b = rb.counts;
    plan.n2 = rb.denominator;
    plan.err_beta = rb.max_error;
  }

  {
    long cap = static_cast<long>(std::ceil((n + 1) / (0.9 * eps))) + 2;
    RationalizedPartition ra = rationalize_partition(alpha, 0.9 * eps, cap);
    plan.a = ra.counts;
    plan.n1 = ra.denominator;
    plan.err_alpha = ra.max_error;
  }

  bool equal = true;
  for (int k = 0; k < n && equal; ++k)
    equal = (plan.a[k] * plan.n2 == plan.b[k] * plan.n1);
  if (equal && opts.allow_shortcut) {
    plan.shortcut = true;
    plan.borrow_rank = false;
    return plan;
  }
  if (plan.n1 == 1) {
    // a single 0/1 slot carries alpha exactly and no paired blocks exist
    plan.n0 = 1;
    return plan;
  }

  if (plan.borrow_rank) {
    int k0 = 0;
    for (int k = 1; k < n; ++k)
      if (plan.b[k] > plan.b[k0]) k0 = k;
    if (plan.b[k0] == 0)
      throw ToleranceUnreachable("cannot borrow a rank from a zero class");
    plan.borrow_from = k0;
  }

  // Smallest averaging constant meeting the bulk tolerance; the bulk value
  // differs from b_k/N2 by at most 1/(block size).
  double worst_delta = 0.0;
  for (int k = 0; k < n; ++k) {
    double d = std::abs(Rational(plan.a[k], plan.n1).to_double() -
                        Rational(plan.b[k], plan.n2).to_double());
    worst_delta = std::max(worst_delta, d);
  }
  if (plan.borrow_rank) worst_delta = std::max(worst_delta, 1.0);
  double room = margin - plan.err_beta;
  if (room <= 0.0)
    throw ToleranceUnreachable("beta rationalization consumed the budget");
  long long n2ll = to_ll(plan.n2);
  long long seed = std::max<long long>(
      1, static_cast<long long>(std::ceil(worst_delta / (room * n2ll))) - 1);
  auto bulk_ok = [&](long long cand) {
    plan.n0 = cand;
    if (plan.n0 * plan.n2 < 1) return false;
    for (int k = 0; k < n; ++k)
      if (std::abs(plan.bulk_entry(k) - beta[k]) >= margin) return false;
    return true;
  };
  long long n0 = seed;
  while (!bulk_ok(n0)) {
    ++n0;
    long long dim = 1 + (to_ll(plan.n1) - 1) * (n0 * n2ll + 1);
    if (dim > opts.max_dim)
      throw ToleranceUnreachable(
          "block dimension exceeds the cap before meeting eps");
  }
  plan.n0 = n0;
  if (plan.dim() > opts.max_dim)
    throw ToleranceUnreachable("block dimension " + std::to_string(plan.dim()) +
                               " exceeds the cap " +
                               std::to_string(opts.max_dim));
  return plan;
}

ProjectionFamily build_carpenter_block(const BlockPlan& plan) {
  const int n = static_cast<int>(plan.a.size());
  const long long n1 = to_ll(plan.n1);

  ProjectionFamily fam;
  fam.members = n;
  fam.ranks.assign(n, BigInt(0));

  if (plan.shortcut || n1 == 1) {
    // Single flattening stage: ranks a_k spread evenly over N1 slots.
    const int d = static_cast<int>(n1);
    CMatrix v = dft_unitary(d);
    std::vector<long long> starts = range_starts(plan.a);
    FamilyBlock blk;
    blk.offset = 0;
    blk.basis_unitary = v;
    blk.slots.resize(d);
    for (int k = 0; k < n; ++k)
      for (long long i = starts[k]; i < starts[k + 1]; ++i)
        blk.slots[i] = k;
    for (int k = 0; k < n; ++k) {
      blk.mats.push_back(rows_projection(v, starts[k], starts[k + 1]));
      fam.ranks[k] = plan.a[k];
    }
    fam.dim = d;
    fam.blocks.push_back(std::move(blk));
    fam.validate();
    return fam;
  }

  const long long t = plan.paired_block_size();
  const long long ell = 1 + (n1 - 1) * t;

  CMatrix w1 = dft_unitary(static_cast<int>(n1));
  CMatrix w2 = dft_unitary(static_cast<int>(t));

  // Index layout: 0 is the lone first-stage slot; paired block j (1-based)
  // occupies [1 + (j-1) t, 1 + j t) with local 0 carrying the j-th
  // first-stage slot.
  auto block_start = [&](long long j) { return 1 + (j - 1) * t; };

  // Assemble U = U1 U2 row by row: U1 scatters the N1-point flattening over
  // the first-stage slots, U2 flattens each paired block.
  CMatrix u = CMatrix::Zero(ell, ell);
  for (long long j = 1; j < n1; ++j) {
    long long s = block_start(j);
    for (long long p = 1; p < t; ++p)
      u.row(s + p).segment(s, t) = w2.row(p);
  }
  for (long long p = 0; p < n1; ++p) {
    long long row = p == 0 ? 0 : block_start(p);
    u(row, 0) = w1(p, 0);
    for (long long j = 1; j < n1; ++j)
      u.row(row).segment(block_start(j), t) = w1(p, j) * w2.row(0);
  }

  std::vector<BigInt> ranks = paired_ranks(plan);
  std::vector<long long> bulk_starts = range_starts(ranks);
  std::vector<long long> alpha_starts = range_starts(plan.a);

  // Bulk-row contribution of one paired block, identical across blocks.
  std::vector<CMatrix> bulk_part(n);
  for (int k = 0; k < n; ++k)
    bulk_part[k] = rows_projection(w2.middleRows(1, t - 1), bulk_starts[k],
                                   bulk_starts[k + 1]);

  FamilyBlock blk;
  blk.offset = 0;
  blk.slots.assign(ell, -1);
  for (int k = 0; k < n; ++k) {
    for (long long idx = alpha_starts[k]; idx < alpha_starts[k + 1]; ++idx)
      blk.slots[idx == 0 ? 0 : block_start(idx)] = k;
    for (long long j = 1; j < n1; ++j)
      for (long long i = bulk_starts[k]; i < bulk_starts[k + 1]; ++i)
        blk.slots[block_start(j) + 1 + i] = k;
  }
  for (int k = 0; k < n; ++k) {
    CMatrix p = CMatrix::Zero(ell, ell);
    for (long long j = 1; j < n1; ++j) {
      long long s = block_start(j);
      p.block(s, s, t, t) = bulk_part[k];
    }
    for (long long idx = alpha_starts[k]; idx < alpha_starts[k + 1]; ++idx) {
      long long row = idx == 0 ? 0 : block_start(idx);
      p.noalias() += u.row(row).adjoint() * u.row(row);
    }
    fam.ranks[k] = plan.a[k] + BigInt(n1 - 1) * ranks[k];
    blk.mats.push_back(std::move(p));
  }
  blk.basis_unitary = std::move(u);
  fam.dim = static_cast<int>(ell);
  fam.blocks.push_back(std::move(blk));
  fam.validate();
  return fam;
}

CarpenterBlockResult carpenter_block(const std::vector<double>& alpha,
                                     const std::vector<double>& beta,
                                     double eps, long long max_dim) {
  BlockOptions opts;
  opts.max_dim = max_dim;
  CarpenterBlockResult out;
  out.plan = plan_carpenter_block(alpha, beta, eps, opts);
  out.family = build_carpenter_block(out.plan);
  out.dim = out.family.dim;

  const int n = static_cast<int>(alpha.size());
  double resid = 0.0;
  for (int k = 0; k < n; ++k) {
    CVector d = out.family.member_diagonal(k);
    resid = std::max(resid, std::abs(d(0) - Complex(alpha[k])));
    for (int i = 1; i < out.family.dim; ++i)
      resid = std::max(resid, std::abs(d(i) - Complex(beta[k])));
    if (out.family.ranks[k] == 0) out.zero_members.push_back(k);
  }
  out.diag_residual = resid;
  out.check = out.family.verify(kProjectionTol);
  return out;
}

}  // namespace diagforge
