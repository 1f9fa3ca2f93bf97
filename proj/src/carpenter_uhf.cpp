#include <algorithm>
#include <cmath>

#include "diagforge/carpenter.hpp"
#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

// Rounds a partition tuple to counts over 2^t, repairing the total.
bool dyadic_round(const std::vector<double>& cell, int t,
                  std::vector<long long>& counts, double& err) {
  const long long den = 1LL << t;
  const int n = static_cast<int>(cell.size());
  counts.assign(n, 0);
  long long sum = 0;
  for (int k = 0; k < n; ++k) {
    counts[k] = std::clamp<long long>(
        std::llround(cell[k] * static_cast<double>(den)), 0, den);
    sum += counts[k];
  }
  int guard = 0;
  while (sum != den && guard++ < 4 * n) {
    int step = sum < den ? 1 : -1;
    int pick = -1;
    double best = -1e300;
    for (int k = 0; k < n; ++k) {
      long long cand = counts[k] + step;
      if (cand < 0 || cand > den) continue;
      double f = step * (cell[k] * static_cast<double>(den) -
                         static_cast<double>(counts[k]));
      if (f > best) {
        best = f;
        pick = k;
      }
    }
    if (pick < 0) return false;
    counts[pick] += step;
    sum += step;
  }
  if (sum != den) return false;
  err = 0.0;
  for (int k = 0; k < n; ++k)
    err = std::max(err, std::abs(cell[k] - static_cast<double>(counts[k]) /
                                               static_cast<double>(den)));
  return true;
}

}  // namespace

CarpenterUhfResult carpenter_uhf(const std::vector<std::vector<double>>& columns,
                                 double eps, long long max_dim) {
  if (columns.empty()) throw InvalidInput("uhf needs at least one column");
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  const int n = static_cast<int>(columns.size());
  const size_t len = columns[0].size();
  for (const auto& c : columns)
    if (c.size() != len || len == 0)
      throw DimensionMismatch("columns must share a positive length");
  int m = 0;
  while ((size_t{1} << m) < len) ++m;
  if ((size_t{1} << m) != len)
    throw InvalidInput("column length must be a power of two");

  const int positions = static_cast<int>(len);
  for (int i = 0; i < positions; ++i) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      double v = columns[k][i];
      if (v < -1e-12 || v > 1.0 + 1e-12)
        throw InfeasibleInput("uhf entries must lie in [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw InfeasibleInput("uhf columns must sum to 1 pointwise");
  }

  int jcap = 0;
  while ((1LL << (jcap + 1)) <= max_dim) ++jcap;

  // Per position, the smallest dyadic level meeting eps; the tower level is
  // their maximum.
  const double margin = eps * (1.0 - 1e-9);
  int tstar = 0;
  std::vector<long long> scratch;
  for (int i = 0; i < positions; ++i) {
    std::vector<double> cell(n);
    for (int k = 0; k < n; ++k) cell[k] = columns[k][i];
    int t = -1;
    for (int cand = 0; m + cand <= jcap; ++cand) {
      double err = 0.0;
      if (dyadic_round(cell, cand, scratch, err) && err < margin) {
        t = cand;
        break;
      }
    }
    if (t < 0)
      throw ModelTooCoarse(
          "dyadic approximation needs a tower level beyond the cap of " +
          std::to_string(max_dim));
    tstar = std::max(tstar, t);
  }

  const int level = m + tstar;
  const long long block = 1LL << tstar;

  CarpenterUhfResult out;
  out.level = level;
  out.base_level = m;

  CMatrix v = dft_unitary(static_cast<int>(block));
  ProjectionFamily fam;
  fam.members = n;
  fam.dim = static_cast<int>(len * block);
  fam.ranks.assign(n, BigInt(0));
  double resid = 0.0;
  for (int i = 0; i < positions; ++i) {
    std::vector<double> cell(n);
    for (int k = 0; k < n; ++k) cell[k] = columns[k][i];
    std::vector<long long> counts;
    double err = 0.0;
    if (!dyadic_round(cell, tstar, counts, err))
      throw ModelTooCoarse("dyadic rounding failed");
    resid = std::max(resid, err);
    FamilyBlock blk;
    blk.offset = static_cast<int>(i * block);
    blk.basis_unitary = v;
    blk.slots.resize(block);
    long long cursor = 0;
    for (int k = 0; k < n; ++k) {
      for (long long j = 0; j < counts[k]; ++j) blk.slots[cursor + j] = k;
      if (counts[k] == 0) {
        blk.mats.push_back(CMatrix::Zero(block, block));
      } else {
        auto rows = v.middleRows(cursor, counts[k]);
        blk.mats.push_back(rows.adjoint() * rows);
      }
      cursor += counts[k];
      fam.ranks[k] += counts[k];
    }
    fam.blocks.push_back(std::move(blk));
  }
  fam.validate();

  out.diag_residual = resid;
  out.family = std::move(fam);
  out.check = out.family.verify(kProjectionTol);
  for (int k = 0; k < n; ++k) {
    out.traces.emplace_back(out.family.ranks[k], BigInt(out.family.dim));
    if (out.family.ranks[k] == 0) out.zero_members.push_back(k);
  }
  return out;
}

}  // namespace diagforge
