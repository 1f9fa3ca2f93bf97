#include <algorithm>
#include <cmath>
#include <numeric>

#include "diagforge/carpenter.hpp"
#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

long long to_ll(const BigInt& x) { return x.convert_to<long long>(); }

BigInt big_lcm(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

// Nearest integer to an exact rational, half away from zero.
BigInt nearest_integer(const Rational& q) {
  BigInt two_num = 2 * q.numerator();
  BigInt den = q.denominator();
  BigInt twice = two_num + (two_num >= 0 ? den : -den);
  BigInt r = twice / (2 * den);
  if (twice < 0 && twice % (2 * den) != 0) r -= 1;
  return r;
}

}  // namespace

CarpenterTracialResult carpenter_tracial(const TracialPartition& part,
                                         double eps, long long max_dim) {
  part.validate();
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  const int n = part.members();
  const int d = part.dim;

  CarpenterTracialResult out;

  // Rationalize each cell's member values with one shared denominator.
  std::vector<RationalizedPartition> cells(d);
  bool exact = true;
  long cell_cap = std::max<long>(
      static_cast<long>(std::ceil((n + 1) / (0.5 * eps))) + 2,
      static_cast<long>(max_dim / d));
  for (int i = 0; i < d; ++i) {
    std::vector<double> cell(n);
    for (int k = 0; k < n; ++k) cell[k] = part.columns[k][i];
    cells[i] = rationalize_partition_prefer_exact(cell, 0.5 * eps, cell_cap);
    if (cells[i].max_error > 1e-13) exact = false;
  }

  // Cell size s: clear every cell denominator, and the trace-target
  // denominators when the cap allows, so compatible traces come out exact.
  BigInt s = 1;
  for (const auto& c : cells) s = big_lcm(s, c.denominator);
  const BigInt cap(max_dim);
  for (const Rational& t : part.trace_targets) {
    BigInt dt = t.denominator();
    BigInt fold = dt / boost::multiprecision::gcd(BigInt(d) * s, dt);
    if (BigInt(d) * s * fold <= cap) s *= fold;
  }
  if (!exact) {
    // Rank repairs move single units; keep 1/s well under eps.
    long long floor_s = static_cast<long long>(std::ceil(3.0 / eps));
    if (s < floor_s) s *= (floor_s + to_ll(s) - 1) / to_ll(s);
  }
  if (BigInt(d) * s > cap) {
    // Fallback: a common cell size within the cap, if it still meets eps.
    long long sf = max_dim / d;
    if (sf >= static_cast<long long>(std::ceil(3.0 / eps))) {
      s = sf;
      exact = false;
      for (int i = 0; i < d; ++i) {
        std::vector<double> cell(n);
        for (int k = 0; k < n; ++k) cell[k] = part.columns[k][i];
        RationalizedPartition rp;
        rp.denominator = s;
        // round at the fixed denominator, repairing the sum
        std::vector<double> scaled(n);
        long long sum = 0;
        std::vector<long long> a(n);
        for (int k = 0; k < n; ++k) {
          a[k] = std::llround(cell[k] * static_cast<double>(sf));
          a[k] = std::clamp<long long>(a[k], 0, sf);
          sum += a[k];
        }
        int guard = 0;
        while (sum != sf && guard++ < 4 * n) {
          int step = sum < sf ? 1 : -1;
          int pick = -1;
          double best = -1e300;
          for (int k = 0; k < n; ++k) {
            long long cand = a[k] + step;
            if (cand < 0 || cand > sf) continue;
            double f = step * (cell[k] * sf - a[k]);
            if (f > best) {
              best = f;
              pick = k;
            }
          }
          if (pick < 0) break;
          a[pick] += step;
          sum += step;
        }
        if (sum != sf) throw ModelTooCoarse("cell rounding failed at the cap");
        rp.counts.assign(a.begin(), a.end());
        double err = 0.0;
        for (int k = 0; k < n; ++k)
          err = std::max(err, std::abs(cell[k] - static_cast<double>(a[k]) /
                                                     static_cast<double>(sf)));
        rp.max_error = err;
        cells[i] = rp;
      }
    } else {
      throw ModelTooCoarse("no model dimension within the cap of " +
                           std::to_string(max_dim) +
                           " realizes the partition at eps");
    }
  }

  const long long sll = to_ll(s);
  const long long model = d * sll;
  out.model_dim = static_cast<int>(model);

  // Cell ranks at the common size, then a global repair so each trace lands
  // on the nearest multiple of 1/D.
  std::vector<std::vector<long long>> ranks(d, std::vector<long long>(n));
  for (int i = 0; i < d; ++i) {
    long long scale = sll / to_ll(cells[i].denominator);
    for (int k = 0; k < n; ++k)
      ranks[i][k] = to_ll(cells[i].counts[k]) * scale;
  }

  std::vector<BigInt> target_rank(n);
  BigInt rank_total = 0;
  for (int k = 0; k < n; ++k) {
    target_rank[k] = nearest_integer(part.trace_targets[k] * Rational(model));
    rank_total += target_rank[k];
  }
  // Rounding ties can leave the total off by a few units; settle them on the
  // members with the largest rounding slack.
  while (rank_total != model) {
    int step = rank_total < model ? 1 : -1;
    int pick = -1;
    Rational best(-1000000);
    for (int k = 0; k < n; ++k) {
      BigInt cand = target_rank[k] + step;
      if (cand < 0 || cand > model) continue;
      Rational slack =
          (part.trace_targets[k] * Rational(model) - Rational(target_rank[k])) *
          Rational(step);
      if (pick < 0 || slack > best) {
        best = slack;
        pick = k;
      }
    }
    if (pick < 0) throw ModelTooCoarse("trace rounding failed");
    target_rank[pick] += step;
    rank_total += step;
  }

  for (int k = 0; k < n; ++k) {
    BigInt have = 0;
    for (int i = 0; i < d; ++i) have += ranks[i][k];
    // Move single ranks between members, spreading across cells so each
    // cell's diagonal shifts by at most a few units of 1/s.
    int cell_cursor = 0;
    int guard = 0;
    while (have != target_rank[k]) {
      if (++guard > 8 * d * n + 64)
        throw ModelTooCoarse("rank repair did not converge");
      int step = have < target_rank[k] ? 1 : -1;
      bool moved = false;
      for (int tries = 0; tries < d && !moved; ++tries, ++cell_cursor) {
        int i = cell_cursor % d;
        // donor member: one whose current rank exceeds its target direction
        for (int k2 = 0; k2 < n && !moved; ++k2) {
          if (k2 == k) continue;
          long long nk = ranks[i][k] + step;
          long long nk2 = ranks[i][k2] - step;
          if (nk < 0 || nk > sll || nk2 < 0 || nk2 > sll) continue;
          BigInt have2 = 0;
          for (int ii = 0; ii < d; ++ii) have2 += ranks[ii][k2];
          // only move against a member that is itself off in the opposite
          // direction, so repairs terminate
          if (step == 1 && have2 - target_rank[k2] <= 0) continue;
          if (step == -1 && have2 - target_rank[k2] >= 0) continue;
          ranks[i][k] = nk;
          ranks[i][k2] = nk2;
          moved = true;
        }
      }
      if (!moved) throw ModelTooCoarse("rank repair blocked");
      have += step;
    }
  }

  // Build: each cell is one flattening block of size s.
  CMatrix v = dft_unitary(static_cast<int>(sll));
  ProjectionFamily fam;
  fam.members = n;
  fam.dim = static_cast<int>(model);
  fam.ranks.assign(n, BigInt(0));
  for (int i = 0; i < d; ++i) {
    FamilyBlock blk;
    blk.offset = static_cast<int>(i * sll);
    blk.basis_unitary = v;
    blk.slots.resize(sll);
    long long cursor = 0;
    for (int k = 0; k < n; ++k) {
      for (long long j = 0; j < ranks[i][k]; ++j) blk.slots[cursor + j] = k;
      if (ranks[i][k] == 0) {
        blk.mats.push_back(CMatrix::Zero(sll, sll));
      } else {
        auto rows = v.middleRows(cursor, ranks[i][k]);
        blk.mats.push_back(rows.adjoint() * rows);
      }
      cursor += ranks[i][k];
      fam.ranks[k] += ranks[i][k];
    }
    fam.blocks.push_back(std::move(blk));
  }
  fam.validate();

  double resid = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < d; ++i)
      resid = std::max(resid, std::abs(static_cast<double>(ranks[i][k]) /
                                           static_cast<double>(sll) -
                                       part.columns[k][i]));
  out.diag_residual = resid;
  out.family = std::move(fam);
  out.check = out.family.verify(kProjectionTol);
  out.exact_model = exact;

  out.trace_ledger.resize(n);
  for (int k = 0; k < n; ++k) {
    TraceLedgerEntry& e = out.trace_ledger[k];
    e.target = part.trace_targets[k];
    e.achieved = Rational(out.family.ranks[k], BigInt(model));
    e.deviation = (e.achieved - e.target).abs().to_double();
    e.exact = (e.achieved == e.target);
  }
  out.surrogates.resize(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < n; ++k)
      out.surrogates[i].push_back(Rational(cells[i].counts[k],
                                           cells[i].denominator)
                                      .str());
  return out;
}

}  // namespace diagforge
