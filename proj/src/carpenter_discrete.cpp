#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "diagforge/carpenter.hpp"
#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

long long to_ll(const BigInt& x) { return x.convert_to<long long>(); }

struct ValueClass {
  std::vector<double> values;     // working tuple, one entry per member
  std::vector<int> positions;     // pattern positions carrying this tuple
  RationalizedPartition rat;      // shared rationalization of the tuple
  BlockPlan filler_plan;          // single-stage block of dimension rat.den
};

// Moves the last member of a partition tuple into [lo, 1-lo], shifting the
// complement to the entry best able to absorb it. Returns the perturbation.
double clamp_last_member(std::vector<double>& t, double lo) {
  const int n = static_cast<int>(t.size());
  double& last = t[n - 1];
  double delta = 0.0;
  if (last < lo) {
    delta = lo - last;
    int big = 0;
    for (int k = 1; k + 1 < n; ++k)
      if (t[k] > t[big]) big = k;
    t[big] -= delta;
    last = lo;
  } else if (last > 1.0 - lo) {
    delta = last - (1.0 - lo);
    int small = 0;
    for (int k = 1; k + 1 < n; ++k)
      if (t[k] < t[small]) small = k;
    t[small] += delta;
    last = 1.0 - lo;
  }
  return delta;
}

}  // namespace

CarpenterDiscreteResult carpenter_discrete(const JointPartitionSpec& joint,
                                           double eps, long long max_dim) {
  joint.validate();
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  const int n = joint.members();
  const int h = joint.head_length();
  const int period = joint.period();

  CarpenterDiscreteResult out;
  out.stage_budget = eps / 5.0;

  if (n == 1) {
    // One member forces every value to 1: the identity at one period past
    // the head.
    const int m = h + period;
    ProjectionFamily fam;
    fam.members = 1;
    fam.dim = m;
    fam.ranks = {BigInt(m)};
    FamilyBlock blk;
    blk.offset = 0;
    blk.mats = {CMatrix::Identity(m, m)};
    blk.basis_unitary = CMatrix::Identity(m, m);
    blk.slots.assign(m, 0);
    fam.blocks.push_back(std::move(blk));
    out.truncation_dim = m;
    out.family = std::move(fam);
    out.index_map.resize(m);
    std::iota(out.index_map.begin(), out.index_map.end(), 0);
    out.periods = 1;
    out.check = out.family.verify(kProjectionTol);
    out.diag_residual = 0.0;
    for (int i = 0; i < m; ++i)
      out.diag_residual = std::max(
          out.diag_residual, std::abs(joint.specs[0].at(i) - Complex(1.0)));
    return out;
  }

  auto tuple_at = [&](auto getter, int i) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = getter(joint.specs[k], i).real();
    return t;
  };

  std::vector<std::vector<double>> head_orig(h), head_work(h);
  for (int i = 0; i < h; ++i)
    head_orig[i] = head_work[i] =
        tuple_at([](const DiagonalSpec& s, int i) { return s.head[i]; }, i);
  std::vector<std::vector<double>> pat_orig(period), pat_work(period);
  for (int p = 0; p < period; ++p)
    pat_orig[p] = pat_work[p] = tuple_at(
        [](const DiagonalSpec& s, int i) { return s.tail_pattern[i]; }, p);

  // Stage 1: keep the last member away from 0 and 1. Later rationalization
  // measures its error against the clamped values, so the clamp may be
  // rounded away again when the budget allows; the total stays within eps.
  double clamp_cost = 0.0;
  for (auto& t : head_work)
    clamp_cost = std::max(clamp_cost, clamp_last_member(t, out.stage_budget));
  for (auto& t : pat_work)
    clamp_cost = std::max(clamp_cost, clamp_last_member(t, out.stage_budget));
  out.stage_costs.clamp = clamp_cost;

  // Stages 2-3 (essential-value and cover snaps) cost nothing: tail entries
  // already repeat a finite pattern of exact values.
  const double eps_blk = (eps - clamp_cost) * 0.95;

  // Stage 4a: bucket pattern positions by value tuple.
  std::vector<ValueClass> classes;
  for (int p = 0; p < period; ++p) {
    bool placed = false;
    for (ValueClass& c : classes) {
      bool same = true;
      for (int k = 0; k < n && same; ++k)
        same = (c.values[k] == pat_work[p][k]);
      if (same) {
        c.positions.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({pat_work[p], {p}, {}, {}});
  }

  const int nc = static_cast<int>(classes.size());
  for (ValueClass& c : classes) {
    long cap = static_cast<long>(std::ceil((n + 1) / (0.45 * eps_blk))) + 2;
    c.rat = rationalize_partition(c.values, 0.45 * eps_blk, cap);
    // Fillers reuse the class rationalization verbatim: a single-stage block
    // of dimension d_c with constant member diagonals b_k/d_c.
    c.filler_plan.a = c.rat.counts;
    c.filler_plan.n1 = c.rat.denominator;
    c.filler_plan.err_alpha = c.rat.max_error;
    c.filler_plan.b = c.rat.counts;
    c.filler_plan.n2 = c.rat.denominator;
    c.filler_plan.err_beta = c.rat.max_error;
    c.filler_plan.shortcut = true;
    c.filler_plan.alpha = c.values;
    c.filler_plan.beta = c.values;
  }

  // Stage 4b: one block per head position, pinned to the nearest class so the
  // averaging constant stays small. The shortcut is disabled so consumed bulk
  // slots stay divisible by the class denominator.
  std::vector<int> head_class(h, 0);
  std::vector<BlockPlan> head_plans(h);
  std::vector<long long> consumed(nc, 0);  // bulk slots per class
  for (int i = 0; i < h; ++i) {
    int best = 0;
    double best_delta = std::numeric_limits<double>::infinity();
    for (int c = 0; c < nc; ++c) {
      double d = 0.0;
      for (int k = 0; k < n; ++k)
        d = std::max(d, std::abs(head_work[i][k] - classes[c].values[k]));
      if (d < best_delta) {
        best_delta = d;
        best = c;
      }
    }
    head_class[i] = best;
    BlockOptions opts;
    opts.forced_b = classes[best].rat.counts;
    opts.forced_n2 = classes[best].rat.denominator;
    opts.forced_err_beta = classes[best].rat.max_error;
    opts.max_dim = max_dim;
    opts.allow_shortcut = false;
    opts.borrow_rank = true;
    head_plans[i] =
        plan_carpenter_block(head_work[i], classes[best].values, eps_blk, opts);
    consumed[best] += head_plans[i].dim() - 1;
  }

  // Stage 5: periods. Class c holds m_c positions per period and its fillers
  // come in copies of d_c slots, so R must satisfy m_c R = consumed_c mod d_c
  // (consumed_c is divisible by d_c) with at least one filler copy each.
  long long r0 = 1;
  for (int c = 0; c < nc; ++c) {
    long long dc = to_ll(classes[c].rat.denominator);
    long long mc = static_cast<long long>(classes[c].positions.size());
    long long q = dc / std::gcd(mc, dc);
    r0 = std::lcm(r0, q);
  }
  long long periods = r0;
  for (int c = 0; c < nc; ++c) {
    long long dc = to_ll(classes[c].rat.denominator);
    long long mc = static_cast<long long>(classes[c].positions.size());
    long long need = consumed[c] + dc;  // ensure one standalone copy
    long long r_min = (need + mc - 1) / mc;
    periods = std::max(periods, ((r_min + r0 - 1) / r0) * r0);
  }
  const long long m_total = h + periods * period;
  if (m_total > max_dim)
    throw ToleranceUnreachable("truncation dimension " +
                               std::to_string(m_total) + " exceeds the cap");

  // Per-class queues of spec tail positions, in increasing order.
  std::vector<std::vector<int>> queue(nc);
  std::vector<int> pat_class(period);
  for (int c = 0; c < nc; ++c)
    for (int p : classes[c].positions) pat_class[p] = c;
  for (long long r = 0; r < periods; ++r)
    for (int p = 0; p < period; ++p)
      queue[pat_class[p]].push_back(static_cast<int>(h + r * period + p));
  std::vector<size_t> qpos(nc, 0);

  ProjectionFamily fam;
  fam.members = n;
  fam.dim = static_cast<int>(m_total);
  fam.ranks.assign(n, BigInt(0));
  out.index_map.assign(m_total, -1);

  int offset = 0;
  auto append_block = [&](const BlockPlan& plan, int head_pos, int cls) {
    ProjectionFamily piece = build_carpenter_block(plan);
    FamilyBlock blk = std::move(piece.blocks[0]);
    blk.offset = offset;
    int d = static_cast<int>(piece.dim);
    int local = 0;
    if (head_pos >= 0) {
      out.index_map[offset] = head_pos;
      local = 1;
    }
    for (; local < d; ++local)
      out.index_map[offset + local] =
          queue[cls][qpos[cls]++];
    for (int k = 0; k < n; ++k) fam.ranks[k] += piece.ranks[k];
    fam.blocks.push_back(std::move(blk));
    offset += d;
  };

  for (int i = 0; i < h; ++i) append_block(head_plans[i], i, head_class[i]);
  for (int c = 0; c < nc; ++c) {
    long long dc = to_ll(classes[c].rat.denominator);
    long long mc = static_cast<long long>(classes[c].positions.size());
    long long copies = (mc * periods - consumed[c]) / dc;
    for (long long t = 0; t < copies; ++t)
      append_block(classes[c].filler_plan, -1, c);
  }
  if (offset != m_total)
    throw ToleranceUnreachable("assembly failed to tile the truncation");

  fam.validate();
  out.family = std::move(fam);
  out.truncation_dim = static_cast<int>(m_total);
  out.periods = static_cast<int>(periods);

  // Residuals against the original spec values, through the index map.
  double resid = 0.0;
  for (int k = 0; k < n; ++k) {
    CVector diag = out.family.member_diagonal(k);
    for (int j = 0; j < m_total; ++j) {
      Complex target = joint.specs[k].at(out.index_map[j]);
      resid = std::max(resid, std::abs(diag(j) - target));
    }
  }
  out.diag_residual = resid;
  out.stage_costs.block = resid;
  out.check = out.family.verify(kProjectionTol);
  out.notes.push_back(
      "every value class receives at least one standalone block copy, so the "
      "member spectra are stable under extending the truncation");
  return out;
}

}  // namespace diagforge
