#include "diagforge/schurhorn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"
#include "diagforge/hull.hpp"

namespace diagforge {

namespace {

long long to_ll(const BigInt& x) { return x.convert_to<long long>(); }

long long integral_ll(const Rational& q) {
  if (!q.is_integer()) throw std::logic_error("expected an integral rational");
  return to_ll(q.numerator());
}

BigInt big_lcm(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

RationalComplex exact_point(const Complex& z) {
  return RationalComplex::rationalized(z, 1e-12);
}

}  // namespace

NecessityReport check_necessity(const std::vector<Complex>& diag,
                                const SpectralData& n, double tol) {
  n.validate();
  std::vector<Complex> verts = n.hull_vertices();
  NecessityReport out;
  for (const Complex& a : diag) {
    double dist = distance_to_hull(a, verts);
    if (dist > out.worst_distance) {
      out.worst_distance = dist;
      out.worst_point = a;
    }
  }
  out.ok = out.worst_distance <= tol;
  return out;
}

FeasibilityReport feasibility_partition(
    const SpectralData& n, const std::vector<TargetBlock>& blocks) {
  n.validate();
  if (n.model != SpectralData::Model::Tracial)
    throw InvalidInput("feasibility runs on the tracial model");
  if (blocks.empty()) throw InvalidInput("no target blocks");
  Rational wsum = 0;
  for (const TargetBlock& b : blocks) {
    if (b.weight < Rational(0)) throw InvalidInput("negative block weight");
    wsum += b.weight;
  }
  if (wsum != Rational(1))
    throw InvalidInput("block weights must sum to 1 exactly");

  const int m = static_cast<int>(blocks.size());
  const int nz = static_cast<int>(n.values.size());

  FeasibilityReport rep;
  rep.z.reserve(nz);
  for (const Complex& z : n.values) rep.z.push_back(exact_point(z));
  rep.beta.reserve(m);
  for (const TargetBlock& b : blocks) rep.beta.push_back(exact_point(b.value));

  // variables gamma[j][k] at index j*nz + k
  const int nvars = m * nz;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  auto fresh_row = [&]() -> std::vector<Rational>& {
    rows.emplace_back(nvars, Rational(0));
    return rows.back();
  };

  for (int j = 0; j < m; ++j) {  // row sums
    auto& r = fresh_row();
    for (int k = 0; k < nz; ++k) r[j * nz + k] = 1;
    rhs.push_back(Rational(1));
  }
  for (int k = 0; k < nz; ++k) {  // trace marginals
    auto& r = fresh_row();
    for (int j = 0; j < m; ++j) r[j * nz + k] = blocks[j].weight;
    rhs.push_back(n.weights[k]);
  }
  for (int j = 0; j < m; ++j) {  // value rows, real and imaginary parts
    auto& re = fresh_row();
    for (int k = 0; k < nz; ++k) re[j * nz + k] = rep.z[k].re;
    rhs.push_back(rep.beta[j].re);
    auto& im = fresh_row();
    for (int k = 0; k < nz; ++k) im[j * nz + k] = rep.z[k].im;
    rhs.push_back(rep.beta[j].im);
  }

  FeasibilityOutcome lp = solve_exact_feasibility(rows, rhs);
  rep.feasible = lp.feasible;
  if (lp.feasible) {
    rep.witness.assign(m, std::vector<Rational>(nz));
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < nz; ++k) rep.witness[j][k] = lp.solution[j * nz + k];
  } else {
    rep.farkas = std::move(lp.farkas);
    rep.pairing = lp.pairing;
  }
  return rep;
}

ThreePointCheck feasibility_three_point(
    const SpectralData& n, const std::vector<TargetBlock>& blocks) {
  n.validate();
  if (n.model != SpectralData::Model::Tracial)
    throw InvalidInput("three-point check runs on the tracial model");
  ThreePointCheck out;
  if (n.values.size() != 3) return out;

  std::vector<RationalComplex> z;
  for (const Complex& v : n.values) z.push_back(exact_point(v));
  Rational cross = (z[1].re - z[0].re) * (z[2].im - z[0].im) -
                   (z[1].im - z[0].im) * (z[2].re - z[0].re);
  if (cross.is_zero()) return out;
  out.applicable = true;

  // trace match: sum_j w_j beta_j = sum_k omega_k z_k, exactly
  RationalComplex tn{Rational(0), Rational(0)};
  for (size_t k = 0; k < z.size(); ++k) tn = tn + n.weights[k] * z[k];
  RationalComplex ta{Rational(0), Rational(0)};
  std::vector<RationalComplex> beta;
  for (const TargetBlock& b : blocks) {
    beta.push_back(exact_point(b.value));
    ta = ta + b.weight * beta.back();
  }
  out.trace_match = (ta == tn);

  bool all_in = true;
  out.witness.resize(blocks.size());
  for (size_t j = 0; j < blocks.size(); ++j) {
    ExactHullResult h = hull_membership_exact(beta[j], z);
    out.in_hull.push_back(h.inside);
    all_in = all_in && h.inside;
    if (h.barycentric) out.witness[j] = *h.barycentric;
  }
  out.feasible = out.trace_match && all_in;
  if (!out.feasible) out.witness.clear();
  return out;
}

SynthTracial synth_diagonal_tracial(const SpectralData& n,
                                    const std::vector<TargetBlock>& blocks,
                                    double eps, long long max_dim) {
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  SynthTracial out;
  out.feasibility = feasibility_partition(n, blocks);
  if (!out.feasibility.feasible) return out;

  const int m = static_cast<int>(blocks.size());
  const int nz = static_cast<int>(n.values.size());
  const auto& gamma = out.feasibility.witness;

  // Exact model dimension: every cell size D w_j and rank D w_j gamma[j][k]
  // must be integral.
  BigInt d(1);
  for (int j = 0; j < m; ++j) {
    d = big_lcm(d, blocks[j].weight.denominator());
    for (int k = 0; k < nz; ++k)
      d = big_lcm(d, (blocks[j].weight * gamma[j][k]).denominator());
  }

  std::vector<long long> cell_size(m);
  std::vector<std::vector<long long>> ranks(m, std::vector<long long>(nz));
  out.exact_gamma = d <= BigInt(max_dim);
  if (out.exact_gamma) {
    long long dl = to_ll(d);
    out.model_dim = static_cast<int>(dl);
    for (int j = 0; j < m; ++j) {
      cell_size[j] = integral_ll(blocks[j].weight * Rational(dl));
      for (int k = 0; k < nz; ++k)
        ranks[j][k] = integral_ll(blocks[j].weight * gamma[j][k] * Rational(dl));
    }
  } else {
    // Coarsened model at the cap: round cell sizes and ranks, documenting
    // the trace deviation instead of failing outright.
    long long dl = max_dim;
    double need = 3.0 / eps;
    for (const TargetBlock& b : blocks) {
      double w = b.weight.to_double();
      if (w > 0) need = std::max(need, 3.0 / (eps * w));
    }
    if (static_cast<double>(dl) < need)
      throw ModelTooCoarse(
          "witness denominators exceed the cap and the cap cannot carry the "
          "requested eps");
    out.model_dim = static_cast<int>(dl);
    long long assigned = 0;
    for (int j = 0; j < m; ++j) {
      cell_size[j] = std::llround(blocks[j].weight.to_double() *
                                  static_cast<double>(dl));
      assigned += cell_size[j];
    }
    int guard = 0;
    while (assigned != dl && guard++ < 4 * m) {
      long long step = assigned < dl ? 1 : -1;
      int pick = 0;
      for (int j = 1; j < m; ++j)
        if (cell_size[j] > cell_size[pick]) pick = j;
      cell_size[pick] += step;
      assigned += step;
    }
    if (assigned != dl) throw ModelTooCoarse("cell sizing failed at the cap");
    for (int j = 0; j < m; ++j) {
      long long s = cell_size[j];
      long long sum = 0;
      for (int k = 0; k < nz; ++k) {
        ranks[j][k] = std::llround(gamma[j][k].to_double() *
                                   static_cast<double>(s));
        ranks[j][k] = std::clamp<long long>(ranks[j][k], 0, s);
        sum += ranks[j][k];
      }
      int g2 = 0;
      while (sum != s && g2++ < 4 * nz) {
        long long step = sum < s ? 1 : -1;
        int pick = -1;
        double best = -1e300;
        for (int k = 0; k < nz; ++k) {
          long long cand = ranks[j][k] + step;
          if (cand < 0 || cand > s) continue;
          double f = step * (gamma[j][k].to_double() * s - ranks[j][k]);
          if (f > best) {
            best = f;
            pick = k;
          }
        }
        if (pick < 0) break;
        ranks[j][pick] += step;
        sum += step;
      }
      if (sum != s) throw ModelTooCoarse("rank rounding failed at the cap");
    }
  }

  out.cells.resize(m);
  out.diagonal.clear();
  double resid = 0.0;
  int offset = 0;
  for (int j = 0; j < m; ++j) {
    SynthCell& c = out.cells[j];
    c.offset = offset;
    c.size = static_cast<int>(cell_size[j]);
    c.counts.assign(ranks[j].begin(), ranks[j].end());
    c.target = blocks[j].value;
    Complex realized = 0.0;
    if (c.size > 0) {
      for (int k = 0; k < nz; ++k)
        realized += n.values[k] * (static_cast<double>(ranks[j][k]) /
                                   static_cast<double>(c.size));
    }
    c.realized = realized;
    for (int i = 0; i < c.size; ++i) out.diagonal.push_back(realized);
    if (c.size > 0) resid = std::max(resid, std::abs(realized - c.target));
    offset += c.size;
  }
  out.residual = resid;

  out.spectral_ledger.resize(nz);
  for (int k = 0; k < nz; ++k) {
    BigInt total = 0;
    for (int j = 0; j < m; ++j) total += ranks[j][k];
    SynthTraceEntry& e = out.spectral_ledger[k];
    e.target = n.weights[k];
    e.achieved = Rational(total, BigInt(out.model_dim));
    e.exact = (e.achieved == e.target);
  }
  return out;
}

std::pair<CMatrix, CMatrix> synth_tracial_materialize(const SynthTracial& s,
                                                      const SpectralData& n) {
  if (!s.feasibility.feasible)
    throw InvalidInput("nothing to materialize: instance was infeasible");
  const int dim = s.model_dim;
  CMatrix model = CMatrix::Zero(dim, dim);
  CMatrix w = CMatrix::Zero(dim, dim);
  for (const SynthCell& c : s.cells) {
    if (c.size == 0) continue;
    CMatrix v = dft_unitary(c.size);
    w.block(c.offset, c.offset, c.size, c.size) = v;
    int cursor = 0;
    for (size_t k = 0; k < c.counts.size(); ++k)
      for (long long t = 0; t < c.counts[k]; ++t)
        model(c.offset + cursor, c.offset + cursor) = n.values[k], ++cursor;
  }
  return {model, w};
}

}  // namespace diagforge
