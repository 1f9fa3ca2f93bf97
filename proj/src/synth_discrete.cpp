#include "diagforge/synth_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "diagforge/carpenter.hpp"
#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"
#include "diagforge/hull.hpp"

namespace diagforge {

namespace {

long long to_ll(const BigInt& x) { return x.convert_to<long long>(); }

// Convex coefficients of v over the vertex list, supported on at most three
// vertices; v may sit up to a small distance outside, in which case its hull
// projection is decomposed. Returns the decomposition error |v - sum c_k g_k|.
double hull_decompose(const Complex& v, const std::vector<Complex>& verts,
                      std::vector<double>& coeff) {
  const int l = static_cast<int>(verts.size());
  coeff.assign(l, 0.0);

  std::vector<Point2<double>> pts;
  pts.reserve(l);
  for (const Complex& g : verts) pts.push_back({g.real(), g.imag()});
  std::vector<Point2<double>> hull = convex_hull(pts);

  auto vert_index = [&](const Point2<double>& p) {
    for (int k = 0; k < l; ++k)
      if (verts[k].real() == p.x && verts[k].imag() == p.y) return k;
    throw std::logic_error("hull vertex lost its origin");
  };

  auto segment_split = [&](const Complex& a, const Complex& b, int ia, int ib,
                           const Complex& p) {
    const Complex ab = b - a;
    double len2 = std::norm(ab);
    double t = len2 == 0.0 ? 0.0
                           : std::clamp(((p - a).real() * ab.real() +
                                         (p - a).imag() * ab.imag()) /
                                            len2,
                                        0.0, 1.0);
    coeff[ia] += 1.0 - t;
    coeff[ib] += t;
    return std::abs(p - (a + t * ab));
  };

  if (hull.size() == 1) {
    int k = vert_index(hull[0]);
    coeff[k] = 1.0;
    return std::abs(v - verts[k]);
  }
  if (hull.size() == 2) {
    return segment_split(Complex(hull[0].x, hull[0].y),
                         Complex(hull[1].x, hull[1].y), vert_index(hull[0]),
                         vert_index(hull[1]), v);
  }

  // Fan triangulation from hull[0]; pick the triangle whose barycentric
  // weights are admissible. A point marginally outside falls through to the
  // boundary projection.
  const Complex h0(hull[0].x, hull[0].y);
  for (size_t i = 1; i + 1 < hull.size(); ++i) {
    const Complex hi(hull[i].x, hull[i].y);
    const Complex hj(hull[i + 1].x, hull[i + 1].y);
    std::vector<double> g;
    try {
      g = barycentric3(v, h0, hi, hj);
    } catch (const DegenerateHull&) {
      continue;
    }
    if (g[0] >= -1e-12 && g[1] >= -1e-12 && g[2] >= -1e-12) {
      double shift = 0.0;
      for (double& x : g)
        if (x < 0) {
          shift += -x;
          x = 0.0;
        }
      int big = 0;
      for (int t = 1; t < 3; ++t)
        if (g[t] > g[big]) big = t;
      g[big] -= shift;
      coeff[vert_index(hull[0])] += g[0];
      coeff[vert_index(hull[i])] += g[1];
      coeff[vert_index(hull[i + 1])] += g[2];
      Complex back = g[0] * h0 + g[1] * hi + g[2] * hj;
      return std::abs(v - back);
    }
  }

  // outside: project to the nearest boundary segment
  double best = std::numeric_limits<double>::infinity();
  size_t best_i = 0;
  for (size_t i = 0; i < hull.size(); ++i) {
    size_t j = (i + 1) % hull.size();
    const Complex a(hull[i].x, hull[i].y), b(hull[j].x, hull[j].y);
    const Complex ab = b - a;
    double len2 = std::norm(ab);
    double t = len2 == 0.0 ? 0.0
                           : std::clamp(((v - a).real() * ab.real() +
                                         (v - a).imag() * ab.imag()) /
                                            len2,
                                        0.0, 1.0);
    double dd = std::abs(v - (a + t * ab));
    if (dd < best) {
      best = dd;
      best_i = i;
    }
  }
  size_t j = (best_i + 1) % hull.size();
  return segment_split(Complex(hull[best_i].x, hull[best_i].y),
                       Complex(hull[j].x, hull[j].y), vert_index(hull[best_i]),
                       vert_index(hull[j]), v);
}

// One construction block of the assembly: local model values and the unitary
// conjugating their diagonal, plus the spec positions its slots land on.
struct AssemblyBlock {
  CMatrix unitary;                  // V with operator = V^* D V
  std::vector<Complex> model_vals;  // D's diagonal, block-local order
  std::vector<int> spec_positions;  // one per local slot
  std::vector<int> lambda_slots;    // locals carrying a finite eigenvalue
  std::vector<int> lambda_order;    // rank of that eigenvalue in N_M's prefix
};

}  // namespace

SynthDiscreteResult synth_diagonal_discrete(const SpectralData& n,
                                            const DiagonalSpec& a, double eps,
                                            long long max_dim) {
  n.validate();
  a.validate();
  if (n.model != SpectralData::Model::Discrete)
    throw InvalidInput("discrete synthesis needs the discrete model");
  if (eps <= 0.0) throw InvalidInput("eps must be positive");

  const std::vector<Complex>& gamma = n.essential_values;
  const int l = static_cast<int>(gamma.size());
  const int h = static_cast<int>(a.head.size());
  const int period = static_cast<int>(a.tail_pattern.size());

  SynthDiscreteResult out;

  // Necessity precondition at 1e-9.
  {
    std::vector<Complex> all = a.head;
    all.insert(all.end(), a.tail_pattern.begin(), a.tail_pattern.end());
    NecessityReport pre = check_necessity(all, n, 1e-9);
    if (!pre.ok)
      throw NecessityViolated(
          "target value lies outside the hull of the essential spectrum",
          pre.worst_point.real(), pre.worst_point.imag(), pre.worst_distance);
  }

  // Identity shortcut: the target already is a truncation of the model.
  {
    std::vector<Complex> eigs;
    for (const auto& [v, mult] : n.finite_eigs)
      for (int t = 0; t < mult; ++t) eigs.push_back(v);
    bool same_head = static_cast<int>(eigs.size()) == h;
    for (int i = 0; same_head && i < h; ++i) same_head = (a.head[i] == eigs[i]);
    auto contains = [](const std::vector<Complex>& set, const Complex& v) {
      for (const Complex& w : set)
        if (w == v) return true;
      return false;
    };
    bool tails_ok = true;
    for (const Complex& v : a.tail_pattern)
      tails_ok = tails_ok && contains(gamma, v);
    for (const Complex& g : gamma)
      tails_ok = tails_ok && contains(a.tail_pattern, g);
    if (same_head && tails_ok) {
      const int m = h + period;
      out.truncation_dim = m;
      out.model_diagonal = a.truncate(m);
      out.unitary = CMatrix::Identity(m, m);
      out.realized_diagonal = out.model_diagonal;
      out.residual = 0.0;
      out.identity_shortcut = true;
      out.necessity = check_necessity(out.realized_diagonal, n, 1e-9);
      return out;
    }
  }

  // Cover snap: align target values on a grid so near-duplicates merge.
  const double mesh = eps / (5.0 * std::max(1, l));
  auto snap = [&](const Complex& v) {
    return Complex(std::round(v.real() / mesh) * mesh,
                   std::round(v.imag() / mesh) * mesh);
  };
  std::vector<Complex> head_vals(h), pat_vals(period);
  double snap_cost = 0.0;
  for (int i = 0; i < h; ++i) {
    head_vals[i] = snap(a.head[i]);
    snap_cost = std::max(snap_cost, std::abs(head_vals[i] - a.head[i]));
  }
  for (int p = 0; p < period; ++p) {
    pat_vals[p] = snap(a.tail_pattern[p]);
    snap_cost = std::max(snap_cost, std::abs(pat_vals[p] - a.tail_pattern[p]));
  }
  out.snap_cost = snap_cost;

  // Convex coefficients per distinct snapped value.
  std::map<std::pair<double, double>, std::vector<double>> coeff_of;
  double decomp_cost = 0.0;
  auto coefficients = [&](const Complex& v) -> const std::vector<double>& {
    auto key = std::make_pair(v.real(), v.imag());
    auto it = coeff_of.find(key);
    if (it == coeff_of.end()) {
      std::vector<double> c;
      decomp_cost = std::max(decomp_cost, hull_decompose(v, gamma, c));
      // guard the partition invariants against roundoff
      double sum = 0.0;
      for (double& x : c) {
        if (x < 0.0) x = 0.0;
        if (x > 1.0) x = 1.0;
        sum += x;
      }
      int big = 0;
      for (int k = 1; k < l; ++k)
        if (c[k] > c[big]) big = k;
      c[big] += 1.0 - sum;
      it = coeff_of.emplace(key, std::move(c)).first;
    }
    return it->second;
  };

  double weight_scale = 0.0;
  for (const Complex& g : gamma) weight_scale += std::abs(g);
  const double eps_c = 0.55 * eps / (weight_scale + 1.0);

  JointPartitionSpec joint;
  joint.specs.resize(l);
  for (int i = 0; i < h; ++i) {
    const std::vector<double>& c = coefficients(head_vals[i]);
    for (int k = 0; k < l; ++k) joint.specs[k].head.push_back(c[k]);
  }
  for (int p = 0; p < period; ++p) {
    const std::vector<double>& c = coefficients(pat_vals[p]);
    for (int k = 0; k < l; ++k) joint.specs[k].tail_pattern.push_back(c[k]);
  }

  CarpenterDiscreteResult base = carpenter_discrete(joint, eps_c, max_dim);
  const int m0 = base.truncation_dim;

  std::vector<AssemblyBlock> blocks;
  for (const FamilyBlock& fb : base.family.blocks) {
    AssemblyBlock ab;
    ab.unitary = fb.basis_unitary;
    ab.model_vals.resize(fb.dim());
    ab.spec_positions.resize(fb.dim());
    for (int i = 0; i < fb.dim(); ++i) {
      ab.model_vals[i] = gamma[fb.slots[i]];
      ab.spec_positions[i] = base.index_map[fb.offset + i];
    }
    blocks.push_back(std::move(ab));
  }

  // Finite eigenvalues are absorbed into paired blocks over the tail: each
  // copy joins M d_c slots of one value class, shifting the class constant by
  // (lambda - gamma_k0)/(M d_c).
  std::vector<Complex> lambdas;
  for (const auto& [v, mult] : n.finite_eigs)
    for (int t = 0; t < mult; ++t) lambdas.push_back(v);

  int m_total = m0;
  if (!lambdas.empty()) {
    // value classes of the tail, with shared rationalized coefficients
    struct TailClass {
      Complex value;
      std::vector<int> positions;
      std::vector<BigInt> counts;
      long long den = 1;
      int k0 = 0;  // member donating the borrowed rank
    };
    std::vector<TailClass> classes;
    for (int p = 0; p < period; ++p) {
      bool placed = false;
      for (TailClass& c : classes)
        if (c.value == pat_vals[p]) {
          c.positions.push_back(p);
          placed = true;
          break;
        }
      if (!placed) classes.push_back({pat_vals[p], {p}, {}, 1, 0});
    }
    for (TailClass& c : classes) {
      long cap = static_cast<long>(std::ceil((l + 1) / (0.45 * eps_c))) + 2;
      RationalizedPartition rp = rationalize_partition_prefer_exact(
          coefficients(c.value), 0.45 * eps_c, cap);
      c.counts = rp.counts;
      c.den = to_ll(rp.denominator);
      for (int k = 1; k < l; ++k)
        if (c.counts[k] > c.counts[c.k0]) c.k0 = k;
    }

    const double delta = 0.6 * eps;
    std::vector<long long> absorbed(classes.size(), 0);
    struct Absorber {
      int cls;
      long long size;
      std::vector<long long> ranks;
      int lambda_index;
    };
    std::vector<Absorber> absorbers;
    for (size_t q = 0; q < lambdas.size(); ++q) {
      const Complex lam = lambdas[q];
      // smallest block over the classes
      int best_cls = -1;
      long long best_size = 0;
      for (size_t c = 0; c < classes.size(); ++c) {
        const TailClass& tc = classes[c];
        double gap = std::abs(lam - gamma[tc.k0]);
        long long mult =
            std::max<long long>(1, static_cast<long long>(
                                       std::ceil(gap / (delta * tc.den))));
        long long size = mult * tc.den;
        // verify the realized constant directly, growing if the seed missed
        bool landed = false;
        for (int guard = 0; guard < 64 && !landed; ++guard) {
          Complex sumv = lam;
          for (int k = 0; k < l; ++k) {
            long long r = mult * to_ll(tc.counts[k]) - (k == tc.k0 ? 1 : 0);
            sumv += gamma[k] * static_cast<double>(r);
          }
          Complex realized = sumv / static_cast<double>(size);
          if (std::abs(realized - tc.value) < delta) {
            landed = true;
            break;
          }
          ++mult;
          size = mult * tc.den;
        }
        if (!landed || size > 1000000)
          throw ToleranceUnreachable("absorption block exceeds the size cap");
        if (best_cls < 0 || size < best_size) {
          best_cls = static_cast<int>(c);
          best_size = size;
        }
      }
      const TailClass& tc = classes[best_cls];
      Absorber ab;
      ab.cls = best_cls;
      ab.size = best_size;
      ab.lambda_index = static_cast<int>(q);
      long long mult = best_size / tc.den;
      ab.ranks.resize(l);
      for (int k = 0; k < l; ++k)
        ab.ranks[k] = mult * to_ll(tc.counts[k]) - (k == tc.k0 ? 1 : 0);
      absorbed[best_cls] += best_size;
      absorbers.push_back(std::move(ab));
    }

    long long r0 = 1;
    for (const TailClass& c : classes) {
      long long mc = static_cast<long long>(c.positions.size());
      r0 = std::lcm(r0, c.den / std::gcd(mc, c.den));
    }
    long long rext = 0;
    for (size_t c = 0; c < classes.size(); ++c) {
      long long mc = static_cast<long long>(classes[c].positions.size());
      long long need = (absorbed[c] + mc - 1) / mc;
      rext = std::max(rext, need);
    }
    rext = ((rext + r0 - 1) / r0) * r0;
    if (rext == 0) rext = r0;  // keep at least one extension period
    long long total = static_cast<long long>(m0) + rext * period;
    if (total > max_dim)
      throw ToleranceUnreachable("truncation dimension exceeds the cap");
    m_total = static_cast<int>(total);

    // per-class queues over the extension region
    std::vector<std::vector<int>> queue(classes.size());
    std::vector<int> class_of(period);
    for (size_t c = 0; c < classes.size(); ++c)
      for (int p : classes[c].positions) class_of[p] = static_cast<int>(c);
    for (long long r = 0; r < rext; ++r)
      for (int p = 0; p < period; ++p)
        queue[class_of[p]].push_back(m0 + static_cast<int>(r) * period + p);
    std::vector<size_t> qpos(classes.size(), 0);

    for (const Absorber& ab : absorbers) {
      const TailClass& tc = classes[ab.cls];
      AssemblyBlock blk;
      blk.unitary = dft_unitary(static_cast<int>(ab.size));
      blk.model_vals.reserve(ab.size);
      blk.model_vals.push_back(lambdas[ab.lambda_index]);
      blk.lambda_slots.push_back(0);
      blk.lambda_order.push_back(ab.lambda_index);
      for (int k = 0; k < l; ++k)
        for (long long t = 0; t < ab.ranks[k]; ++t)
          blk.model_vals.push_back(gamma[k]);
      blk.spec_positions.resize(ab.size);
      for (long long i = 0; i < ab.size; ++i)
        blk.spec_positions[i] = queue[ab.cls][qpos[ab.cls]++];
      blocks.push_back(std::move(blk));
    }
    // extension fillers complete the region
    for (size_t c = 0; c < classes.size(); ++c) {
      const TailClass& tc = classes[c];
      long long mc = static_cast<long long>(tc.positions.size());
      long long rest = mc * rext - absorbed[c];
      long long copies = rest / tc.den;
      if (copies * tc.den != rest)
        throw std::logic_error("extension bookkeeping lost divisibility");
      CMatrix v = dft_unitary(static_cast<int>(tc.den));
      for (long long t = 0; t < copies; ++t) {
        AssemblyBlock blk;
        blk.unitary = v;
        for (int k = 0; k < l; ++k)
          for (long long i = 0; i < to_ll(tc.counts[k]); ++i)
            blk.model_vals.push_back(gamma[k]);
        blk.spec_positions.resize(tc.den);
        for (long long i = 0; i < tc.den; ++i)
          blk.spec_positions[i] = queue[c][qpos[c]++];
        blocks.push_back(std::move(blk));
      }
    }
  }

  // Canonical model order: finite eigenvalues first, then essential slots in
  // construction order.
  const int m_dim = m_total;
  out.truncation_dim = m_dim;
  out.model_diagonal.assign(m_dim, Complex(0.0));
  const int lambda_count = static_cast<int>(lambdas.size());
  for (int q = 0; q < lambda_count; ++q) out.model_diagonal[q] = lambdas[q];

  // model index per (block, local slot)
  int next_model = lambda_count;
  out.unitary = CMatrix::Zero(m_dim, m_dim);
  out.realized_diagonal.assign(m_dim, Complex(0.0));
  for (const AssemblyBlock& blk : blocks) {
    const int d = static_cast<int>(blk.model_vals.size());
    std::vector<int> model_index(d);
    for (int i = 0; i < d; ++i) {
      bool is_lambda = false;
      for (size_t t = 0; t < blk.lambda_slots.size(); ++t)
        if (blk.lambda_slots[t] == i) {
          model_index[i] = blk.lambda_order[t];
          is_lambda = true;
        }
      if (!is_lambda) {
        model_index[i] = next_model;
        out.model_diagonal[next_model] = blk.model_vals[i];
        ++next_model;
      }
    }
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        out.unitary(model_index[p], blk.spec_positions[q]) = blk.unitary(p, q);
    // realized block diagonal: (V^* D V)_{qq}
    for (int q = 0; q < d; ++q) {
      Complex val = 0.0;
      for (int p = 0; p < d; ++p)
        val += std::norm(blk.unitary(p, q)) * blk.model_vals[p];
      out.realized_diagonal[blk.spec_positions[q]] = val;
    }
  }
  if (next_model != m_dim)
    throw std::logic_error("model slot count mismatch");

  std::vector<Complex> target = a.truncate(m_dim);
  double resid = 0.0;
  for (int i = 0; i < m_dim; ++i)
    resid = std::max(resid, std::abs(out.realized_diagonal[i] - target[i]));
  out.residual = resid;
  if (!(resid < eps))
    throw ToleranceUnreachable("synthesized residual " + std::to_string(resid) +
                               " missed eps");
  out.necessity = check_necessity(out.realized_diagonal, n, 1e-8 + eps);
  out.notes.push_back("basis order: finite eigenvalues first, then "
                      "essential-value slots in construction order");
  return out;
}

}  // namespace diagforge
