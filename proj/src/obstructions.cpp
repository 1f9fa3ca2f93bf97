#include "diagforge/obstructions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "diagforge/carpenter.hpp"
#include "diagforge/errors.hpp"
#include "diagforge/matrix_checks.hpp"
#include "diagforge/synth_discrete.hpp"

namespace diagforge {

namespace {

CMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

double max_dev(const CMatrix& u, const CMatrix& n,
               const std::vector<Complex>& target) {
  double worst = 0.0;
  for (int i = 0; i < n.rows(); ++i) {
    Complex d = (u.col(i).adjoint() * n * u.col(i))(0, 0);
    worst = std::max(worst, std::abs(d - target[i]));
  }
  return worst;
}

double sq_dev(const CMatrix& u, const CMatrix& n,
              const std::vector<Complex>& target) {
  double s = 0.0;
  for (int i = 0; i < n.rows(); ++i) {
    Complex d = (u.col(i).adjoint() * n * u.col(i))(0, 0);
    s += std::norm(d - target[i]);
  }
  return s;
}

// Euclidean gradient of the squared deviation with respect to conj(U).
CMatrix sq_grad(const CMatrix& u, const CMatrix& n,
                const std::vector<Complex>& target) {
  const int dim = static_cast<int>(n.rows());
  CMatrix m = u.adjoint() * n * u;
  CVector dev(dim);
  for (int i = 0; i < dim; ++i) dev(i) = m(i, i) - target[i];
  CMatrix g = n * u * dev.conjugate().asDiagonal() +
              n.adjoint() * u * dev.asDiagonal();
  return g;
}

CMatrix qr_retract(const CMatrix& m) {
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m.rows(); ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

ArvesonSearchResult arveson_search_target(const std::vector<Complex>& target,
                                          int restarts, int iters,
                                          std::uint64_t seed) {
  if (restarts < 1 || iters < 1)
    throw InvalidInput("restarts and iters must be positive");
  if (target.size() != 3) throw InvalidInput("the obstruction target is 3x3");

  CMatrix n = CMatrix::Zero(3, 3);
  n(1, 1) = 1.0;
  n(2, 2) = Complex(0.0, 1.0);

  ArvesonSearchResult out;
  out.seed = seed;
  out.restarts = restarts;
  out.iters = iters;
  out.floor = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    // independent deterministic stream per restart
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL +
                        static_cast<std::uint64_t>(r));
    CMatrix u = haar_unitary(3, rng);
    double f = sq_dev(u, n, target);
    double best_here = max_dev(u, n, target);
    CMatrix best_u = u;
    double step = 0.5;
    for (int it = 0; it < iters; ++it) {
      CMatrix g = sq_grad(u, n, target);
      double gnorm = g.norm();
      if (gnorm < 1e-14) break;
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        CMatrix cand = qr_retract(u - step * g);
        double fc = sq_dev(cand, n, target);
        if (fc < f - 1e-4 * step * gnorm * gnorm) {
          u = cand;
          f = fc;
          moved = true;
          double dev = max_dev(u, n, target);
          if (dev < best_here) {
            best_here = dev;
            best_u = u;
          }
          step *= 1.6;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (best_here < out.floor) {
      out.floor = best_here;
      out.best_unitary = best_u;
    }
  }
  return out;
}

ArvesonSearchResult arveson_search(int restarts, int iters,
                                   std::uint64_t seed) {
  return arveson_search_target(
      {Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(0.5, 0.5)}, restarts,
      iters, seed);
}

SquareCertificate square_infeasibility_certificate() {
  SpectralData n;
  n.model = SpectralData::Model::Tracial;
  n.values = {Complex(0, 0), Complex(1, 0), Complex(0, 1), Complex(1, 1)};
  n.weights = {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)};
  std::vector<TargetBlock> blocks = {{Complex(0, 0), Rational(1, 2)},
                                     {Complex(1, 1), Rational(1, 2)}};

  SquareCertificate out;
  out.lp = feasibility_partition(n, blocks);
  out.infeasible = !out.lp.feasible;
  if (out.infeasible) {
    out.farkas = out.lp.farkas;
    out.pairing = out.lp.pairing;
  }

  // Direct argument: a block at the extreme point 0 can only draw from the
  // spectral mass at 0, so its weight 1/2 must fit into 1/4.
  out.forced_weight = Rational(1, 2);
  out.available_weight = Rational(1, 4);
  return out;
}

ContrastReport contrast_demo(double eps, int restarts, int iters,
                             std::uint64_t seed, long long max_dim) {
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  ContrastReport out;

  // the classic partition data extended by a periodic tail
  JointPartitionSpec joint;
  joint.specs.resize(3);
  const double half = 0.5;
  double heads[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double tails[3][3] = {{half, half, 0}, {half, 0, half}, {0, half, half}};
  for (int k = 0; k < 3; ++k) {
    joint.specs[k].head = {heads[k][0], heads[k][1], heads[k][2]};
    joint.specs[k].tail_pattern = {tails[k][0], tails[k][1], tails[k][2]};
  }
  CarpenterDiscreteResult carp = carpenter_discrete(joint, eps, max_dim);
  out.carpenter_residual = carp.diag_residual;
  out.carpenter_dim = carp.truncation_dim;

  // the matching diagonal target over spectrum {0, 1, i}
  SpectralData n;
  n.model = SpectralData::Model::Discrete;
  n.essential_values = {Complex(0, 0), Complex(1, 0), Complex(0, 1)};
  DiagonalSpec a;
  a.head = {Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(0.5, 0.5)};
  a.tail_pattern = {Complex(0, 0), Complex(0, 1), Complex(1, 0)};
  SynthDiscreteResult synth = synth_diagonal_discrete(n, a, eps, max_dim);
  out.synthesis_residual = synth.residual;
  out.synthesis_dim = synth.truncation_dim;

  ArvesonSearchResult search = arveson_search(restarts, iters, seed);
  out.floor = search.floor;
  out.floor_exceeds_residuals =
      out.floor > out.carpenter_residual && out.floor > out.synthesis_residual;
  out.notes.push_back(
      "the 3x3 floor is empirical evidence for the cited nonexistence, not a "
      "proof");
  return out;
}

}  // namespace diagforge
