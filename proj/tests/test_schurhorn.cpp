#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"
#include "diagforge/matrix_checks.hpp"
#include "diagforge/schurhorn.hpp"
#include "diagforge/synth_discrete.hpp"
#include "lp_oracle.hpp"

using namespace diagforge;
using diagforge_test::oracle_feasible;
using diagforge_test::step_diagonal_system;

namespace {

SpectralData tracial(std::vector<Complex> values, std::vector<Rational> w) {
  SpectralData n;
  n.model = SpectralData::Model::Tracial;
  n.values = std::move(values);
  n.weights = std::move(w);
  return n;
}

SpectralData discrete(std::vector<Complex> essential,
                      std::vector<std::pair<Complex, int>> eigs = {}) {
  SpectralData n;
  n.model = SpectralData::Model::Discrete;
  n.essential_values = std::move(essential);
  n.finite_eigs = std::move(eigs);
  return n;
}

bool lp_matches_oracle(const SpectralData& n,
                       const std::vector<TargetBlock>& blocks) {
  FeasibilityReport rep = feasibility_partition(n, blocks);
  std::vector<RationalComplex> z, beta;
  std::vector<Rational> w;
  for (const Complex& v : n.values)
    z.push_back(RationalComplex::rationalized(v, 1e-12));
  for (const TargetBlock& b : blocks) {
    beta.push_back(RationalComplex::rationalized(b.value, 1e-12));
    w.push_back(b.weight);
  }
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  step_diagonal_system(z, n.weights, beta, w, rows, rhs);
  return rep.feasible == oracle_feasible(rows, rhs);
}

}  // namespace

TEST_CASE("necessity: triangle data") {
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)});
  NecessityReport in = check_necessity(
      {Complex(0.5, 0), Complex(0, 0.5), Complex(0.5, 0.5)}, n, 1e-9);
  CHECK(in.ok);

  NecessityReport out =
      check_necessity({Complex(2.0, 0.0)}, n, 1e-9);
  CHECK_FALSE(out.ok);
  CHECK(out.worst_distance >= 1.0 - 1e-12);  // the nearest vertex is 1
  CHECK(out.worst_point == Complex(2.0, 0.0));

  NecessityReport verts = check_necessity(
      {Complex(0, 0), Complex(1, 0), Complex(0, 1)}, n, 1e-12);
  CHECK(verts.ok);
  CHECK(verts.worst_distance <= 1e-12);
}

TEST_CASE("feasibility: constant trace diagonal is always feasible") {
  SpectralData n = tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1)},
                           {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
  Complex tau = n.trace();
  std::vector<TargetBlock> blocks = {{tau, Rational(1)}};
  FeasibilityReport rep = feasibility_partition(n, blocks);
  CHECK(rep.feasible);
  // the weights themselves are a witness; substitute them
  RationalComplex acc{Rational(0), Rational(0)};
  for (size_t k = 0; k < n.values.size(); ++k)
    acc = acc + n.weights[k] * rep.z[k];
  CHECK(acc == rep.beta[0]);
}

TEST_CASE("feasibility: the four-point square obstruction is infeasible") {
  SpectralData n =
      tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1), Complex(1, 1)},
              {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  std::vector<TargetBlock> blocks = {{Complex(0, 0), Rational(1, 2)},
                                     {Complex(1, 1), Rational(1, 2)}};
  FeasibilityReport rep = feasibility_partition(n, blocks);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.pairing > Rational(0));
  CHECK_FALSE(rep.farkas.empty());
}

TEST_CASE("feasibility: perturbed interior targets are feasible") {
  SpectralData n =
      tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1), Complex(1, 1)},
              {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  std::vector<TargetBlock> blocks = {
      {Complex(0.25, 0.25), Rational(1, 2)},
      {Complex(0.75, 0.75), Rational(1, 2)}};
  FeasibilityReport rep = feasibility_partition(n, blocks);
  CHECK(rep.feasible);
  // substitute the witness into every constraint class
  const auto& g = rep.witness;
  for (size_t j = 0; j < blocks.size(); ++j) {
    Rational rs = 0;
    RationalComplex val{Rational(0), Rational(0)};
    for (size_t k = 0; k < n.values.size(); ++k) {
      rs += g[j][k];
      val = val + g[j][k] * rep.z[k];
    }
    CHECK(rs == Rational(1));
    CHECK(val == rep.beta[j]);
  }
  for (size_t k = 0; k < n.values.size(); ++k) {
    Rational marg = 0;
    for (size_t j = 0; j < blocks.size(); ++j)
      marg += blocks[j].weight * g[j][k];
    CHECK(marg == n.weights[k]);
  }
}

TEST_CASE("feasibility rejects weight mismatches") {
  SpectralData n = tracial({Complex(0, 0), Complex(1, 0)},
                           {Rational(1, 2), Rational(1, 2)});
  std::vector<TargetBlock> blocks = {{Complex(0.5, 0), Rational(1, 3)}};
  CHECK_THROWS_AS(feasibility_partition(n, blocks), InvalidInput);
}

TEST_CASE("three-point shortcut matches the solver") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> grid(0, 8);
  SpectralData n = tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1)},
                           {Rational(1, 4), Rational(1, 2), Rational(1, 4)});
  int applicable = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int m = 1 + static_cast<int>(rng() % 2);
    std::vector<TargetBlock> blocks;
    Rational wleft(1);
    for (int j = 0; j < m; ++j) {
      Rational w = (j == m - 1) ? wleft : Rational(1, 2);
      wleft -= w;
      blocks.push_back(
          {Complex(grid(rng) / 8.0, grid(rng) / 8.0), w});
    }
    ThreePointCheck tp = feasibility_three_point(n, blocks);
    REQUIRE(tp.applicable);
    FeasibilityReport lp = feasibility_partition(n, blocks);
    CHECK(tp.feasible == lp.feasible);
    ++applicable;
  }
  CHECK(applicable == 120);
}

TEST_CASE("three-point shortcut is inapplicable for collinear points") {
  SpectralData n = tracial({Complex(0, 0), Complex(1, 0), Complex(2, 0)},
                           {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  ThreePointCheck tp =
      feasibility_three_point(n, {{Complex(1, 0), Rational(1)}});
  CHECK_FALSE(tp.applicable);
}

TEST_CASE("solver agrees with the basic-solution oracle on grid data") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> grid(0, 8);
  std::vector<std::vector<Complex>> zsets = {
      {Complex(0, 0), Complex(1, 0), Complex(0, 1)},
      {Complex(0, 0), Complex(1, 0), Complex(0, 1), Complex(1, 1)},
      {Complex(0, 0), Complex(1, 0), Complex(0.5, 1)},
  };
  for (int trial = 0; trial < 250; ++trial) {
    const auto& zs = zsets[trial % zsets.size()];
    const int nz = static_cast<int>(zs.size());
    // random grid weights summing to 1
    std::vector<int> cuts(nz, 0);
    for (int i = 0; i < 8; ++i) cuts[rng() % nz]++;
    std::vector<Rational> w;
    for (int k = 0; k < nz; ++k) w.emplace_back(cuts[k], 8);
    SpectralData n = tracial(zs, w);

    int m = 1 + static_cast<int>(rng() % 3);
    std::vector<int> bcuts(m, 0);
    for (int i = 0; i < 8; ++i) bcuts[rng() % m]++;
    std::vector<TargetBlock> blocks;
    bool ok = true;
    for (int j = 0; j < m; ++j) {
      if (bcuts[j] == 0) ok = false;
      blocks.push_back({Complex(grid(rng) / 8.0, grid(rng) / 8.0),
                        Rational(bcuts[j], 8)});
    }
    if (!ok) continue;
    CHECK(lp_matches_oracle(n, blocks));
  }
}

TEST_CASE("synth tracial: constant trace diagonal") {
  SpectralData n = tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1)},
                           {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
  std::vector<TargetBlock> blocks = {{n.trace(), Rational(1)}};
  SynthTracial s = synth_diagonal_tracial(n, blocks, 0.02);
  REQUIRE(s.feasibility.feasible);
  CHECK(s.residual < 0.02);
  for (const SynthTraceEntry& e : s.spectral_ledger) CHECK(e.exact);

  auto [model, w] = synth_tracial_materialize(s, n);
  CHECK(unitary_residual(w) < 1e-10);
  CMatrix conj = w.adjoint() * model * w;
  for (int i = 0; i < s.model_dim; ++i)
    CHECK(std::abs(conj(i, i) - s.diagonal[i]) < 1e-10);
}

TEST_CASE("synth tracial: infeasible data surfaces without synthesis") {
  SpectralData n =
      tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1), Complex(1, 1)},
              {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  std::vector<TargetBlock> blocks = {{Complex(0, 0), Rational(1, 2)},
                                     {Complex(1, 1), Rational(1, 2)}};
  SynthTracial s = synth_diagonal_tracial(n, blocks, 0.05);
  CHECK_FALSE(s.feasibility.feasible);
  CHECK(s.cells.empty());
}

TEST_CASE("synth tracial: two blocks over a triangle") {
  SpectralData n = tracial({Complex(0, 0), Complex(1, 0), Complex(0, 1)},
                           {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  // tau(N) = (1+i)/3; choose betas in the hull averaging to it
  std::vector<TargetBlock> blocks = {
      {Complex(1.0 / 6.0, 1.0 / 3.0), Rational(1, 2)},
      {Complex(0.5, 1.0 / 3.0), Rational(1, 2)}};
  ThreePointCheck tp = feasibility_three_point(n, blocks);
  REQUIRE(tp.applicable);
  REQUIRE(tp.feasible);
  SynthTracial s = synth_diagonal_tracial(n, blocks, 0.02);
  REQUIRE(s.feasibility.feasible);
  CHECK(s.residual < 0.02);

  auto [model, w] = synth_tracial_materialize(s, n);
  FamilyCheck unit;
  CHECK(unitary_residual(w) < 1e-9);
  // spectral distribution of the model matches the declared weights
  NormalDiagonalization diag = diagonalize_normal(model, 1e-9);
  int count0 = 0, count1 = 0, counti = 0;
  for (const Complex& ev : diag.eigenvalues) {
    if (std::abs(ev - Complex(0, 0)) < 1e-9) ++count0;
    if (std::abs(ev - Complex(1, 0)) < 1e-9) ++count1;
    if (std::abs(ev - Complex(0, 1)) < 1e-9) ++counti;
  }
  CHECK(count0 == s.model_dim / 3);
  CHECK(count1 == s.model_dim / 3);
  CHECK(counti == s.model_dim / 3);
}

TEST_CASE("synth discrete: identity when the target is already a truncation") {
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)},
                            {{Complex(0.5, 0.5), 2}});
  DiagonalSpec a;
  a.head = {Complex(0.5, 0.5), Complex(0.5, 0.5)};
  a.tail_pattern = {Complex(0, 0), Complex(1, 0), Complex(0, 1)};
  SynthDiscreteResult s = synth_diagonal_discrete(n, a, 0.05);
  CHECK(s.identity_shortcut);
  CHECK(s.residual == 0.0);
  CHECK(s.truncation_dim == 5);
  CHECK(max_norm(s.unitary - CMatrix::Identity(5, 5)) == 0.0);
}

TEST_CASE("synth discrete: mixed head over a pure triangle tail") {
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)});
  DiagonalSpec a;
  a.head = {Complex(0.5, 0), Complex(0, 0.5), Complex(0.5, 0.5)};
  a.tail_pattern = {Complex(0, 0), Complex(0, 1), Complex(1, 0)};
  SynthDiscreteResult s = synth_diagonal_discrete(n, a, 0.05);
  CHECK(s.residual < 0.05);
  CHECK(s.necessity.ok);

  // unitarity and the realized diagonal, via the dense assembly
  CHECK(unitary_residual(s.unitary) < 1e-9);
  CVector model(s.truncation_dim);
  for (int i = 0; i < s.truncation_dim; ++i) model(i) = s.model_diagonal[i];
  CMatrix conj = s.unitary.adjoint() * CMatrix(model.asDiagonal()) * s.unitary;
  std::vector<Complex> target = a.truncate(s.truncation_dim);
  for (int i = 0; i < s.truncation_dim; ++i) {
    CHECK(std::abs(conj(i, i) - s.realized_diagonal[i]) < 1e-10);
    CHECK(std::abs(conj(i, i) - target[i]) < 0.05);
  }
}

TEST_CASE("synth discrete: constant trace target reduces to flattening") {
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)});
  DiagonalSpec a;
  a.tail_pattern = {Complex(1.0 / 3.0, 1.0 / 3.0)};
  SynthDiscreteResult s = synth_diagonal_discrete(n, a, 0.05);
  CHECK(s.residual < 0.05);
  for (const Complex& v : s.realized_diagonal)
    CHECK(std::abs(v - Complex(1.0 / 3.0, 1.0 / 3.0)) < 0.05);
}

TEST_CASE("synth discrete: finite eigenvalues are absorbed") {
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)},
                            {{Complex(0.9, 0.05), 1}, {Complex(0.1, 0.8), 2}});
  DiagonalSpec a;
  a.head = {Complex(0.25, 0.25)};
  a.tail_pattern = {Complex(0.5, 0.25), Complex(0.25, 0.5)};
  SynthDiscreteResult s = synth_diagonal_discrete(n, a, 0.05, 16384);
  CHECK(s.residual < 0.05);
  CHECK(unitary_residual(s.unitary) < 1e-9);
  // the model carries each finite eigenvalue exactly once per multiplicity
  int c1 = 0, c2 = 0;
  for (const Complex& v : s.model_diagonal) {
    if (v == Complex(0.9, 0.05)) ++c1;
    if (v == Complex(0.1, 0.8)) ++c2;
  }
  CHECK(c1 == 1);
  CHECK(c2 == 2);
  // eigenvalues of the conjugated model recover the declared data
  CVector model(s.truncation_dim);
  for (int i = 0; i < s.truncation_dim; ++i) model(i) = s.model_diagonal[i];
  CMatrix op = s.unitary.adjoint() * CMatrix(model.asDiagonal()) * s.unitary;
  NormalDiagonalization diag = diagonalize_normal(op, 1e-7);
  std::vector<Complex> want = s.model_diagonal;
  int matched = 0;
  for (const Complex& ev : diag.eigenvalues) {
    for (auto it = want.begin(); it != want.end(); ++it)
      if (std::abs(*it - ev) < 1e-7) {
        want.erase(it);
        ++matched;
        break;
      }
  }
  CHECK(matched == s.truncation_dim);
  CHECK(want.empty());
}

TEST_CASE("synth discrete: necessity violations carry a certificate") {
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)});
  DiagonalSpec a;
  a.tail_pattern = {Complex(2.0, 0.0)};
  CHECK_THROWS_AS(synth_diagonal_discrete(n, a, 0.05), NecessityViolated);
  try {
    synth_diagonal_discrete(n, a, 0.05);
  } catch (const NecessityViolated& e) {
    CHECK(e.distance > 0.9);
    CHECK(e.violating_re == 2.0);
  }
}

TEST_CASE("synth discrete: degenerate branches") {
  // no finite eigenvalues and no head
  SpectralData n0 = discrete({Complex(0, 0), Complex(1, 0)});
  DiagonalSpec a0;
  a0.tail_pattern = {Complex(0.5, 0.0), Complex(0.25, 0.0)};
  SynthDiscreteResult s0 = synth_diagonal_discrete(n0, a0, 0.05);
  CHECK(s0.residual < 0.05);

  // finite eigenvalues with an empty head
  SpectralData n1 = discrete({Complex(0, 0), Complex(1, 0)},
                             {{Complex(0.5, 0.0), 1}});
  SynthDiscreteResult s1 = synth_diagonal_discrete(n1, a0, 0.05, 16384);
  CHECK(s1.residual < 0.05);

  // head but no finite eigenvalues
  DiagonalSpec a2;
  a2.head = {Complex(0.75, 0.0)};
  a2.tail_pattern = {Complex(0.5, 0.0)};
  SynthDiscreteResult s2 = synth_diagonal_discrete(n0, a2, 0.05);
  CHECK(s2.residual < 0.05);
}

TEST_CASE("synth discrete: randomized fuzz keeps residual and necessity") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> grid(0, 4);
  SpectralData n = discrete({Complex(0, 0), Complex(1, 0), Complex(0, 1)});
  for (int trial = 0; trial < 10; ++trial) {
    DiagonalSpec a;
    int h = static_cast<int>(rng() % 3);
    int l = 1 + static_cast<int>(rng() % 3);
    auto pick = [&]() {
      // random convex combination of {0, 1, i} on the quarter grid
      int c0 = grid(rng), c1 = grid(rng), c2 = grid(rng);
      double s = std::max(1, c0 + c1 + c2);
      return Complex(c1 / s, c2 / s);
    };
    for (int i = 0; i < h; ++i) a.head.push_back(pick());
    for (int p = 0; p < l; ++p) a.tail_pattern.push_back(pick());
    SynthDiscreteResult s = synth_diagonal_discrete(n, a, 0.05, 16384);
    CHECK(s.residual < 0.05);
    CHECK(s.necessity.ok);
  }
}
