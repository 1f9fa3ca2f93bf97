#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"
#include "diagforge/hull.hpp"
#include "diagforge/matrix_checks.hpp"
#include "diagforge/types.hpp"

using namespace diagforge;

namespace {

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

std::vector<Complex> sorted_lex(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), complex_lex_less);
  return v;
}

}  // namespace

TEST_CASE("dft entries follow the root-of-unity formula") {
  CHECK(dft_unitary(1)(0, 0) == Complex(1.0, 0.0));

  CMatrix v2 = dft_unitary(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(v2(0, 0) - Complex(-s)) < 1e-15);
  CHECK(std::abs(v2(0, 1) - Complex(s)) < 1e-15);
  CHECK(std::abs(v2(1, 0) - Complex(s)) < 1e-15);
  CHECK(std::abs(v2(1, 1) - Complex(s)) < 1e-15);

  CMatrix v8 = dft_unitary(8);
  CHECK(unitary_residual(v8) < 1e-12);
}

TEST_CASE("dft is unitary through n = 64") {
  for (int n = 1; n <= 64; ++n)
    CHECK(unitary_residual(dft_unitary(n)) < 1e-12);
}

TEST_CASE("diagonalize recovers a diagonal normal matrix") {
  CMatrix n = CMatrix::Zero(3, 3);
  n(0, 0) = 0.0;
  n(1, 1) = 1.0;
  n(2, 2) = Complex(0.0, 1.0);
  NormalDiagonalization d = diagonalize_normal(n, 1e-12);
  CHECK(unitary_residual(d.unitary) < 1e-10);
  CHECK(d.offdiag_residual < 1e-8 * n.norm());
  // lexicographic order: 0, i, 1
  CHECK(std::abs(d.eigenvalues[0] - Complex(0.0)) < 1e-12);
  CHECK(std::abs(d.eigenvalues[1] - Complex(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(d.eigenvalues[2] - Complex(1.0)) < 1e-12);
}

TEST_CASE("rotation matrix has eigenvalues -i, i") {
  CMatrix n(2, 2);
  n << 0.0, 1.0, -1.0, 0.0;
  NormalDiagonalization d = diagonalize_normal(n, 1e-12);
  CHECK(std::abs(d.eigenvalues[0] - Complex(0.0, -1.0)) < 1e-10);
  CHECK(std::abs(d.eigenvalues[1] - Complex(0.0, 1.0)) < 1e-10);
}

TEST_CASE("diagonalize round-trips conjugated diagonals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + static_cast<int>(rng() % 31);
    std::vector<Complex> d(n);
    for (Complex& x : d) x = Complex(u(rng), u(rng));
    CMatrix q = random_unitary(n, rng);
    CMatrix m = q * Eigen::Map<CVector>(d.data(), n).asDiagonal() *
                q.adjoint();
    NormalDiagonalization res = diagonalize_normal(m, 1e-8);
    std::vector<Complex> got = sorted_lex(res.eigenvalues);
    std::vector<Complex> want = sorted_lex(d);
    for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-7);
    CHECK(unitary_residual(res.unitary) < 1e-10);
  }
}

TEST_CASE("non-normal input is rejected") {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(diagonalize_normal(m, 1e-9), NotNormal);
}

TEST_CASE("flattening equalizes the diagonal at the trace") {
  CMatrix n = CMatrix::Zero(3, 3);
  n(1, 1) = 1.0;
  n(2, 2) = Complex(0.0, 1.0);
  FlattenResult f = flatten_constant_diagonal(n, 1e-12);
  CMatrix conj = f.unitary.adjoint() * n * f.unitary;
  Complex tau = Complex(1.0, 1.0) / 3.0;
  for (int i = 0; i < 3; ++i) CHECK(std::abs(conj(i, i) - tau) < 1e-10);

  CMatrix eye = CMatrix::Identity(5, 5);
  FlattenResult fi = flatten_constant_diagonal(eye, 1e-12);
  CMatrix ci = fi.unitary.adjoint() * eye * fi.unitary;
  CHECK(max_norm(ci - eye) < 1e-12);
}

TEST_CASE("rank-one flattening matches the explicit 4-point conjugation") {
  CMatrix n = CMatrix::Zero(4, 4);
  n(0, 0) = 1.0;
  FlattenResult f = flatten_constant_diagonal(n, 1e-12);
  CMatrix conj = f.unitary.adjoint() * n * f.unitary;
  for (int i = 0; i < 4; ++i) CHECK(std::abs(conj(i, i) - 0.25) < 1e-10);

  // independent oracle: conjugate by the bare 4-point matrix; the diagonal
  // entries are |V(0, q)|^2 = 1/4
  CMatrix v = dft_unitary(4);
  CMatrix direct = v.adjoint() * n * v;
  for (int i = 0; i < 4; ++i) CHECK(std::abs(direct(i, i) - 0.25) < 1e-12);
}

TEST_CASE("flattening handles every spectral projection at once") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> val(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 31);
    CMatrix m = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      m(i, i) = Complex(val(rng) * 0.5, val(rng) * 0.5);
    FlattenResult f = flatten_constant_diagonal(m, 1e-10);
    auto clusters = eigenvalue_clusters(f.diag.eigenvalues, 1e-8);
    for (const auto& [rep, members] : clusters) {
      CMatrix b = spectral_projection(f.diag.unitary, members);
      CMatrix conj = f.unitary.adjoint() * b * f.unitary;
      double tau = static_cast<double>(members.size()) / n;
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(conj(i, i) - Complex(tau)) < 1e-8);
    }
  }
}

TEST_CASE("circulant polynomials have constant diagonal equal to the trace") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 2; n <= 16; ++n) {
    CMatrix shift = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) shift((i + 1) % n, i) = 1.0;
    CMatrix c = CMatrix::Zero(n, n);
    CMatrix power = CMatrix::Identity(n, n);
    int deg = 2 * n;
    for (int j = 0; j <= deg; ++j) {
      c += Complex(u(rng), u(rng)) * power;
      power = power * shift;
    }
    Complex tau = normalized_trace(c);
    for (int i = 0; i < n; ++i) CHECK(std::abs(c(i, i) - tau) < 1e-12);
  }
}

TEST_CASE("conditional expectation extracts the diagonal") {
  CHECK(conditional_expectation_diag(CMatrix::Identity(3, 3)) ==
        std::vector<Complex>{1.0, 1.0, 1.0});
  CMatrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  CHECK(conditional_expectation_diag(flip) == std::vector<Complex>{0.0, 0.0});
}

TEST_CASE("expectation of a conjugated diagonal matches the entry formula") {
  // unitaries realizing the classic 3x3 partition data from rank-one
  // projections
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u(3, 3);
  u << s, s, 0.0, s, -s, 0.0, 0.0, 0.0, 1.0;
  REQUIRE(unitary_residual(u) < 1e-12);
  CMatrix n = CMatrix::Zero(3, 3);
  n(0, 0) = 1.0;  // rank-one projection onto e_1
  std::vector<Complex> got = conditional_expectation_diag(u.adjoint() * n * u);
  for (int i = 0; i < 3; ++i) {
    Complex brute = 0.0;
    for (int j = 0; j < 3; ++j)
      brute += std::conj(u(j, i)) * n(j, j) * u(j, i);
    CHECK(std::abs(got[i] - brute) < 1e-14);
  }
  CHECK(std::abs(got[0] - Complex(0.5)) < 1e-14);
  CHECK(std::abs(got[1] - Complex(0.5)) < 1e-14);
  CHECK(std::abs(got[2]) < 1e-14);
}

TEST_CASE("projection family verification") {
  std::vector<CMatrix> pass1 = {CMatrix::Identity(2, 2)};
  FamilyCheck c1 = verify_projection_family(pass1, 1e-9);
  CHECK(c1.pass);
  CHECK(c1.worst() == 0.0);

  CMatrix p1 = CMatrix::Zero(2, 2), p2 = CMatrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  p2(1, 1) = 1.0;
  FamilyCheck c2 = verify_projection_family({p1, p2}, 1e-9);
  CHECK(c2.pass);

  FamilyCheck c3 = verify_projection_family({p1, p1}, 1e-9);
  CHECK_FALSE(c3.pass);
  CHECK(c3.orthogonal == doctest::Approx(1.0));
  CHECK(c3.completeness == doctest::Approx(1.0));

  CHECK_THROWS_AS(
      verify_projection_family({p1, CMatrix::Identity(3, 3)}, 1e-9),
      DimensionMismatch);
}

TEST_CASE("hull membership: triangle examples") {
  std::vector<Complex> tri = {Complex(0, 0), Complex(1, 0), Complex(0, 1)};

  HullResult mid = hull_membership({Complex(0.5, 0.5), tri}, 1e-9);
  CHECK(mid.inside);
  REQUIRE(mid.barycentric.has_value());
  CHECK((*mid.barycentric)[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK((*mid.barycentric)[1] == doctest::Approx(0.5));
  CHECK((*mid.barycentric)[2] == doctest::Approx(0.5));

  HullResult far = hull_membership({Complex(2.0, 0.0), tri}, 1e-9);
  CHECK_FALSE(far.inside);
  CHECK(far.distance > 0.9);

  HullResult inner = hull_membership({Complex(0.3, 0.2), tri}, 1e-9);
  CHECK(inner.inside);
  REQUIRE(inner.barycentric.has_value());
  CHECK((*inner.barycentric)[0] == doctest::Approx(0.5));
  CHECK((*inner.barycentric)[1] == doctest::Approx(0.3));
  CHECK((*inner.barycentric)[2] == doctest::Approx(0.2));
}

TEST_CASE("hull membership: vertices themselves are inside") {
  std::vector<Complex> vs = {Complex(0, 0), Complex(1, 0), Complex(0, 1),
                             Complex(1, 1)};
  for (const Complex& v : vs) {
    HullResult r = hull_membership({v, vs}, 1e-12);
    CHECK(r.inside);
    CHECK(r.distance <= 1e-12);
  }
}

TEST_CASE("collinear triples refuse barycentric coordinates") {
  CHECK_THROWS_AS(barycentric3(Complex(0.5, 0.0), Complex(0, 0), Complex(1, 0),
                               Complex(2, 0)),
                  DegenerateHull);
  // membership still answered
  HullResult r = hull_membership(
      {Complex(0.5, 0.0), {Complex(0, 0), Complex(1, 0), Complex(2, 0)}},
      1e-9);
  CHECK(r.inside);
  CHECK_FALSE(r.barycentric.has_value());
}

TEST_CASE("barycentric weights reconstruct the point") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Complex a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    if (std::abs((b - a).real() * (c - a).imag() -
                 (b - a).imag() * (c - a).real()) < 1e-3)
      continue;
    Complex p(u(rng), u(rng));
    std::vector<double> g = barycentric3(p, a, b, c);
    CHECK(std::abs(g[0] + g[1] + g[2] - 1.0) < 1e-12);
    Complex back = g[0] * a + g[1] * b + g[2] * c;
    CHECK(std::abs(back - p) < 1e-10);
  }
}

TEST_CASE("exact hull membership on rational data") {
  std::vector<RationalComplex> tri = {
      {Rational(0), Rational(0)}, {Rational(1), Rational(0)},
      {Rational(0), Rational(1)}};
  ExactHullResult on_edge =
      hull_membership_exact({Rational(1, 2), Rational(1, 2)}, tri);
  CHECK(on_edge.inside);
  REQUIRE(on_edge.barycentric.has_value());
  CHECK((*on_edge.barycentric)[0] == Rational(0));
  CHECK((*on_edge.barycentric)[1] == Rational(1, 2));

  ExactHullResult out =
      hull_membership_exact({Rational(2), Rational(0)}, tri);
  CHECK_FALSE(out.inside);

  // barely outside: exactness distinguishes what a tolerance cannot
  ExactHullResult close = hull_membership_exact(
      {Rational(1, 2) + Rational(1, 1000000000), Rational(1, 2)}, tri);
  CHECK_FALSE(close.inside);
}
