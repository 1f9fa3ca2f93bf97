#ifndef DIAGFORGE_HULL_HPP
#define DIAGFORGE_HULL_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "diagforge/rational.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

struct HullQuery {
  Complex point;
  std::vector<Complex> vertices;
};

struct HullResult {
  bool inside = false;
  double distance = 0.0;  // Euclidean distance to the hull, 0 when inside
  // Present exactly when the query has three non-collinear vertices.
  std::optional<std::vector<double>> barycentric;
};

// Membership of a point in the convex hull of finitely many complex numbers,
// within distance tol. With three non-collinear vertices the (unique)
// barycentric weights are returned as well.
HullResult hull_membership(const HullQuery& query, double tol);

// Exact variant for rational data; no tolerance enters the inside test.
struct ExactHullResult {
  bool inside = false;
  std::optional<std::vector<Rational>> barycentric;
};

ExactHullResult hull_membership_exact(
    const RationalComplex& point, const std::vector<RationalComplex>& vertices);

// Unique barycentric weights of p with respect to a non-collinear triple.
// Throws DegenerateHull for collinear triples.
std::vector<double> barycentric3(const Complex& p, const Complex& a,
                                 const Complex& b, const Complex& c);
std::vector<Rational> barycentric3_exact(const RationalComplex& p,
                                         const RationalComplex& a,
                                         const RationalComplex& b,
                                         const RationalComplex& c);

// Distance from p to the hull of the vertices (0 when inside).
double distance_to_hull(const Complex& p, const std::vector<Complex>& vertices);

// Monotone-chain convex hull over any ordered scalar (double or Rational),
// counterclockwise, no repeated first point.
template <typename Scalar>
struct Point2 {
  Scalar x;
  Scalar y;
  friend bool operator<(const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
  friend bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
  }
};

template <typename Scalar>
Scalar cross2(const Point2<Scalar>& o, const Point2<Scalar>& a,
              const Point2<Scalar>& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

template <typename Scalar>
std::vector<Point2<Scalar>> convex_hull(std::vector<Point2<Scalar>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const int n = static_cast<int>(pts.size());
  if (n <= 2) return pts;
  std::vector<Point2<Scalar>> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && !(cross2(hull[k - 2], hull[k - 1], pts[i]) > Scalar(0)))
      --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && !(cross2(hull[k - 2], hull[k - 1], pts[i]) > Scalar(0)))
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace diagforge

#endif
