#include "diagforge/hull.hpp"

#include <cmath>

#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

double segment_distance(const Complex& p, const Complex& a, const Complex& b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * ab.real() +
              (p.imag() - a.imag()) * ab.imag()) /
             len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

std::vector<double> barycentric3(const Complex& p, const Complex& a,
                                 const Complex& b, const Complex& c) {
  // p - c = g0 (a - c) + g1 (b - c); 2x2 real system by Cramer.
  const double axx = (a - c).real(), axy = (a - c).imag();
  const double bxx = (b - c).real(), bxy = (b - c).imag();
  const double px = (p - c).real(), py = (p - c).imag();
  const double det = axx * bxy - axy * bxx;
  const double scale =
      std::max({std::abs(axx), std::abs(axy), std::abs(bxx), std::abs(bxy), 1e-300});
  if (std::abs(det) <= 1e-14 * scale * scale)
    throw DegenerateHull("barycentric coordinates need non-collinear vertices");
  const double g0 = (px * bxy - py * bxx) / det;
  const double g1 = (axx * py - axy * px) / det;
  return {g0, g1, 1.0 - g0 - g1};
}

std::vector<Rational> barycentric3_exact(const RationalComplex& p,
                                         const RationalComplex& a,
                                         const RationalComplex& b,
                                         const RationalComplex& c) {
  const Rational axx = a.re - c.re, axy = a.im - c.im;
  const Rational bxx = b.re - c.re, bxy = b.im - c.im;
  const Rational px = p.re - c.re, py = p.im - c.im;
  const Rational det = axx * bxy - axy * bxx;
  if (det.is_zero())
    throw DegenerateHull("barycentric coordinates need non-collinear vertices");
  const Rational g0 = (px * bxy - py * bxx) / det;
  const Rational g1 = (axx * py - axy * px) / det;
  return {g0, g1, Rational(1) - g0 - g1};
}

double distance_to_hull(const Complex& p, const std::vector<Complex>& vertices) {
  if (vertices.empty()) throw InvalidInput("hull needs at least one vertex");
  std::vector<Point2<double>> pts;
  pts.reserve(vertices.size());
  for (const Complex& v : vertices) pts.push_back({v.real(), v.imag()});
  std::vector<Point2<double>> hull = convex_hull(pts);

  if (hull.size() == 1) return std::abs(p - Complex(hull[0].x, hull[0].y));
  if (hull.size() == 2)
    return segment_distance(p, Complex(hull[0].x, hull[0].y),
                            Complex(hull[1].x, hull[1].y));

  const Point2<double> q{p.real(), p.imag()};
  bool inside = true;
  for (size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    if (cross2(a, b, q) < 0.0) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    best = std::min(best, segment_distance(p, Complex(a.x, a.y),
                                           Complex(b.x, b.y)));
  }
  return best;
}

HullResult hull_membership(const HullQuery& query, double tol) {
  HullResult out;
  out.distance = distance_to_hull(query.point, query.vertices);
  out.inside = out.distance <= tol;
  if (query.vertices.size() == 3) {
    try {
      out.barycentric = barycentric3(query.point, query.vertices[0],
                                     query.vertices[1], query.vertices[2]);
    } catch (const DegenerateHull&) {
      // collinear triple: membership still answered by the distance
    }
  }
  return out;
}

ExactHullResult hull_membership_exact(
    const RationalComplex& point,
    const std::vector<RationalComplex>& vertices) {
  if (vertices.empty()) throw InvalidInput("hull needs at least one vertex");
  ExactHullResult out;

  std::vector<Point2<Rational>> pts;
  pts.reserve(vertices.size());
  for (const auto& v : vertices) pts.push_back({v.re, v.im});
  std::vector<Point2<Rational>> hull = convex_hull(pts);
  const Point2<Rational> q{point.re, point.im};

  if (hull.size() == 1) {
    out.inside = (q == hull[0]);
  } else if (hull.size() == 2) {
    // On the segment: collinear and between the endpoints.
    const Rational cr = cross2(hull[0], hull[1], q);
    if (cr.is_zero()) {
      const Rational dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
      const Rational t = (q.x - hull[0].x) * dx + (q.y - hull[0].y) * dy;
      const Rational len2 = dx * dx + dy * dy;
      out.inside = (t >= Rational(0)) && (t <= len2);
    }
  } else {
    out.inside = true;
    for (size_t i = 0; i < hull.size(); ++i) {
      const auto& a = hull[i];
      const auto& b = hull[(i + 1) % hull.size()];
      if (cross2(a, b, q) < Rational(0)) {
        out.inside = false;
        break;
      }
    }
  }

  if (vertices.size() == 3) {
    try {
      out.barycentric =
          barycentric3_exact(point, vertices[0], vertices[1], vertices[2]);
    } catch (const DegenerateHull&) {
    }
  }
  return out;
}

}  // namespace diagforge
