#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace liouville {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr Vec2 lerp(Vec2 a, Vec2 b, double s) { return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}; }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
constexpr double orient2d(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

/// Shoelace area of a closed polygon (last vertex connects back to the first).
inline double polygon_signed_area(std::span<const Vec2> poly) {
  double s = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * s;
}

inline double polygon_perimeter(std::span<const Vec2> poly) {
  double s = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) s += norm(poly[(i + 1) % n] - poly[i]);
  return s;
}

/// Even-odd crossing test.
inline bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
  bool inside = false;
  for (std::size_t i = 0, n = poly.size(), j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

/// Symmetric triangle quadrature, exact for polynomials of degree 5 (7 points).
/// Barycentric coordinates and weights summing to 1.
struct TriangleRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> weight;
};

inline const TriangleRule& degree5_rule() {
  static const TriangleRule rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
    TriangleRule r{};
    r.bary = {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
               {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
               {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
    r.weight = {w0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

/// Two-point Gauss rule on [0, 1].
inline constexpr std::array<double, 2> gauss2_nodes{0.2113248654051871, 0.7886751345948129};

}  // namespace liouville
