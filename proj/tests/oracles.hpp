#pragma once
// Independent reference computations for the tests. None of these call the
// library: they integrate radial ODEs or special functions directly.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo);
  if (flo * f(hi) > 0.0) throw std::runtime_error("bisect: no sign change");
  while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// First sign change of f scanning upward from lo, refined by bisection.
inline double first_root(const std::function<double(double)>& f, double lo, double step) {
  double a = lo, fa = f(a);
  for (int i = 0; i < 100000; ++i) {
    const double b = a + step, fb = f(b);
    if (fa * fb <= 0.0) return bisect(f, a, b);
    a = b;
    fa = fb;
  }
  throw std::runtime_error("first_root: no sign change");
}

// The explicit radial profile, written out independently of the library.
inline double U(double lambda, double r) {
  return 2.0 * std::log(lambda) - 2.0 * std::log(1.0 + lambda * lambda * r * r / 8.0);
}

// 2 pi int_0^delta e^{U} r dr by Simpson.
inline double disk_mass(double lambda, double delta) {
  return 2.0 * pi * simpson([&](double r) { return std::exp(U(lambda, r)) * r; }, 0.0, delta, 4000);
}

// RK4 on y = (u, r u') for -(r u')' = r F(r, u). Starts at r0 with the series
// u(r0) = u0 - F0 r0^2 / 4.
struct RadialState {
  double u, ru;
};

template <class Rhs>
RadialState integrate_radial(double u0, double f0, double R, int steps, Rhs&& F) {
  const double r0 = R * 1e-6;
  RadialState y{u0 - f0 * r0 * r0 / 4.0, -f0 * r0 * r0 / 2.0};
  const double h = (R - r0) / steps;
  auto deriv = [&](double r, RadialState s) { return RadialState{s.ru / r, -r * F(r, s.u)}; };
  double r = r0;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = deriv(r, y);
    const auto k2 = deriv(r + h / 2, {y.u + h / 2 * k1.u, y.ru + h / 2 * k1.ru});
    const auto k3 = deriv(r + h / 2, {y.u + h / 2 * k2.u, y.ru + h / 2 * k2.ru});
    const auto k4 = deriv(r + h, {y.u + h * k3.u, y.ru + h * k3.ru});
    y.u += h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    y.ru += h / 6 * (k1.ru + 2 * k2.ru + 2 * k3.ru + k4.ru);
    r += h;
  }
  return y;
}

// Minimal radial solution of -lap u = e^u on B_1 with u = g on the circle,
// found by shooting on the center value along the lower branch.
inline double liouville_center_value(double g) {
  auto boundary = [](double a) {
    return integrate_radial(a, std::exp(a), 1.0, 4000, [](double, double u) { return std::exp(u); }).u;
  };
  // u(1) < u(0), so scanning the center value upward from g meets the
  // minimal branch first.
  return first_root([&](double a) { return boundary(a) - g; }, g, 0.01);
}

// First Dirichlet eigenvalue of -lap phi = nu e^{W(r)} phi on B_R, radial mode,
// by shooting on nu: the first zero of phi moves inside R as nu passes nu_1.
inline double radial_first_eigenvalue(const std::function<double(double)>& W, double R, double step = 0.05) {
  auto phi_at_R = [&](double nu) {
    return integrate_radial(1.0, nu * std::exp(W(0.0)), R, 6000,
                            [&](double r, double p) { return nu * std::exp(W(r)) * p; })
        .u;
  };
  return first_root(phi_at_R, 1e-6, step);
}

inline double bessel_j0_first_zero() {
  return bisect([](double x) { return std::cyl_bessel_j(0.0, x); }, 2.0, 3.0);
}

// First k with J0(ka) Y0(kb) - J0(kb) Y0(ka) = 0: Dirichlet annulus a < r < b.
inline double annulus_first_wavenumber(double a, double b) {
  auto cross = [=](double k) {
    return std::cyl_bessel_j(0.0, k * a) * std::cyl_neumann(0.0, k * b) -
           std::cyl_bessel_j(0.0, k * b) * std::cyl_neumann(0.0, k * a);
  };
  return first_root(cross, 0.1, 0.01);
}

}  // namespace oracle
