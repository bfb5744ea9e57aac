#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/geometry.hpp"

namespace liouville {

using Complex = std::complex<double>;

inline Complex to_complex(Vec2 p) { return {p.x, p.y}; }
inline Vec2 to_vec2(Complex z) { return {z.real(), z.imag()}; }

enum class MapKind { ScaledRotation, Polynomial, DiskAutomorphism };

/// Univalent map of the closed unit disk with closed-form derivative.
///
/// Coefficient layout by kind:
///   ScaledRotation    {s}            Phi(z) = s z,  s = delta e^{i theta}
///   Polynomial        {a1, ..., an}  Phi(z) = a1 z + a2 z^2 + ... + an z^n
///   DiskAutomorphism  {s, a}         Phi(z) = s (z - a) / (1 - conj(a) z),  |a| < 1
struct ConformalMap {
  MapKind kind = MapKind::ScaledRotation;
  std::vector<Complex> coefficients{Complex{1.0, 0.0}};

  static ConformalMap identity() { return {}; }
  static ConformalMap scaled_rotation(double delta, double theta);
  static ConformalMap polynomial(std::vector<Complex> coefficients);
  static ConformalMap disk_automorphism(double delta, double theta, Complex a);
};

class NotInImage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phi(z); |z| > 1 is rejected with std::domain_error.
Complex evaluate(const ConformalMap& map, Complex z);
/// Phi'(z); |z| > 1 is rejected with std::domain_error.
Complex derivative(const ConformalMap& map, Complex z);

/// Solves Phi(z) = x by damped Newton iteration. The default seed is
/// (x - Phi(0)) / Phi'(0). Throws NotInImage when the iterate keeps leaving
/// the closed disk or the residual never drops below tol.
Complex invert(const ConformalMap& map, Complex x, double tol = 1e-13);
Complex invert(const ConformalMap& map, Complex x, double tol, Complex seed);

struct UnivalenceReport {
  bool univalent = false;
  double min_abs_derivative = 0.0;   // over a polar grid of the closed disk
  double min_boundary_separation = 0.0;
  int winding_number = 0;            // boundary image around Phi(0)
  bool boundary_simple = false;      // no crossing between boundary image segments
};

/// Sampling certificate: |Phi'| > 0 on a polar grid, and the image of
/// `boundary_samples` equispaced boundary points is a simple closed polygon
/// winding once around Phi(0) with no two images closer than `tolerance`.
UnivalenceReport univalence_check(const ConformalMap& map, int boundary_samples = 720,
                                  double tolerance = 1e-9);

/// Largest |Phi'| over boundary samples (|Phi'| attains its maximum on the circle).
double max_boundary_derivative(const ConformalMap& map, int samples = 720);

/// Parses "poly:1,0.3", "scale:2,0.785..." or "mobius:delta,theta,re_a,im_a".
ConformalMap parse_map(const std::string& text);
std::string describe(const ConformalMap& map);

struct Mesh;
struct ScalarField;

/// Nodal w(x) = U_lambda(Psi(x)) - 2 ln|Phi'(Psi(x))| with Psi the Newton inverse.
/// The mesh should come from mesh_mapped_disk with the same map.
ScalarField pullback_field(const ConformalMap& map, double lambda,
                           std::shared_ptr<const Mesh> mesh);

/// phi(Psi(x)) with phi(z) = (1 - |z|^2) / (1 + |z|^2), sampled at the mesh vertices.
ScalarField transported_ground_state(const ConformalMap& map, std::shared_ptr<const Mesh> mesh);

}  // namespace liouville
