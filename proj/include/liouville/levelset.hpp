#pragma once

#include <span>
#include <string>
#include <vector>

#include "liouville/fields.hpp"

namespace liouville {

/// A closed polyline bounding a superlevel region, region on the left.
struct ContourLoop {
  std::vector<Vec2> points;
  double signed_area = 0.0;  // > 0 for an outer boundary, < 0 for a hole
  int parent = -1;           // holes: index of the smallest enclosing outer loop
};

/// Statistics of the superlevel region {field > t}.
struct LevelSet {
  double t = 0.0;              // level actually used, see perturb_level()
  double mass = 0.0;           // integral of e^w over the region
  double base_mass = 0.0;      // integral of e^base over the region (0 without a base field)
  double ell = 0.0;            // integral of e^{w/2} over the region boundary
  double length = 0.0;         // euclidean length of the region boundary
  double area = 0.0;
  double flux = 0.0;           // integral of |grad field| over {field = t}
  double coarea_weight = 0.0;  // integral of e^w / |grad field| over {field = t}
  int components = 0;
  int holes = 0;
  std::vector<ContourLoop> loops;
};

/// Moves t up by 1e-8 (max - min) until it differs from every nodal value.
double perturb_level(const ScalarField& field, double t);

/// Marching-triangles extraction of {field > t}. Cut triangles are split into
/// sub-triangles and e^w is integrated with the 7-point rule; boundary
/// integrals use 2-point Gauss per segment and include the parts of the
/// domain boundary where field > t. `base` (optional) supplies mu.
LevelSet level_set(const ScalarField& field, const ScalarField& w, double t,
                   const ScalarField* base = nullptr);

struct LevelSetProfile {
  double t_max = 0.0;
  bool has_base = false;
  std::vector<double> levels;
  std::vector<double> mass;
  std::vector<double> base_mass;
  std::vector<double> ell;
  std::vector<double> flux;
  std::vector<double> coarea_weight;
  std::vector<int> components;
  std::vector<int> holes;
};

/// Profile on t_k = t_max k / (n_levels - 1), k = 0 .. n_levels - 1, where
/// t_max is the largest nodal value. n_levels >= 2.
LevelSetProfile level_profile(const ScalarField& field, const ScalarField& w, int n_levels,
                              const ScalarField* base = nullptr);
/// Profile on caller-supplied levels.
LevelSetProfile level_profile(const ScalarField& field, const ScalarField& w,
                              std::span<const double> levels, const ScalarField* base = nullptr);

/// l^2 - m (8 pi - m) / 2. Rejects m outside [0, 8 pi].
double bol_defect(double ell, double mass);

/// (integral of e^{h/2} over the boundary)^2 - 4 pi (integral of e^h).
double huber_defect(const ScalarField& h);
/// Every interior value of Delta_h h is >= -10 h^2.
bool discretely_subharmonic(const ScalarField& h);

/// perimeter^2 - 4 pi area, perimeter counting every boundary loop.
double isoperimetric_defect(const Mesh& region);

/// w = h0 + h_minus + u with f = -Delta_h w - e^w, h0 the discrete harmonic
/// lifting of w's trace and -Delta_h h_minus = f with zero trace. Then
/// -Delta_h u = e^w with u = 0 on the boundary.
struct Decomposition {
  ScalarField f;
  ScalarField h0;
  ScalarField h_minus;
  ScalarField h;
  ScalarField u;
};

Decomposition decompose(const ScalarField& w);

/// Values of `w` at the vertices of a submesh.
ScalarField restrict_field(const ScalarField& w, const SubMesh& sub, MeshPtr sub_mesh);

/// w on its own vertices and 0 on every other vertex of `ambient`. Each vertex
/// of w's mesh must coincide with an ambient vertex and w must vanish on its
/// boundary; std::invalid_argument otherwise.
ScalarField extend_hat(const ScalarField& w, MeshPtr ambient);

struct WeakSubsolutionReport {
  std::vector<double> defect;  // ((K w)_i - integral of e^w times hat_i) / lumped mass, interior only
  double max_defect = 0.0;
  int worst_vertex = -1;
  double tolerance = 0.0;
  bool passed = false;
};

/// Tests -Delta w <= e^w against every interior hat function.
WeakSubsolutionReport weak_subsolution_check(const ScalarField& w, double tolerance);

struct ChainRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  bool strict = false;
  bool ok = false;
};

enum class AuditBranch {
  LargeHoleMass,    // hat mass of the filled holes >= 8 pi
  LargeUnionMass,   // filled holes below 8 pi, filled omega >= 8 pi
  SmallUnionMass,   // filled omega below 8 pi: difference of simply connected domains
  EnclosedHoles,    // no hole of omega contains a hole of the ambient domain
  Disconnected,     // several components
};

std::string to_string(AuditBranch branch);

/// Decomposition of omega's complement used by the audit. Triangle and loop
/// indices refer to the ambient mesh; boundary indices to omega's loops.
struct AppendixSplit {
  std::vector<int> omega_star;   // ambient triangles inside holes of omega, outside omega
  std::vector<int> omega_zero;   // ambient hole loops inside holes of omega
  std::vector<int> boundary_0;   // hole loops of omega
  std::vector<int> boundary_1;   // outer loops of omega
  double m_omega = 0.0;
  double m_omega_star = 0.0;
  double m_hat_omega_zero = 0.0;  // area: the extension vanishes there
  double m_hat_filled_holes = 0.0;
  double m_hat_filled_omega = 0.0;
  double m_ambient = 0.0;
  double ell_0 = 0.0;
  double ell_1 = 0.0;
  double length_0 = 0.0;
  double area_filled_holes = 0.0;
  double min_weight = 0.0;
};

struct AuditOptions {
  double relative_slack = 2e-3;  // non-strict rows pass when margin >= -slack max(|lhs|, |rhs|, 1)
};

struct AuditReport {
  AppendixSplit split;
  AuditBranch branch = AuditBranch::SmallUnionMass;
  std::vector<ChainRow> rows;
  double final_defect = 0.0;  // bol_defect of omega
  bool all_ok = false;
};

/// Runs the inequality chain proving strict Bol on a multiply connected or
/// disconnected omega, given as a triangle subset of the mesh of `w`. w is
/// the weight on the ambient domain (normalized to vanish on its boundary).
/// Rejects a simply connected omega and one touching the ambient boundary.
AuditReport appendix_audit(const ScalarField& w, const std::vector<bool>& omega,
                           const AuditOptions& options = {});

}  // namespace liouville
