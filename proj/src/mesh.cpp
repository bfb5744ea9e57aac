#include "liouville/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace liouville {
namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

std::vector<std::vector<int>> extract_loops(std::size_t vertex_count,
                                            const std::vector<Triangle>& triangles) {
  std::unordered_map<std::uint64_t, int> uses;
  uses.reserve(triangles.size() * 3);
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) ++uses[edge_key(t[e], t[(e + 1) % 3])];

  std::vector<int> next(vertex_count, -1);
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      const int n = uses[edge_key(a, b)];
      if (n > 2) throw std::invalid_argument("edge shared by more than two triangles");
      if (n == 1) {
        if (next[a] != -1) throw std::invalid_argument("boundary pinches at a vertex");
        next[a] = b;
      }
    }
  }

  std::vector<std::vector<int>> loops;
  std::vector<bool> seen(vertex_count, false);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (next[v] == -1 || seen[v]) continue;
    std::vector<int> loop;
    int cur = static_cast<int>(v);
    while (!seen[cur]) {
      seen[cur] = true;
      loop.push_back(cur);
      cur = next[cur];
      if (cur == -1) throw std::invalid_argument("open boundary chain");
    }
    if (cur != static_cast<int>(v)) throw std::invalid_argument("boundary loop is not simple");
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Multiples of six keep the rings in the hexagonal pattern: every sector
// between two of the six spokes is a smooth image of an equilateral lattice.
int ring_size(double r, double spacing) {
  return 6 * std::max(1, static_cast<int>(std::lround(r / spacing)));
}

Vec2 on_circle(double r, int j, int n) {
  const double a = 2.0 * std::numbers::pi * j / n;
  return {r * std::cos(a), r * std::sin(a)};
}

// Stitches two concentric rings, advancing along whichever ring has the
// smaller next angle.
void zip_rings(const Mesh& m, int in0, int n_in, int out0, int n_out, std::vector<Triangle>& tris) {
  auto emit = [&](int a, int b, int c) {
    if (orient2d(m.reference[a], m.reference[b], m.reference[c]) < 0) std::swap(b, c);
    tris.push_back({a, b, c});
  };
  int i = 0, j = 0;
  while (i < n_in || j < n_out) {
    const bool advance_inner =
        j == n_out || (i < n_in && double(i + 1) / n_in <= double(j + 1) / n_out);
    const int a = in0 + i % n_in, b = out0 + j % n_out;
    if (advance_inner) {
      emit(a, in0 + (i + 1) % n_in, b);
      ++i;
    } else {
      emit(a, out0 + (j + 1) % n_out, b);
      ++j;
    }
  }
}

Mesh build_polar(const std::vector<double>& radii) {
  Mesh m;
  const bool disk = radii.front() == 0.0;
  std::vector<std::pair<int, int>> rings;  // first index, count
  std::size_t k0 = 0;
  if (disk) {
    m.reference.push_back({0.0, 0.0});
    rings.emplace_back(0, 1);
    k0 = 1;
  }
  // nominal spacing: the mean ring gap
  const double spacing = (radii.back() - radii.front()) / double(radii.size() - 1);
  for (std::size_t k = k0; k < radii.size(); ++k) {
    const int n = ring_size(radii[k], spacing);
    rings.emplace_back(static_cast<int>(m.reference.size()), n);
    for (int j = 0; j < n; ++j) m.reference.push_back(on_circle(radii[k], j, n));
  }

  std::vector<Triangle> tris;
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const auto [in0, n_in] = rings[k];
    const auto [out0, n_out] = rings[k + 1];
    if (n_in == 1) {
      for (int j = 0; j < n_out; ++j) tris.push_back({in0, out0 + j, out0 + (j + 1) % n_out});
    } else {
      zip_rings(m, in0, n_in, out0, n_out, tris);
    }
  }
  m.vertices = m.reference;
  m.triangles = std::move(tris);
  m.boundary_loops = extract_loops(m.vertices.size(), m.triangles);
  for (const auto& loop : m.boundary_loops) m.loop_radius.push_back(norm(m.reference[loop.front()]));
  m.resolution_h = longest_edge(m);
  return m;
}

std::vector<double> ring_radii(const std::vector<double>& breakpoints, double spacing) {
  std::vector<double> radii{breakpoints.front()};
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    const double a = breakpoints[s], b = breakpoints[s + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / spacing - 1e-9)));
    for (int k = 1; k <= n; ++k) radii.push_back(k == n ? b : a + (b - a) * k / n);
  }
  return radii;
}

template <class T>
void hash_bytes(std::uint64_t& h, const T& value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
}

}  // namespace

Mesh mesh_polar(const std::vector<double>& breakpoints, double target_h) {
  if (!(target_h > 0.0)) throw std::invalid_argument("target_h must be positive");
  if (breakpoints.size() < 2) throw std::invalid_argument("need at least two radii");
  if (breakpoints.front() < 0.0) throw std::invalid_argument("radii must be nonnegative");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw std::invalid_argument("radii must be strictly increasing");
  if (target_h >= breakpoints.back()) throw std::invalid_argument("target_h must be below the outer radius");

  double spacing = target_h;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mesh m = build_polar(ring_radii(breakpoints, spacing));
    if (m.resolution_h <= target_h) return m;
    spacing *= 0.97;
  }
  throw std::runtime_error("polar mesh could not reach the requested resolution");
}

Mesh mesh_disk(double radius, double target_h) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  return mesh_polar({0.0, radius}, target_h);
}

Mesh mesh_annulus(double r_in, double r_out, double target_h) {
  if (!(r_in > 0.0)) throw std::invalid_argument("inner radius must be positive");
  if (!(r_in < r_out)) throw std::invalid_argument("inner radius must be below outer radius");
  return mesh_polar({r_in, r_out}, target_h);
}

Mesh mesh_mapped_disk(const ConformalMap& map, double target_h) {
  if (!(target_h > 0.0)) throw std::invalid_argument("target_h must be positive");
  if (!univalence_check(map).univalent) throw std::invalid_argument("map is not univalent on the closed disk");

  auto place = [map](Vec2 z) {
    const double r = norm(z);
    if (r > 1.0) z = (1.0 / r) * z;  // rounding on the unit circle
    return to_vec2(evaluate(map, to_complex(z)));
  };
  double h_ref = std::min(0.5, target_h / max_boundary_derivative(map));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mesh m = mesh_disk(1.0, h_ref);
    m.placement = place;
    for (std::size_t i = 0; i < m.vertices.size(); ++i) m.vertices[i] = place(m.reference[i]);
    m.resolution_h = longest_edge(m);
    if (m.resolution_h <= target_h) return m;
    h_ref *= 0.9;
  }
  throw std::runtime_error("mapped mesh could not reach the requested resolution");
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.placement = mesh.placement;
  out.loop_radius = mesh.loop_radius;
  out.reference = mesh.reference.empty() ? mesh.vertices : mesh.reference;

  std::unordered_map<std::uint64_t, double> boundary_radius;
  for (std::size_t l = 0; l < mesh.boundary_loops.size(); ++l) {
    const auto& loop = mesh.boundary_loops[l];
    const double r = l < mesh.loop_radius.size() ? mesh.loop_radius[l] : 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i)
      boundary_radius[edge_key(loop[i], loop[(i + 1) % loop.size()])] = r;
  }

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(mesh.triangles.size() * 2);
  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (out.reference[a] + out.reference[b]);
    if (auto it = boundary_radius.find(key); it != boundary_radius.end() && it->second > 0.0)
      p = (it->second / norm(p)) * p;
    const int id = static_cast<int>(out.reference.size());
    out.reference.push_back(p);
    midpoint.emplace(key, id);
    return id;
  };

  out.triangles.reserve(mesh.triangles.size() * 4);
  for (const auto& t : mesh.triangles) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& loop : mesh.boundary_loops) {
    std::vector<int> refined;
    refined.reserve(loop.size() * 2);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      refined.push_back(loop[i]);
      refined.push_back(mid(loop[i], loop[(i + 1) % loop.size()]));
    }
    out.boundary_loops.push_back(std::move(refined));
  }

  out.vertices.resize(out.reference.size());
  for (std::size_t i = 0; i < out.reference.size(); ++i)
    out.vertices[i] = out.placement ? out.placement(out.reference[i]) : out.reference[i];
  out.resolution_h = longest_edge(out);
  return out;
}

Mesh mesh_from_triangles(std::vector<Vec2> vertices, std::vector<Triangle> triangles) {
  for (auto& t : triangles) {
    for (int v : t)
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size())
        throw std::invalid_argument("triangle references a missing vertex");
    const double a = orient2d(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    if (a == 0.0) throw std::invalid_argument("degenerate triangle");
    if (a < 0.0) std::swap(t[1], t[2]);
  }
  Mesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  m.boundary_loops = extract_loops(m.vertices.size(), m.triangles);
  m.loop_radius.assign(m.boundary_loops.size(), 0.0);
  m.reference = m.vertices;
  m.resolution_h = longest_edge(m);
  return m;
}

Mesh scale_mesh(const Mesh& mesh, double factor) {
  Mesh out = mesh;
  for (auto& v : out.vertices) v = factor * v;
  if (mesh.placement) {
    out.placement = [inner = mesh.placement, factor](Vec2 z) { return factor * inner(z); };
  } else {
    for (auto& r : out.reference) r = factor * r;
    for (auto& r : out.loop_radius) r *= factor;
  }
  out.resolution_h = mesh.resolution_h * factor;
  return out;
}

SubMesh submesh(const Mesh& mesh, const std::function<bool(int)>& keep) {
  SubMesh sub;
  std::vector<int> local(mesh.vertices.size(), -1);
  std::vector<Triangle> tris;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (!keep(t)) continue;
    Triangle local_t{};
    for (int e = 0; e < 3; ++e) {
      const int v = mesh.triangles[t][e];
      if (local[v] == -1) {
        local[v] = static_cast<int>(sub.parent_vertex.size());
        sub.parent_vertex.push_back(v);
      }
      local_t[e] = local[v];
    }
    tris.push_back(local_t);
    sub.parent_triangle.push_back(t);
  }
  std::vector<Vec2> verts;
  verts.reserve(sub.parent_vertex.size());
  for (int v : sub.parent_vertex) verts.push_back(mesh.vertices[v]);
  sub.mesh = mesh_from_triangles(std::move(verts), std::move(tris));
  return sub;
}

MeshTopology topology(const Mesh& mesh) {
  MeshTopology top;
  top.vertices = mesh.vertices.size();
  top.faces = mesh.triangles.size();
  std::unordered_map<std::uint64_t, int> edges;
  edges.reserve(mesh.triangles.size() * 2);
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++edges[edge_key(t[e], t[(e + 1) % 3])];
  top.edges = edges.size();
  for (int l = 0; l < static_cast<int>(mesh.boundary_loops.size()); ++l)
    (is_hole_loop(mesh, l) ? top.hole_loops : top.outer_loops)++;
  return top;
}

std::string validate(const Mesh& mesh) {
  std::ostringstream why;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!(triangle_area(mesh, static_cast<int>(t)) > 0.0)) {
      why << "triangle " << t << " has non-positive signed area";
      return why.str();
    }
  }
  std::unordered_map<std::uint64_t, int> edges;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++edges[edge_key(t[e], t[(e + 1) % 3])];

  std::unordered_map<std::uint64_t, int> loop_edges;
  std::vector<int> loop_visits(mesh.vertices.size(), 0);
  for (const auto& loop : mesh.boundary_loops) {
    if (loop.size() < 3) return "boundary loop with fewer than three vertices";
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (++loop_visits[loop[i]] > 1) return "boundary loop is not simple";
      ++loop_edges[edge_key(loop[i], loop[(i + 1) % loop.size()])];
    }
  }
  std::size_t boundary_edges = 0;
  for (const auto& [key, count] : edges) {
    if (count > 2) return "edge shared by more than two triangles";
    if (count == 1) {
      ++boundary_edges;
      if (!loop_edges.contains(key)) return "boundary edge missing from the boundary loops";
    }
  }
  for (const auto& [key, count] : loop_edges)
    if (edges[key] != 1) return "loop edge is not a boundary edge";
  if (boundary_edges != loop_edges.size()) return "boundary loops and boundary edges disagree";

  const auto top = topology(mesh);
  if (top.euler() != long(top.outer_loops) - long(top.hole_loops)) {
    why << "Euler count " << top.euler() << " does not match " << top.outer_loops
        << " outer and " << top.hole_loops << " hole loops";
    return why.str();
  }
  return {};
}

double triangle_area(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  return 0.5 * orient2d(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
}

double mesh_area(const Mesh& mesh) {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) s += triangle_area(mesh, t);
  return s;
}

double longest_edge(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e)
      h = std::max(h, norm(mesh.vertices[t[(e + 1) % 3]] - mesh.vertices[t[e]]));
  return h;
}

std::vector<Vec2> loop_points(const Mesh& mesh, int loop) {
  std::vector<Vec2> pts;
  pts.reserve(mesh.boundary_loops[loop].size());
  for (int v : mesh.boundary_loops[loop]) pts.push_back(mesh.vertices[v]);
  return pts;
}

double loop_signed_area(const Mesh& mesh, int loop) {
  const auto pts = loop_points(mesh, loop);
  return polygon_signed_area(pts);
}

bool is_hole_loop(const Mesh& mesh, int loop) { return loop_signed_area(mesh, loop) < 0.0; }

double boundary_length(const Mesh& mesh) {
  double s = 0.0;
  for (int l = 0; l < static_cast<int>(mesh.boundary_loops.size()); ++l) {
    const auto pts = loop_points(mesh, l);
    s += polygon_perimeter(pts);
  }
  return s;
}

std::vector<bool> boundary_mask(const Mesh& mesh) {
  std::vector<bool> mask(mesh.vertices.size(), false);
  for (const auto& loop : mesh.boundary_loops)
    for (int v : loop) mask[v] = true;
  return mask;
}

std::uint64_t mesh_checksum(const Mesh& mesh) {
  std::uint64_t h = 1469598103934665603ULL;
  hash_bytes(h, mesh.vertices.size());
  hash_bytes(h, mesh.triangles.size());
  for (const auto& v : mesh.vertices) {
    hash_bytes(h, v.x);
    hash_bytes(h, v.y);
  }
  for (const auto& t : mesh.triangles)
    for (int i : t) hash_bytes(h, i);
  return h;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto top = topology(mesh);
  out << top.vertices << ' ' << top.edges << ' ' << top.faces << ' ' << mesh.boundary_loops.size()
      << '\n';
  const auto old = out.precision(17);
  for (const auto& v : mesh.vertices) out << v.x << ' ' << v.y << '\n';
  out.precision(old);
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& loop : mesh.boundary_loops) {
    for (std::size_t i = 0; i < loop.size(); ++i) out << (i ? " " : "") << loop[i];
    out << '\n';
  }
}

}  // namespace liouville
