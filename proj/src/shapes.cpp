#include "wrapnet/shapes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrapnet/rng.hpp"

namespace wrapnet {

namespace {

struct RawMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> faces;
};

RawMesh raw_icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return m;
}

// Flips faces so that normals point away from the origin (star-shaped meshes).
void orient_outward(RawMesh& m) {
  for (auto& f : m.faces) {
    const Vec3& a = m.vertices[f[0]];
    const Vec3& b = m.vertices[f[1]];
    const Vec3& c = m.vertices[f[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(f[1], f[2]);
  }
}

double signed_volume(const RawMesh& m) {
  double v = 0.0;
  for (const auto& f : m.faces) v += m.vertices[f[0]].dot(m.vertices[f[1]].cross(m.vertices[f[2]]));
  return v / 6.0;
}

void flip_if_inward(RawMesh& m) {
  if (signed_volume(m) < 0.0)
    for (auto& f : m.faces) std::swap(f[1], f[2]);
}

RawMesh raw_geodesic(int n) {
  const RawMesh base = raw_icosahedron();
  RawMesh m;
  // A subdivision point is identified by its barycentric weights over the
  // global icosahedron vertices, so points on shared edges are created once.
  std::map<std::array<std::uint32_t, 6>, VertexId> lookup;
  auto vertex_at = [&](const Triangle& f, int i, int j, int k) {
    std::array<std::pair<std::uint32_t, std::uint32_t>, 3> w{
        {{f[0], static_cast<std::uint32_t>(i)}, {f[1], static_cast<std::uint32_t>(j)}, {f[2], static_cast<std::uint32_t>(k)}}};
    std::sort(w.begin(), w.end());
    std::array<std::uint32_t, 6> key{};
    key.fill(kInvalidId);
    int slot = 0;
    for (const auto& [vid, weight] : w)
      if (weight > 0) {
        key[slot++] = vid;
        key[slot++] = weight;
      }
    auto [it, inserted] = lookup.try_emplace(key, static_cast<VertexId>(m.vertices.size()));
    if (inserted) {
      const Vec3 p = (i * base.vertices[f[0]] + j * base.vertices[f[1]] + k * base.vertices[f[2]]) / n;
      m.vertices.push_back(p.normalized());
    }
    return it->second;
  };

  for (const auto& f : base.faces) {
    std::vector<std::vector<VertexId>> idx(n + 1);
    for (int i = 0; i <= n; ++i) {
      idx[i].resize(n + 1 - i);
      for (int j = 0; j <= n - i; ++j) idx[i][j] = vertex_at(f, i, j, n - i - j);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n - i; ++j) {
        m.faces.push_back({idx[i][j], idx[i + 1][j], idx[i][j + 1]});
        if (i + j < n - 1) m.faces.push_back({idx[i + 1][j], idx[i + 1][j + 1], idx[i][j + 1]});
      }
  }
  orient_outward(m);
  return m;
}

std::vector<std::vector<VertexId>> neighbours(const RawMesh& m, const std::vector<bool>& face_alive) {
  std::vector<std::vector<VertexId>> nb(m.vertices.size());
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (!face_alive[f]) continue;
    for (int k = 0; k < 3; ++k) {
      const VertexId a = m.faces[f][k], b = m.faces[f][(k + 1) % 3];
      nb[a].push_back(b);
      nb[b].push_back(a);
    }
  }
  for (auto& list : nb) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nb;
}

bool faces_point_outward(const RawMesh& m, const std::vector<bool>& alive) {
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (!alive[f]) continue;
    const auto& t = m.faces[f];
    const Vec3 n = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    if (0.5 * n.norm() <= 1e-9 || n.dot(m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) <= 0.0) return false;
  }
  return true;
}

// Collapses shortest edges (keeping the mesh a valid sphere) until the face
// count reaches `target`.
void collapse_to(RawMesh& m, std::size_t target, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<bool> alive(m.faces.size(), true);
  std::size_t live_faces = m.faces.size();

  while (live_faces > target) {
    const auto nb = neighbours(m, alive);
    struct Candidate {
      double length;
      VertexId a, b;
    };
    std::vector<Candidate> candidates;
    for (VertexId a = 0; a < nb.size(); ++a)
      for (VertexId b : nb[a])
        if (a < b) candidates.push_back({(m.vertices[a] - m.vertices[b]).norm(), a, b});
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
      return x.length < y.length || (x.length == y.length && std::tie(x.a, x.b) < std::tie(y.a, y.b));
    });

    // Seeded choice among near-equal shortest edges.
    std::size_t ties = 1;
    while (ties < candidates.size() && candidates[ties].length <= candidates[0].length * (1.0 + 1e-9)) ++ties;
    std::rotate(candidates.begin(), candidates.begin() + static_cast<long>(rng.below(ties)), candidates.begin() + static_cast<long>(ties));

    bool done = false;
    for (const auto& c : candidates) {
      std::vector<VertexId> common;
      std::set_intersection(nb[c.a].begin(), nb[c.a].end(), nb[c.b].begin(), nb[c.b].end(), std::back_inserter(common));
      if (common.size() != 2) continue;
      if (nb[common[0]].size() <= 3 || nb[common[1]].size() <= 3) continue;
      if (nb[c.a].size() + nb[c.b].size() < 7) continue;

      RawMesh trial = m;
      std::vector<bool> trial_alive = alive;
      trial.vertices[c.a] = (m.vertices[c.a] + m.vertices[c.b]).normalized();
      std::size_t removed = 0;
      for (std::size_t f = 0; f < trial.faces.size(); ++f) {
        if (!trial_alive[f]) continue;
        auto& t = trial.faces[f];
        const bool has_a = std::find(t.begin(), t.end(), c.a) != t.end();
        const bool has_b = std::find(t.begin(), t.end(), c.b) != t.end();
        if (has_a && has_b) {
          trial_alive[f] = false;
          ++removed;
        } else if (has_b) {
          std::replace(t.begin(), t.end(), c.b, c.a);
        }
      }
      if (removed != 2 || !faces_point_outward(trial, trial_alive)) continue;
      m = std::move(trial);
      alive = std::move(trial_alive);
      live_faces -= 2;
      done = true;
      break;
    }
    if (!done) throw std::runtime_error("sphere generation: no valid edge collapse left at " + std::to_string(live_faces) + " faces");
  }

  // Compact.
  RawMesh out;
  std::vector<VertexId> remap(m.vertices.size(), kInvalidId);
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (!alive[f]) continue;
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      VertexId& r = remap[m.faces[f][k]];
      if (r == kInvalidId) {
        r = static_cast<VertexId>(out.vertices.size());
        out.vertices.push_back(m.vertices[m.faces[f][k]]);
      }
      t[k] = r;
    }
    out.faces.push_back(t);
  }
  m = std::move(out);
}

// Moves every vertex towards the average of its neighbours and back onto
// the unit sphere; stops early if a step would flip a face.
void relax_on_sphere(RawMesh& m, int iterations) {
  const std::vector<bool> alive(m.faces.size(), true);
  const auto nb = neighbours(m, alive);
  for (int it = 0; it < iterations; ++it) {
    RawMesh next = m;
    for (VertexId v = 0; v < m.vertices.size(); ++v) {
      Vec3 avg = Vec3::Zero();
      for (VertexId u : nb[v]) avg += m.vertices[u];
      avg /= static_cast<double>(nb[v].size());
      next.vertices[v] = (0.5 * m.vertices[v] + 0.5 * avg).normalized();
    }
    if (!faces_point_outward(next, alive)) break;
    m = std::move(next);
  }
}

TriMesh to_mesh(RawMesh m) { return TriMesh::build(std::move(m.vertices), std::move(m.faces)); }

// Surface of revolution around z with poles at z_top / z_bottom. `rings`
// lists (z, radius) from top to bottom; `bump(z, theta)` scales the radius.
RawMesh revolve(const std::vector<std::pair<double, double>>& rings, double z_top, double z_bottom, int segments,
                const std::function<double(double, double)>& bump) {
  RawMesh m;
  m.vertices.emplace_back(0.0, 0.0, z_top);
  for (const auto& [z, r] : rings)
    for (int j = 0; j < segments; ++j) {
      const double theta = kTwoPi * j / segments;
      const double s = r * bump(z, theta);
      m.vertices.emplace_back(s * std::cos(theta), s * std::sin(theta), z);
    }
  m.vertices.emplace_back(0.0, 0.0, z_bottom);
  const auto bottom = static_cast<VertexId>(m.vertices.size() - 1);
  auto ring = [segments](std::size_t i, int j) {
    return static_cast<VertexId>(1 + i * segments + ((j % segments) + segments) % segments);
  };
  for (int j = 0; j < segments; ++j) m.faces.push_back({0, ring(0, j), ring(0, j + 1)});
  for (std::size_t i = 0; i + 1 < rings.size(); ++i)
    for (int j = 0; j < segments; ++j) {
      m.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      m.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  const std::size_t last = rings.size() - 1;
  for (int j = 0; j < segments; ++j) m.faces.push_back({bottom, ring(last, j + 1), ring(last, j)});
  flip_if_inward(m);
  return m;
}

double piecewise_linear(const std::vector<std::pair<double, double>>& pts, double z) {
  // pts sorted by descending z
  if (z >= pts.front().first) return pts.front().second;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (z >= pts[i].first) {
      const double t = (z - pts[i].first) / (pts[i - 1].first - pts[i].first);
      return pts[i].second + t * (pts[i - 1].second - pts[i].second);
    }
  return pts.back().second;
}

}  // namespace

std::string_view to_string(SphereMode mode) {
  return mode == SphereMode::Inscribed ? "inscribed" : "circumscribed";
}

std::optional<SphereMode> parse_sphere_mode(std::string_view name) {
  if (name == "inscribed") return SphereMode::Inscribed;
  if (name == "circumscribed") return SphereMode::Circumscribed;
  return std::nullopt;
}

TriMesh geodesic_sphere(int frequency) {
  if (frequency < 1) throw std::invalid_argument("geodesic frequency must be >= 1");
  return to_mesh(raw_geodesic(frequency));
}

TriMesh generate_sphere(const SphereSpec& spec, std::uint64_t seed) {
  if (spec.facets < 4) throw std::invalid_argument("a closed triangulated sphere needs at least 4 facets");
  if (!(spec.radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");

  // Closed genus-0 triangulations have an even face count.
  const auto target = static_cast<std::size_t>(spec.facets + (spec.facets % 2));
  int n = 1;
  while (static_cast<std::size_t>(20 * n * n) < target) ++n;

  RawMesh raw = raw_geodesic(n);
  if (raw.faces.size() != target) {
    collapse_to(raw, target, seed);
    relax_on_sphere(raw, 30);
  }

  double scale = spec.radius;
  if (spec.mode == SphereMode::Circumscribed) {
    const TriMesh unit = TriMesh::build(raw.vertices, raw.faces);
    scale = spec.radius / min_face_plane_distance(unit);
  }
  for (auto& v : raw.vertices) v *= scale;
  return to_mesh(std::move(raw));
}

double area_excess(const TriMesh& mesh, double radius) {
  const double sphere = 4.0 * kPi * radius * radius;
  return 100.0 * (mesh.surface_area() - sphere) / sphere;
}

double min_face_plane_distance(const TriMesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (FaceId f = 0; f < mesh.num_faces(); ++f)
    best = std::min(best, std::abs(mesh.face_normal(f).dot(mesh.vertex(mesh.face(f)[0]))));
  return best;
}

TriMesh icosahedron() { return to_mesh(raw_icosahedron()); }

TriMesh tetrahedron() {
  const double s = 1.0 / std::sqrt(3.0);
  RawMesh m;
  m.vertices = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  orient_outward(m);
  return to_mesh(std::move(m));
}

TriMesh unit_cube() {
  RawMesh m;
  for (int i = 0; i < 8; ++i) m.vertices.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  // Quads listed counter-clockwise seen from outside, split along (a, c).
  const std::array<std::array<VertexId, 4>, 6> quads{{
      {0, 2, 3, 1},  // z = 0
      {4, 5, 7, 6},  // z = 1
      {0, 1, 5, 4},  // y = 0
      {2, 6, 7, 3},  // y = 1
      {0, 4, 6, 2},  // x = 0
      {1, 3, 7, 5},  // x = 1
  }};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  return to_mesh(std::move(m));
}

TriMesh dented_icosahedron(double depth) {
  RawMesh m = raw_icosahedron();
  m.vertices[0] *= depth;
  return to_mesh(std::move(m));
}

TriMesh dumbbell(int segments, double neck_radius) {
  constexpr double lobe_center = 1.6;
  constexpr int lobe_rings = 7;
  constexpr int neck_rings = 3;
  const double phi_max = kPi - std::asin(neck_radius);

  std::vector<std::pair<double, double>> rings;
  for (int i = 1; i <= lobe_rings; ++i) {
    const double phi = phi_max * i / lobe_rings;
    rings.emplace_back(lobe_center + std::cos(phi), std::sin(phi));
  }
  const double neck_top = rings.back().first;
  for (int i = 1; i <= neck_rings; ++i) rings.emplace_back(neck_top - 2.0 * neck_top * i / (neck_rings + 1), neck_radius);
  for (int i = lobe_rings; i >= 1; --i) {
    const double phi = phi_max * i / lobe_rings;
    rings.emplace_back(-(lobe_center + std::cos(phi)), std::sin(phi));
  }
  return to_mesh(revolve(rings, lobe_center + 1.0, -(lobe_center + 1.0), segments, [](double, double) { return 1.0; }));
}

TriMesh figure(int segments, int rings) {
  constexpr double z_top = 2.0;
  constexpr double z_bottom = -1.9;
  const std::vector<std::pair<double, double>> body{
      {1.20, 0.30}, {1.05, 0.18}, {0.90, 0.45}, {0.75, 0.72}, {0.40, 0.62}, {0.00, 0.52},
      {-0.60, 0.66}, {-1.00, 0.50}, {-1.40, 0.42}, {-1.60, 0.72}, {-1.80, 0.70},
  };
  std::vector<std::pair<double, double>> profile;
  for (int i = 1; i <= rings; ++i) {
    const double z = z_top + (z_bottom - z_top) * i / (rings + 1);
    double r = 0.0;
    if (z > 1.2) {
      // Head: sphere of radius 0.45 centred at z = 1.55.
      const double dz = z - 1.55;
      r = std::sqrt(std::max(0.45 * 0.45 - dz * dz, 1e-4));
      r = std::max(r, z < 1.55 ? piecewise_linear(body, z) : 0.0);
    } else {
      r = piecewise_linear(body, z);
    }
    profile.emplace_back(z, r);
  }
  auto bump = [](double z, double theta) {
    return 1.0 + 0.10 * std::sin(3.0 * theta + 2.0 * z) + 0.06 * std::cos(5.0 * theta - z);
  };
  return to_mesh(revolve(profile, z_top, z_bottom, segments, bump));
}

TriMesh flat_grid(int n, double size) {
  RawMesh m;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m.vertices.emplace_back(size * j / n, size * i / n, 0.0);
  auto id = [n](int i, int j) { return static_cast<VertexId>(i * (n + 1) + j); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.faces.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
    }
  return to_mesh(std::move(m));
}

TriMesh saddle_grid(int n, double k) {
  RawMesh m;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double x = -1.0 + 2.0 * j / n;
      const double y = -1.0 + 2.0 * i / n;
      m.vertices.emplace_back(x, y, k * (x * x - y * y));
    }
  auto id = [n](int i, int j) { return static_cast<VertexId>(i * (n + 1) + j); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.faces.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
    }
  return to_mesh(std::move(m));
}

}  // namespace wrapnet
