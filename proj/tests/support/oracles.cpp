#include "oracles.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <deque>

#include "wrapnet/shapes.hpp"

namespace oracle {

namespace {

struct QPoint {
  mpq_class x, y;
};

mpq_class cross(const QPoint& o, const QPoint& a, const QPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<QPoint> to_q(const std::array<Vec2, 3>& t) {
  std::vector<QPoint> out;
  for (const auto& p : t) out.push_back({mpq_class(p.x()), mpq_class(p.y())});
  return out;
}

mpq_class signed_area2(const std::vector<QPoint>& poly) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return s;
}

// Keep the part of `poly` on the left of (or on) a->b.
std::vector<QPoint> clip(const std::vector<QPoint>& poly, const QPoint& a, const QPoint& b) {
  std::vector<QPoint> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const QPoint& p = poly[i];
    const QPoint& q = poly[(i + 1) % poly.size()];
    const mpq_class sp = cross(a, b, p), sq = cross(a, b, q);
    if (sp >= 0) out.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const mpq_class t = sp / (sp - sq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

double angle3(const wrapnet::Vec3& o, const wrapnet::Vec3& a, const wrapnet::Vec3& b) {
  const wrapnet::Vec3 u = (a - o).normalized(), w = (b - o).normalized();
  return std::acos(std::clamp(u.dot(w), -1.0, 1.0));
}

bool dual_spanning(const TriMesh& mesh, const std::vector<EdgeId>& folds) {
  const auto nf = mesh.num_faces();
  std::vector<std::vector<FaceId>> adj(nf);
  for (EdgeId e : folds) {
    const auto& ed = mesh.edge(e);
    adj[ed.faces[0]].push_back(ed.faces[1]);
    adj[ed.faces[1]].push_back(ed.faces[0]);
  }
  std::vector<bool> seen(nf, false);
  std::deque<FaceId> q{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const FaceId f = q.front();
    q.pop_front();
    for (FaceId g : adj[f])
      if (!seen[g]) {
        seen[g] = true;
        ++count;
        q.push_back(g);
      }
  }
  return count == nf;
}

}  // namespace

bool rational_overlap(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b) {
  auto pa = to_q(a);
  auto pb = to_q(b);
  if (signed_area2(pa) == 0 || signed_area2(pb) == 0) return false;
  if (signed_area2(pa) < 0) std::reverse(pa.begin(), pa.end());
  if (signed_area2(pb) < 0) std::reverse(pb.begin(), pb.end());
  std::vector<QPoint> poly = pa;
  for (std::size_t i = 0; i < 3 && !poly.empty(); ++i) poly = clip(poly, pb[i], pb[(i + 1) % 3]);
  if (poly.size() < 3) return false;
  return signed_area2(poly) > 0;
}

std::vector<std::pair<FaceId, FaceId>> brute_force_overlaps(const Net& net) {
  std::vector<std::pair<FaceId, FaceId>> out;
  for (FaceId i = 0; i < net.faces.size(); ++i)
    for (FaceId j = i + 1; j < net.faces.size(); ++j)
      if (rational_overlap(net.faces[i].corners, net.faces[j].corners)) out.emplace_back(i, j);
  return out;
}

std::vector<VertexId> fan_hyperbolic(const Net& net, const TriMesh& mesh) {
  std::vector<bool> fold(mesh.num_edges(), false);
  for (EdgeId e : net.tree.fold_edges) fold[e] = true;

  std::vector<std::vector<FaceId>> around(mesh.num_vertices());
  for (FaceId f = 0; f < mesh.num_faces(); ++f)
    for (VertexId v : mesh.face(f)) around[v].push_back(f);

  std::vector<VertexId> out;
  for (VertexId v = 0; v < mesh.num_vertices(); ++v) {
    std::vector<bool> done(mesh.num_faces(), false);
    bool hyper = false;
    for (FaceId start : around[v]) {
      if (done[start]) continue;
      double sum = 0.0;
      std::vector<FaceId> stack{start};
      done[start] = true;
      while (!stack.empty()) {
        const FaceId f = stack.back();
        stack.pop_back();
        const auto& t = mesh.face(f);
        const int k = static_cast<int>(std::find(t.begin(), t.end(), v) - t.begin());
        sum += angle3(mesh.vertex(t[k]), mesh.vertex(t[(k + 1) % 3]), mesh.vertex(t[(k + 2) % 3]));
        // The two face edges at v.
        for (int j : {k, (k + 2) % 3}) {
          const EdgeId e = mesh.face_edges(f)[j];
          if (!fold[e]) continue;
          const FaceId g = mesh.edge(e).other_face(f);
          if (!done[g]) {
            done[g] = true;
            stack.push_back(g);
          }
        }
      }
      if (sum > 2.0 * M_PI + 1e-9) hyper = true;
    }
    if (hyper) out.push_back(v);
  }
  return out;
}

std::vector<std::vector<EdgeId>> enumerate_spanning_trees(const TriMesh& mesh) {
  std::vector<EdgeId> interior;
  for (EdgeId e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edge(e).is_boundary()) interior.push_back(e);
  const std::size_t k = mesh.num_faces() - 1;
  std::vector<std::vector<EdgeId>> trees;
  std::vector<bool> pick(interior.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  do {
    std::vector<EdgeId> folds;
    for (std::size_t i = 0; i < interior.size(); ++i)
      if (pick[i]) folds.push_back(interior[i]);
    if (dual_spanning(mesh, folds)) trees.push_back(folds);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return trees;
}

std::string matrix_tree_count(const TriMesh& mesh) {
  const auto n = mesh.num_faces();
  std::vector<std::vector<mpq_class>> lap(n, std::vector<mpq_class>(n, 0));
  for (const auto& e : mesh.edges()) {
    if (e.is_boundary()) continue;
    const auto a = e.faces[0], b = e.faces[1];
    lap[a][a] += 1;
    lap[b][b] += 1;
    lap[a][b] -= 1;
    lap[b][a] -= 1;
  }
  // Determinant of the minor without row/column 0.
  const std::size_t m = n - 1;
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i][j] = lap[i + 1][j + 1];
  mpq_class det = 1;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) return "0";
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < m; ++r) {
      if (a[r][c] == 0) continue;
      const mpq_class f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < m; ++j) a[r][j] -= f * a[c][j];
    }
  }
  det.canonicalize();
  return det.get_str();
}

double cut_edge_length(const Net& net, const TriMesh& mesh) {
  std::vector<bool> fold(mesh.num_edges(), false);
  for (EdgeId e : net.tree.fold_edges) fold[e] = true;
  double len = 0.0;
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    if (fold[e]) continue;
    const auto& ed = mesh.edge(e);
    len += (mesh.vertex(ed.vertices[0]) - mesh.vertex(ed.vertices[1])).norm();
  }
  return len;
}

long double surface_area(const TriMesh& mesh) {
  long double area = 0.0L;
  for (const auto& t : mesh.faces()) {
    const auto u = mesh.vertex(t[1]) - mesh.vertex(t[0]);
    const auto w = mesh.vertex(t[2]) - mesh.vertex(t[0]);
    area += 0.5L * static_cast<long double>(u.cross(w).norm());
  }
  return area;
}

double isometry_error(const Net& net, const TriMesh& mesh) {
  double worst = 0.0;
  for (FaceId f = 0; f < mesh.num_faces(); ++f) {
    const auto& nf = net.faces[f];
    for (int k = 0; k < 3; ++k) {
      const double l3 = (mesh.vertex(nf.vertices[k]) - mesh.vertex(nf.vertices[(k + 1) % 3])).norm();
      const double l2 = (nf.corners[k] - nf.corners[(k + 1) % 3]).norm();
      worst = std::max(worst, std::abs(l2 - l3) / l3);
    }
  }
  return worst;
}

double planar_area(const Net& net) {
  double area = 0.0;
  for (const auto& f : net.faces) {
    const Vec2 u = f.corners[1] - f.corners[0], w = f.corners[2] - f.corners[0];
    area += 0.5 * std::abs(u.x() * w.y() - u.y() * w.x());
  }
  return area;
}

TriMesh random_mesh(wrapnet::Rng& rng, int max_faces) {
  if (rng.uniform() < 0.2) {
    const int n = 3 + static_cast<int>(rng.below(6));
    return wrapnet::saddle_grid(n, 0.3 + 1.5 * rng.uniform());
  }
  wrapnet::SphereSpec spec;
  spec.facets = 20 + 2 * static_cast<int>(rng.below(static_cast<std::uint64_t>((max_faces - 20) / 2 + 1)));
  spec.mode = wrapnet::SphereMode::Inscribed;
  const TriMesh base = wrapnet::generate_sphere(spec, rng.next());
  const double noise = 0.6 * rng.uniform();
  std::vector<wrapnet::Vec3> vs = base.vertices();
  for (auto& v : vs) v *= 1.0 + noise * (rng.uniform() - 0.5);
  return TriMesh::build(std::move(vs), base.faces());
}

double gauss_bonnet_total(const TriMesh& mesh) {
  std::vector<double> sum(mesh.num_vertices(), 0.0);
  for (const auto& t : mesh.faces())
    for (int k = 0; k < 3; ++k)
      sum[t[k]] += angle3(mesh.vertex(t[k]), mesh.vertex(t[(k + 1) % 3]), mesh.vertex(t[(k + 2) % 3]));
  std::vector<bool> boundary(mesh.num_vertices(), false);
  for (const auto& e : mesh.edges())
    if (e.is_boundary()) boundary[e.vertices[0]] = boundary[e.vertices[1]] = true;
  double total = 0.0;
  for (VertexId v = 0; v < mesh.num_vertices(); ++v) total += (boundary[v] ? M_PI : 2.0 * M_PI) - sum[v];
  return total;
}

}  // namespace oracle
