#include "wrapnet/unfold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wrapnet/disjoint_sets.hpp"
#include "wrapnet/overlap.hpp"
#include "wrapnet/rng.hpp"

namespace wrapnet {

namespace {

constexpr std::array<std::pair<WeightMethod, std::string_view>, 8> kMethodNames{{
    {WeightMethod::SteepestEdge, "steepest-edge"},
    {WeightMethod::FlatTree, "flat-tree"},
    {WeightMethod::UnflatTree, "unflat-tree"},
    {WeightMethod::MinPerimeter, "min-perimeter"},
    {WeightMethod::MaxPerimeter, "max-perimeter"},
    {WeightMethod::Random, "random"},
    {WeightMethod::DihedralFlatTree, "dihedral-flat-tree"},
    {WeightMethod::Evolved, "evolved"},
}};

// Copies of one mesh vertex that close up around a flat fan land within
// rounding distance of each other; merge them so exact predicates see
// touching edges instead of slivers.
void snap_vertex_copies(const TriMesh& mesh, std::vector<NetFace>& faces) {
  double longest = 0.0;
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) longest = std::max(longest, mesh.edge_length(e));
  const double tol = 1e-10 * longest;

  std::vector<Vec2> reps;
  for (VertexId v = 0; v < mesh.num_vertices(); ++v) {
    const auto incident = mesh.vertex_faces(v);
    if (incident.size() < 2) continue;
    reps.clear();
    for (FaceId f : incident) {
      Vec2& p = faces[f].corners[mesh.corner_of(f, v)];
      bool snapped = false;
      for (const Vec2& r : reps) {
        if (r == p) {
          snapped = true;
          break;
        }
        if ((r - p).norm() < tol) {
          p = r;
          snapped = true;
          break;
        }
      }
      if (!snapped) reps.push_back(p);
    }
  }
}

std::vector<std::vector<Vec2>> trace_boundary(const TriMesh& mesh, const Net& net, const std::vector<bool>& fold) {
  const auto nf = mesh.num_faces();
  std::vector<std::array<bool, 3>> seen(nf, {false, false, false});
  std::vector<std::vector<Vec2>> loops;

  auto next_half_edge = [&](FaceId f, int k) {
    // Walk around the end vertex of (f, k) through fold-connected faces.
    int j = (k + 1) % 3;
    while (fold[mesh.face_edges(f)[j]]) {
      const EdgeId e = mesh.face_edges(f)[j];
      const VertexId pivot = mesh.face(f)[j];
      const FaceId g = mesh.edge(e).other_face(f);
      f = g;
      j = mesh.corner_of(g, pivot);
    }
    return std::pair<FaceId, int>{f, j};
  };

  for (FaceId f0 = 0; f0 < nf; ++f0) {
    for (int k0 = 0; k0 < 3; ++k0) {
      if (fold[mesh.face_edges(f0)[k0]] || seen[f0][k0]) continue;
      std::vector<Vec2> loop;
      FaceId f = f0;
      int k = k0;
      while (!seen[f][k]) {
        seen[f][k] = true;
        loop.push_back(net.faces[f].corners[k]);
        std::tie(f, k) = next_half_edge(f, k);
      }
      loop.push_back(loop.front());
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

}  // namespace

bool CutAssignment::is_fold(EdgeId e) const { return std::binary_search(fold_edges.begin(), fold_edges.end(), e); }

double Net::planar_area() const {
  double area = 0.0;
  for (const auto& f : faces) area += 0.5 * std::abs(cross2(f.corners[1] - f.corners[0], f.corners[2] - f.corners[0]));
  return area;
}

double Net::boundary_length() const {
  double len = 0.0;
  for (const auto& loop : boundary)
    for (std::size_t i = 1; i < loop.size(); ++i) len += (loop[i] - loop[i - 1]).norm();
  return len;
}

std::array<Vec2, 2> Net::bounds() const {
  Vec2 lo(0, 0), hi(0, 0);
  bool first = true;
  for (const auto& f : faces)
    for (const auto& p : f.corners) {
      if (first) {
        lo = hi = p;
        first = false;
      }
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  return {lo, hi};
}

std::string_view to_string(WeightMethod method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

std::optional<WeightMethod> parse_weight_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames)
    if (n == name) return m;
  return std::nullopt;
}

bool needs_direction(WeightMethod method) {
  return method == WeightMethod::SteepestEdge || method == WeightMethod::FlatTree ||
         method == WeightMethod::UnflatTree;
}

double alignment_weight(const Vec3& v, const Vec3& w, const Vec3& c) {
  const Vec3 d = v - w;
  return std::abs(c.dot(d)) / d.norm();
}

Vec3 tilt_direction(const Vec3& c) {
  Vec3 axis = Vec3(1.0, 2.0, 3.0).normalized();
  if (c.cross(axis).norm() < 1e-6) axis = Vec3(3.0, -1.0, 2.0).normalized();
  return (Eigen::AngleAxisd(1e-3, axis) * c).normalized();
}

EdgeWeights compute_weights(const TriMesh& mesh, WeightMethod method, std::optional<Vec3> c, std::uint64_t seed,
                            bool tilt) {
  EdgeWeights w;
  w.method = method;
  w.seed = seed;
  w.values.assign(mesh.num_edges(), 0.0);

  if (needs_direction(method)) {
    if (!c) throw MissingDirection(std::string(to_string(method)) + " weights need a direction c");
    if (std::abs(c->norm() - 1.0) > 1e-12) throw std::invalid_argument("direction c must be unit length");
    w.direction = c;
    w.effective_direction = tilt ? tilt_direction(*c) : *c;
  } else if (c) {
    w.direction = c;
    w.effective_direction = c;
  }

  switch (method) {
    case WeightMethod::SteepestEdge:
    case WeightMethod::FlatTree:
    case WeightMethod::UnflatTree: {
      for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
        const auto& ed = mesh.edge(e);
        w.values[e] = alignment_weight(mesh.vertex(ed.vertices[0]), mesh.vertex(ed.vertices[1]), *w.effective_direction);
      }
      if (method == WeightMethod::UnflatTree && !w.values.empty()) {
        const auto [lo, hi] = std::minmax_element(w.values.begin(), w.values.end());
        const double min = *lo, span = *hi - *lo;
        for (double& x : w.values) x = 1.0 - (span > 0.0 ? (x - min) / span : 0.0);
      }
      break;
    }
    case WeightMethod::MinPerimeter:
    case WeightMethod::MaxPerimeter:
      for (EdgeId e = 0; e < mesh.num_edges(); ++e) w.values[e] = mesh.edge_length(e);
      break;
    case WeightMethod::Random: {
      Rng rng(seed);
      for (double& x : w.values) x = rng.uniform();
      break;
    }
    case WeightMethod::DihedralFlatTree:
      for (EdgeId e = 0; e < mesh.num_edges(); ++e)
        if (!mesh.edge(e).is_boundary()) w.values[e] = dihedral_angle(mesh, e).angle;
      break;
    case WeightMethod::Evolved:
      throw std::invalid_argument("evolved weights come from the genetic search, not compute_weights");
  }
  return w;
}

TreeMode tree_mode_for(WeightMethod method) {
  // Min perimeter keeps the longest edges as folds.
  return method == WeightMethod::MinPerimeter ? TreeMode::MaxFoldWeight : TreeMode::MinFoldWeight;
}

CutAssignment cuts_from_folds(const TriMesh& mesh, const std::vector<bool>& is_fold) {
  const auto nf = mesh.num_faces();
  CutAssignment cuts;
  std::size_t fold_count = 0;
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    if (is_fold[e]) {
      if (mesh.edge(e).is_boundary()) throw InvalidCutSet("boundary edge " + std::to_string(e) + " marked as fold");
      cuts.fold_edges.push_back(e);
      ++fold_count;
    } else {
      cuts.cut_edges.push_back(e);
    }
  }
  if (nf == 0) throw InvalidCutSet("mesh has no faces");
  if (fold_count != nf - 1)
    throw InvalidCutSet("fold edges (" + std::to_string(fold_count) + ") do not form a dual spanning tree of " +
                        std::to_string(nf) + " faces");

  // Root: most cut edges, lowest id.
  int best = -1;
  for (FaceId f = 0; f < nf; ++f) {
    int n = 0;
    for (EdgeId e : mesh.face_edges(f)) n += is_fold[e] ? 0 : 1;
    if (n > best) {
      best = n;
      cuts.root = f;
    }
  }

  cuts.parent.assign(nf, FoldLink{});
  cuts.order.reserve(nf);
  std::vector<bool> visited(nf, false);
  visited[cuts.root] = true;
  cuts.order.push_back(cuts.root);
  for (std::size_t head = 0; head < cuts.order.size(); ++head) {
    const FaceId f = cuts.order[head];
    for (EdgeId e : mesh.face_edges(f)) {
      if (!is_fold[e]) continue;
      const FaceId g = mesh.edge(e).other_face(f);
      if (visited[g]) continue;
      visited[g] = true;
      cuts.parent[g] = FoldLink{f, e};
      cuts.order.push_back(g);
    }
  }
  if (cuts.order.size() != nf)
    throw InvalidCutSet("fold edges leave " + std::to_string(nf - cuts.order.size()) + " faces unreachable");
  return cuts;
}

CutAssignment spanning_tree_cuts(const TriMesh& mesh, const std::vector<double>& weights, TreeMode mode) {
  std::vector<EdgeId> interior;
  interior.reserve(mesh.num_edges());
  for (EdgeId e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edge(e).is_boundary()) interior.push_back(e);

  if (mode == TreeMode::MinFoldWeight)
    std::sort(interior.begin(), interior.end(), [&](EdgeId a, EdgeId b) {
      return weights[a] < weights[b] || (weights[a] == weights[b] && a < b);
    });
  else
    std::sort(interior.begin(), interior.end(), [&](EdgeId a, EdgeId b) {
      return weights[a] > weights[b] || (weights[a] == weights[b] && a < b);
    });

  DisjointSets sets(mesh.num_faces());
  std::vector<bool> fold(mesh.num_edges(), false);
  std::size_t joined = 0;
  for (EdgeId e : interior) {
    const auto& ed = mesh.edge(e);
    if (sets.unite(ed.faces[0], ed.faces[1])) {
      fold[e] = true;
      if (++joined + 1 == mesh.num_faces()) break;
    }
  }
  if (joined + 1 != mesh.num_faces())
    throw DisconnectedMesh("dual graph is disconnected (" + std::to_string(mesh.connected_components()) +
                           " components)");
  return cuts_from_folds(mesh, fold);
}

CutAssignment spanning_tree_cuts(const TriMesh& mesh, const EdgeWeights& weights, TreeMode mode) {
  return spanning_tree_cuts(mesh, weights.values, mode);
}

CutAssignment steepest_edge_cuts(const TriMesh& mesh, const EdgeWeights& weights) {
  if (!mesh.is_closed()) throw InvalidCutSet("steepest-edge cutting needs a closed mesh");
  if (!weights.effective_direction) throw MissingDirection("steepest-edge cutting needs a direction c");
  const Vec3& c = *weights.effective_direction;

  const auto nv = mesh.num_vertices();
  std::vector<double> height(nv);
  for (VertexId v = 0; v < nv; ++v) height[v] = c.dot(mesh.vertex(v));
  auto higher = [&](VertexId a, VertexId b) { return height[a] > height[b] || (height[a] == height[b] && a > b); };

  VertexId top = 0;
  for (VertexId v = 1; v < nv; ++v)
    if (higher(v, top)) top = v;

  std::vector<bool> cut(mesh.num_edges(), false);
  DisjointSets vertex_sets(nv);
  for (VertexId v = 0; v < nv; ++v) {
    if (v == top || mesh.vertex_edges(v).empty()) continue;
    EdgeId best = kInvalidId;
    for (EdgeId e : mesh.vertex_edges(v)) {
      if (!higher(mesh.edge(e).other_vertex(v), v)) continue;
      if (best == kInvalidId || weights.values[e] > weights.values[best] ||
          (weights.values[e] == weights.values[best] && e < best))
        best = e;
    }
    if (best == kInvalidId)
      throw InvalidCutSet("vertex " + std::to_string(v) + " is a local maximum along c; no ascending edge to cut");
    cut[best] = true;
    if (!vertex_sets.unite(mesh.edge(best).vertices[0], mesh.edge(best).vertices[1]))
      throw InvalidCutSet("steepest-edge cuts contain a cycle");
  }

  std::vector<bool> fold(mesh.num_edges(), false);
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) fold[e] = !cut[e];
  return cuts_from_folds(mesh, fold);
}

CutAssignment cuts_for_weights(const TriMesh& mesh, const EdgeWeights& weights) {
  if (weights.method == WeightMethod::SteepestEdge) return steepest_edge_cuts(mesh, weights);
  return spanning_tree_cuts(mesh, weights, tree_mode_for(weights.method));
}

CutAssignment relieve_saddles(const TriMesh& mesh, const CutAssignment& cuts, int* swaps) {
  const auto nv = mesh.num_vertices();
  const auto nf = mesh.num_faces();

  std::vector<double> angle_sum(nv, 0.0);
  for (FaceId f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) angle_sum[mesh.face(f)[k]] += mesh.corner_angle(f, k);
  std::vector<bool> on_boundary(nv, false);
  for (const auto& e : mesh.edges())
    if (e.is_boundary()) on_boundary[e.vertices[0]] = on_boundary[e.vertices[1]] = true;

  // Cut edges a vertex needs so that none of its fans exceeds 2pi: interior
  // saddles need two, boundary vertices with too much angle need one.
  std::vector<int> need(nv, 0);
  for (VertexId v = 0; v < nv; ++v)
    if (angle_sum[v] > kTwoPi + kAngleEpsilon) need[v] = on_boundary[v] ? 1 : 2;

  std::vector<bool> fold(mesh.num_edges(), false);
  for (EdgeId e : cuts.fold_edges) fold[e] = true;
  auto is_cut = [&](EdgeId e) { return !fold[e] && !mesh.edge(e).is_boundary(); };
  std::vector<int> degree(nv, 0);
  for (EdgeId e = 0; e < mesh.num_edges(); ++e)
    if (is_cut(e)) {
      ++degree[mesh.edge(e).vertices[0]];
      ++degree[mesh.edge(e).vertices[1]];
    }

  std::vector<FaceId> up(nf);
  std::vector<EdgeId> up_edge(nf);
  std::vector<int> depth(nf);
  std::vector<FaceId> queue;
  auto rebuild = [&] {
    std::fill(depth.begin(), depth.end(), -1);
    queue.assign(1, FaceId{0});
    depth[0] = 0;
    up[0] = kInvalidId;
    up_edge[0] = kInvalidId;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const FaceId f = queue[head];
      for (EdgeId e : mesh.face_edges(f)) {
        if (!fold[e]) continue;
        const FaceId g = mesh.edge(e).other_face(f);
        if (depth[g] >= 0) continue;
        depth[g] = depth[f] + 1;
        up[g] = f;
        up_edge[g] = e;
        queue.push_back(g);
      }
    }
  };
  // Does fold edge e lie on the fold-tree path between faces a and b?
  auto on_path = [&](FaceId a, FaceId b, EdgeId e) {
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      if (up_edge[a] == e) return true;
      a = up[a];
    }
    return false;
  };

  rebuild();
  int count = 0;
  for (int pass = 0; pass < 4; ++pass) {
    bool changed = false;
    for (VertexId s = 0; s < nv; ++s) {
      if (degree[s] >= need[s]) continue;
      // Cut a fold edge (s, u) and fold a cut edge (u, p) instead, keeping
      // the folds a spanning tree and p's own requirement satisfied.
      EdgeId best_cut = kInvalidId, best_fold = kInvalidId;
      int best_slack = -1;
      for (EdgeId e : mesh.vertex_edges(s)) {
        if (!fold[e]) continue;
        const VertexId u = mesh.edge(e).other_vertex(s);
        for (EdgeId g : mesh.vertex_edges(u)) {
          if (!is_cut(g)) continue;
          const VertexId p = mesh.edge(g).other_vertex(u);
          const int slack = degree[p] - 1 - need[p];
          if (p == s || slack < 0 || slack <= best_slack) continue;
          if (!on_path(mesh.edge(g).faces[0], mesh.edge(g).faces[1], e)) continue;
          best_slack = slack;
          best_cut = e;
          best_fold = g;
        }
      }
      if (best_cut == kInvalidId) continue;
      const VertexId u = mesh.edge(best_cut).other_vertex(s);
      --degree[mesh.edge(best_fold).other_vertex(u)];
      ++degree[s];
      fold[best_cut] = false;
      fold[best_fold] = true;
      rebuild();
      ++count;
      changed = true;
    }
    if (!changed) break;
  }
  if (swaps) *swaps = count;
  return cuts_from_folds(mesh, fold);
}

Net unfold_net(const TriMesh& mesh, const CutAssignment& cuts) {
  const auto nf = mesh.num_faces();
  Net net;
  net.provenance.mesh_hash = mesh.hash();
  net.tree = cuts;
  net.faces.resize(nf);
  for (FaceId f = 0; f < nf; ++f) {
    net.faces[f].face = f;
    net.faces[f].vertices = mesh.face(f);
  }

  // Image of apex p3 once the 3D edge a3->b3 is mapped onto a2->b2; the apex
  // goes to the left, which keeps every face counter-clockwise.
  auto apex = [](const Vec3& a3, const Vec3& b3, const Vec3& p3, const Vec2& a2, const Vec2& b2) {
    const Vec3 d = b3 - a3;
    const double t = (p3 - a3).dot(d) / d.squaredNorm();
    const double h = ((p3 - a3) - t * d).norm();
    const Vec2 d2 = b2 - a2;
    const Vec2 left = Vec2(-d2.y(), d2.x()) / d2.norm();
    return Vec2(a2 + t * d2 + h * left);
  };

  {
    const FaceId r = cuts.root;
    const auto& t = mesh.face(r);
    const Vec3& p0 = mesh.vertex(t[0]);
    const Vec3& p1 = mesh.vertex(t[1]);
    auto& corners = net.faces[r].corners;
    corners[0] = Vec2(0.0, 0.0);
    corners[1] = Vec2((p1 - p0).norm(), 0.0);
    corners[2] = apex(p0, p1, mesh.vertex(t[2]), corners[0], corners[1]);
  }

  for (std::size_t i = 1; i < cuts.order.size(); ++i) {
    const FaceId g = cuts.order[i];
    const FoldLink link = cuts.parent[g];
    const auto& tg = mesh.face(g);
    int k = 0;
    while (mesh.face_edges(g)[k] != link.edge) ++k;
    const VertexId a = tg[k], b = tg[(k + 1) % 3], p = tg[(k + 2) % 3];
    const auto& parent = net.faces[link.parent];
    auto& corners = net.faces[g].corners;
    corners[k] = parent.corners[mesh.corner_of(link.parent, a)];
    corners[(k + 1) % 3] = parent.corners[mesh.corner_of(link.parent, b)];
    corners[(k + 2) % 3] = apex(mesh.vertex(a), mesh.vertex(b), mesh.vertex(p), corners[k], corners[(k + 1) % 3]);
  }

  snap_vertex_copies(mesh, net.faces);

  std::vector<bool> fold(mesh.num_edges(), false);
  for (EdgeId e : cuts.fold_edges) fold[e] = true;

  for (std::size_t i = 1; i < cuts.order.size(); ++i) {
    const FaceId g = cuts.order[i];
    const auto geo = dihedral_angle(mesh, cuts.parent[g].edge);
    net.folds.push_back(FoldRecord{cuts.parent[g].edge, g, cuts.parent[g].parent, geo.angle, geo.convexity});
  }
  for (EdgeId e : cuts.cut_edges) {
    CutRecord rec;
    rec.edge = e;
    rec.boundary = mesh.edge(e).is_boundary();
    if (!rec.boundary) {
      const auto geo = dihedral_angle(mesh, e);
      rec.angle = geo.angle;
      rec.convexity = geo.convexity;
    }
    net.cuts.push_back(rec);
  }

  net.boundary = trace_boundary(mesh, net, fold);
  net.surface_area = mesh.surface_area();
  net.diagnostics = diagnose(net, mesh);
  return net;
}

Net unfold(const TriMesh& mesh, WeightMethod method, std::optional<Vec3> c, std::uint64_t seed, bool tilt) {
  const EdgeWeights weights = compute_weights(mesh, method, c, seed, tilt);
  Net net = unfold_net(mesh, cuts_for_weights(mesh, weights));
  net.provenance.method = std::string(to_string(method));
  net.provenance.direction = weights.effective_direction;
  net.provenance.seed = seed;
  return net;
}

double max_isometry_error(const Net& net, const TriMesh& mesh) {
  double worst = 0.0;
  for (FaceId f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.face(f);
    const auto& c = net.faces[f].corners;
    for (int k = 0; k < 3; ++k) {
      const double l3 = (mesh.vertex(t[(k + 1) % 3]) - mesh.vertex(t[k])).norm();
      const double l2 = (c[(k + 1) % 3] - c[k]).norm();
      worst = std::max(worst, std::abs(l2 - l3) / l3);
    }
  }
  return worst;
}

}  // namespace wrapnet
