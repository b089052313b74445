#include "wrapnet/overlap.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wrapnet/predicates.hpp"

namespace wrapnet {

namespace {

struct Box {
  double min_x, max_x, min_y, max_y;
};

Box bounds_of(const NetFace& f) {
  Box b{f.corners[0].x(), f.corners[0].x(), f.corners[0].y(), f.corners[0].y()};
  for (int k = 1; k < 3; ++k) {
    b.min_x = std::min(b.min_x, f.corners[k].x());
    b.max_x = std::max(b.max_x, f.corners[k].x());
    b.min_y = std::min(b.min_y, f.corners[k].y());
    b.max_y = std::max(b.max_y, f.corners[k].y());
  }
  return b;
}

double planar_corner_angle(const NetFace& f, int k) {
  const Vec2 u = f.corners[(k + 1) % 3] - f.corners[k];
  const Vec2 w = f.corners[(k + 2) % 3] - f.corners[k];
  return std::atan2(std::abs(cross2(u, w)), u.dot(w));
}

}  // namespace

std::vector<std::pair<FaceId, FaceId>> overlapping_pairs(const Net& net) {
  const auto nf = static_cast<FaceId>(net.faces.size());
  std::vector<Box> boxes(nf);
  for (FaceId f = 0; f < nf; ++f) boxes[f] = bounds_of(net.faces[f]);

  auto hinged = [&](FaceId a, FaceId b) {
    return (a < net.tree.parent.size() && net.tree.parent[a].parent == b) ||
           (b < net.tree.parent.size() && net.tree.parent[b].parent == a);
  };

  std::vector<FaceId> order(nf);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](FaceId a, FaceId b) {
    return boxes[a].min_x < boxes[b].min_x || (boxes[a].min_x == boxes[b].min_x && a < b);
  });

  // Boxes that merely touch cannot hold a positive-area overlap, so the
  // sweep uses strict comparisons.
  std::vector<std::pair<FaceId, FaceId>> pairs;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const FaceId a = order[i];
    const Box& ba = boxes[a];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const FaceId b = order[j];
      const Box& bb = boxes[b];
      if (!(bb.min_x < ba.max_x)) break;
      if (!(bb.min_y < ba.max_y && ba.min_y < bb.max_y)) continue;
      if (hinged(a, b)) continue;
      if (triangles_overlap(net.faces[a].corners, net.faces[b].corners)) pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

int count_overlaps(const Net& net) { return static_cast<int>(overlapping_pairs(net).size()); }

std::vector<VertexId> hyperbolic_vertices(const Net& net, const TriMesh& mesh) {
  std::vector<bool> fold(mesh.num_edges(), false);
  for (EdgeId e : net.tree.fold_edges) fold[e] = true;

  std::vector<VertexId> out;
  std::vector<std::uint32_t> fan;  // local union-find over the incident faces
  std::vector<double> sums;
  for (VertexId v = 0; v < mesh.num_vertices(); ++v) {
    const auto faces = mesh.vertex_faces(v);
    if (faces.empty()) continue;
    const auto n = faces.size();
    fan.resize(n);
    std::iota(fan.begin(), fan.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (fan[x] != x) x = fan[x] = fan[fan[x]];
      return x;
    };
    auto local = [&](FaceId f) {
      return static_cast<std::uint32_t>(std::find(faces.begin(), faces.end(), f) - faces.begin());
    };
    for (EdgeId e : mesh.vertex_edges(v)) {
      if (!fold[e]) continue;
      const auto& ed = mesh.edge(e);
      fan[find(local(ed.faces[0]))] = find(local(ed.faces[1]));
    }
    sums.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) sums[find(static_cast<std::uint32_t>(i))] +=
        planar_corner_angle(net.faces[faces[i]], mesh.corner_of(faces[i], v));
    if (std::any_of(sums.begin(), sums.end(), [](double s) { return s > kTwoPi + kAngleEpsilon; })) out.push_back(v);
  }
  return out;
}

int count_hyperbolic(const Net& net, const TriMesh& mesh) {
  return static_cast<int>(hyperbolic_vertices(net, mesh).size());
}

double cut_angle_sum(const TriMesh& mesh, const std::vector<EdgeId>& cut_edges) {
  double sum = 0.0;
  for (EdgeId e : cut_edges)
    if (!mesh.edge(e).is_boundary()) sum += dihedral_angle(mesh, e).angle;
  return sum;
}

CutAngleTotals total_cut_angle(const Net& net, const TriMesh& mesh) {
  CutAngleTotals t;
  t.cut_sum = cut_angle_sum(mesh, net.tree.cut_edges);
  for (EdgeId e : net.tree.fold_edges) {
    const double a = dihedral_angle(mesh, e).angle;
    t.fold_sum += a;
    t.max_fold = std::max(t.max_fold, a);
  }
  if (!net.tree.fold_edges.empty()) t.mean_fold = t.fold_sum / static_cast<double>(net.tree.fold_edges.size());
  return t;
}

NetDiagnostics diagnose(const Net& net, const TriMesh& mesh) {
  NetDiagnostics d;
  d.overlaps = count_overlaps(net);
  d.hyperbolic = count_hyperbolic(net, mesh);
  const auto t = total_cut_angle(net, mesh);
  d.cut_angle_sum = t.cut_sum;
  d.fold_angle_sum = t.fold_sum;
  d.max_fold_angle = t.max_fold;
  d.mean_fold_angle = t.mean_fold;
  return d;
}

std::string to_record(const NetDiagnostics& d) {
  return fmt::format(
      "delta0={} delta1={} cut_angle_sum={:.9f} fold_angle_sum={:.9f} max_fold_angle={:.9f} mean_fold_angle={:.9f} "
      "valid={}",
      d.overlaps, d.hyperbolic, d.cut_angle_sum, d.fold_angle_sum, d.max_fold_angle, d.mean_fold_angle,
      d.valid() ? 1 : 0);
}

}  // namespace wrapnet
