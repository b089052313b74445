#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wrapnet/geometry.hpp"

namespace wrapnet {

/// Link from a face to its parent in the fold tree.
struct FoldLink {
  FaceId parent = kInvalidId;
  EdgeId edge = kInvalidId;
};

/// Partition of the mesh edges into cut and fold edges. Fold edges form a
/// spanning tree of the dual graph rooted at `root`; boundary edges are
/// always cuts.
struct CutAssignment {
  std::vector<EdgeId> cut_edges;   // ascending
  std::vector<EdgeId> fold_edges;  // ascending
  FaceId root = kInvalidId;
  std::vector<FoldLink> parent;  // per face; root has parent == kInvalidId
  std::vector<FaceId> order;     // breadth-first from root

  bool is_fold(EdgeId e) const;
};

/// One face laid out in the plane. `corners[k]` is the image of mesh vertex
/// `vertices[k]`, in the same length units as the mesh.
struct NetFace {
  FaceId face = kInvalidId;
  std::array<VertexId, 3> vertices{};
  std::array<Vec2, 3> corners{};
};

/// Bending data copied from the mesh so a net document is self-contained.
struct FoldRecord {
  EdgeId edge = kInvalidId;
  FaceId child = kInvalidId;
  FaceId parent = kInvalidId;
  double angle = 0.0;
  int convexity = 0;
};

struct CutRecord {
  EdgeId edge = kInvalidId;
  double angle = 0.0;
  int convexity = 0;
  bool boundary = false;
};

/// delta0 (overlapping face pairs), delta1 (hyperbolic vertices with an
/// over-wrapped fan) and the bending totals of a net.
struct NetDiagnostics {
  int overlaps = 0;
  int hyperbolic = 0;
  double cut_angle_sum = 0.0;
  double fold_angle_sum = 0.0;
  double max_fold_angle = 0.0;
  double mean_fold_angle = 0.0;

  bool valid() const { return overlaps == 0 && hyperbolic == 0; }
};

/// Where a net came from; recorded in its serialized form.
struct NetProvenance {
  std::uint64_t mesh_hash = 0;
  std::string method;
  std::optional<Vec3> direction;
  std::uint64_t seed = 0;
};

/// Planar layout of a (sub)mesh: one placement per face, indexed by face id.
struct Net {
  NetProvenance provenance;
  std::vector<NetFace> faces;
  CutAssignment tree;
  std::vector<FoldRecord> folds;
  std::vector<CutRecord> cuts;
  /// Closed outlines (first point repeated at the end), traced along cut edges.
  std::vector<std::vector<Vec2>> boundary;
  NetDiagnostics diagnostics;
  /// 3D surface area of the unfolded patch.
  double surface_area = 0.0;

  double planar_area() const;
  /// Total length of the boundary outlines.
  double boundary_length() const;
  /// Axis-aligned bounds as {min, max}.
  std::array<Vec2, 2> bounds() const;
};

}  // namespace wrapnet
