#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wrapnet/errors.hpp"
#include "wrapnet/geometry.hpp"

namespace wrapnet {

using Triangle = std::array<VertexId, 3>;

/// Undirected edge. `vertices` is sorted ascending; `faces[1]` is kInvalidId
/// for a boundary edge.
struct Edge {
  std::array<VertexId, 2> vertices{kInvalidId, kInvalidId};
  std::array<FaceId, 2> faces{kInvalidId, kInvalidId};

  bool is_boundary() const { return faces[1] == kInvalidId; }
  FaceId other_face(FaceId f) const { return faces[0] == f ? faces[1] : faces[0]; }
  VertexId other_vertex(VertexId v) const { return vertices[0] == v ? vertices[1] : vertices[0]; }
};

/// Indexed triangle mesh with edge/face/vertex adjacency.
///
/// Instances are validated on construction and immutable afterwards, so a
/// single mesh may be shared read-only between threads. Edge ids follow the
/// order in which edges are first met while scanning faces in order and, within
/// a face, corners k = 0, 1, 2 (edge k joins corner k and corner k + 1).
class TriMesh {
 public:
  TriMesh() = default;

  /// Validates and builds adjacency. Throws ParseError (bad index),
  /// DegenerateFace, NonManifold or InconsistentWinding.
  static TriMesh build(std::vector<Vec3> vertices, std::vector<Triangle> faces);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Vec3& vertex(VertexId v) const { return vertices_[v]; }
  const Triangle& face(FaceId f) const { return faces_[f]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  /// Edge k of face f joins face(f)[k] and face(f)[(k + 1) % 3].
  const std::array<EdgeId, 3>& face_edges(FaceId f) const { return face_edges_[f]; }
  std::span<const EdgeId> vertex_edges(VertexId v) const;
  std::span<const FaceId> vertex_faces(VertexId v) const;

  std::optional<EdgeId> shared_edge(FaceId a, FaceId b) const;
  /// Corner index (0..2) of vertex v in face f, or -1.
  int corner_of(FaceId f, VertexId v) const;

  bool is_closed() const { return boundary_edge_count_ == 0; }
  std::size_t boundary_edge_count() const { return boundary_edge_count_; }
  long euler_characteristic() const;
  /// Number of edge-connected face components.
  std::size_t connected_components() const;

  double edge_length(EdgeId e) const;
  double face_area(FaceId f) const { return face_areas_[f]; }
  const Vec3& face_normal(FaceId f) const { return face_normals_[f]; }
  double surface_area() const;
  /// Interior angle of face f at corner k.
  double corner_angle(FaceId f, int k) const;

  /// FNV-1a over vertex coordinate bits and face indices.
  std::uint64_t hash() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeId, 3>> face_edges_;
  std::vector<std::uint32_t> vertex_edge_offsets_;
  std::vector<EdgeId> vertex_edge_list_;
  std::vector<std::uint32_t> vertex_face_offsets_;
  std::vector<FaceId> vertex_face_list_;
  std::vector<double> face_areas_;
  std::vector<Vec3> face_normals_;
  std::size_t boundary_edge_count_ = 0;
};

/// Per-edge bending data. `angle` is the exterior angle between the two face
/// planes, in [0, pi). `convexity` is +1 convex, -1 reflex, 0 flat or boundary.
struct EdgeGeometry {
  EdgeId edge = kInvalidId;
  double length = 0.0;
  double angle = 0.0;
  int convexity = 0;
  bool boundary = false;
};

/// Throws BoundaryEdge for an edge with a single incident face.
EdgeGeometry dihedral_angle(const TriMesh& mesh, EdgeId edge);

/// Geometry for every edge; boundary edges are flagged with angle 0.
std::vector<EdgeGeometry> edge_geometries(const TriMesh& mesh);

struct VertexDefect {
  VertexId vertex = kInvalidId;
  double defect = 0.0;
  bool boundary = false;

  bool hyperbolic() const { return defect < 0.0; }
};

/// 2pi minus the incident corner angles (pi minus for boundary vertices).
/// Throws IsolatedVertex.
VertexDefect angle_defect(const TriMesh& mesh, VertexId vertex);

/// Sum of angle defects over all non-isolated vertices.
double total_angle_defect(const TriMesh& mesh);

/// True when v is an endpoint of a boundary edge.
bool is_boundary_vertex(const TriMesh& mesh, VertexId v);

}  // namespace wrapnet
