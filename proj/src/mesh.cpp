#include "wrapnet/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

namespace wrapnet {

namespace {

std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Counting-sort style CSR construction for vertex -> item incidence.
template <typename Fn>
void build_csr(std::size_t num_vertices, std::size_t num_items, Fn&& visit,
               std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& list) {
  offsets.assign(num_vertices + 1, 0);
  for (std::uint32_t i = 0; i < num_items; ++i)
    visit(i, [&](VertexId v) { ++offsets[v + 1]; });
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  list.assign(offsets.back(), kInvalidId);
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::uint32_t i = 0; i < num_items; ++i)
    visit(i, [&](VertexId v) { list[cursor[v]++] = i; });
}

}  // namespace

TriMesh TriMesh::build(std::vector<Vec3> vertices, std::vector<Triangle> faces) {
  TriMesh m;
  m.vertices_ = std::move(vertices);
  m.faces_ = std::move(faces);

  const auto nv = m.vertices_.size();
  for (std::size_t f = 0; f < m.faces_.size(); ++f) {
    const auto& t = m.faces_[f];
    for (VertexId v : t)
      if (v >= nv)
        throw ParseError("face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                         " but the mesh has " + std::to_string(nv) + " vertices");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw DegenerateFace("face " + std::to_string(f) + " repeats a vertex index");
  }

  m.face_areas_.resize(m.faces_.size());
  m.face_normals_.resize(m.faces_.size());
  for (std::size_t f = 0; f < m.faces_.size(); ++f) {
    const auto& t = m.faces_[f];
    const Vec3 n = (m.vertices_[t[1]] - m.vertices_[t[0]]).cross(m.vertices_[t[2]] - m.vertices_[t[0]]);
    const double area = 0.5 * n.norm();
    if (!(area > kAreaEpsilon))
      throw DegenerateFace("face " + std::to_string(f) + " has area " + std::to_string(area));
    m.face_areas_[f] = area;
    m.face_normals_[f] = n / n.norm();
  }

  // Each directed half-edge may appear once; its twin must run the other way.
  std::unordered_map<std::uint64_t, EdgeId> lookup;
  lookup.reserve(m.faces_.size() * 2);
  std::vector<std::array<VertexId, 2>> first_direction;
  m.face_edges_.resize(m.faces_.size());
  for (FaceId f = 0; f < m.faces_.size(); ++f) {
    const auto& t = m.faces_[f];
    for (int k = 0; k < 3; ++k) {
      const VertexId a = t[k];
      const VertexId b = t[(k + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<EdgeId>(m.edges_.size()));
      if (inserted) {
        Edge e;
        e.vertices = {std::min(a, b), std::max(a, b)};
        e.faces = {f, kInvalidId};
        m.edges_.push_back(e);
        first_direction.push_back({a, b});
      } else {
        Edge& e = m.edges_[it->second];
        if (e.faces[1] != kInvalidId)
          throw NonManifold("edge (" + std::to_string(e.vertices[0]) + ", " + std::to_string(e.vertices[1]) +
                            ") has three or more incident faces");
        if (first_direction[it->second][0] == a)
          throw InconsistentWinding("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") is traversed in the same direction by faces " +
                                    std::to_string(e.faces[0]) + " and " + std::to_string(f));
        e.faces[1] = f;
      }
      m.face_edges_[f][k] = it->second;
    }
  }

  m.boundary_edge_count_ = static_cast<std::size_t>(
      std::count_if(m.edges_.begin(), m.edges_.end(), [](const Edge& e) { return e.is_boundary(); }));

  build_csr(
      nv, m.edges_.size(),
      [&](std::uint32_t e, auto&& emit) {
        emit(m.edges_[e].vertices[0]);
        emit(m.edges_[e].vertices[1]);
      },
      m.vertex_edge_offsets_, m.vertex_edge_list_);
  build_csr(
      nv, m.faces_.size(),
      [&](std::uint32_t f, auto&& emit) {
        for (VertexId v : m.faces_[f]) emit(v);
      },
      m.vertex_face_offsets_, m.vertex_face_list_);
  return m;
}

std::span<const EdgeId> TriMesh::vertex_edges(VertexId v) const {
  return {vertex_edge_list_.data() + vertex_edge_offsets_[v], vertex_edge_offsets_[v + 1] - vertex_edge_offsets_[v]};
}

std::span<const FaceId> TriMesh::vertex_faces(VertexId v) const {
  return {vertex_face_list_.data() + vertex_face_offsets_[v], vertex_face_offsets_[v + 1] - vertex_face_offsets_[v]};
}

std::optional<EdgeId> TriMesh::shared_edge(FaceId a, FaceId b) const {
  for (EdgeId e : face_edges_[a])
    if (edges_[e].other_face(a) == b) return e;
  return std::nullopt;
}

int TriMesh::corner_of(FaceId f, VertexId v) const {
  for (int k = 0; k < 3; ++k)
    if (faces_[f][k] == v) return k;
  return -1;
}

long TriMesh::euler_characteristic() const {
  return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) + static_cast<long>(faces_.size());
}

std::size_t TriMesh::connected_components() const {
  std::vector<std::uint32_t> label(faces_.size(), kInvalidId);
  std::size_t count = 0;
  std::vector<FaceId> stack;
  for (FaceId s = 0; s < faces_.size(); ++s) {
    if (label[s] != kInvalidId) continue;
    label[s] = static_cast<std::uint32_t>(count);
    stack.push_back(s);
    while (!stack.empty()) {
      const FaceId f = stack.back();
      stack.pop_back();
      for (EdgeId e : face_edges_[f]) {
        const FaceId g = edges_[e].other_face(f);
        if (g != kInvalidId && label[g] == kInvalidId) {
          label[g] = static_cast<std::uint32_t>(count);
          stack.push_back(g);
        }
      }
    }
    ++count;
  }
  return count;
}

double TriMesh::edge_length(EdgeId e) const {
  return (vertices_[edges_[e].vertices[0]] - vertices_[edges_[e].vertices[1]]).norm();
}

double TriMesh::surface_area() const {
  return std::accumulate(face_areas_.begin(), face_areas_.end(), 0.0);
}

double TriMesh::corner_angle(FaceId f, int k) const {
  const auto& t = faces_[f];
  const Vec3 u = vertices_[t[(k + 1) % 3]] - vertices_[t[k]];
  const Vec3 w = vertices_[t[(k + 2) % 3]] - vertices_[t[k]];
  return std::atan2(u.cross(w).norm(), u.dot(w));
}

std::uint64_t TriMesh::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(vertices_.size());
  for (const auto& p : vertices_)
    for (int i = 0; i < 3; ++i) mix(std::bit_cast<std::uint64_t>(p[i]));
  mix(faces_.size());
  for (const auto& t : faces_)
    for (VertexId v : t) mix(v);
  return h;
}

EdgeGeometry dihedral_angle(const TriMesh& mesh, EdgeId edge) {
  const Edge& e = mesh.edge(edge);
  if (e.is_boundary()) throw BoundaryEdge("edge " + std::to_string(edge) + " is a boundary edge");

  const Vec3& n0 = mesh.face_normal(e.faces[0]);
  const Vec3& n1 = mesh.face_normal(e.faces[1]);
  EdgeGeometry g;
  g.edge = edge;
  g.length = mesh.edge_length(edge);
  g.angle = std::atan2(n0.cross(n1).norm(), n0.dot(n1));
  if (g.angle < kAngleEpsilon) {
    g.angle = 0.0;
    g.convexity = 0;
    return g;
  }

  // Convex when the far vertex of face 1 lies below the plane of face 0.
  const auto& t1 = mesh.face(e.faces[1]);
  VertexId far = t1[0];
  for (VertexId v : t1)
    if (v != e.vertices[0] && v != e.vertices[1]) far = v;
  const double side = n0.dot(mesh.vertex(far) - mesh.vertex(e.vertices[0]));
  g.convexity = side < 0.0 ? 1 : -1;
  return g;
}

std::vector<EdgeGeometry> edge_geometries(const TriMesh& mesh) {
  std::vector<EdgeGeometry> out(mesh.num_edges());
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).is_boundary()) {
      out[e].edge = e;
      out[e].length = mesh.edge_length(e);
      out[e].boundary = true;
    } else {
      out[e] = dihedral_angle(mesh, e);
    }
  }
  return out;
}

bool is_boundary_vertex(const TriMesh& mesh, VertexId v) {
  for (EdgeId e : mesh.vertex_edges(v))
    if (mesh.edge(e).is_boundary()) return true;
  return false;
}

VertexDefect angle_defect(const TriMesh& mesh, VertexId vertex) {
  const auto faces = mesh.vertex_faces(vertex);
  if (faces.empty()) throw IsolatedVertex("vertex " + std::to_string(vertex) + " has no incident face");
  double sum = 0.0;
  for (FaceId f : faces) sum += mesh.corner_angle(f, mesh.corner_of(f, vertex));
  VertexDefect d;
  d.vertex = vertex;
  d.boundary = is_boundary_vertex(mesh, vertex);
  d.defect = (d.boundary ? kPi : kTwoPi) - sum;
  return d;
}

double total_angle_defect(const TriMesh& mesh) {
  double total = 0.0;
  for (VertexId v = 0; v < mesh.num_vertices(); ++v)
    if (!mesh.vertex_faces(v).empty()) total += angle_defect(mesh, v).defect;
  return total;
}

}  // namespace wrapnet
