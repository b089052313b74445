#pragma once

// Independent reference computations used to check the library. Nothing in
// here calls the code paths it is meant to verify.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wrapnet/mesh.hpp"
#include "wrapnet/net.hpp"
#include "wrapnet/rng.hpp"

namespace oracle {

using wrapnet::EdgeId;
using wrapnet::FaceId;
using wrapnet::Net;
using wrapnet::TriMesh;
using wrapnet::Vec2;
using wrapnet::VertexId;

/// Interiors of two triangles intersect, decided by clipping one against the
/// other in exact rational arithmetic and testing the clipped area.
bool rational_overlap(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b);

/// All overlapping face pairs by brute force over every pair (no exemptions).
std::vector<std::pair<FaceId, FaceId>> brute_force_overlaps(const Net& net);

/// Vertices with a fold-connected fan whose 3D corner angles (from dot
/// products) add up to more than 2pi + 1e-9. Fans are grown by walking
/// around the vertex across fold edges.
std::vector<VertexId> fan_hyperbolic(const Net& net, const TriMesh& mesh);

/// Every fold-edge set that is a spanning tree of the dual graph, by testing
/// each (F-1)-subset of interior edges. Only for tiny meshes.
std::vector<std::vector<EdgeId>> enumerate_spanning_trees(const TriMesh& mesh);

/// Number of dual spanning trees by Kirchhoff's theorem, exact.
std::string matrix_tree_count(const TriMesh& mesh);

/// Sum of 3D lengths of the interior cut edges of `net` (edges not folded).
double cut_edge_length(const Net& net, const TriMesh& mesh);

/// Sum of triangle areas from cross products, in long double.
long double surface_area(const TriMesh& mesh);

/// Largest relative error over all face edges between planar and 3D length.
double isometry_error(const Net& net, const TriMesh& mesh);

/// Sum of |planar triangle area|.
double planar_area(const Net& net);

/// Sphere-like closed mesh with random face count in [20, max_faces] and
/// random radial noise, or an open saddle grid; varied enough that random
/// trees give both valid and overlapping nets.
TriMesh random_mesh(wrapnet::Rng& rng, int max_faces);

/// 2pi - sum of corner angles (acos form), summed over all vertices; boundary
/// vertices use pi.
double gauss_bonnet_total(const TriMesh& mesh);

}  // namespace oracle
