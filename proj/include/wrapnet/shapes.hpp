#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "wrapnet/mesh.hpp"

namespace wrapnet {

enum class SphereMode {
  /// Vertices on the sphere.
  Inscribed,
  /// Scaled so the innermost face plane touches the sphere; the polyhedron
  /// encloses it and no face plane is closer than r.
  Circumscribed,
};

std::string_view to_string(SphereMode mode);
std::optional<SphereMode> parse_sphere_mode(std::string_view name);

struct SphereSpec {
  int facets = 80;
  double radius = 1.0;
  SphereMode mode = SphereMode::Circumscribed;
};

/// Closed triangulated sphere with the facet count nearest `spec.facets`.
///
/// Counts of the form 20 n^2 come straight from frequency-n subdivision of
/// the icosahedron (80 = n 2, 500 = n 5). Other even counts start from the
/// next larger geodesic sphere and collapse the shortest edges two faces at a
/// time, followed by spherical Laplacian relaxation. Odd targets round up.
/// `seed` only picks among equal-length collapse candidates.
/// Throws std::invalid_argument when facets < 4.
TriMesh generate_sphere(const SphereSpec& spec, std::uint64_t seed = 0);

/// Frequency-n geodesic sphere, vertices on the unit sphere. F = 20 n^2.
TriMesh geodesic_sphere(int frequency);

/// 100 (A - 4 pi r^2) / (4 pi r^2).
double area_excess(const TriMesh& mesh, double radius);

/// Smallest distance from the origin to any face plane.
double min_face_plane_distance(const TriMesh& mesh);

TriMesh icosahedron();
/// Regular tetrahedron with unit circumradius.
TriMesh tetrahedron();
/// Unit cube [0, 1]^3, two triangles per side.
TriMesh unit_cube();
/// Icosahedron with vertex 0 pulled in to `depth` times its radius, which
/// leaves a reflex cone at that vertex.
TriMesh dented_icosahedron(double depth = 0.15);
/// Two unit spherical lobes joined by a thin cylindrical neck.
TriMesh dumbbell(int segments = 16, double neck_radius = 0.35);
/// Non-convex figure of revolution (head, neck, shoulders, body, base) with
/// angular bumps; about 2 * segments * rings faces.
TriMesh figure(int segments = 32, int rings = 36);
/// Flat n x n grid in the z = 0 plane (open, 2 n^2 faces).
TriMesh flat_grid(int n, double size = 1.0);
/// Saddle z = k (x^2 - y^2) sampled on an n x n grid over [-1, 1]^2.
TriMesh saddle_grid(int n, double k = 0.5);

}  // namespace wrapnet
