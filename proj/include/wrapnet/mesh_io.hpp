#pragma once

#include <filesystem>
#include <iosfwd>

#include "wrapnet/mesh.hpp"

namespace wrapnet {

enum class MeshFormat { Obj, Off };

struct LoadOptions {
  /// Center the mesh and scale its largest bounding-box extent to 1.
  bool normalize_to_unit_box = false;
};

/// Guesses the format from the file extension (.obj / .off, case-insensitive).
MeshFormat format_from_path(const std::filesystem::path& path);

/// Loads a triangle mesh. Throws IOError when the file cannot be opened,
/// ParseError for malformed records, NonTriangleFace for polygons with other
/// than three corners, plus the TriMesh::build validation errors.
TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format, const LoadOptions& options = {});
TriMesh load_mesh(const std::filesystem::path& path);

TriMesh read_obj(std::istream& in, const LoadOptions& options = {});
TriMesh read_off(std::istream& in, const LoadOptions& options = {});

/// Writes `v` and `f` records with round-trip exact coordinates.
void write_obj(const TriMesh& mesh, std::ostream& out);
void write_obj(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace wrapnet
