#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wrapnet/mesh.hpp"
#include "wrapnet/net.hpp"

namespace wrapnet {

enum class WeightMethod {
  SteepestEdge,
  FlatTree,
  UnflatTree,
  MinPerimeter,
  MaxPerimeter,
  Random,
  /// Fold the flattest edges first: weight = dihedral angle.
  DihedralFlatTree,
  /// Weights supplied by the genetic search.
  Evolved,
};

std::string_view to_string(WeightMethod method);
/// Accepts the CLI spellings: steepest-edge, flat-tree, unflat-tree,
/// min-perimeter, max-perimeter, random, dihedral-flat-tree, evolved.
std::optional<WeightMethod> parse_weight_method(std::string_view name);
bool needs_direction(WeightMethod method);

/// Per-edge weights, indexed by edge id.
struct EdgeWeights {
  WeightMethod method = WeightMethod::Random;
  /// Direction as requested by the caller.
  std::optional<Vec3> direction;
  /// Direction actually used (after the optional symmetry-breaking tilt).
  std::optional<Vec3> effective_direction;
  std::uint64_t seed = 0;
  std::vector<double> values;
};

/// |<c, v - w>| / |v - w|: how closely the edge (v, w) follows c.
double alignment_weight(const Vec3& v, const Vec3& w, const Vec3& c);

/// Rotates c by 1e-3 rad about a fixed axis so symmetric inputs do not land on
/// exact ties.
Vec3 tilt_direction(const Vec3& c);

/// Throws MissingDirection when the method needs c and none is given, and
/// std::invalid_argument when c is not unit length within 1e-12.
EdgeWeights compute_weights(const TriMesh& mesh, WeightMethod method, std::optional<Vec3> c, std::uint64_t seed,
                            bool tilt = false);

enum class TreeMode { MinFoldWeight, MaxFoldWeight };

/// Spanning-tree mode used for a weight method (SteepestEdge has none).
TreeMode tree_mode_for(WeightMethod method);

/// Classical steepest-edge cut: every vertex except the highest one along c
/// cuts its ascending edge of largest weight (lowest edge id on ties). Throws
/// InvalidCutSet when the mesh is open, a vertex is a local maximum, or the
/// cuts do not leave a dual spanning tree.
CutAssignment steepest_edge_cuts(const TriMesh& mesh, const EdgeWeights& weights);

/// Fold edges = minimum (or maximum) spanning tree of the dual graph with
/// each dual arc weighted by the mesh edge it crosses; ties go to the lower
/// edge id. Throws DisconnectedMesh.
CutAssignment spanning_tree_cuts(const TriMesh& mesh, const EdgeWeights& weights, TreeMode mode);
CutAssignment spanning_tree_cuts(const TriMesh& mesh, const std::vector<double>& weights, TreeMode mode);

/// Builds the assignment from an explicit fold-edge mask (indexed by edge id).
/// Throws InvalidCutSet unless the folds form a spanning tree of the dual.
CutAssignment cuts_from_folds(const TriMesh& mesh, const std::vector<bool>& is_fold);

/// Dispatches on weights.method.
CutAssignment cuts_for_weights(const TriMesh& mesh, const EdgeWeights& weights);

/// Local repair: wherever a vertex has more than 2pi of corner angle but too
/// few incident cuts (two for interior vertices, one on the boundary), a fold
/// edge at it is exchanged with a cut edge one step away so the folds stay a
/// spanning tree. Vertices that cannot be helped are left alone. `swaps`
/// receives the number of exchanges.
CutAssignment relieve_saddles(const TriMesh& mesh, const CutAssignment& cuts, int* swaps = nullptr);

/// Lays out every face by rigid unfolding along the fold tree and attaches
/// diagnostics. The root face is placed with its first vertex at the origin,
/// its first edge along +x and the face in the upper half-plane.
Net unfold_net(const TriMesh& mesh, const CutAssignment& cuts);

/// Convenience: weights, cuts and layout in one call; provenance filled in.
Net unfold(const TriMesh& mesh, WeightMethod method, std::optional<Vec3> c, std::uint64_t seed, bool tilt = false);

/// Largest relative edge-length error between each planar face and its 3D
/// original.
double max_isometry_error(const Net& net, const TriMesh& mesh);

}  // namespace wrapnet
