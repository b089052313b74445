#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "wrapnet/errors.hpp"
#include "wrapnet/evolve.hpp"
#include "wrapnet/mesh.hpp"
#include "wrapnet/net.hpp"

namespace wrapnet {

/// Faces of a parent mesh re-indexed as a standalone mesh. Local face i is
/// parent face `faces[i]`; local vertex j is parent vertex `vertices[j]`;
/// local edge k is parent edge `edges[k]`.
struct SubMesh {
  TriMesh mesh;
  std::vector<FaceId> faces;       // ascending
  std::vector<VertexId> vertices;  // first appearance
  std::vector<EdgeId> edges;
};

SubMesh extract_submesh(const TriMesh& mesh, const std::vector<FaceId>& faces);

struct Patch {
  std::vector<FaceId> faces;  // parent face ids, ascending
  SubMesh submesh;
  Net net;
  std::uint64_t seed = 0;
  int generations = 0;
};

struct PatchDecomposition {
  std::vector<Patch> patches;
  /// Parent face id -> patch index.
  std::vector<std::uint32_t> coverage;
  /// Every patch net is valid.
  bool complete = false;
};

/// Raised when a component is still invalid and no split fits the budget.
/// Carries the decomposition reached so far (failing components included
/// with their best nets).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, PatchDecomposition partial)
      : Error(what), partial_(std::move(partial)) {}
  const PatchDecomposition& partial() const { return partial_; }

 private:
  PatchDecomposition partial_;
};

enum class SplitRule {
  /// Remove the fold edge of the failed net that separates the most
  /// overlapping pairs; ties go to the more even split.
  FoldTree,
  /// Grow two regions (in dual-graph hops) from the overlap hot spot and
  /// from the face farthest from it.
  HotSpot,
};

std::string_view to_string(SplitRule rule);
/// Accepts fold-tree, hot-spot.
std::optional<SplitRule> parse_split_rule(std::string_view name);

struct SegmentOptions {
  int patch_budget = 20;
  SplitRule rule = SplitRule::FoldTree;
  /// Start each half's search from the parent's best weights.
  bool warm_start = true;
  /// Join valid neighbouring patches across a single hinge when the joined
  /// layout stays valid (before giving up on the budget, and at the end).
  bool merge = true;
};

/// Face taking part in the most overlapping pairs of `failed` (lowest id on
/// ties); falls back to a face at a hyperbolic vertex, then face 0.
FaceId overlap_hot_spot(const TriMesh& mesh, const Net& failed);

/// Two edge-connected halves: faces no farther (in dual-graph hops) from
/// `seed` than from the face farthest from it, and the rest.
std::pair<std::vector<FaceId>, std::vector<FaceId>> split_faces(const TriMesh& mesh, FaceId seed);

/// Two fold-connected halves of `failed` separated by a single fold edge,
/// chosen to separate as many overlapping pairs as possible. Returns nothing
/// when the net has no overlapping pairs.
std::optional<std::pair<std::vector<FaceId>, std::vector<FaceId>>> split_fold_tree(const Net& failed);

/// Repeatedly joins two valid patches that share an edge when hinging them
/// there gives a valid net; smallest patches are tried first. Returns the
/// number of joins.
std::size_t merge_patches(const TriMesh& mesh, std::vector<Patch>& patches);

/// Evolves the whole mesh and recursively bisects components whose search
/// fails. The child seeds are parent seed + child index + 1.
PatchDecomposition segment_and_unfold(const TriMesh& mesh, const FitnessParams& params, const GAConfig& config,
                                      const SegmentOptions& options = {});

}  // namespace wrapnet
