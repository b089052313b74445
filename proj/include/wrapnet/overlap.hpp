#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wrapnet/mesh.hpp"
#include "wrapnet/net.hpp"

namespace wrapnet {

/// Unordered face pairs (first < second) whose planar interiors overlap.
/// Pairs hinged on a fold edge are exempt. Broad phase is an x-sweep over
/// bounding boxes; the narrow phase uses exact orientation tests. Pairs come
/// out sorted.
std::vector<std::pair<FaceId, FaceId>> overlapping_pairs(const Net& net);

/// delta0: number of overlapping face pairs.
int count_overlaps(const Net& net);

/// Vertices that own a fold-connected fan of faces whose planar corner
/// angles add up to more than 2pi + kAngleEpsilon. Such a fan necessarily
/// overlaps itself around the vertex.
std::vector<VertexId> hyperbolic_vertices(const Net& net, const TriMesh& mesh);

/// delta1.
int count_hyperbolic(const Net& net, const TriMesh& mesh);

struct CutAngleTotals {
  double cut_sum = 0.0;
  double fold_sum = 0.0;
  double max_fold = 0.0;
  double mean_fold = 0.0;
};

/// Sum of dihedral angles over interior cut edges, plus fold-edge totals.
CutAngleTotals total_cut_angle(const Net& net, const TriMesh& mesh);

/// Sum of dihedral angles over the interior edges listed in `cut_edges`.
double cut_angle_sum(const TriMesh& mesh, const std::vector<EdgeId>& cut_edges);

/// All diagnostics in one pass.
NetDiagnostics diagnose(const Net& net, const TriMesh& mesh);

/// Single-line key=value record.
std::string to_record(const NetDiagnostics& d);

}  // namespace wrapnet
