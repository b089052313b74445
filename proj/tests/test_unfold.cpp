#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "checks.hpp"
#include "nets.hpp"
#include "oracles.hpp"
#include "wrapnet/overlap.hpp"
#include "wrapnet/rng.hpp"
#include "wrapnet/shapes.hpp"
#include "wrapnet/unfold.hpp"

using namespace wrapnet;

namespace {

Vec3 random_unit(Rng& rng) {
  Vec3 c(rng.normal(), rng.normal(), rng.normal());
  return c.normalized();
}

std::vector<bool> fold_mask(const TriMesh& m, const std::vector<EdgeId>& folds) {
  std::vector<bool> mask(m.num_edges(), false);
  for (EdgeId e : folds) mask[e] = true;
  return mask;
}

}  // namespace

TEST(Weights, AlignmentExamples) {
  const Vec3 o(0, 0, 0), c(0, 0, 1);
  EXPECT_DOUBLE_EQ(alignment_weight(o, {0, 0, 1}, c), 1.0);
  EXPECT_DOUBLE_EQ(alignment_weight(o, {1, 0, 0}, c), 0.0);
  EXPECT_NEAR(alignment_weight(o, {1, 0, 1}, c), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Weights, DirectionChecks) {
  const TriMesh m = icosahedron();
  EXPECT_THROW(compute_weights(m, WeightMethod::SteepestEdge, std::nullopt, 1), MissingDirection);
  EXPECT_THROW(compute_weights(m, WeightMethod::FlatTree, Vec3(0, 0, 2), 1), std::invalid_argument);
  EXPECT_NO_THROW(compute_weights(m, WeightMethod::Random, std::nullopt, 1));
}

TEST(Weights, UnflatIsComplementOfNormalizedFlat) {
  const TriMesh m = geodesic_sphere(3);
  Rng rng(5);
  const Vec3 c = random_unit(rng);
  const auto flat = compute_weights(m, WeightMethod::FlatTree, c, 0).values;
  const auto unflat = compute_weights(m, WeightMethod::UnflatTree, c, 0).values;
  const double lo = *std::min_element(flat.begin(), flat.end());
  const double hi = *std::max_element(flat.begin(), flat.end());
  for (std::size_t e = 0; e < flat.size(); ++e) EXPECT_NEAR(unflat[e], 1.0 - (flat[e] - lo) / (hi - lo), 1e-15);
}

TEST(Weights, MethodNamesRoundTrip) {
  for (auto m : {WeightMethod::SteepestEdge, WeightMethod::FlatTree, WeightMethod::UnflatTree, WeightMethod::MinPerimeter,
                 WeightMethod::MaxPerimeter, WeightMethod::Random, WeightMethod::DihedralFlatTree, WeightMethod::Evolved})
    EXPECT_EQ(parse_weight_method(to_string(m)), m);
  EXPECT_FALSE(parse_weight_method("nope"));
}

TEST(SteepestEdge, CubeWithTilt) {
  const TriMesh m = unit_cube();
  const auto w = compute_weights(m, WeightMethod::SteepestEdge, Vec3(0, 0, 1), 0, true);
  const auto cuts = steepest_edge_cuts(m, w);
  EXPECT_EQ(cuts.cut_edges.size(), 7u);
  EXPECT_EQ(cuts.fold_edges.size(), 11u);
}

TEST(SteepestEdge, TetrahedronGenericDirection) {
  const TriMesh m = tetrahedron();
  Rng rng(11);
  for (int i = 0; i < 5; ++i) {
    const auto cuts = steepest_edge_cuts(m, compute_weights(m, WeightMethod::SteepestEdge, random_unit(rng), 0));
    EXPECT_EQ(cuts.cut_edges.size(), 3u);
    EXPECT_EQ(cuts.fold_edges.size(), 3u);
  }
}

TEST(SteepestEdge, CutsTouchEveryVertexOnClosedMeshes) {
  Rng rng(3);
  for (const TriMesh& m : {icosahedron(), geodesic_sphere(2), dented_icosahedron()}) {
    const auto cuts = steepest_edge_cuts(m, compute_weights(m, WeightMethod::SteepestEdge, random_unit(rng), 0));
    std::vector<bool> touched(m.num_vertices(), false);
    for (EdgeId e : cuts.cut_edges) touched[m.edge(e).vertices[0]] = touched[m.edge(e).vertices[1]] = true;
    EXPECT_TRUE(std::all_of(touched.begin(), touched.end(), [](bool b) { return b; }));
  }
}

TEST(SteepestEdge, OpenMeshRejected) {
  const TriMesh m = flat_grid(3);
  EXPECT_THROW(steepest_edge_cuts(m, compute_weights(m, WeightMethod::SteepestEdge, Vec3(0, 0, 1), 0)), InvalidCutSet);
}

TEST(SteepestEdge, ConvexSpheresUnfoldWithFewDirections) {
  for (const TriMesh& m : {icosahedron(), geodesic_sphere(2), geodesic_sphere(5)}) {
    Rng rng(2024);
    bool found = false;
    for (int i = 0; i < 10 && !found; ++i) {
      const Net net = unfold(m, WeightMethod::SteepestEdge, random_unit(rng), 0);
      expect_net_sound(net, m);
      found = net.diagnostics.valid();
    }
    EXPECT_TRUE(found);
  }
}

TEST(SpanningTree, TetrahedronUniformWeights) {
  const TriMesh m = tetrahedron();
  const auto cuts = spanning_tree_cuts(m, std::vector<double>(m.num_edges(), 1.0), TreeMode::MinFoldWeight);
  EXPECT_EQ(cuts.fold_edges.size(), 3u);
  EXPECT_EQ(cuts.cut_edges.size(), 3u);
  // Ties go to the lowest edge ids.
  EXPECT_EQ(cuts.fold_edges, (std::vector<EdgeId>{0, 1, 2}));
}

TEST(SpanningTree, PartitionAndBoundary) {
  const TriMesh m = saddle_grid(6);
  const auto cuts = spanning_tree_cuts(m, compute_weights(m, WeightMethod::Random, std::nullopt, 4), TreeMode::MinFoldWeight);
  std::set<EdgeId> all(cuts.cut_edges.begin(), cuts.cut_edges.end());
  for (EdgeId e : cuts.fold_edges) {
    EXPECT_FALSE(m.edge(e).is_boundary());
    EXPECT_TRUE(all.insert(e).second);
  }
  EXPECT_EQ(all.size(), m.num_edges());
  EXPECT_EQ(cuts.fold_edges.size() + 1, m.num_faces());
}

TEST(SpanningTree, CubeMinPerimeterIsOptimal) {
  const TriMesh m = unit_cube();
  const auto trees = oracle::enumerate_spanning_trees(m);
  EXPECT_EQ(std::to_string(trees.size()), oracle::matrix_tree_count(m));
  double best = 1e300;
  for (const auto& folds : trees) {
    std::set<EdgeId> f(folds.begin(), folds.end());
    double cut = 0.0;
    for (EdgeId e = 0; e < m.num_edges(); ++e)
      if (!f.count(e)) cut += m.edge_length(e);
    best = std::min(best, cut);
  }
  const Net net = unfold(m, WeightMethod::MinPerimeter, std::nullopt, 0);
  double cut = 0.0;
  for (EdgeId e : net.tree.cut_edges) cut += m.edge_length(e);
  EXPECT_NEAR(cut, best, 1e-12);
  EXPECT_NEAR(oracle::cut_edge_length(net, m), best, 1e-12);
}

TEST(SpanningTree, ScaleInvariance) {
  const TriMesh m = geodesic_sphere(3);
  const auto w = compute_weights(m, WeightMethod::Random, std::nullopt, 9).values;
  for (double k : {0.001, 3.0, 1e6}) {
    std::vector<double> s = w;
    for (double& x : s) x *= k;
    for (TreeMode mode : {TreeMode::MinFoldWeight, TreeMode::MaxFoldWeight})
      EXPECT_EQ(spanning_tree_cuts(m, s, mode).fold_edges, spanning_tree_cuts(m, w, mode).fold_edges);
  }
}

TEST(SpanningTree, DisconnectedMesh) {
  const TriMesh m = TriMesh::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}}, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_THROW(spanning_tree_cuts(m, std::vector<double>(m.num_edges(), 0.0), TreeMode::MinFoldWeight),
               DisconnectedMesh);
}

TEST(CutsFromFolds, RejectsNonTrees) {
  const TriMesh m = tetrahedron();
  EXPECT_THROW(cuts_from_folds(m, std::vector<bool>(m.num_edges(), true)), InvalidCutSet);
  EXPECT_THROW(cuts_from_folds(m, std::vector<bool>(m.num_edges(), false)), InvalidCutSet);
}

TEST(CutsFromFolds, RootHasMostCuts) {
  const TriMesh m = geodesic_sphere(2);
  const auto cuts = spanning_tree_cuts(m, compute_weights(m, WeightMethod::Random, std::nullopt, 1), TreeMode::MinFoldWeight);
  auto cut_count = [&](FaceId f) {
    int n = 0;
    for (EdgeId e : m.face_edges(f)) n += cuts.is_fold(e) ? 0 : 1;
    return n;
  };
  for (FaceId f = 0; f < m.num_faces(); ++f) {
    EXPECT_LE(cut_count(f), cut_count(cuts.root));
    if (cut_count(f) == cut_count(cuts.root)) EXPECT_GE(f, cuts.root);
  }
}

TEST(UnfoldNet, SingleTriangle) {
  const TriMesh m = TriMesh::build({{0, 0, 0}, {2, 0, 0}, {0, 1, 1}}, {{0, 1, 2}});
  const Net net = unfold_net(m, cuts_from_folds(m, {false, false, false}));
  EXPECT_EQ(net.diagnostics.overlaps, 0);
  EXPECT_EQ(net.diagnostics.hyperbolic, 0);
  EXPECT_EQ(net.diagnostics.cut_angle_sum, 0.0);
  EXPECT_EQ(net.diagnostics.fold_angle_sum, 0.0);
  expect_net_sound(net, m);
}

TEST(UnfoldNet, RootPlacementGauge) {
  const TriMesh m = icosahedron();
  const Net net = unfold(m, WeightMethod::Random, std::nullopt, 3);
  const auto& root = net.faces[net.tree.root];
  EXPECT_EQ(root.corners[0], Vec2(0, 0));
  EXPECT_EQ(root.corners[1].y(), 0.0);
  EXPECT_GT(root.corners[1].x(), 0.0);
  EXPECT_GT(root.corners[2].y(), 0.0);
}

TEST(UnfoldNet, CubeCross) {
  const TriMesh m = unit_cube();
  const Net net = cube_cross_net(m);
  EXPECT_NEAR(net.planar_area(), 6.0, 1e-12);
  EXPECT_EQ(net.diagnostics.overlaps, 0);
  EXPECT_EQ(net.boundary.size(), 1u);
  const auto [lo, hi] = net.bounds();
  const double w = hi.x() - lo.x(), h = hi.y() - lo.y();
  EXPECT_NEAR(std::max(w, h), 4.0, 1e-12);
  EXPECT_NEAR(std::min(w, h), 3.0, 1e-12);
  expect_net_sound(net, m);
}

TEST(UnfoldNet, HingedFacesShareTheirEdge) {
  const TriMesh m = generate_sphere({100});
  const Net net = unfold(m, WeightMethod::Random, std::nullopt, 8);
  for (FaceId f = 0; f < m.num_faces(); ++f) {
    const auto link = net.tree.parent[f];
    if (link.parent == kInvalidId) continue;
    for (VertexId v : m.edge(link.edge).vertices) {
      const auto& a = net.faces[f];
      const auto& b = net.faces[link.parent];
      const Vec2 pa = a.corners[std::find(a.vertices.begin(), a.vertices.end(), v) - a.vertices.begin()];
      const Vec2 pb = b.corners[std::find(b.vertices.begin(), b.vertices.end(), v) - b.vertices.begin()];
      EXPECT_LE((pa - pb).norm(), 1e-9);
    }
  }
}

TEST(Tetrahedron, AllSixteenTreesUnfoldCleanly) {
  const TriMesh m = tetrahedron();
  const auto trees = oracle::enumerate_spanning_trees(m);
  ASSERT_EQ(trees.size(), 16u);
  EXPECT_EQ(oracle::matrix_tree_count(m), "16");
  for (const auto& folds : trees) {
    const Net net = unfold_net(m, cuts_from_folds(m, fold_mask(m, folds)));
    EXPECT_EQ(net.diagnostics.overlaps, 0);
    EXPECT_EQ(oracle::brute_force_overlaps(net).size(), 0u);
    expect_net_sound(net, m);
  }
}

TEST(Property, IsometryOverRandomMeshesAndTrees) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const TriMesh m = oracle::random_mesh(rng, 300);
    const auto w = compute_weights(m, WeightMethod::Random, std::nullopt, rng.next());
    const Net net = unfold_net(m, spanning_tree_cuts(m, w, TreeMode::MinFoldWeight));
    expect_net_sound(net, m);
    EXPECT_LE(max_isometry_error(net, m), 1e-9);
  }
}

TEST(Property, EveryMethodOnSphere) {
  const TriMesh m = geodesic_sphere(4);
  for (auto method : {WeightMethod::SteepestEdge, WeightMethod::FlatTree, WeightMethod::UnflatTree,
                      WeightMethod::MinPerimeter, WeightMethod::MaxPerimeter, WeightMethod::Random,
                      WeightMethod::DihedralFlatTree}) {
    const Net net = unfold(m, method, Vec3(0.48, 0.6, 0.64), 5, true);
    expect_net_sound(net, m);
    EXPECT_EQ(net.provenance.method, to_string(method));
    EXPECT_EQ(net.provenance.mesh_hash, m.hash());
  }
}

TEST(Property, Determinism) {
  const TriMesh m = generate_sphere({180});
  const Vec3 c = Vec3(1, 2, 2).normalized();
  for (auto method : {WeightMethod::SteepestEdge, WeightMethod::FlatTree, WeightMethod::Random}) {
    const Net a = unfold(m, method, c, 42);
    const Net b = unfold(m, method, c, 42);
    EXPECT_EQ(a.tree.fold_edges, b.tree.fold_edges);
    ASSERT_EQ(a.faces.size(), b.faces.size());
    for (std::size_t f = 0; f < a.faces.size(); ++f)
      for (int k = 0; k < 3; ++k) EXPECT_EQ(a.faces[f].corners[k], b.faces[f].corners[k]);
  }
}

TEST(Property, BoundaryLoopsAreClosedAndCoverCuts) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const TriMesh m = oracle::random_mesh(rng, 200);
    const Net net = unfold(m, WeightMethod::Random, std::nullopt, rng.next());
    for (const auto& loop : net.boundary) {
      ASSERT_GE(loop.size(), 4u);
      EXPECT_EQ(loop.front(), loop.back());
    }
    // Interior cuts appear twice on the outline, boundary edges once.
    double expect = 0.0;
    for (EdgeId e : net.tree.cut_edges) expect += (m.edge(e).is_boundary() ? 1.0 : 2.0) * m.edge_length(e);
    EXPECT_NEAR(net.boundary_length(), expect, 1e-9 * expect);
  }
}

TEST(RelieveSaddles, KeepsTreeAndAddsCuts) {
  const TriMesh m = dumbbell();
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto before = spanning_tree_cuts(m, compute_weights(m, WeightMethod::Random, std::nullopt, seed),
                                           TreeMode::MinFoldWeight);
    int swaps = 0;
    const auto after = relieve_saddles(m, before, &swaps);
    EXPECT_EQ(after.fold_edges.size() + 1, m.num_faces());
    const Net a = unfold_net(m, before), b = unfold_net(m, after);
    expect_net_sound(b, m);
    EXPECT_LE(b.diagnostics.hyperbolic, a.diagnostics.hyperbolic);
    improved += b.diagnostics.hyperbolic < a.diagnostics.hyperbolic ? 1 : 0;
    if (swaps == 0) EXPECT_EQ(after.fold_edges, before.fold_edges);
  }
  EXPECT_GT(improved, 0);
}

TEST(RelieveSaddles, NoSaddlesNoChange) {
  const TriMesh m = geodesic_sphere(3);
  const auto before = spanning_tree_cuts(m, compute_weights(m, WeightMethod::Random, std::nullopt, 2), TreeMode::MinFoldWeight);
  int swaps = -1;
  const auto after = relieve_saddles(m, before, &swaps);
  EXPECT_EQ(swaps, 0);
  EXPECT_EQ(after.fold_edges, before.fold_edges);
}
