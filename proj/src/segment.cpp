#include "wrapnet/segment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>

#include "wrapnet/overlap.hpp"

namespace wrapnet {

std::string_view to_string(SplitRule rule) { return rule == SplitRule::FoldTree ? "fold-tree" : "hot-spot"; }

std::optional<SplitRule> parse_split_rule(std::string_view name) {
  if (name == "fold-tree") return SplitRule::FoldTree;
  if (name == "hot-spot") return SplitRule::HotSpot;
  return std::nullopt;
}

SubMesh extract_submesh(const TriMesh& mesh, const std::vector<FaceId>& faces) {
  SubMesh sub;
  sub.faces = faces;
  std::sort(sub.faces.begin(), sub.faces.end());
  sub.faces.erase(std::unique(sub.faces.begin(), sub.faces.end()), sub.faces.end());

  std::vector<VertexId> local(mesh.num_vertices(), kInvalidId);
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  triangles.reserve(sub.faces.size());
  for (FaceId f : sub.faces) {
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      const VertexId v = mesh.face(f)[k];
      if (local[v] == kInvalidId) {
        local[v] = static_cast<VertexId>(sub.vertices.size());
        sub.vertices.push_back(v);
        vertices.push_back(mesh.vertex(v));
      }
      t[k] = local[v];
    }
    triangles.push_back(t);
  }
  sub.mesh = TriMesh::build(std::move(vertices), std::move(triangles));

  // Corner order is kept, so edge k of a local face is edge k of its parent.
  sub.edges.assign(sub.mesh.num_edges(), kInvalidId);
  for (FaceId f = 0; f < sub.mesh.num_faces(); ++f)
    for (int k = 0; k < 3; ++k) sub.edges[sub.mesh.face_edges(f)[k]] = mesh.face_edges(sub.faces[f])[k];
  return sub;
}

FaceId overlap_hot_spot(const TriMesh& mesh, const Net& failed) {
  std::vector<int> hits(mesh.num_faces(), 0);
  for (const auto& [a, b] : overlapping_pairs(failed)) {
    ++hits[a];
    ++hits[b];
  }
  const auto top = std::max_element(hits.begin(), hits.end());
  if (top != hits.end() && *top > 0) return static_cast<FaceId>(top - hits.begin());
  const auto hyper = hyperbolic_vertices(failed, mesh);
  if (!hyper.empty()) return mesh.vertex_faces(hyper.front()).front();
  return 0;
}

namespace {

std::vector<int> hops_from(const TriMesh& mesh, FaceId seed) {
  std::vector<int> dist(mesh.num_faces(), std::numeric_limits<int>::max());
  std::deque<FaceId> queue{seed};
  dist[seed] = 0;
  while (!queue.empty()) {
    const FaceId f = queue.front();
    queue.pop_front();
    for (EdgeId e : mesh.face_edges(f)) {
      const auto& edge = mesh.edge(e);
      if (edge.is_boundary()) continue;
      const FaceId g = edge.other_face(f);
      if (dist[g] != std::numeric_limits<int>::max()) continue;
      dist[g] = dist[f] + 1;
      queue.push_back(g);
    }
  }
  return dist;
}

}  // namespace

std::pair<std::vector<FaceId>, std::vector<FaceId>> split_faces(const TriMesh& mesh, FaceId seed) {
  const auto from_seed = hops_from(mesh, seed);
  FaceId far = seed;
  for (FaceId f = 0; f < mesh.num_faces(); ++f)
    if (from_seed[f] != std::numeric_limits<int>::max() && from_seed[f] > from_seed[far]) far = f;
  const auto from_far = hops_from(mesh, far);

  std::pair<std::vector<FaceId>, std::vector<FaceId>> halves;
  for (FaceId f = 0; f < mesh.num_faces(); ++f)
    (from_seed[f] <= from_far[f] ? halves.first : halves.second).push_back(f);
  return halves;
}

std::optional<std::pair<std::vector<FaceId>, std::vector<FaceId>>> split_fold_tree(const Net& failed) {
  const auto pairs = overlapping_pairs(failed);
  if (pairs.empty()) return std::nullopt;

  const auto& tree = failed.tree;
  const auto nf = tree.order.size();
  std::vector<int> depth(tree.parent.size(), 0);
  for (FaceId f : tree.order)
    if (tree.parent[f].parent != kInvalidId) depth[f] = depth[tree.parent[f].parent] + 1;

  // crossing[f] = number of pairs whose tree path uses the edge above f.
  std::vector<long> crossing(tree.parent.size(), 0);
  for (auto [a, b] : pairs) {
    ++crossing[a];
    ++crossing[b];
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      a = tree.parent[a].parent;
    }
    crossing[a] -= 2;
  }
  std::vector<std::size_t> size(tree.parent.size(), 1);
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const FaceId p = tree.parent[*it].parent;
    if (p == kInvalidId) continue;
    crossing[p] += crossing[*it];
    size[p] += size[*it];
  }

  FaceId best = kInvalidId;
  for (FaceId f : tree.order) {
    if (tree.parent[f].parent == kInvalidId) continue;
    if (best == kInvalidId || crossing[f] > crossing[best]) {
      best = f;
      continue;
    }
    const auto imbalance = [&](FaceId g) { return std::llabs(2 * static_cast<long long>(size[g]) - static_cast<long long>(nf)); };
    if (crossing[f] == crossing[best] && (imbalance(f) < imbalance(best) || (imbalance(f) == imbalance(best) && f < best)))
      best = f;
  }

  std::vector<bool> below(tree.parent.size(), false);
  below[best] = true;
  for (FaceId f : tree.order)
    if (tree.parent[f].parent != kInvalidId && below[tree.parent[f].parent]) below[f] = true;
  std::pair<std::vector<FaceId>, std::vector<FaceId>> halves;
  for (FaceId f = 0; f < tree.parent.size(); ++f) (below[f] ? halves.second : halves.first).push_back(f);
  return halves;
}

std::size_t merge_patches(const TriMesh& mesh, std::vector<Patch>& patches) {
  std::size_t merges = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::uint32_t> owner(mesh.num_faces(), kInvalidId);
    for (std::size_t i = 0; i < patches.size(); ++i)
      for (FaceId f : patches[i].faces) owner[f] = static_cast<std::uint32_t>(i);

    std::vector<std::size_t> by_size(patches.size());
    for (std::size_t i = 0; i < by_size.size(); ++i) by_size[i] = i;
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::size_t a, std::size_t b) { return patches[a].faces.size() < patches[b].faces.size(); });

    for (std::size_t i : by_size) {
      if (!patches[i].net.diagnostics.valid()) continue;
      // Hinge candidates towards every valid neighbour, smallest neighbour first.
      std::vector<std::pair<std::uint32_t, EdgeId>> hinges;
      for (FaceId f : patches[i].faces)
        for (EdgeId e : mesh.face_edges(f)) {
          const auto& edge = mesh.edge(e);
          if (edge.is_boundary()) continue;
          const std::uint32_t j = owner[edge.other_face(f)];
          if (j != i && j != kInvalidId && patches[j].net.diagnostics.valid()) hinges.emplace_back(j, e);
        }
      std::sort(hinges.begin(), hinges.end(), [&](const auto& a, const auto& b) {
        const auto sa = patches[a.first].faces.size(), sb = patches[b.first].faces.size();
        return sa < sb || (sa == sb && a < b);
      });
      hinges.erase(std::unique(hinges.begin(), hinges.end()), hinges.end());

      for (const auto& [j, hinge] : hinges) {
        std::vector<FaceId> faces = patches[i].faces;
        faces.insert(faces.end(), patches[j].faces.begin(), patches[j].faces.end());
        SubMesh joined = extract_submesh(mesh, faces);

        std::vector<bool> parent_fold(mesh.num_edges(), false);
        for (const Patch* p : {&patches[i], &patches[j]})
          for (EdgeId e : p->net.tree.fold_edges) parent_fold[p->submesh.edges[e]] = true;
        parent_fold[hinge] = true;
        std::vector<bool> fold(joined.mesh.num_edges(), false);
        for (EdgeId e = 0; e < joined.mesh.num_edges(); ++e) fold[e] = parent_fold[joined.edges[e]];

        Net net = unfold_net(joined.mesh, cuts_from_folds(joined.mesh, fold));
        if (!net.diagnostics.valid()) continue;

        Patch merged;
        merged.faces = joined.faces;
        merged.submesh = std::move(joined);
        merged.net = std::move(net);
        merged.net.provenance.method = patches[std::min<std::size_t>(i, j)].net.provenance.method;
        merged.seed = patches[std::min<std::size_t>(i, j)].seed;
        merged.generations = std::max(patches[i].generations, patches[j].generations);
        const std::size_t keep = std::min<std::size_t>(i, j), drop = std::max<std::size_t>(i, j);
        patches[keep] = std::move(merged);
        patches.erase(patches.begin() + static_cast<long>(drop));
        ++merges;
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return merges;
}

PatchDecomposition segment_and_unfold(const TriMesh& mesh, const FitnessParams& params, const GAConfig& config,
                                      const SegmentOptions& options) {
  if (options.patch_budget < 1) throw InvalidConfig("patch budget must be positive");
  params.validate();
  config.validate();
  if (mesh.connected_components() != 1) throw DisconnectedMesh("segmentation needs a connected mesh");

  struct Component {
    std::vector<FaceId> faces;
    std::uint64_t seed;
    std::vector<double> genome;  // by parent edge id; empty for a cold start
  };

  PatchDecomposition out;
  std::vector<Component> stack;
  std::vector<FaceId> all(mesh.num_faces());
  for (FaceId f = 0; f < mesh.num_faces(); ++f) all[f] = f;
  stack.push_back({std::move(all), config.seed, {}});
  bool exceeded = false;

  // Depth-first, first half before second, so the patch order is fixed.
  while (!stack.empty()) {
    Component comp = std::move(stack.back());
    stack.pop_back();

    Patch patch;
    patch.submesh = extract_submesh(mesh, comp.faces);
    patch.faces = patch.submesh.faces;
    patch.seed = comp.seed;
    const TriMesh& local_mesh = patch.submesh.mesh;

    std::optional<std::vector<double>> initial;
    if (!comp.genome.empty()) {
      initial.emplace(local_mesh.num_edges(), 0.0);
      for (EdgeId e = 0; e < local_mesh.num_edges(); ++e) (*initial)[e] = comp.genome[patch.submesh.edges[e]];
    }
    GAConfig local = config;
    local.seed = comp.seed;
    EvolutionResult evo = ga_evolve(local_mesh, params, local, initial);
    patch.net = std::move(evo.best_net);
    patch.generations = evo.generations_run;

    const std::size_t components = out.patches.size() + stack.size() + 1;
    if (patch.net.diagnostics.valid() || patch.faces.size() < 2) {
      out.patches.push_back(std::move(patch));
      continue;
    }
    if (components + 1 > static_cast<std::size_t>(options.patch_budget) && options.merge)
      merge_patches(mesh, out.patches);
    if (out.patches.size() + stack.size() + 2 > static_cast<std::size_t>(options.patch_budget)) {
      exceeded = true;
      out.patches.push_back(std::move(patch));
      continue;
    }

    std::optional<std::pair<std::vector<FaceId>, std::vector<FaceId>>> halves;
    if (options.rule == SplitRule::FoldTree) halves = split_fold_tree(patch.net);
    if (!halves) halves = split_faces(local_mesh, overlap_hot_spot(local_mesh, patch.net));
    auto& [first, second] = *halves;

    std::vector<double> genome;
    if (options.warm_start) {
      genome.assign(mesh.num_edges(), 0.0);
      for (EdgeId e = 0; e < local_mesh.num_edges(); ++e) genome[patch.submesh.edges[e]] = evo.best_genome.values[e];
    }
    for (auto& f : first) f = patch.submesh.faces[f];
    for (auto& f : second) f = patch.submesh.faces[f];
    stack.push_back({std::move(second), comp.seed + 2, genome});
    stack.push_back({std::move(first), comp.seed + 1, std::move(genome)});
  }

  if (options.merge) merge_patches(mesh, out.patches);
  out.coverage.assign(mesh.num_faces(), kInvalidId);
  for (std::size_t i = 0; i < out.patches.size(); ++i)
    for (FaceId f : out.patches[i].faces) out.coverage[f] = static_cast<std::uint32_t>(i);
  out.complete = std::all_of(out.patches.begin(), out.patches.end(),
                             [](const Patch& p) { return p.net.diagnostics.valid(); });
  if (exceeded)
    throw BudgetExceeded(fmt::format("patch budget {} exhausted with invalid components left", options.patch_budget),
                         std::move(out));
  return out;
}

}  // namespace wrapnet
