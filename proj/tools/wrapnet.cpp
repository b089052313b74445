// wrapnet: generate, unfold, evolve, export and inspect polyhedral nets.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "wrapnet/errors.hpp"
#include "wrapnet/evolve.hpp"
#include "wrapnet/export_svg.hpp"
#include "wrapnet/mesh_io.hpp"
#include "wrapnet/net_io.hpp"
#include "wrapnet/overlap.hpp"
#include "wrapnet/rng.hpp"
#include "wrapnet/segment.hpp"
#include "wrapnet/shapes.hpp"
#include "wrapnet/unfold.hpp"

namespace fs = std::filesystem;
using namespace wrapnet;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;

using Clock = std::chrono::steady_clock;

std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw InvalidConfig("seed must be a non-negative integer or 'random' (got '" + text + "')");
  return v;
}

Vec3 parse_direction(const std::string& text) {
  Vec3 c;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    const auto [next, ec] = std::from_chars(p, end, c[i]);
    if (ec != std::errc()) throw InvalidConfig("--c expects x,y,z (got '" + text + "')");
    p = next;
    if (i < 2) {
      if (p == end || *p != ',') throw InvalidConfig("--c expects x,y,z (got '" + text + "')");
      ++p;
    }
  }
  if (p != end) throw InvalidConfig("--c expects x,y,z (got '" + text + "')");
  if (!(c.norm() > 0.0)) throw InvalidConfig("--c must be non-zero");
  return c.normalized();
}

// Random unit vector from the run seed, for methods that need c when none is given.
Vec3 seeded_direction(std::uint64_t seed) {
  Rng rng(seed);
  Vec3 c;
  do c = Vec3(rng.normal(), rng.normal(), rng.normal());
  while (c.norm() < 1e-9);
  return c.normalized();
}

Json direction_json(const std::optional<Vec3>& c) {
  return c ? Json::array({c->x(), c->y(), c->z()}) : Json(nullptr);
}

Json diagnostics_json(const NetDiagnostics& d) {
  return Json{{"delta0", d.overlaps},
              {"delta1", d.hyperbolic},
              {"fold_angle_sum", d.fold_angle_sum},
              {"max_fold_angle", d.max_fold_angle},
              {"valid", d.valid()}};
}

fs::path with_suffix(const fs::path& prefix, const std::string& suffix) { return fs::path(prefix.string() + suffix); }

void finish(RunManifest& manifest, const fs::path& path, Clock::time_point start, int code) {
  manifest.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  manifest.exit_code = code;
  write_json(manifest.to_json(), path);
}

// ---------------------------------------------------------------- sphere

struct SphereArgs {
  int facets = 80;
  double radius = 1.0;
  std::string mode = "circumscribed";
  std::string seed = "1";
  std::string output;
  std::string manifest;
};

int cmd_sphere(const SphereArgs& a) {
  const auto start = Clock::now();
  SphereSpec spec;
  spec.facets = a.facets;
  spec.radius = a.radius;
  const auto mode = parse_sphere_mode(a.mode);
  if (!mode) throw InvalidConfig("unknown sphere mode '" + a.mode + "'");
  spec.mode = *mode;
  const std::uint64_t seed = parse_seed(a.seed);
  const TriMesh mesh = generate_sphere(spec, seed);
  write_obj(mesh, fs::path(a.output));
  const double excess = area_excess(mesh, spec.radius);
  fmt::print("faces={} vertices={} edges={} radius={:.9f} mode={} area_excess={:.6f}\n", mesh.num_faces(),
             mesh.num_vertices(), mesh.num_edges(), spec.radius, to_string(spec.mode), excess);

  RunManifest m;
  m.subcommand = "sphere";
  m.parameters = Json{{"facets", a.facets}, {"radius", a.radius}, {"mode", to_string(spec.mode)}};
  m.seed = seed;
  m.outputs = {a.output};
  m.diagnostics = Json{{"faces", mesh.num_faces()}, {"area_excess", excess}, {"mesh_hash", hash_to_hex(mesh.hash())}};
  finish(m, a.manifest.empty() ? with_suffix(a.output, ".manifest.json") : fs::path(a.manifest), start, kExitValid);
  return kExitValid;
}

// ---------------------------------------------------------------- unfold

struct UnfoldArgs {
  std::string mesh;
  std::string method = "flat-tree";
  std::string c;
  std::string seed = "1";
  bool tilt = false;
  bool normalize = false;
  std::string output = "net.json";
  std::string manifest;
};

int cmd_unfold(const UnfoldArgs& a) {
  const auto start = Clock::now();
  const auto method = parse_weight_method(a.method);
  if (!method || *method == WeightMethod::Evolved) throw InvalidConfig("unknown unfolding method '" + a.method + "'");
  const std::uint64_t seed = parse_seed(a.seed);
  LoadOptions lo;
  lo.normalize_to_unit_box = a.normalize;
  const TriMesh mesh = load_mesh(a.mesh, format_from_path(a.mesh), lo);

  std::optional<Vec3> c;
  if (!a.c.empty()) c = parse_direction(a.c);
  else if (needs_direction(*method)) c = seeded_direction(seed);

  const Net net = unfold(mesh, *method, c, seed, a.tilt);
  save_net(net, a.output);
  fmt::print("{} folds={} faces={}\n", to_record(net.diagnostics), net.tree.fold_edges.size(), net.faces.size());

  const int code = net.diagnostics.valid() ? kExitValid : kExitInvalid;
  RunManifest m;
  m.subcommand = "unfold";
  m.inputs = {{"mesh", a.mesh}};
  m.parameters = Json{{"method", to_string(*method)}, {"c", direction_json(c)}, {"tilt", a.tilt},
                      {"normalize", a.normalize}};
  m.seed = seed;
  m.outputs = {a.output};
  m.diagnostics = diagnostics_json(net.diagnostics);
  finish(m, a.manifest.empty() ? with_suffix(a.output, ".manifest.json") : fs::path(a.manifest), start, code);
  return code;
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
  std::string mesh;
  std::string objective = "validity";
  double lambda0 = 100.0;
  double lambda1 = 1.0;
  GAConfig ga;
  std::string seed = "1";
  double time_budget = 0.0;
  bool no_repair = false;
  bool segment = false;
  int patch_budget = 20;
  std::string split_rule = "fold-tree";
  bool no_merge = false;
  std::string resume;
  bool normalize = false;
  std::string output = "evolve";
};

int cmd_evolve(EvolveArgs a) {
  const auto start = Clock::now();
  FitnessParams params;
  params.lambda0 = a.lambda0;
  params.lambda1 = a.lambda1;
  const auto objective = parse_objective(a.objective);
  if (!objective) throw InvalidConfig("unknown objective '" + a.objective + "'");
  params.objective = *objective;
  params.validate();

  GAConfig config = a.ga;
  config.seed = parse_seed(a.seed);
  config.repair = !a.no_repair;
  if (a.time_budget > 0.0) config.time_budget = a.time_budget;
  config.validate();

  LoadOptions lo;
  lo.normalize_to_unit_box = a.normalize;
  const TriMesh mesh = load_mesh(a.mesh, format_from_path(a.mesh), lo);
  const fs::path prefix(a.output);

  RunManifest m;
  m.subcommand = "evolve";
  m.inputs = {{"mesh", a.mesh}};
  m.parameters = Json{{"fitness", to_json(params)}, {"ga", to_json(config)}, {"segment", a.segment},
                      {"normalize", a.normalize}};
  m.seed = config.seed;

  int code = kExitValid;
  if (a.segment) {
    SegmentOptions so;
    so.patch_budget = a.patch_budget;
    const auto rule = parse_split_rule(a.split_rule);
    if (!rule) throw InvalidConfig("unknown split rule '" + a.split_rule + "'");
    so.rule = *rule;
    so.merge = !a.no_merge;
    if (so.patch_budget < 1) throw InvalidConfig("patch budget must be >= 1");
    m.parameters["patch_budget"] = so.patch_budget;
    m.parameters["split_rule"] = to_string(so.rule);
    m.parameters["merge"] = so.merge;

    PatchDecomposition d;
    try {
      d = segment_and_unfold(mesh, params, config, so);
    } catch (const BudgetExceeded& e) {
      std::cerr << "wrapnet: " << e.what() << '\n';
      d = e.partial();
      code = kExitInvalid;
    }
    std::vector<std::string> files;
    for (std::size_t i = 0; i < d.patches.size(); ++i) {
      const fs::path file = with_suffix(prefix, fmt::format(".patch{:03}.net.json", i));
      save_net(d.patches[i].net, file);
      files.push_back(file.filename().string());
      m.outputs.push_back(file.string());
    }
    const fs::path doc = with_suffix(prefix, ".decomposition.json");
    write_json(decomposition_to_json(d, mesh.hash(), files), doc);
    m.outputs.push_back(doc.string());
    int valid = 0;
    for (const auto& p : d.patches) valid += p.net.diagnostics.valid() ? 1 : 0;
    fmt::print("patches={} valid_patches={} complete={}\n", d.patches.size(), valid, d.complete ? 1 : 0);
    m.diagnostics = Json{{"patches", d.patches.size()}, {"valid_patches", valid}, {"complete", d.complete}};
    if (!d.complete) code = kExitInvalid;
  } else {
    std::optional<std::vector<double>> initial;
    if (!a.resume.empty()) {
      const Checkpoint cp = load_checkpoint(a.resume);
      if (cp.mesh_hash != mesh.hash()) throw InvalidConfig("checkpoint " + a.resume + " was written for another mesh");
      if (cp.genome.size() != mesh.num_edges()) throw InvalidConfig("checkpoint genome length does not match the mesh");
      initial = cp.genome;
      m.inputs["resume"] = a.resume;
    }
    const EvolutionResult r = ga_evolve(mesh, params, config, initial);

    const fs::path net_file = with_suffix(prefix, ".net.json");
    const fs::path result_file = with_suffix(prefix, ".result.json");
    const fs::path log_file = with_suffix(prefix, ".log");
    const fs::path cp_file = with_suffix(prefix, ".checkpoint.json");
    save_net(r.best_net, net_file);
    write_json(evolution_to_json(r), result_file);
    {
      std::ofstream log(log_file, std::ios::binary);
      if (!log) throw IOError("cannot write " + log_file.string());
      write_evolution_log(log, r);
    }
    Checkpoint cp;
    cp.mesh_hash = mesh.hash();
    cp.params = params;
    cp.config = config;
    cp.generations_run = r.generations_run;
    cp.genome = r.best_genome.values;
    save_checkpoint(cp, cp_file);
    m.outputs = {net_file.string(), result_file.string(), log_file.string(), cp_file.string()};

    fmt::print("{} generation_found={} generations_run={} converged={}\n", to_record(r.best_net.diagnostics),
               r.generation_found, r.generations_run, r.converged ? 1 : 0);
    m.diagnostics = diagnostics_json(r.best_net.diagnostics);
    m.diagnostics["generation_found"] = r.generation_found;
    m.diagnostics["generations_run"] = r.generations_run;
    code = r.converged ? kExitValid : kExitInvalid;
  }
  finish(m, with_suffix(prefix, ".manifest.json"), start, code);
  return code;
}

// ---------------------------------------------------------------- export

struct ExportArgs {
  std::vector<std::string> nets;
  std::string decomposition;
  std::string mode = "with-creases";
  ExportOptions opts;
  std::string output;
  std::string manifest;
};

int cmd_export(ExportArgs a) {
  const auto start = Clock::now();
  const auto mode = parse_export_mode(a.mode);
  if (!mode) throw InvalidConfig("unknown export mode '" + a.mode + "'");
  a.opts.mode = *mode;

  std::vector<std::string> files = a.nets;
  if (!a.decomposition.empty()) {
    const Json doc = read_json(a.decomposition);
    const fs::path dir = fs::path(a.decomposition).parent_path();
    try {
      for (const auto& p : doc.at("patches")) files.push_back((dir / p.at("net").get<std::string>()).string());
    } catch (const Json::exception& e) {
      throw ParseError(a.decomposition + ": " + e.what());
    }
  }
  if (files.empty()) throw InvalidConfig("nothing to export (give --net or --decomposition)");

  std::vector<Net> nets;
  for (const auto& f : files) nets.push_back(load_net(f));
  std::vector<const Net*> ptrs;
  for (const auto& n : nets) ptrs.push_back(&n);
  const ExportSummary s = export_svg(ptrs, a.opts, a.output);
  fmt::print("{}\n", s.to_record());
  if (s.crease_warning)
    std::cerr << fmt::format("wrapnet: warning: fold angle {:.4f} rad exceeds the crease threshold {:.4f} rad\n",
                             s.max_fold_angle, a.opts.crease_threshold);

  RunManifest m;
  m.subcommand = "export";
  for (std::size_t i = 0; i < files.size(); ++i) m.inputs[fmt::format("net{}", i)] = files[i];
  m.parameters = Json{{"mode", to_string(a.opts.mode)}, {"scale", a.opts.scale}, {"margin", a.opts.margin},
                      {"crease_threshold", a.opts.crease_threshold}, {"force", a.opts.force}};
  m.outputs = {a.output};
  m.diagnostics = Json{{"cut_paths", s.cut_paths}, {"creases", s.creases}, {"cut_length", s.cut_length},
                       {"crease_warning", s.crease_warning}, {"invalid_net", s.invalid_net}};
  finish(m, a.manifest.empty() ? with_suffix(a.output, ".manifest.json") : fs::path(a.manifest), start, kExitValid);
  return kExitValid;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::string net;
  std::string mesh;
  double radius = 0.0;
  bool normalize = false;
  std::string manifest;
};

int cmd_stats(const StatsArgs& a) {
  const auto start = Clock::now();
  Net net = load_net(a.net);
  LoadOptions lo;
  lo.normalize_to_unit_box = a.normalize;
  const TriMesh mesh = load_mesh(a.mesh, format_from_path(a.mesh), lo);
  if (net.provenance.mesh_hash != mesh.hash())
    throw InvalidConfig(fmt::format("{} was not unfolded from {} (mesh hash {} vs {})", a.net, a.mesh,
                                    hash_to_hex(net.provenance.mesh_hash), hash_to_hex(mesh.hash())));
  if (net.faces.size() != mesh.num_faces()) throw InvalidConfig("net and mesh face counts differ");
  net.diagnostics = diagnose(net, mesh);
  const double radius = a.radius > 0.0 ? a.radius : min_face_plane_distance(mesh);
  const double excess = area_excess(mesh, radius);
  const bool single = net.tree.fold_edges.size() + 1 == mesh.num_faces();
  fmt::print("{} faces={} folds={} single_patch={} surface_area={:.9f} planar_area={:.9f} isometry_error={:.3e} "
             "radius={:.9f} area_excess={:.6f}\n",
             to_record(net.diagnostics), mesh.num_faces(), net.tree.fold_edges.size(), single ? 1 : 0,
             mesh.surface_area(), net.planar_area(), max_isometry_error(net, mesh), radius, excess);

  const int code = net.diagnostics.valid() ? kExitValid : kExitInvalid;
  if (!a.manifest.empty()) {
    RunManifest m;
    m.subcommand = "stats";
    m.inputs = {{"net", a.net}, {"mesh", a.mesh}};
    m.parameters = Json{{"radius", radius}};
    m.diagnostics = diagnostics_json(net.diagnostics);
    m.diagnostics["area_excess"] = excess;
    finish(m, a.manifest, start, code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyhedral net unfolding, search and export"};
  app.set_config("--config", "", "TOML file with option values; command-line flags win");
  app.require_subcommand(1);

  SphereArgs sa;
  auto* sphere = app.add_subcommand("sphere", "Generate a closed triangulated sphere (OBJ)");
  sphere->add_option("--facets", sa.facets, "Target face count")->capture_default_str();
  sphere->add_option("--radius", sa.radius, "Sphere radius")->capture_default_str();
  sphere->add_option("--mode", sa.mode, "circumscribed or inscribed")->capture_default_str();
  sphere->add_option("--seed", sa.seed, "Integer or 'random'")->capture_default_str();
  sphere->add_option("-o,--output", sa.output, "Output OBJ")->required();
  sphere->add_option("--manifest", sa.manifest, "Manifest path (default: <output>.manifest.json)");

  UnfoldArgs ua;
  auto* unf = app.add_subcommand("unfold", "Unfold a mesh with a weight heuristic");
  unf->add_option("--mesh", ua.mesh, "OBJ or OFF mesh")->required();
  unf->add_option("--method", ua.method,
                  "steepest-edge, flat-tree, unflat-tree, min-perimeter, max-perimeter, random, dihedral-flat-tree")
      ->capture_default_str();
  unf->add_option("--c", ua.c, "Direction x,y,z (drawn from the seed when omitted)");
  unf->add_option("--seed", ua.seed, "Integer or 'random'")->capture_default_str();
  unf->add_flag("--tilt", ua.tilt, "Tilt c slightly to break ties on symmetric meshes");
  unf->add_flag("--normalize", ua.normalize, "Center and scale the mesh to a unit box");
  unf->add_option("-o,--output", ua.output, "Net document")->capture_default_str();
  unf->add_option("--manifest", ua.manifest, "Manifest path (default: <output>.manifest.json)");

  EvolveArgs ea;
  auto* evo = app.add_subcommand("evolve", "Genetic search for a valid (or flattest) net");
  evo->add_option("--mesh", ea.mesh, "OBJ or OFF mesh")->required();
  evo->add_option("--objective", ea.objective, "validity, wrap or wrap-literal")->capture_default_str();
  evo->add_option("--lambda0", ea.lambda0, "Overlap penalty weight")->capture_default_str();
  evo->add_option("--lambda1", ea.lambda1, "Hyperbolic-vertex penalty weight")->capture_default_str();
  evo->add_option("--population", ea.ga.population)->capture_default_str();
  evo->add_option("--generations", ea.ga.max_generations)->capture_default_str();
  evo->add_option("--mutation-rate", ea.ga.mutation_rate)->capture_default_str();
  evo->add_option("--mutation-scale", ea.ga.mutation_scale)->capture_default_str();
  evo->add_option("--crossover-rate", ea.ga.crossover_rate)->capture_default_str();
  evo->add_option("--elitism", ea.ga.elitism)->capture_default_str();
  evo->add_option("--tournament", ea.ga.tournament_size)->capture_default_str();
  evo->add_option("--threads", ea.ga.threads, "Fitness evaluation threads")->capture_default_str();
  evo->add_option("--seed", ea.seed, "Integer or 'random'")->capture_default_str();
  evo->add_option("--time-budget", ea.time_budget, "Seconds (0 = none; bounded runs are not reproducible)");
  evo->add_flag("--no-repair", ea.no_repair, "Skip the saddle repair of decoded trees");
  evo->add_flag("--segment", ea.segment, "Split into patches when a single net fails");
  evo->add_option("--patch-budget", ea.patch_budget, "Maximum number of patches")->capture_default_str();
  evo->add_option("--split-rule", ea.split_rule, "fold-tree or hot-spot")->capture_default_str();
  evo->add_flag("--no-merge", ea.no_merge, "Do not join valid neighbouring patches");
  evo->add_option("--resume", ea.resume, "Checkpoint to seed the first individual");
  evo->add_flag("--normalize", ea.normalize, "Center and scale the mesh to a unit box");
  evo->add_option("-o,--output", ea.output, "Output prefix")->capture_default_str();

  ExportArgs xa;
  auto* exp = app.add_subcommand("export", "Write an SVG cut pattern");
  exp->add_option("--net", xa.nets, "Net document (repeatable)");
  exp->add_option("--decomposition", xa.decomposition, "Decomposition document from evolve --segment");
  exp->add_option("--mode", xa.mode, "with-creases or cuts-only")->capture_default_str();
  exp->add_option("--scale", xa.opts.scale, "mm per mesh unit")->capture_default_str();
  exp->add_option("--margin", xa.opts.margin, "mm")->capture_default_str();
  exp->add_option("--cut-stroke", xa.opts.cut_stroke)->capture_default_str();
  exp->add_option("--crease-stroke", xa.opts.crease_stroke)->capture_default_str();
  exp->add_option("--threshold", xa.opts.crease_threshold, "Crease-erasure gate in radians")->capture_default_str();
  exp->add_flag("--force", xa.opts.force, "Export nets with overlaps");
  exp->add_option("-o,--output", xa.output, "Output SVG")->required();
  exp->add_option("--manifest", xa.manifest, "Manifest path (default: <output>.manifest.json)");

  StatsArgs ta;
  auto* sta = app.add_subcommand("stats", "Print diagnostics for a net and its mesh");
  sta->add_option("--net", ta.net, "Net document")->required();
  sta->add_option("--mesh", ta.mesh, "Mesh the net was unfolded from")->required();
  sta->add_option("--radius", ta.radius, "Reference sphere radius (default: nearest face plane)");
  sta->add_flag("--normalize", ta.normalize, "Center and scale the mesh to a unit box");
  sta->add_option("--manifest", ta.manifest, "Write a manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "wrapnet: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*sphere) return cmd_sphere(sa);
    if (*unf) return cmd_unfold(ua);
    if (*evo) return cmd_evolve(ea);
    if (*exp) return cmd_export(xa);
    if (*sta) return cmd_stats(ta);
  } catch (const std::exception& e) {
    std::cerr << "wrapnet: error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
