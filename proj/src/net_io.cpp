#include "wrapnet/net_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>

#include "wrapnet/errors.hpp"

namespace wrapnet {

std::string hash_to_hex(std::uint64_t hash) { return fmt::format("{:016x}", hash); }

std::uint64_t hash_from_hex(const std::string& text) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw ParseError("bad mesh hash '" + text + "'");
  return value;
}

namespace {

Json point(const Vec2& p) { return Json::array({p.x(), p.y()}); }

Vec2 point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected a 2D point");
  return {j[0].get<double>(), j[1].get<double>()};
}

void check_header(const Json& doc, std::string_view kind) {
  if (!doc.is_object()) throw ParseError("document is not an object");
  if (!doc.contains("format_version")) throw ParseError("missing format_version");
  const int version = doc.at("format_version").get<int>();
  if (version < 1 || version > kFormatVersion)
    throw ParseError(fmt::format("unsupported format_version {} (this build reads up to {})", version, kFormatVersion));
  if (doc.value("kind", std::string()) != kind)
    throw ParseError(fmt::format("expected a '{}' document, got '{}'", kind, doc.value("kind", std::string())));
}

Json header(std::string_view kind) { return Json{{"format_version", kFormatVersion}, {"kind", kind}}; }

Json diagnostics_json(const NetDiagnostics& d) {
  return Json{{"delta0", d.overlaps},
              {"delta1", d.hyperbolic},
              {"cut_angle_sum", d.cut_angle_sum},
              {"fold_angle_sum", d.fold_angle_sum},
              {"max_fold_angle", d.max_fold_angle},
              {"mean_fold_angle", d.mean_fold_angle},
              {"valid", d.valid()}};
}

}  // namespace

Json net_to_json(const Net& net) {
  Json doc = header("net");
  const auto& p = net.provenance;
  doc["provenance"] = Json{{"mesh_hash", hash_to_hex(p.mesh_hash)},
                           {"method", p.method},
                           {"direction", p.direction ? Json::array({p.direction->x(), p.direction->y(), p.direction->z()})
                                                     : Json(nullptr)},
                           {"seed", p.seed}};
  doc["root"] = net.tree.root;
  doc["order"] = net.tree.order;
  doc["fold_edges"] = net.tree.fold_edges;
  doc["cut_edges"] = net.tree.cut_edges;

  Json faces = Json::array();
  for (const auto& f : net.faces)
    faces.push_back(Json{{"face", f.face},
                         {"vertices", f.vertices},
                         {"corners", Json::array({point(f.corners[0]), point(f.corners[1]), point(f.corners[2])})}});
  doc["faces"] = std::move(faces);

  Json folds = Json::array();
  for (const auto& f : net.folds)
    folds.push_back(Json{{"edge", f.edge}, {"child", f.child}, {"parent", f.parent}, {"angle", f.angle},
                         {"convexity", f.convexity}});
  doc["folds"] = std::move(folds);

  Json cuts = Json::array();
  for (const auto& c : net.cuts)
    cuts.push_back(Json{{"edge", c.edge}, {"angle", c.angle}, {"convexity", c.convexity}, {"boundary", c.boundary}});
  doc["cuts"] = std::move(cuts);

  Json loops = Json::array();
  for (const auto& loop : net.boundary) {
    Json pts = Json::array();
    for (const auto& q : loop) pts.push_back(point(q));
    loops.push_back(std::move(pts));
  }
  doc["boundary"] = std::move(loops);
  doc["surface_area"] = net.surface_area;
  doc["diagnostics"] = diagnostics_json(net.diagnostics);
  return doc;
}

Net net_from_json(const Json& doc) {
  check_header(doc, "net");
  Net net;
  try {
    const Json& p = doc.at("provenance");
    net.provenance.mesh_hash = hash_from_hex(p.at("mesh_hash").get<std::string>());
    net.provenance.method = p.at("method").get<std::string>();
    if (!p.at("direction").is_null()) {
      const auto& d = p.at("direction");
      net.provenance.direction = Vec3(d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>());
    }
    net.provenance.seed = p.at("seed").get<std::uint64_t>();

    for (const auto& f : doc.at("faces")) {
      NetFace nf;
      nf.face = f.at("face").get<FaceId>();
      nf.vertices = f.at("vertices").get<std::array<VertexId, 3>>();
      const auto& c = f.at("corners");
      if (c.size() != 3) throw ParseError("face needs three corners");
      for (int k = 0; k < 3; ++k) nf.corners[k] = point_from(c[k]);
      net.faces.push_back(nf);
    }
    const auto nf = net.faces.size();
    for (std::size_t i = 0; i < nf; ++i)
      if (net.faces[i].face != i) throw ParseError(fmt::format("face {} stored out of order", net.faces[i].face));

    auto& tree = net.tree;
    tree.root = doc.at("root").get<FaceId>();
    tree.order = doc.at("order").get<std::vector<FaceId>>();
    tree.fold_edges = doc.at("fold_edges").get<std::vector<EdgeId>>();
    tree.cut_edges = doc.at("cut_edges").get<std::vector<EdgeId>>();
    tree.parent.assign(nf, FoldLink{});
    for (const auto& f : doc.at("folds")) {
      FoldRecord r;
      r.edge = f.at("edge").get<EdgeId>();
      r.child = f.at("child").get<FaceId>();
      r.parent = f.at("parent").get<FaceId>();
      r.angle = f.at("angle").get<double>();
      r.convexity = f.at("convexity").get<int>();
      if (r.child >= nf || r.parent >= nf) throw ParseError(fmt::format("fold on edge {} names a missing face", r.edge));
      tree.parent[r.child] = FoldLink{r.parent, r.edge};
      net.folds.push_back(r);
    }
    if (tree.root >= nf && nf > 0) throw ParseError("root face out of range");
    if (tree.order.size() != nf) throw ParseError("order does not list every face");

    for (const auto& c : doc.at("cuts")) {
      CutRecord r;
      r.edge = c.at("edge").get<EdgeId>();
      r.angle = c.at("angle").get<double>();
      r.convexity = c.at("convexity").get<int>();
      r.boundary = c.at("boundary").get<bool>();
      net.cuts.push_back(r);
    }
    for (const auto& loop : doc.at("boundary")) {
      std::vector<Vec2> pts;
      for (const auto& q : loop) pts.push_back(point_from(q));
      net.boundary.push_back(std::move(pts));
    }
    net.surface_area = doc.at("surface_area").get<double>();
    const auto& d = doc.at("diagnostics");
    net.diagnostics.overlaps = d.at("delta0").get<int>();
    net.diagnostics.hyperbolic = d.at("delta1").get<int>();
    net.diagnostics.cut_angle_sum = d.at("cut_angle_sum").get<double>();
    net.diagnostics.fold_angle_sum = d.at("fold_angle_sum").get<double>();
    net.diagnostics.max_fold_angle = d.at("max_fold_angle").get<double>();
    net.diagnostics.mean_fold_angle = d.at("mean_fold_angle").get<double>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("net document: ") + e.what());
  }
  return net;
}

void write_json(const Json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IOError("write failed: " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_net(const Net& net, const std::filesystem::path& path) { write_json(net_to_json(net), path); }

Net load_net(const std::filesystem::path& path) { return net_from_json(read_json(path)); }

Json to_json(const FitnessParams& params) {
  return Json{{"lambda0", params.lambda0}, {"lambda1", params.lambda1}, {"objective", to_string(params.objective)}};
}

FitnessParams fitness_params_from_json(const Json& doc) {
  FitnessParams p;
  try {
    p.lambda0 = doc.value("lambda0", p.lambda0);
    p.lambda1 = doc.value("lambda1", p.lambda1);
    const auto name = doc.value("objective", std::string(to_string(p.objective)));
    const auto objective = parse_objective(name);
    if (!objective) throw ParseError("unknown objective '" + name + "'");
    p.objective = *objective;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("fitness parameters: ") + e.what());
  }
  return p;
}

Json to_json(const GAConfig& c) {
  Json doc{{"population", c.population},       {"max_generations", c.max_generations},
           {"mutation_rate", c.mutation_rate}, {"mutation_scale", c.mutation_scale},
           {"crossover_rate", c.crossover_rate}, {"elitism", c.elitism},
           {"tournament_size", c.tournament_size}, {"seed", c.seed},
           {"threads", c.threads},             {"repair", c.repair}};
  if (c.time_budget) doc["time_budget"] = *c.time_budget;
  return doc;
}

GAConfig ga_config_from_json(const Json& doc) {
  GAConfig c;
  try {
    c.population = doc.value("population", c.population);
    c.max_generations = doc.value("max_generations", c.max_generations);
    c.mutation_rate = doc.value("mutation_rate", c.mutation_rate);
    c.mutation_scale = doc.value("mutation_scale", c.mutation_scale);
    c.crossover_rate = doc.value("crossover_rate", c.crossover_rate);
    c.elitism = doc.value("elitism", c.elitism);
    c.tournament_size = doc.value("tournament_size", c.tournament_size);
    c.seed = doc.value("seed", c.seed);
    c.threads = doc.value("threads", c.threads);
    c.repair = doc.value("repair", c.repair);
    if (doc.contains("time_budget")) c.time_budget = doc.at("time_budget").get<double>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("GA config: ") + e.what());
  }
  return c;
}

Json evolution_to_json(const EvolutionResult& r) {
  Json doc = header("evolution");
  doc["best_fitness"] = Json{{"primary", r.best_fitness.primary}, {"secondary", r.best_fitness.secondary}};
  doc["generation_found"] = r.generation_found;
  doc["generations_run"] = r.generations_run;
  doc["converged"] = r.converged;
  doc["best_diagnostics"] = diagnostics_json(r.best_net.diagnostics);
  doc["best_genome"] = r.best_genome.values;
  Json history = Json::array();
  for (const auto& g : r.history)
    history.push_back(Json{{"generation", g.generation},
                           {"best", g.best.primary},
                           {"best_secondary", g.best.secondary},
                           {"mean", g.mean_primary},
                           {"delta0", g.overlaps},
                           {"delta1", g.hyperbolic},
                           {"fold_angle_sum", g.fold_angle_sum}});
  doc["history"] = std::move(history);
  return doc;
}

Json to_json(const Checkpoint& c) {
  Json doc = header("checkpoint");
  doc["mesh_hash"] = hash_to_hex(c.mesh_hash);
  doc["params"] = to_json(c.params);
  doc["config"] = to_json(c.config);
  doc["generations_run"] = c.generations_run;
  doc["genome"] = c.genome;
  return doc;
}

Checkpoint checkpoint_from_json(const Json& doc) {
  check_header(doc, "checkpoint");
  Checkpoint c;
  try {
    c.mesh_hash = hash_from_hex(doc.at("mesh_hash").get<std::string>());
    c.params = fitness_params_from_json(doc.at("params"));
    c.config = ga_config_from_json(doc.at("config"));
    c.generations_run = doc.at("generations_run").get<int>();
    c.genome = doc.at("genome").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_json(to_json(checkpoint), path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return checkpoint_from_json(read_json(path)); }

Json decomposition_to_json(const PatchDecomposition& d, std::uint64_t mesh_hash,
                           const std::vector<std::string>& net_files) {
  Json doc = header("decomposition");
  doc["mesh_hash"] = hash_to_hex(mesh_hash);
  doc["patch_count"] = d.patches.size();
  doc["complete"] = d.complete;
  Json patches = Json::array();
  for (std::size_t i = 0; i < d.patches.size(); ++i) {
    const auto& p = d.patches[i];
    Json entry{{"index", i},
               {"faces", p.faces},
               {"seed", p.seed},
               {"generations", p.generations},
               {"valid", p.net.diagnostics.valid()},
               {"net", i < net_files.size() ? Json(net_files[i]) : Json(nullptr)}};
    patches.push_back(std::move(entry));
  }
  doc["patches"] = std::move(patches);
  return doc;
}

Json RunManifest::to_json() const {
  Json doc = header("manifest");
  doc["subcommand"] = subcommand;
  doc["inputs"] = inputs;
  doc["parameters"] = parameters;
  doc["seed"] = seed;
  doc["outputs"] = outputs;
  doc["seconds"] = seconds;
  doc["diagnostics"] = diagnostics;
  doc["exit_code"] = exit_code;
  return doc;
}

}  // namespace wrapnet
