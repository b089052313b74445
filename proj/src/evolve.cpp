#include "wrapnet/evolve.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "wrapnet/errors.hpp"
#include "wrapnet/rng.hpp"

namespace wrapnet {

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::Validity: return "validity";
    case Objective::WrapOptimized: return "wrap";
    case Objective::WrapLiteral: return "wrap-literal";
  }
  return "validity";
}

std::optional<Objective> parse_objective(std::string_view name) {
  if (name == "validity") return Objective::Validity;
  if (name == "wrap") return Objective::WrapOptimized;
  if (name == "wrap-literal") return Objective::WrapLiteral;
  return std::nullopt;
}

void FitnessParams::validate() const {
  if (!(lambda0 > 0.0) || !(lambda1 > 0.0)) throw InvalidConfig("lambda0 and lambda1 must be positive");
}

void GAConfig::validate() const {
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (population < 1) throw InvalidConfig("population must be positive");
  if (max_generations < 1) throw InvalidConfig("max_generations must be positive");
  if (elitism < 0 || elitism >= population) throw InvalidConfig("elitism must be in [0, population)");
  if (!probability(mutation_rate) || !probability(crossover_rate))
    throw InvalidConfig("mutation_rate and crossover_rate must lie in [0, 1]");
  if (!(mutation_scale >= 0.0)) throw InvalidConfig("mutation_scale must be non-negative");
  if (tournament_size < 1) throw InvalidConfig("tournament_size must be positive");
  if (threads < 1) throw InvalidConfig("threads must be positive");
  if (time_budget && !(*time_budget > 0.0)) throw InvalidConfig("time_budget must be positive");
}

double fitness_validity(const NetDiagnostics& d, const FitnessParams& params) {
  return -(params.lambda0 * d.overlaps + params.lambda1 * d.hyperbolic);
}

double fitness_validity(const Net& net, const FitnessParams& params) {
  return fitness_validity(net.diagnostics, params);
}

Fitness fitness_wrap(const NetDiagnostics& d, const FitnessParams& params) {
  return {fitness_validity(d, params), -d.fold_angle_sum};
}

double fitness_wrap_literal(const NetDiagnostics& d, const FitnessParams& params) {
  return std::min(fitness_validity(d, params), d.fold_angle_sum);
}

Fitness evaluate_fitness(const NetDiagnostics& d, const FitnessParams& params) {
  switch (params.objective) {
    case Objective::Validity: return {fitness_validity(d, params), 0.0};
    case Objective::WrapOptimized: return fitness_wrap(d, params);
    case Objective::WrapLiteral: return {fitness_wrap_literal(d, params), 0.0};
  }
  return {};
}

Net decode_genome(const TriMesh& mesh, const std::vector<double>& genome, bool repair) {
  auto cuts = spanning_tree_cuts(mesh, genome, TreeMode::MinFoldWeight);
  if (repair) cuts = relieve_saddles(mesh, cuts);
  return unfold_net(mesh, cuts);
}

namespace {

struct Individual {
  std::vector<double> genes;
  Fitness fitness;
  NetDiagnostics diagnostics;
};

void evaluate(const TriMesh& mesh, const FitnessParams& params, std::vector<Individual>& pop, std::size_t from,
              int threads, bool repair) {
  auto work = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < pop.size(); i += stride) {
      pop[i].diagnostics = decode_genome(mesh, pop[i].genes, repair).diagnostics;
      pop[i].fitness = evaluate_fitness(pop[i].diagnostics, params);
    }
  };
  const std::size_t count = pop.size() - from;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (n <= 1) {
    work(from, 1);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work, from + t, n);
  for (auto& th : pool) th.join();
}

// Index of the best individual; ties go to the lowest index.
std::size_t best_index(const std::vector<Individual>& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].fitness > pop[best].fitness) best = i;
  return best;
}

// 1 for vertices whose corner angles add up to more than 2pi; empty when
// there are none.
std::vector<int> saddle_vertices(const TriMesh& mesh) {
  std::vector<int> out(mesh.num_vertices(), 0);
  bool any = false;
  for (VertexId v = 0; v < mesh.num_vertices(); ++v) {
    double sum = 0.0;
    for (FaceId f : mesh.vertex_faces(v)) sum += mesh.corner_angle(f, mesh.corner_of(f, v));
    if (sum > kTwoPi + kAngleEpsilon) out[v] = any = true;
  }
  if (!any) out.clear();
  return out;
}

}  // namespace

EvolutionResult ga_evolve(const TriMesh& mesh, const FitnessParams& params, const GAConfig& config,
                          const std::optional<std::vector<double>>& initial) {
  params.validate();
  config.validate();
  if (mesh.connected_components() != 1) throw DisconnectedMesh("genetic search needs a connected mesh");
  if (initial && initial->size() != mesh.num_edges())
    throw InvalidConfig(fmt::format("initial genome has {} weights, mesh has {} edges", initial->size(), mesh.num_edges()));

  const auto started = std::chrono::steady_clock::now();
  Rng rng(config.seed);

  std::vector<EdgeId> genes;  // interior edges carry the genome
  for (EdgeId e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edge(e).is_boundary()) genes.push_back(e);

  const auto saddles = saddle_vertices(mesh);
  const auto pop_size = static_cast<std::size_t>(config.population);
  std::vector<Individual> pop(pop_size);
  std::vector<double> aligned;
  for (std::size_t i = 0; i < pop_size; ++i) {
    auto& g = pop[i].genes;
    g.assign(mesh.num_edges(), 0.0);
    if (i == 0) {
      Vec3 c(rng.normal(), rng.normal(), rng.normal());
      if (c.norm() < 1e-12) c = Vec3::UnitZ();
      aligned = compute_weights(mesh, WeightMethod::FlatTree, c.normalized(), config.seed).values;
      g = initial ? *initial : aligned;
    } else if (i == 1 && !saddles.empty()) {
      // Prefer cutting at vertices whose fan cannot lie flat.
      for (EdgeId e : genes) {
        const auto& v = mesh.edge(e).vertices;
        g[e] = 0.5 * aligned[e] + 0.25 * (saddles[v[0]] + saddles[v[1]]);
      }
    } else {
      for (EdgeId e : genes) g[e] = rng.uniform();
    }
  }
  evaluate(mesh, params, pop, 0, config.threads, config.repair);

  EvolutionResult result;
  std::vector<double> best_genes = pop[best_index(pop)].genes;
  result.best_fitness = pop[best_index(pop)].fitness;

  auto tournament = [&]() -> const Individual& {
    std::size_t pick = rng.below(pop_size);
    for (int k = 1; k < config.tournament_size; ++k) {
      const std::size_t other = rng.below(pop_size);
      if (pop[other].fitness > pop[pick].fitness || (pop[other].fitness == pop[pick].fitness && other < pick))
        pick = other;
    }
    return pop[pick];
  };

  for (int gen = 0;; ++gen) {
    const std::size_t b = best_index(pop);
    if (pop[b].fitness > result.best_fitness) {
      result.best_fitness = pop[b].fitness;
      best_genes = pop[b].genes;
      result.generation_found = gen;
    }
    GenerationStats stats;
    stats.generation = gen;
    stats.best = pop[b].fitness;
    for (const auto& ind : pop) stats.mean_primary += ind.fitness.primary;
    stats.mean_primary /= static_cast<double>(pop_size);
    stats.overlaps = pop[b].diagnostics.overlaps;
    stats.hyperbolic = pop[b].diagnostics.hyperbolic;
    stats.fold_angle_sum = pop[b].diagnostics.fold_angle_sum;
    result.history.push_back(stats);
    result.generations_run = gen + 1;

    if (params.objective == Objective::Validity && result.best_fitness.primary == 0.0) break;
    if (gen + 1 >= config.max_generations) break;
    if (config.time_budget) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
      if (elapsed.count() >= *config.time_budget) break;
    }

    std::vector<std::size_t> ranked(pop_size);
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t x, std::size_t y) { return pop[x].fitness > pop[y].fitness; });

    std::vector<Individual> next;
    next.reserve(pop_size);
    for (int k = 0; k < config.elitism; ++k) next.push_back(pop[ranked[k]]);
    while (next.size() < pop_size) {
      const Individual& p1 = tournament();
      const Individual& p2 = tournament();
      Individual child;
      child.genes = p1.genes;
      if (rng.bernoulli(config.crossover_rate))
        for (EdgeId e : genes)
          if (rng.bernoulli(0.5)) child.genes[e] = p2.genes[e];
      for (EdgeId e : genes)
        if (rng.bernoulli(config.mutation_rate))
          child.genes[e] = std::clamp(child.genes[e] + config.mutation_scale * rng.normal(), 0.0, 1.0);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    evaluate(mesh, params, pop, static_cast<std::size_t>(config.elitism), config.threads, config.repair);
  }

  result.best_net = decode_genome(mesh, best_genes, config.repair);
  result.best_net.provenance.method = std::string(to_string(WeightMethod::Evolved));
  result.best_net.provenance.seed = config.seed;
  result.best_genome.method = WeightMethod::Evolved;
  result.best_genome.seed = config.seed;
  result.best_genome.values = std::move(best_genes);
  result.converged = result.best_net.diagnostics.valid();
  return result;
}

void write_evolution_log(std::ostream& out, const EvolutionResult& result) {
  for (const auto& s : result.history)
    fmt::print(out, "generation={} best={:.9g} best_secondary={:.9f} mean={:.9g} delta0={} delta1={} fold_angle_sum={:.9f}\n",
               s.generation, s.best.primary + 0.0, s.best.secondary + 0.0, s.mean_primary + 0.0, s.overlaps, s.hyperbolic,
               s.fold_angle_sum);
}

}  // namespace wrapnet
