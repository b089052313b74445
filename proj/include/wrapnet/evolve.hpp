#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "wrapnet/mesh.hpp"
#include "wrapnet/net.hpp"
#include "wrapnet/unfold.hpp"

namespace wrapnet {

enum class Objective {
  /// -(l0 d0 + l1 d1).
  Validity,
  /// Validity penalty first, then the smallest total fold angle.
  WrapOptimized,
  /// min(-(l0 d0 + l1 d1), sum of fold angles), taken literally.
  WrapLiteral,
};

std::string_view to_string(Objective objective);
/// Accepts validity, wrap, wrap-literal.
std::optional<Objective> parse_objective(std::string_view name);

struct FitnessParams {
  double lambda0 = 100.0;
  double lambda1 = 1.0;
  Objective objective = Objective::Validity;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Ordered score; larger is better, compared on `primary` then `secondary`.
struct Fitness {
  double primary = 0.0;
  double secondary = 0.0;

  auto operator<=>(const Fitness&) const = default;
};

double fitness_validity(const NetDiagnostics& d, const FitnessParams& params);
double fitness_validity(const Net& net, const FitnessParams& params);
Fitness fitness_wrap(const NetDiagnostics& d, const FitnessParams& params);
double fitness_wrap_literal(const NetDiagnostics& d, const FitnessParams& params);
/// Dispatches on params.objective.
Fitness evaluate_fitness(const NetDiagnostics& d, const FitnessParams& params);

struct GAConfig {
  int population = 100;
  int max_generations = 500;
  double mutation_rate = 0.05;
  double mutation_scale = 0.1;
  double crossover_rate = 0.7;
  int elitism = 2;
  int tournament_size = 3;
  std::uint64_t seed = 1;
  /// Wall-clock limit in seconds. Runs that hit it are not reproducible.
  std::optional<double> time_budget;
  /// Worker threads for fitness evaluation; results do not depend on it.
  int threads = 1;
  /// Run relieve_saddles on every decoded tree.
  bool repair = true;

  /// Throws InvalidConfig.
  void validate() const;
};

struct GenerationStats {
  int generation = 0;
  Fitness best;
  double mean_primary = 0.0;
  int overlaps = 0;
  int hyperbolic = 0;
  double fold_angle_sum = 0.0;
};

struct EvolutionResult {
  EdgeWeights best_genome;
  Net best_net;
  Fitness best_fitness;
  int generation_found = 0;
  int generations_run = 0;
  std::vector<GenerationStats> history;
  /// Best net is valid (best primary fitness is 0).
  bool converged = false;
};

/// Decodes a genome (weights indexed by edge id) into a net: minimum
/// spanning tree of the dual, optionally repaired around saddle vertices.
Net decode_genome(const TriMesh& mesh, const std::vector<double>& genome, bool repair = true);

/// Genetic search over per-edge weights. A Validity run stops at the first
/// valid net; the wrap objectives use the full generation budget.
/// `initial` replaces individual 0 (resume from a checkpoint).
EvolutionResult ga_evolve(const TriMesh& mesh, const FitnessParams& params, const GAConfig& config,
                          const std::optional<std::vector<double>>& initial = std::nullopt);

/// One key=value line per generation.
void write_evolution_log(std::ostream& out, const EvolutionResult& result);

}  // namespace wrapnet
