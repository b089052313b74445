#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wrapnet/evolve.hpp"
#include "wrapnet/net.hpp"
#include "wrapnet/segment.hpp"

namespace wrapnet {

using Json = nlohmann::json;

/// Bumped whenever a document layout changes incompatibly. Readers reject
/// documents with a newer version.
inline constexpr int kFormatVersion = 1;

/// Mesh hashes are written as 16 hex digits.
std::string hash_to_hex(std::uint64_t hash);
std::uint64_t hash_from_hex(const std::string& text);

Json net_to_json(const Net& net);
/// Throws ParseError.
Net net_from_json(const Json& doc);

/// Writes `doc` pretty-printed with a trailing newline. Throws IOError.
void write_json(const Json& doc, const std::filesystem::path& path);
/// Throws IOError or ParseError.
Json read_json(const std::filesystem::path& path);

void save_net(const Net& net, const std::filesystem::path& path);
Net load_net(const std::filesystem::path& path);

Json to_json(const FitnessParams& params);
FitnessParams fitness_params_from_json(const Json& doc);
/// The wall-clock budget is written only when set.
Json to_json(const GAConfig& config);
GAConfig ga_config_from_json(const Json& doc);

/// Search summary: fitness, best genome and per-generation history. The best
/// net itself is stored as a separate net document.
Json evolution_to_json(const EvolutionResult& result);

/// Best genome with everything needed to resume the search.
struct Checkpoint {
  std::uint64_t mesh_hash = 0;
  FitnessParams params;
  GAConfig config;
  int generations_run = 0;
  std::vector<double> genome;
};

Json to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const Json& doc);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Patch list with parent face ids and the file holding each patch net
/// (`net_files[i]` for patch i).
Json decomposition_to_json(const PatchDecomposition& decomposition, std::uint64_t mesh_hash,
                           const std::vector<std::string>& net_files);

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> inputs;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  double seconds = 0.0;
  Json diagnostics = Json::object();
  int exit_code = 0;

  Json to_json() const;
};

}  // namespace wrapnet
