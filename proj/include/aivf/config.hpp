#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aivf/dataset.hpp"
#include "aivf/policy.hpp"
#include "aivf/stats.hpp"
#include "aivf/workload.hpp"

namespace aivf {

/// Seeds for each randomized stage, derived from one master seed.
struct StageSeeds {
  std::uint64_t gen = 0;
  std::uint64_t kmeans = 0;
  std::uint64_t workload = 0;
};

StageSeeds derive_seeds(std::uint64_t master);

/// Everything a bench run needs. `document` is the parsed config file, kept
/// so reports can echo it unchanged.
struct RunConfig {
  std::uint64_t seed = 42;
  std::optional<std::filesystem::path> dataset_path;
  std::optional<SynthConfig> gen;
  std::size_t m = 256;
  int max_iters = 25;
  WorkloadConfig workload;
  std::vector<std::size_t> k_base_list = {1, 2, 4, 8, 16, 32, 64};
  TierMultipliers multipliers;
  PercentileLevels levels;
  std::vector<double> recall_targets = {0.95, 0.98};
  nlohmann::json document = nlohmann::json::object();

  StageSeeds seeds() const { return derive_seeds(seed); }
};

/// Strict parse: unknown keys and out-of-range values throw ConfigError.
/// Relative dataset paths resolve against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace aivf
