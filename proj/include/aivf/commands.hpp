#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aivf/bench.hpp"
#include "aivf/config.hpp"

namespace aivf {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Generates the synthetic dataset to <out>/dataset.avf.
std::filesystem::path cmd_gen(const RunConfig& cfg, const std::filesystem::path& out_dir,
                              std::ostream& log);

struct BuildOptions {
  std::filesystem::path dataset;
  std::size_t m = 256;
  int max_iters = 25;
  std::uint64_t seed = 42;
};

/// Trains the quantizer, builds the index and writes <out>/index.aivf.
std::filesystem::path cmd_build(const BuildOptions& opts, const std::filesystem::path& out_dir,
                                std::ostream& log);

struct StatsOutcome {
  ClusterStats stats;
  std::optional<PowerLawFit> fit;
  std::filesystem::path csv;
};

/// Writes <out>/stats.csv (cluster_id,frequency,radius,coherence; empty
/// clusters omitted) and logs the power-law fit.
StatsOutcome cmd_stats(const std::filesystem::path& index_path,
                       const std::filesystem::path& dataset_path, PercentileLevels levels,
                       const std::filesystem::path& out_dir, std::ostream& log);

/// Full pipeline; writes curves.csv and summary.json under out_dir.
BenchReport cmd_bench(const RunConfig& cfg, const std::filesystem::path& out_dir,
                      std::ostream& log);

/// Interpolation and gains over an existing curves CSV with "uniform" and
/// "adaptive" rows.
nlohmann::json cmd_analyze(const std::filesystem::path& curves_csv,
                           const std::vector<double>& targets);

/// Entry point of the `aivf` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aivf
