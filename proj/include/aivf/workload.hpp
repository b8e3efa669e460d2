#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "aivf/dataset.hpp"
#include "aivf/index.hpp"
#include "aivf/stats.hpp"

namespace aivf {

/// Query vectors with exact ground truth. `queries` carries the source
/// cluster of each query as its labels.
struct QuerySet {
  VectorSet queries;
  std::vector<VectorId> truth_ids;
  std::vector<ClusterId> source_cluster;
  std::uint64_t seed = 0;

  std::size_t size() const { return truth_ids.size(); }
};

struct WorkloadConfig {
  std::size_t n_q = 2000;
  double s = 1.0;
  double noise_sigma = 0.05;
  std::uint64_t seed = 1;
};

/// Rank-j weight j^-s / H_m, j = 1..m.
std::vector<double> zipf_weights(std::size_t m, double s);

/// Nonempty clusters ordered by coherence, most coherent first (ties by id).
std::vector<ClusterId> coherence_ranking(const ClusterStats& stats);

/// Zipf over the coherence ranking picks a cluster, a uniform member of its
/// list is perturbed by N(0, noise_sigma^2) per axis and renormalized.
/// Ground truth is an exhaustive inner-product scan of `vs`.
QuerySet sample_queries(const VectorSet& vs, const InvertedIndex& ix, const ClusterStats& stats,
                        const WorkloadConfig& config);

/// Exhaustive top-1 id for every query row.
std::vector<VectorId> exact_top1(const VectorSet& vs, const VectorSet& queries);

/// Writes `<stem>.avf` (AVF1, labels = source cluster) and `<stem>.csv`
/// with header query_index,truth_id,source_cluster.
void save_queries(const QuerySet& qs, const std::filesystem::path& stem);
QuerySet load_queries(const std::filesystem::path& stem);

}  // namespace aivf
