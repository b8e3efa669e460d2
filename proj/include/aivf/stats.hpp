#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aivf/dataset.hpp"
#include "aivf/index.hpp"

namespace aivf {

/// A disjoint partition of a VectorSet: one centroid per cluster and the
/// cluster of every row. Built from an index or from generator labels.
struct Partition {
  std::size_t dim = 0;
  std::vector<float> centroids;         // num_clusters x dim
  std::vector<ClusterId> membership;    // one per row of the VectorSet

  std::size_t num_clusters() const { return dim == 0 ? 0 : centroids.size() / dim; }
};

Partition partition_of(const InvertedIndex& ix);

/// Clusters are the generator labels; centroids are the arithmetic means of
/// each label's rows. Throws DataError if the set carries no labels.
Partition label_partition(const VectorSet& vs);

/// Coherence assigned to clusters whose radius is numerically zero or that
/// have no foreign points at all.
inline constexpr double kCoherenceCap = 1e6;
inline constexpr double kRadiusFloor = 1e-12;

struct Coherence {
  std::vector<double> radius;                   // max member distance to centroid
  std::vector<std::optional<double>> coherence; // nullopt for empty clusters
};

struct ClusterStats {
  std::vector<std::uint64_t> frequency;
  std::vector<double> radius;
  std::vector<std::optional<double>> coherence;
  double f_low = 0.0;
  double f_high = 0.0;

  std::size_t num_clusters() const { return frequency.size(); }
};

struct PercentileLevels {
  double low = 0.2;
  double high = 0.8;
};

std::vector<std::uint64_t> cluster_frequency(const InvertedIndex& ix);
std::vector<std::uint64_t> cluster_frequency(const Partition& p);

/// Separation margin per cluster, (min foreign distance - radius) / radius,
/// with Euclidean distances to the cluster centroid. Exact full scan.
Coherence cluster_coherence(const VectorSet& vs, const Partition& p);
Coherence cluster_coherence(const VectorSet& vs, const InvertedIndex& ix);

/// Nearest-rank percentile: sorted[ceil(p * len) - 1], sorted[0] for p = 0.
double percentile(std::span<const double> values, double p);

/// Frequencies, coherence and the f_low/f_high thresholds. Thresholds are
/// taken over nonempty clusters only.
ClusterStats compute_stats(const VectorSet& vs, const Partition& p,
                           PercentileLevels levels = {});
ClusterStats compute_stats(const VectorSet& vs, const InvertedIndex& ix,
                           PercentileLevels levels = {});

struct PowerLawFit {
  double alpha_hat = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

/// OLS of log(coherence) on log(frequency) over pairs with both positive.
/// Throws DataError with fewer than 3 usable pairs.
PowerLawFit fit_power_law(std::span<const std::uint64_t> frequencies,
                          std::span<const std::optional<double>> coherences);

}  // namespace aivf
