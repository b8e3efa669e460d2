#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aivf/dataset.hpp"

namespace aivf {

using ClusterId = std::uint32_t;

/// Coarse quantizer: m centroid rows plus training diagnostics.
struct Centroids {
  std::size_t dim = 0;
  std::vector<float> vectors;  // m x dim, row-major
  double train_sse = 0.0;
  int iterations_run = 0;
  /// SSE of the assignment made in each Lloyd iteration, in order.
  std::vector<double> sse_history;

  std::size_t size() const { return dim == 0 ? 0 : vectors.size() / dim; }
  std::span<const float> row(std::size_t c) const { return {vectors.data() + c * dim, dim}; }
};

struct KmeansOptions {
  std::size_t m = 256;
  int max_iters = 25;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;  // relative SSE improvement that stops training
  /// When set, receives a copy of the centroids used by every assignment step.
  std::vector<std::vector<float>>* trace = nullptr;
};

/// Lloyd's algorithm with greedy k-means++ seeding. Assignment during training is
/// by squared Euclidean distance so SSE is non-increasing; clusters that go
/// empty are reseeded onto the points farthest from their centroids.
Centroids train_kmeans(const VectorSet& vs, const KmeansOptions& options);

/// Cluster with maximum inner product against v, lowest id on ties.
ClusterId assign(const Centroids& c, std::span<const float> v);

}  // namespace aivf
