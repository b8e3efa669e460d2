#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference and an
// OpenMP variant; both write one output slot per input row and evaluate each
// slot with the same arithmetic, so their outputs are bit-identical. Tests
// compare the pair directly and bench/kernel_bench.cpp times them.

#include <cstdint>
#include <span>

namespace aivf::kernels {

/// Inner product, single precision. Lane order is fixed at compile time so a
/// given (a, b) pair always scores identically wherever it is evaluated.
float dot(std::span<const float> a, std::span<const float> b);

/// Squared Euclidean distance, single precision.
float squared_l2(std::span<const float> a, std::span<const float> b);

/// Euclidean distance accumulated in double, strictly left to right.
double euclidean(std::span<const float> a, std::span<const float> b);

// Row-major blocks: `points` is n x dim, `centroids` is m x dim.

/// k-means assignment: nearest centroid by squared L2, ties to lowest index.
void nearest_l2_serial(std::span<const float> points, std::span<const float> centroids,
                       std::size_t dim, std::span<std::uint32_t> labels,
                       std::span<float> sq_dists);
void nearest_l2(std::span<const float> points, std::span<const float> centroids,
                std::size_t dim, std::span<std::uint32_t> labels, std::span<float> sq_dists);

/// Index assignment: maximum inner product, ties to lowest index.
void argmax_ip_serial(std::span<const float> points, std::span<const float> centroids,
                      std::size_t dim, std::span<std::uint32_t> labels);
void argmax_ip(std::span<const float> points, std::span<const float> centroids,
               std::size_t dim, std::span<std::uint32_t> labels);

/// Exact top-1 of each query over `base` by inner product, ties to lowest id.
void top1_ip_serial(std::span<const float> queries, std::span<const float> base,
                    std::size_t dim, std::span<std::uint32_t> ids, std::span<float> scores);
void top1_ip(std::span<const float> queries, std::span<const float> base, std::size_t dim,
             std::span<std::uint32_t> ids, std::span<float> scores);

/// n x m matrix of Euclidean point-to-centroid distances (double).
void centroid_distances_serial(std::span<const float> points, std::span<const float> centroids,
                               std::size_t dim, std::span<double> out);
void centroid_distances(std::span<const float> points, std::span<const float> centroids,
                        std::size_t dim, std::span<double> out);

}  // namespace aivf::kernels
