#include "aivf/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace aivf::kernels {

float dot(std::span<const float> a, std::span<const float> b) {
  const std::size_t n = a.size();
  const float* x = a.data();
  const float* y = b.data();
  float s = 0.0f;
#pragma omp simd reduction(+ : s)
  for (std::size_t j = 0; j < n; ++j) s += x[j] * y[j];
  return s;
}

float squared_l2(std::span<const float> a, std::span<const float> b) {
  const std::size_t n = a.size();
  const float* x = a.data();
  const float* y = b.data();
  float s = 0.0f;
#pragma omp simd reduction(+ : s)
  for (std::size_t j = 0; j < n; ++j) {
    const float d = x[j] - y[j];
    s += d * d;
  }
  return s;
}

double euclidean(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = static_cast<double>(a[j]) - static_cast<double>(b[j]);
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

inline std::span<const float> row(std::span<const float> block, std::size_t i, std::size_t dim) {
  return block.subspan(i * dim, dim);
}

inline void nearest_l2_one(std::span<const float> p, std::span<const float> centroids,
                           std::size_t m, std::size_t dim, std::uint32_t& label, float& dist) {
  float best = std::numeric_limits<float>::infinity();
  std::uint32_t arg = 0;
  for (std::size_t c = 0; c < m; ++c) {
    const float d = squared_l2(p, row(centroids, c, dim));
    if (d < best) {
      best = d;
      arg = static_cast<std::uint32_t>(c);
    }
  }
  label = arg;
  dist = best;
}

inline std::uint32_t argmax_ip_one(std::span<const float> p, std::span<const float> block,
                                   std::size_t count, std::size_t dim, float& score) {
  float best = -std::numeric_limits<float>::infinity();
  std::uint32_t arg = 0;
  for (std::size_t c = 0; c < count; ++c) {
    const float s = dot(p, row(block, c, dim));
    if (s > best) {
      best = s;
      arg = static_cast<std::uint32_t>(c);
    }
  }
  score = best;
  return arg;
}

}  // namespace

void nearest_l2_serial(std::span<const float> points, std::span<const float> centroids,
                       std::size_t dim, std::span<std::uint32_t> labels,
                       std::span<float> sq_dists) {
  const std::size_t n = points.size() / dim;
  const std::size_t m = centroids.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    nearest_l2_one(row(points, i, dim), centroids, m, dim, labels[i], sq_dists[i]);
  }
}

void nearest_l2(std::span<const float> points, std::span<const float> centroids,
                std::size_t dim, std::span<std::uint32_t> labels, std::span<float> sq_dists) {
  const auto n = static_cast<std::ptrdiff_t>(points.size() / dim);
  const std::size_t m = centroids.size() / dim;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    nearest_l2_one(row(points, k, dim), centroids, m, dim, labels[k], sq_dists[k]);
  }
}

void argmax_ip_serial(std::span<const float> points, std::span<const float> centroids,
                      std::size_t dim, std::span<std::uint32_t> labels) {
  const std::size_t n = points.size() / dim;
  const std::size_t m = centroids.size() / dim;
  float unused = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = argmax_ip_one(row(points, i, dim), centroids, m, dim, unused);
  }
}

void argmax_ip(std::span<const float> points, std::span<const float> centroids,
               std::size_t dim, std::span<std::uint32_t> labels) {
  const auto n = static_cast<std::ptrdiff_t>(points.size() / dim);
  const std::size_t m = centroids.size() / dim;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    float unused = 0.0f;
    const auto k = static_cast<std::size_t>(i);
    labels[k] = argmax_ip_one(row(points, k, dim), centroids, m, dim, unused);
  }
}

void top1_ip_serial(std::span<const float> queries, std::span<const float> base,
                    std::size_t dim, std::span<std::uint32_t> ids, std::span<float> scores) {
  const std::size_t nq = queries.size() / dim;
  const std::size_t n = base.size() / dim;
  for (std::size_t i = 0; i < nq; ++i) {
    ids[i] = argmax_ip_one(row(queries, i, dim), base, n, dim, scores[i]);
  }
}

void top1_ip(std::span<const float> queries, std::span<const float> base, std::size_t dim,
             std::span<std::uint32_t> ids, std::span<float> scores) {
  const auto nq = static_cast<std::ptrdiff_t>(queries.size() / dim);
  const std::size_t n = base.size() / dim;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < nq; ++i) {
    const auto k = static_cast<std::size_t>(i);
    ids[k] = argmax_ip_one(row(queries, k, dim), base, n, dim, scores[k]);
  }
}

void centroid_distances_serial(std::span<const float> points, std::span<const float> centroids,
                               std::size_t dim, std::span<double> out) {
  const std::size_t n = points.size() / dim;
  const std::size_t m = centroids.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < m; ++c) {
      out[i * m + c] = euclidean(row(points, i, dim), row(centroids, c, dim));
    }
  }
}

void centroid_distances(std::span<const float> points, std::span<const float> centroids,
                        std::size_t dim, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(points.size() / dim);
  const std::size_t m = centroids.size() / dim;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    for (std::size_t c = 0; c < m; ++c) {
      out[k * m + c] = euclidean(row(points, k, dim), row(centroids, c, dim));
    }
  }
}

}  // namespace aivf::kernels
