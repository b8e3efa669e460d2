#include "aivf/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "aivf/error.hpp"
#include "aivf/kernels.hpp"

namespace aivf {

namespace {

// Greedy k-means++: each step draws several D^2-weighted candidates and keeps
// the one leaving the smallest total potential.
std::vector<float> seed_plus_plus(const VectorSet& vs, std::size_t m, std::mt19937_64& rng) {
  const std::size_t n = vs.size();
  const std::size_t dim = vs.dim();
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(m)));
  std::vector<float> centers;
  centers.reserve(m * dim);

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t first = pick(rng);
  centers.insert(centers.end(), vs.row(first).begin(), vs.row(first).end());

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = kernels::squared_l2(vs.row(i), vs.row(first));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> candidate(n);
  std::vector<double> best(n);
  for (std::size_t c = 1; c < m; ++c) {
    const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
    if (!(total > 0.0)) {
      // Fewer distinct points than clusters; duplicates get repaired later.
      const auto row = vs.row(pick(rng));
      centers.insert(centers.end(), row.begin(), row.end());
      continue;
    }
    std::size_t chosen = n;
    double chosen_potential = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double target = unit(rng) * total;
      double running = 0.0;
      std::size_t draw = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        running += nearest[i];
        if (running > target && nearest[i] > 0.0) {
          draw = i;
          break;
        }
      }
      const auto row = vs.row(draw);
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto k = static_cast<std::size_t>(i);
        candidate[k] = std::min(nearest[k], static_cast<double>(kernels::squared_l2(vs.row(k), row)));
      }
      const double potential = std::accumulate(candidate.begin(), candidate.end(), 0.0);
      if (chosen == n || potential < chosen_potential) {
        chosen = draw;
        chosen_potential = potential;
        best.swap(candidate);
      }
    }
    const auto row = vs.row(chosen);
    centers.insert(centers.end(), row.begin(), row.end());
    nearest.swap(best);
  }
  return centers;
}

}  // namespace

Centroids train_kmeans(const VectorSet& vs, const KmeansOptions& options) {
  const std::size_t n = vs.size();
  const std::size_t dim = vs.dim();
  const std::size_t m = options.m;
  if (m == 0) throw ConfigError("k-means needs m >= 1");
  if (m > n) {
    throw ConfigError("k-means needs m <= n, got m=" + std::to_string(m) + " n=" +
                      std::to_string(n));
  }
  if (options.max_iters < 1) throw ConfigError("k-means needs max_iters >= 1");

  std::mt19937_64 rng(options.seed);
  Centroids out;
  out.dim = dim;
  out.vectors = seed_plus_plus(vs, m, rng);

  std::vector<std::uint32_t> labels(n);
  std::vector<float> dists(n);
  std::vector<double> sums(m * dim);
  std::vector<std::size_t> counts(m);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    if (options.trace) options.trace->push_back(out.vectors);
    kernels::nearest_l2(vs.data(), out.vectors, dim, labels, dists);

    double sse = 0.0;
    for (float d : dists) sse += d;
    out.sse_history.push_back(sse);
    out.iterations_run = iter + 1;
    out.train_sse = sse;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = labels[i];
      ++counts[c];
      const auto r = vs.row(i);
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += r[j];
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        out.vectors[c * dim + j] =
            static_cast<float>(sums[c * dim + j] / static_cast<double>(counts[c]));
      }
    }

    // Empty clusters take the points currently farthest from their centroid,
    // one distinct point each.
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < m; ++c) {
      if (counts[c] == 0) empty.push_back(c);
    }
    if (!empty.empty()) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(empty.size()),
                        order.end(), [&](std::size_t a, std::size_t b) {
                          return dists[a] != dists[b] ? dists[a] > dists[b] : a < b;
                        });
      for (std::size_t e = 0; e < empty.size(); ++e) {
        const auto r = vs.row(order[e]);
        std::copy(r.begin(), r.end(), out.vectors.begin() + static_cast<std::ptrdiff_t>(empty[e] * dim));
      }
      continue;
    }

    if (iter > 0) {
      const double prev = out.sse_history[out.sse_history.size() - 2];
      if (prev <= 0.0 || (prev - sse) / prev < options.tolerance) break;
    }
  }

  // The final mean update can leave a cell empty; park each such centroid on
  // a distinct far point so every returned cluster owns at least one row.
  for (std::size_t round = 0; round < m; ++round) {
    kernels::nearest_l2(vs.data(), out.vectors, dim, labels, dists);
    std::fill(counts.begin(), counts.end(), 0);
    for (auto l : labels) ++counts[l];
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < m; ++c) {
      if (counts[c] == 0) empty.push_back(c);
    }
    if (empty.empty()) break;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dists[a] > dists[b]; });
    for (std::size_t e = 0; e < empty.size(); ++e) {
      const auto r = vs.row(order[e]);
      std::copy(r.begin(), r.end(), out.vectors.begin() + static_cast<std::ptrdiff_t>(empty[e] * dim));
    }
  }
  return out;
}

ClusterId assign(const Centroids& c, std::span<const float> v) {
  if (v.size() != c.dim) {
    throw DataError("dimension mismatch: vector has " + std::to_string(v.size()) +
                    ", centroids have " + std::to_string(c.dim));
  }
  ClusterId label = 0;
  kernels::argmax_ip_serial(v, c.vectors, c.dim, std::span<ClusterId>(&label, 1));
  return label;
}

}  // namespace aivf
