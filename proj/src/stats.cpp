#include "aivf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "aivf/error.hpp"
#include "aivf/kernels.hpp"

namespace aivf {

namespace {

constexpr std::size_t kDistanceChunk = 2048;

}  // namespace

Partition partition_of(const InvertedIndex& ix) {
  Partition p;
  p.dim = ix.dim();
  p.centroids = ix.centroids().vectors;
  p.membership.assign(ix.n_total(), 0);
  std::vector<bool> seen(ix.n_total(), false);
  for (std::size_t c = 0; c < ix.num_lists(); ++c) {
    for (VectorId id : ix.list(c).ids) {
      if (id >= ix.n_total() || seen[id]) {
        throw DataError("index ids are not a permutation of [0, n_total)");
      }
      seen[id] = true;
      p.membership[id] = static_cast<ClusterId>(c);
    }
  }
  return p;
}

Partition label_partition(const VectorSet& vs) {
  if (!vs.has_labels()) throw DataError("vector set carries no labels");
  const auto labels = vs.labels();
  const std::size_t k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  const std::size_t dim = vs.dim();
  std::vector<double> sums(k * dim, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    ++counts[labels[i]];
    const auto r = vs.row(i);
    for (std::size_t j = 0; j < dim; ++j) sums[labels[i] * dim + j] += r[j];
  }
  Partition p;
  p.dim = dim;
  p.centroids.resize(k * dim, 0.0f);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      p.centroids[c * dim + j] = static_cast<float>(sums[c * dim + j] / static_cast<double>(counts[c]));
    }
  }
  p.membership.assign(labels.begin(), labels.end());
  return p;
}

std::vector<std::uint64_t> cluster_frequency(const InvertedIndex& ix) {
  std::vector<std::uint64_t> f(ix.num_lists());
  for (std::size_t c = 0; c < ix.num_lists(); ++c) f[c] = ix.list(c).size();
  return f;
}

std::vector<std::uint64_t> cluster_frequency(const Partition& p) {
  std::vector<std::uint64_t> f(p.num_clusters(), 0);
  for (ClusterId c : p.membership) ++f[c];
  return f;
}

Coherence cluster_coherence(const VectorSet& vs, const Partition& p) {
  const std::size_t m = p.num_clusters();
  const std::size_t dim = vs.dim();
  if (p.dim != dim) throw DataError("partition and vector set dimensions differ");
  if (p.membership.size() != vs.size()) throw DataError("partition does not cover the vector set");

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> radius(m, 0.0);
  std::vector<double> foreign(m, inf);
  std::vector<bool> occupied(m, false);

  std::vector<double> dist(kDistanceChunk * m);
  for (std::size_t start = 0; start < vs.size(); start += kDistanceChunk) {
    const std::size_t count = std::min(kDistanceChunk, vs.size() - start);
    kernels::centroid_distances(vs.data().subspan(start * dim, count * dim), p.centroids, dim,
                                std::span<double>(dist.data(), count * m));
    for (std::size_t k = 0; k < count; ++k) {
      const ClusterId own = p.membership[start + k];
      const double* row = dist.data() + k * m;
      for (std::size_t c = 0; c < m; ++c) {
        if (c == own) {
          occupied[c] = true;
          radius[c] = std::max(radius[c], row[c]);
        } else {
          foreign[c] = std::min(foreign[c], row[c]);
        }
      }
    }
  }

  Coherence out;
  out.radius = radius;
  out.coherence.resize(m);
  for (std::size_t c = 0; c < m; ++c) {
    if (!occupied[c]) continue;
    if (radius[c] < kRadiusFloor || foreign[c] == inf) {
      out.coherence[c] = foreign[c] == inf
                             ? kCoherenceCap
                             : std::min((foreign[c] - radius[c]) / kRadiusFloor, kCoherenceCap);
    } else {
      out.coherence[c] = (foreign[c] - radius[c]) / radius[c];
    }
  }
  return out;
}

Coherence cluster_coherence(const VectorSet& vs, const InvertedIndex& ix) {
  if (ix.n_total() != vs.size()) {
    throw DataError("index holds " + std::to_string(ix.n_total()) + " vectors, set holds " +
                    std::to_string(vs.size()));
  }
  return cluster_coherence(vs, partition_of(ix));
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw DataError("percentile of an empty sequence");
  if (!(p >= 0.0 && p <= 1.0)) throw DataError("percentile level must be in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Absorb representation error so that e.g. 0.2 * 15 ranks as 3, not 4.
  const double rank = std::ceil(p * static_cast<double>(sorted.size()) - 1e-9);
  const std::size_t idx = rank < 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
  return sorted[std::min(idx, sorted.size() - 1)];
}

ClusterStats compute_stats(const VectorSet& vs, const Partition& p, PercentileLevels levels) {
  if (!(levels.low < levels.high)) throw ConfigError("percentile levels must be increasing");
  ClusterStats s;
  s.frequency = cluster_frequency(p);
  auto coh = cluster_coherence(vs, p);
  s.radius = std::move(coh.radius);
  s.coherence = std::move(coh.coherence);

  std::vector<double> nonempty;
  for (auto f : s.frequency) {
    if (f > 0) nonempty.push_back(static_cast<double>(f));
  }
  if (nonempty.empty()) throw DataError("every cluster is empty");
  s.f_low = percentile(nonempty, levels.low);
  s.f_high = percentile(nonempty, levels.high);
  return s;
}

ClusterStats compute_stats(const VectorSet& vs, const InvertedIndex& ix, PercentileLevels levels) {
  if (ix.n_total() != vs.size()) {
    throw DataError("index holds " + std::to_string(ix.n_total()) + " vectors, set holds " +
                    std::to_string(vs.size()));
  }
  return compute_stats(vs, partition_of(ix), levels);
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> frequencies,
                          std::span<const std::optional<double>> coherences) {
  if (frequencies.size() != coherences.size()) {
    throw DataError("frequency and coherence sequences differ in length");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  PowerLawFit fit;
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (frequencies[i] > 0 && coherences[i] && *coherences[i] > 0.0) {
      xs.push_back(std::log(static_cast<double>(frequencies[i])));
      ys.push_back(std::log(*coherences[i]));
    } else {
      ++fit.excluded;
    }
  }
  fit.used = xs.size();
  if (fit.used < 3) {
    throw DataError("power-law fit needs >= 3 clusters with positive frequency and coherence, got " +
                    std::to_string(fit.used));
  }
  const double n = static_cast<double>(fit.used);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  // Exact comparison: identical logs can still leave a rounding residue in sxx.
  const bool flat_x = std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
  if (flat_x || sxx == 0.0) {
    // All frequencies equal: no slope is identifiable, report a flat line.
    fit.alpha_hat = 0.0;
    fit.intercept = my;
    fit.r_squared = 0.0;
    return fit;
  }
  fit.alpha_hat = sxy / sxx;
  fit.intercept = my - fit.alpha_hat * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.alpha_hat * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace aivf
