#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "aivf/dataset.hpp"
#include "aivf/quantizer.hpp"

namespace aivf {

/// One posting list: ids in ascending order and their vectors, row-major.
struct PostingList {
  std::vector<VectorId> ids;
  std::vector<float> vectors;

  std::size_t size() const { return ids.size(); }
};

struct Hit {
  VectorId id = 0;
  float score = 0.0f;

  friend bool operator==(const Hit&, const Hit&) = default;
};

/// Ranking order used everywhere: higher score first, then lower id.
inline bool ranks_before(const Hit& a, const Hit& b) {
  return a.score != b.score ? a.score > b.score : a.id < b.id;
}

struct SearchResult {
  std::vector<Hit> hits;
  /// List entries scored. Centroid scoring is counted separately.
  std::uint64_t cost_vectors = 0;
  std::uint64_t cost_centroids = 0;
  std::size_t probes_used = 0;
};

/// Flat inverted file. Immutable after build; search() is safe to call
/// concurrently.
class InvertedIndex {
 public:
  InvertedIndex() = default;
  InvertedIndex(Centroids centroids, std::vector<PostingList> lists);

  const Centroids& centroids() const { return centroids_; }
  const std::vector<PostingList>& lists() const { return lists_; }
  const PostingList& list(std::size_t c) const { return lists_[c]; }
  std::size_t num_lists() const { return lists_.size(); }
  std::size_t dim() const { return centroids_.dim; }
  std::uint64_t n_total() const { return n_total_; }

  /// Cluster ids ordered by inner product with q (desc, id asc), first
  /// `count` only.
  std::vector<ClusterId> rank_centroids(std::span<const float> q, std::size_t count) const;

  SearchResult search(std::span<const float> q, std::size_t probes, std::size_t top_r) const;

 private:
  Centroids centroids_;
  std::vector<PostingList> lists_;
  std::uint64_t n_total_ = 0;
};

/// Appends each row to the list of assign(c, row); lists keep ascending ids.
InvertedIndex build_ivf(const VectorSet& vs, const Centroids& c);

/// Exact top_r by inner product over the whole set; cost_vectors = n.
SearchResult brute_force(const VectorSet& vs, std::span<const float> q, std::size_t top_r);

/// "AIVF" v1: magic, u32 version, u32 m, u32 dim, u64 n_total, centroids
/// (m*dim f32), then per list u64 length and (u32 id, dim f32) entries.
/// Training diagnostics are not persisted.
void save_index(const InvertedIndex& ix, const std::filesystem::path& path);
InvertedIndex load_index(const std::filesystem::path& path);

}  // namespace aivf
