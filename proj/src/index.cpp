#include "aivf/index.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "aivf/binary_io.hpp"
#include "aivf/error.hpp"
#include "aivf/kernels.hpp"

namespace aivf {

namespace {

constexpr std::string_view kIndexMagic = "AIVF";
constexpr std::uint32_t kIndexVersion = 1;

void check_dim(std::size_t got, std::size_t want) {
  if (got != want) {
    throw DataError("dimension mismatch: query has " + std::to_string(got) + ", index has " +
                    std::to_string(want));
  }
}

void keep_top(std::vector<Hit>& hits, std::size_t top_r) {
  if (hits.size() > top_r) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(top_r), hits.end(),
                      ranks_before);
    hits.resize(top_r);
  } else {
    std::sort(hits.begin(), hits.end(), ranks_before);
  }
}

}  // namespace

InvertedIndex::InvertedIndex(Centroids centroids, std::vector<PostingList> lists)
    : centroids_(std::move(centroids)), lists_(std::move(lists)) {
  if (lists_.size() != centroids_.size()) {
    throw DataError("index has " + std::to_string(lists_.size()) + " lists but " +
                    std::to_string(centroids_.size()) + " centroids");
  }
  for (const auto& l : lists_) {
    if (l.vectors.size() != l.ids.size() * centroids_.dim) {
      throw DataError("posting list payload does not match its id count");
    }
    n_total_ += l.size();
  }
}

std::vector<ClusterId> InvertedIndex::rank_centroids(std::span<const float> q,
                                                     std::size_t count) const {
  const std::size_t m = centroids_.size();
  std::vector<Hit> scored(m);
  for (std::size_t c = 0; c < m; ++c) {
    scored[c] = {static_cast<VectorId>(c), kernels::dot(q, centroids_.row(c))};
  }
  count = std::min(count, m);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(count),
                    scored.end(), ranks_before);
  std::vector<ClusterId> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = scored[i].id;
  return out;
}

SearchResult InvertedIndex::search(std::span<const float> q, std::size_t probes,
                                   std::size_t top_r) const {
  check_dim(q.size(), dim());
  const std::size_t m = num_lists();
  if (probes == 0 || probes > m) {
    throw DataError("probes must be in [1, " + std::to_string(m) + "], got " +
                    std::to_string(probes));
  }
  if (top_r == 0) throw DataError("top_r must be >= 1");

  SearchResult res;
  res.cost_centroids = m;
  res.probes_used = probes;
  std::vector<Hit> candidates;
  for (ClusterId c : rank_centroids(q, probes)) {
    const PostingList& l = lists_[c];
    res.cost_vectors += l.size();
    for (std::size_t e = 0; e < l.size(); ++e) {
      const std::span<const float> v(l.vectors.data() + e * dim(), dim());
      candidates.push_back({l.ids[e], kernels::dot(q, v)});
    }
  }
  keep_top(candidates, top_r);
  res.hits = std::move(candidates);
  return res;
}

InvertedIndex build_ivf(const VectorSet& vs, const Centroids& c) {
  if (vs.dim() != c.dim) {
    throw DataError("dimension mismatch: vectors have " + std::to_string(vs.dim()) +
                    ", centroids have " + std::to_string(c.dim));
  }
  std::vector<ClusterId> labels(vs.size());
  kernels::argmax_ip(vs.data(), c.vectors, c.dim, labels);

  std::vector<PostingList> lists(c.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    PostingList& l = lists[labels[i]];
    l.ids.push_back(vs.id(i));
    l.vectors.insert(l.vectors.end(), vs.row(i).begin(), vs.row(i).end());
  }
  return InvertedIndex(c, std::move(lists));
}

SearchResult brute_force(const VectorSet& vs, std::span<const float> q, std::size_t top_r) {
  check_dim(q.size(), vs.dim());
  if (top_r == 0) throw DataError("top_r must be >= 1");
  SearchResult res;
  res.cost_vectors = vs.size();
  std::vector<Hit> hits(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) hits[i] = {vs.id(i), kernels::dot(q, vs.row(i))};
  keep_top(hits, top_r);
  res.hits = std::move(hits);
  return res;
}

void save_index(const InvertedIndex& ix, const std::filesystem::path& path) {
  io::ByteWriter w;
  w.put_bytes(kIndexMagic);
  w.put_u32(kIndexVersion);
  w.put_u32(static_cast<std::uint32_t>(ix.num_lists()));
  w.put_u32(static_cast<std::uint32_t>(ix.dim()));
  w.put_u64(ix.n_total());
  w.put_f32s(ix.centroids().vectors);
  const std::size_t dim = ix.dim();
  for (const auto& l : ix.lists()) {
    w.put_u64(l.size());
    for (std::size_t e = 0; e < l.size(); ++e) {
      w.put_u32(l.ids[e]);
      w.put_f32s(std::span<const float>(l.vectors.data() + e * dim, dim));
    }
  }
  w.write_file(path);
}

InvertedIndex load_index(const std::filesystem::path& path) {
  auto r = io::ByteReader::from_file(path);
  if (r.take_bytes(4, "magic") != kIndexMagic) {
    throw FormatError("'" + path.string() + "' is not an AIVF index file (bad magic)");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kIndexVersion) {
    throw FormatError("unsupported index version " + std::to_string(version));
  }
  const std::uint32_t m = r.u32("list count");
  const std::uint32_t dim = r.u32("dimension");
  const std::uint64_t n_total = r.u64("vector count");
  if (m == 0 || dim == 0) throw FormatError("index header has zero lists or zero dimension");

  Centroids c;
  c.dim = dim;
  c.vectors.resize(static_cast<std::size_t>(m) * dim);
  r.f32s(c.vectors, "centroid block");

  const std::uint64_t entry_bytes = 4ull + 4ull * dim;
  std::vector<PostingList> lists(m);
  std::uint64_t seen = 0;
  for (std::uint32_t li = 0; li < m; ++li) {
    const std::uint64_t len = r.u64("list length");
    if (len > n_total - seen || len * entry_bytes > r.remaining()) {
      throw FormatError("list " + std::to_string(li) + " length " + std::to_string(len) +
                        " exceeds the remaining payload");
    }
    seen += len;
    PostingList& l = lists[li];
    l.ids.resize(len);
    l.vectors.resize(len * dim);
    for (std::uint64_t e = 0; e < len; ++e) {
      l.ids[e] = r.u32("entry id");
      r.f32s(std::span<float>(l.vectors.data() + e * dim, dim), "entry vector");
    }
  }
  if (seen != n_total) {
    throw FormatError("list lengths sum to " + std::to_string(seen) + ", header says " +
                      std::to_string(n_total));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last posting list");
  return InvertedIndex(std::move(c), std::move(lists));
}

}  // namespace aivf
