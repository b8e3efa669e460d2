#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace aivf {

using VectorId = std::uint32_t;

/// Dense row-major collection of float vectors. Row i has id i, so ids are
/// dense in [0, n) by construction. Labels, when present, record the
/// generator concept each row was drawn from.
class VectorSet {
 public:
  VectorSet() = default;
  /// Throws DataError if dim < 2 or data.size() is not a multiple of dim, or
  /// if labels are given with the wrong length.
  VectorSet(std::size_t dim, std::vector<float> data,
            std::optional<std::vector<std::uint32_t>> labels = std::nullopt);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return size() == 0; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const float> data() const { return data_; }
  VectorId id(std::size_t i) const { return static_cast<VectorId>(i); }

  bool has_labels() const { return labels_.has_value(); }
  std::span<const std::uint32_t> labels() const;

  friend bool operator==(const VectorSet&, const VectorSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::optional<std::vector<std::uint32_t>> labels_;
};

struct SynthConfig {
  std::size_t n = 50000;
  std::size_t dim = 64;
  std::size_t m_concepts = 128;
  double zipf_exponent_sizes = 0.3;
  double alpha = 0.5;
  double base_spread = 0.02;
  std::uint64_t seed = 1;
};

/// Zipfian concept sizes summing exactly to n: largest-remainder rounding of
/// n * (c+1)^-s / H, then any zero-sized concept borrows one vector from the
/// last of the largest concepts. Result is non-increasing.
std::vector<std::size_t> concept_sizes(std::size_t n, std::size_t m_concepts, double exponent);

/// Gaussian mixture on the unit sphere whose per-concept spread shrinks as a
/// power of concept size: sigma_c = base_spread * (size_c / size_0)^-alpha.
/// Rows are grouped by concept (concept 0 first) and labelled.
VectorSet generate_synthetic(const SynthConfig& config);

/// Scales every row to unit L2 norm. Throws DataError naming the first
/// zero-norm row.
VectorSet normalize(const VectorSet& vs);

/// "AVF1" format: magic, u32 n, u32 dim, u8 has_labels, 3 zero bytes,
/// n*dim f32 row-major, then n u32 labels if flagged. All little-endian.
void save_vectors(const VectorSet& vs, const std::filesystem::path& path);
VectorSet load_vectors(const std::filesystem::path& path);

}  // namespace aivf
