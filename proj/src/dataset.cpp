#include "aivf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "aivf/binary_io.hpp"
#include "aivf/error.hpp"

namespace aivf {

namespace {

constexpr std::string_view kVectorMagic = "AVF1";
constexpr double kMaxCenterCosine = 0.8;
constexpr int kMaxCenterAttempts = 10000;

double squared_norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return s;
}

void random_unit(std::mt19937_64& rng, std::span<double> out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : out) {
      x = gauss(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& x : out) x /= norm;
}

}  // namespace

VectorSet::VectorSet(std::size_t dim, std::vector<float> data,
                     std::optional<std::vector<std::uint32_t>> labels)
    : dim_(dim), data_(std::move(data)), labels_(std::move(labels)) {
  if (dim_ < 2) throw DataError("vector dimension must be >= 2, got " + std::to_string(dim_));
  if (data_.size() % dim_ != 0) {
    throw DataError("payload of " + std::to_string(data_.size()) +
                    " floats is not a multiple of dim " + std::to_string(dim_));
  }
  if (labels_ && labels_->size() != size()) {
    throw DataError("label count " + std::to_string(labels_->size()) + " != row count " +
                    std::to_string(size()));
  }
}

std::span<const std::uint32_t> VectorSet::labels() const {
  if (!labels_) return {};
  return *labels_;
}

std::vector<std::size_t> concept_sizes(std::size_t n, std::size_t m_concepts, double exponent) {
  if (m_concepts == 0) throw ConfigError("m_concepts must be positive");
  if (n < m_concepts) {
    throw ConfigError("n=" + std::to_string(n) + " is smaller than m_concepts=" +
                      std::to_string(m_concepts));
  }
  std::vector<double> weights(m_concepts);
  for (std::size_t c = 0; c < m_concepts; ++c) {
    weights[c] = std::pow(static_cast<double>(c + 1), -exponent);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::vector<std::size_t> sizes(m_concepts);
  std::vector<double> remainder(m_concepts);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < m_concepts; ++c) {
    const double quota = static_cast<double>(n) * weights[c] / total;
    sizes[c] = static_cast<std::size_t>(std::floor(quota));
    remainder[c] = quota - std::floor(quota);
    assigned += sizes[c];
  }
  std::vector<std::size_t> order(m_concepts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % m_concepts]];

  // Every concept needs at least one vector. Borrow from the last concept
  // holding the current maximum so the sequence stays non-increasing.
  for (std::size_t c = 0; c < m_concepts; ++c) {
    if (sizes[c] > 0) continue;
    const std::size_t max_size = sizes[0];
    std::size_t donor = 0;
    while (donor + 1 < m_concepts && sizes[donor + 1] == max_size) ++donor;
    --sizes[donor];
    sizes[c] = 1;
  }
  return sizes;
}

VectorSet generate_synthetic(const SynthConfig& config) {
  if (config.dim < 2) throw ConfigError("dim must be >= 2");
  if (config.m_concepts < 2) throw ConfigError("m_concepts must be >= 2");
  if (!(config.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(config.base_spread > 0.0)) throw ConfigError("base_spread must be > 0");
  if (config.zipf_exponent_sizes < 0.0) throw ConfigError("zipf_exponent_sizes must be >= 0");

  const auto sizes = concept_sizes(config.n, config.m_concepts, config.zipf_exponent_sizes);
  const std::size_t dim = config.dim;
  std::mt19937_64 rng(config.seed);

  std::vector<double> centers(config.m_concepts * dim);
  for (std::size_t c = 0; c < config.m_concepts; ++c) {
    std::span<double> center(centers.data() + c * dim, dim);
    int attempts = 0;
    for (;;) {
      random_unit(rng, center);
      bool ok = true;
      for (std::size_t prev = 0; prev < c && ok; ++prev) {
        double ip = 0.0;
        for (std::size_t j = 0; j < dim; ++j) ip += center[j] * centers[prev * dim + j];
        ok = ip <= kMaxCenterCosine;
      }
      if (ok) break;
      if (++attempts == kMaxCenterAttempts) {
        throw ConfigError("cannot place " + std::to_string(config.m_concepts) +
                          " separated concept centers in dim " + std::to_string(dim));
      }
    }
  }

  std::vector<float> data;
  data.reserve(config.n * dim);
  std::vector<std::uint32_t> labels;
  labels.reserve(config.n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> point(dim);
  for (std::size_t c = 0; c < config.m_concepts; ++c) {
    const double ratio = static_cast<double>(sizes[c]) / static_cast<double>(sizes[0]);
    const double sigma = config.base_spread * std::pow(ratio, -config.alpha);
    for (std::size_t k = 0; k < sizes[c]; ++k) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          point[j] = centers[c * dim + j] + sigma * gauss(rng);
          norm += point[j] * point[j];
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (std::size_t j = 0; j < dim; ++j) data.push_back(static_cast<float>(point[j] / norm));
      labels.push_back(static_cast<std::uint32_t>(c));
    }
  }
  return VectorSet(dim, std::move(data), std::move(labels));
}

VectorSet normalize(const VectorSet& vs) {
  std::vector<float> out(vs.data().begin(), vs.data().end());
  const std::size_t dim = vs.dim();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double norm = std::sqrt(squared_norm(vs.row(i)));
    if (norm == 0.0) throw DataError("cannot normalize zero-norm row id " + std::to_string(i));
    for (std::size_t j = 0; j < dim; ++j) {
      out[i * dim + j] = static_cast<float>(static_cast<double>(out[i * dim + j]) / norm);
    }
  }
  std::optional<std::vector<std::uint32_t>> labels;
  if (vs.has_labels()) labels.emplace(vs.labels().begin(), vs.labels().end());
  return VectorSet(dim, std::move(out), std::move(labels));
}

void save_vectors(const VectorSet& vs, const std::filesystem::path& path) {
  io::ByteWriter w;
  w.put_bytes(kVectorMagic);
  w.put_u32(static_cast<std::uint32_t>(vs.size()));
  w.put_u32(static_cast<std::uint32_t>(vs.dim()));
  w.put_u8(vs.has_labels() ? 1 : 0);
  w.put_u8(0);
  w.put_u8(0);
  w.put_u8(0);
  w.put_f32s(vs.data());
  for (std::uint32_t label : vs.labels()) w.put_u32(label);
  w.write_file(path);
}

VectorSet load_vectors(const std::filesystem::path& path) {
  auto r = io::ByteReader::from_file(path);
  if (r.take_bytes(4, "magic") != kVectorMagic) {
    throw FormatError("'" + path.string() + "' is not an AVF1 vector file (bad magic)");
  }
  const std::uint32_t n = r.u32("row count");
  const std::uint32_t dim = r.u32("dimension");
  const std::uint8_t has_labels = r.u8("label flag");
  r.take_bytes(3, "header padding");
  if (has_labels > 1) throw FormatError("label flag must be 0 or 1");
  if (dim < 2) throw FormatError("header dimension " + std::to_string(dim) + " < 2");

  const std::uint64_t expected =
      4ull * n * dim + (has_labels ? 4ull * n : 0ull);
  if (r.remaining() != expected) {
    const char* kind = r.remaining() < expected ? "truncated payload" : "payload size mismatch";
    throw FormatError(std::string(kind) + " in '" + path.string() + "': header n=" +
                      std::to_string(n) + " dim=" + std::to_string(dim) + " implies " +
                      std::to_string(expected) + " bytes, file holds " +
                      std::to_string(r.remaining()));
  }
  std::vector<float> data(static_cast<std::size_t>(n) * dim);
  r.f32s(data, "vector payload");
  std::optional<std::vector<std::uint32_t>> labels;
  if (has_labels) {
    labels.emplace(n);
    for (auto& label : *labels) label = r.u32("labels");
  }
  return VectorSet(dim, std::move(data), std::move(labels));
}

}  // namespace aivf
