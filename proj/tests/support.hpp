#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "aivf/dataset.hpp"

namespace aivf::support {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("aivf_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

// n unit vectors with i.i.d. gaussian directions.
inline VectorSet random_unit_set(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> data(n * dim);
  for (auto& x : data) x = g(rng);
  return normalize(VectorSet(dim, std::move(data)));
}

// Small well-separated synthetic set used by index and workload tests.
inline VectorSet small_synthetic(std::size_t n, std::size_t m_concepts, std::uint64_t seed,
                                 std::size_t dim = 32) {
  SynthConfig c;
  c.n = n;
  c.dim = dim;
  c.m_concepts = m_concepts;
  c.seed = seed;
  return generate_synthetic(c);
}

}  // namespace aivf::support
