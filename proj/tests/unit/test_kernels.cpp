#include <gtest/gtest.h>

#include <cstring>

#include <omp.h>

#include "aivf/kernels.hpp"
#include "support.hpp"

using namespace aivf;

namespace {

template <typename T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

struct Blocks {
  VectorSet points = support::random_unit_set(1500, 24, 11);
  VectorSet centers = support::random_unit_set(37, 24, 12);
};

}  // namespace

TEST(Kernels, ScalarsAgreeWithDoubleReference) {
  const auto vs = support::random_unit_set(2, 33, 5);
  double ip = 0.0, l2 = 0.0;
  for (std::size_t j = 0; j < 33; ++j) {
    ip += double(vs.row(0)[j]) * vs.row(1)[j];
    const double d = double(vs.row(0)[j]) - vs.row(1)[j];
    l2 += d * d;
  }
  EXPECT_NEAR(kernels::dot(vs.row(0), vs.row(1)), ip, 1e-6);
  EXPECT_NEAR(kernels::squared_l2(vs.row(0), vs.row(1)), l2, 1e-6);
  EXPECT_DOUBLE_EQ(kernels::euclidean(vs.row(0), vs.row(1)), std::sqrt(l2));
}

TEST(Kernels, NearestL2SerialEqualsParallel) {
  Blocks b;
  const std::size_t n = b.points.size();
  std::vector<std::uint32_t> l1(n), l2(n);
  std::vector<float> d1(n), d2(n);
  kernels::nearest_l2_serial(b.points.data(), b.centers.data(), 24, l1, d1);
  omp_set_num_threads(4);
  kernels::nearest_l2(b.points.data(), b.centers.data(), 24, l2, d2);
  EXPECT_EQ(l1, l2);
  EXPECT_TRUE(same_bits(d1, d2));
}

TEST(Kernels, ArgmaxIpSerialEqualsParallel) {
  Blocks b;
  const std::size_t n = b.points.size();
  std::vector<std::uint32_t> l1(n), l2(n);
  kernels::argmax_ip_serial(b.points.data(), b.centers.data(), 24, l1);
  omp_set_num_threads(4);
  kernels::argmax_ip(b.points.data(), b.centers.data(), 24, l2);
  EXPECT_EQ(l1, l2);
}

TEST(Kernels, Top1IpSerialEqualsParallel) {
  Blocks b;
  const std::size_t q = b.centers.size();
  std::vector<std::uint32_t> i1(q), i2(q);
  std::vector<float> s1(q), s2(q);
  kernels::top1_ip_serial(b.centers.data(), b.points.data(), 24, i1, s1);
  omp_set_num_threads(4);
  kernels::top1_ip(b.centers.data(), b.points.data(), 24, i2, s2);
  EXPECT_EQ(i1, i2);
  EXPECT_TRUE(same_bits(s1, s2));
}

TEST(Kernels, CentroidDistancesSerialEqualsParallel) {
  Blocks b;
  std::vector<double> d1(b.points.size() * b.centers.size()), d2(d1.size());
  kernels::centroid_distances_serial(b.points.data(), b.centers.data(), 24, d1);
  omp_set_num_threads(4);
  kernels::centroid_distances(b.points.data(), b.centers.data(), 24, d2);
  EXPECT_TRUE(same_bits(d1, d2));
  EXPECT_DOUBLE_EQ(d1[5 * b.centers.size() + 3],
                   kernels::euclidean(b.points.row(5), b.centers.row(3)));
}

TEST(Kernels, TiesGoToLowestIndex) {
  // Two identical centroids: both L2 and IP scans must pick the first.
  const std::vector<float> centers = {0, 1, 1, 0, 1, 0};
  const std::vector<float> point = {1, 0};
  std::vector<std::uint32_t> label(1);
  std::vector<float> dist(1);
  kernels::nearest_l2_serial(point, centers, 2, label, dist);
  EXPECT_EQ(label[0], 1u);
  kernels::argmax_ip_serial(point, centers, 2, label);
  EXPECT_EQ(label[0], 1u);
}
