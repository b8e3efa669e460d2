// Serial reference kernels against their OpenMP versions.
//   ./kernel_bench --benchmark_filter=ArgmaxIp
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include <omp.h>

#include "aivf/index.hpp"
#include "aivf/kernels.hpp"
#include "aivf/policy.hpp"
#include "aivf/quantizer.hpp"

using namespace aivf;

namespace {

constexpr std::size_t kDim = 64;

std::vector<float> random_rows(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> v(n * kDim);
  for (auto& x : v) x = g(rng);
  return v;
}

using PairKernel = void (*)(std::span<const float>, std::span<const float>, std::size_t,
                            std::span<std::uint32_t>, std::span<float>);

template <PairKernel K>
void BM_NearestL2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto points = random_rows(n, 1);
  const auto centers = random_rows(256, 2);
  std::vector<std::uint32_t> labels(n);
  std::vector<float> dists(n);
  for (auto _ : state) {
    K(points, centers, kDim, labels, dists);
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <void (*K)(std::span<const float>, std::span<const float>, std::size_t,
                    std::span<std::uint32_t>)>
void BM_ArgmaxIp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto points = random_rows(n, 3);
  const auto centers = random_rows(256, 4);
  std::vector<std::uint32_t> labels(n);
  for (auto _ : state) {
    K(points, centers, kDim, labels);
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <PairKernel K>
void BM_Top1Ip(benchmark::State& state) {
  const auto nq = static_cast<std::size_t>(state.range(0));
  const auto queries = random_rows(nq, 5);
  const auto base = random_rows(20000, 6);
  std::vector<std::uint32_t> ids(nq);
  std::vector<float> scores(nq);
  for (auto _ : state) {
    K(queries, base, kDim, ids, scores);
    benchmark::DoNotOptimize(ids.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nq));
}

template <void (*K)(std::span<const float>, std::span<const float>, std::size_t, std::span<double>)>
void BM_CentroidDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto points = random_rows(n, 7);
  const auto centers = random_rows(256, 8);
  std::vector<double> out(n * 256);
  for (auto _ : state) {
    K(points, centers, kDim, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_Telemetry(benchmark::State& state) {
  std::vector<float> rows = random_rows(20000, 9);
  for (std::size_t i = 0; i < 20000; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < kDim; ++j) norm += rows[i * kDim + j] * rows[i * kDim + j];
    for (std::size_t j = 0; j < kDim; ++j) rows[i * kDim + j] /= static_cast<float>(std::sqrt(norm));
  }
  const VectorSet vs(kDim, rows);
  KmeansOptions o;
  o.m = 64;
  o.max_iters = 5;
  const auto ix = build_ivf(vs, train_kmeans(vs, o));
  const auto policy = uniform_policy(static_cast<std::size_t>(state.range(0)), ix.num_lists());
  const auto queries = random_rows(500, 10);
  for (auto _ : state) {
    auto run = Parallel ? run_with_telemetry(policy, ix, queries, 1)
                        : run_with_telemetry_serial(policy, ix, queries, 1);
    benchmark::DoNotOptimize(run.telemetry.mean_cost);
  }
  state.SetItemsProcessed(state.iterations() * 500);
}

}  // namespace

BENCHMARK(BM_NearestL2<kernels::nearest_l2_serial>)->Name("NearestL2/serial")->Arg(50000);
BENCHMARK(BM_NearestL2<kernels::nearest_l2>)->Name("NearestL2/omp")->Arg(50000);
BENCHMARK(BM_ArgmaxIp<kernels::argmax_ip_serial>)->Name("ArgmaxIp/serial")->Arg(50000);
BENCHMARK(BM_ArgmaxIp<kernels::argmax_ip>)->Name("ArgmaxIp/omp")->Arg(50000);
BENCHMARK(BM_Top1Ip<kernels::top1_ip_serial>)->Name("Top1Ip/serial")->Arg(500);
BENCHMARK(BM_Top1Ip<kernels::top1_ip>)->Name("Top1Ip/omp")->Arg(500);
BENCHMARK(BM_CentroidDistances<kernels::centroid_distances_serial>)
    ->Name("CentroidDistances/serial")
    ->Arg(4096);
BENCHMARK(BM_CentroidDistances<kernels::centroid_distances>)->Name("CentroidDistances/omp")->Arg(4096);
BENCHMARK(BM_Telemetry<false>)->Name("Telemetry/serial")->Arg(8);
BENCHMARK(BM_Telemetry<true>)->Name("Telemetry/omp")->Arg(8);

BENCHMARK_MAIN();
