#include <gtest/gtest.h>

#include <set>

#include <omp.h>

#include "aivf/error.hpp"
#include "aivf/policy.hpp"
#include "support.hpp"

using namespace aivf;

namespace {

struct Fixture {
  VectorSet vs;
  InvertedIndex ix;
  ClusterStats stats;
};

Fixture heterogeneous() {
  SynthConfig g;
  g.n = 6000;
  g.dim = 32;
  g.m_concepts = 40;
  g.zipf_exponent_sizes = 1.0;
  Fixture f{generate_synthetic(g), {}, {}};
  KmeansOptions o;
  o.m = 40;
  f.ix = build_ivf(f.vs, train_kmeans(f.vs, o));
  f.stats = compute_stats(f.vs, f.ix);
  return f;
}

std::size_t first_in_tier(const ProbePolicy& p, Tier t) {
  for (std::size_t c = 0; c < p.tiers.size(); ++c) {
    if (p.tiers[c] == t) return c;
  }
  return p.tiers.size();
}

}  // namespace

TEST(Probes, TierMultipliersAtTen) {
  const TierMultipliers d;
  EXPECT_EQ(resolve_probes(d.tail, 10, 256), 40u);
  EXPECT_EQ(resolve_probes(d.body, 10, 256), 10u);
  EXPECT_EQ(resolve_probes(d.head, 10, 256), 5u);
}

TEST(Probes, RoundHalfUpAndClamp) {
  EXPECT_EQ(resolve_probes(0.5, 1, 256), 1u);
  EXPECT_EQ(resolve_probes(0.5, 3, 256), 2u);
  EXPECT_EQ(resolve_probes(0.25, 1, 256), 1u);
  EXPECT_EQ(resolve_probes(4.0, 64, 100), 100u);
}

TEST(Classify, StrictThresholds) {
  EXPECT_EQ(classify(5, 10, 20), Tier::tail);
  EXPECT_EQ(classify(10, 10, 20), Tier::body);
  EXPECT_EQ(classify(20, 10, 20), Tier::body);
  EXPECT_EQ(classify(21, 10, 20), Tier::head);
}

TEST(ProbesFor, TailClusterGetsFourTimes) {
  const auto f = heterogeneous();
  const auto p = build_policy(f.stats, 8, {}, f.ix.num_lists());
  const std::size_t tail = first_in_tier(p, Tier::tail);
  ASSERT_LT(tail, p.tiers.size());
  const auto choice = probes_for(p, f.ix.centroids().row(tail), f.ix.centroids());
  EXPECT_EQ(choice.probes, 32u);
  EXPECT_EQ(choice.tier, Tier::tail);
}

TEST(ProbesFor, HeadCentroidLandsInHead) {
  const auto f = heterogeneous();
  const auto p = build_policy(f.stats, 8, {}, f.ix.num_lists());
  const std::size_t head = first_in_tier(p, Tier::head);
  ASSERT_LT(head, p.tiers.size());
  const auto q = f.ix.centroids().row(head);
  ASSERT_EQ(assign(f.ix.centroids(), q), head);
  const auto choice = probes_for(p, q, f.ix.centroids());
  EXPECT_EQ(choice.tier, Tier::head);
  EXPECT_EQ(choice.probes, 4u);
}

TEST(ProbesFor, UniformIsBody) {
  const auto f = heterogeneous();
  const auto p = uniform_policy(8, f.ix.num_lists());
  const auto qs = support::random_unit_set(20, 32, 4);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto c = probes_for(p, qs.row(i), f.ix.centroids());
    EXPECT_EQ(c.probes, 8u);
    EXPECT_EQ(c.tier, Tier::body);
  }
}

TEST(Policy, AtMostThreeBudgets) {
  const auto f = heterogeneous();
  for (std::size_t k : {1u, 2u, 5u, 16u}) {
    const auto p = build_policy(f.stats, k, {}, f.ix.num_lists());
    const std::set<std::size_t> distinct(p.probes.begin(), p.probes.end());
    EXPECT_LE(distinct.size(), 3u);
    for (auto x : p.probes) {
      EXPECT_GE(x, 1u);
      EXPECT_LE(x, f.ix.num_lists());
    }
  }
}

TEST(Policy, Errors) {
  const auto f = heterogeneous();
  EXPECT_THROW(build_policy(f.stats, 0, {}, 40), ConfigError);
  EXPECT_THROW(build_policy(f.stats, 4, {0.0, 1.0, 0.5}, 40), ConfigError);
  EXPECT_THROW(uniform_policy(0, 40), ConfigError);
}

TEST(Telemetry, AllHeadStream) {
  const auto f = heterogeneous();
  const auto p = build_policy(f.stats, 4, {}, f.ix.num_lists());
  const std::size_t head = first_in_tier(p, Tier::head);
  std::vector<float> queries;
  for (int i = 0; i < 10; ++i) {
    const auto r = f.ix.centroids().row(head);
    queries.insert(queries.end(), r.begin(), r.end());
  }
  const auto run = run_with_telemetry(p, f.ix, queries, 1);
  EXPECT_FALSE(run.telemetry.empty);
  EXPECT_EQ(run.telemetry[Tier::head].count, 10u);
  EXPECT_DOUBLE_EQ(run.telemetry[Tier::head].fraction, 1.0);
  EXPECT_DOUBLE_EQ(run.telemetry[Tier::tail].fraction, 0.0);
  EXPECT_DOUBLE_EQ(run.telemetry.mean_probes, 2.0);
}

TEST(Telemetry, EmptyStreamSetsFlag) {
  const auto f = heterogeneous();
  const auto p = uniform_policy(2, f.ix.num_lists());
  const auto run = run_with_telemetry(p, f.ix, std::span<const float>{}, 1);
  EXPECT_TRUE(run.telemetry.empty);
  EXPECT_TRUE(run.outcomes.empty());
  for (Tier t : kTiers) EXPECT_EQ(run.telemetry[t].count, 0u);
}

TEST(Telemetry, SerialEqualsParallel) {
  const auto f = heterogeneous();
  const auto p = build_policy(f.stats, 3, {}, f.ix.num_lists());
  const auto qs = support::random_unit_set(500, 32, 8);
  omp_set_num_threads(4);
  const auto a = run_with_telemetry(p, f.ix, qs.data(), 3);
  const auto b = run_with_telemetry_serial(p, f.ix, qs.data(), 3);
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    EXPECT_EQ(a.outcomes[i].result.hits, b.outcomes[i].result.hits);
    EXPECT_EQ(a.outcomes[i].result.cost_vectors, b.outcomes[i].result.cost_vectors);
    EXPECT_EQ(a.outcomes[i].tier, b.outcomes[i].tier);
  }
  EXPECT_EQ(a.telemetry.mean_cost, b.telemetry.mean_cost);
  double fractions = 0.0;
  for (Tier t : kTiers) fractions += a.telemetry[t].fraction;
  EXPECT_NEAR(fractions, 1.0, 1e-12);
}

TEST(Telemetry, ErrorsPropagateFromParallelRegion) {
  const auto f = heterogeneous();
  auto p = build_policy(f.stats, 3, {}, f.ix.num_lists());
  p.probes.resize(1);
  p.tiers.resize(1);
  const auto qs = support::random_unit_set(64, 32, 9);
  EXPECT_THROW(run_with_telemetry(p, f.ix, qs.data(), 1), DataError);
}
