#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aivf/index.hpp"
#include "aivf/stats.hpp"

namespace aivf {

enum class Tier : std::uint8_t { head = 0, body = 1, tail = 2 };
inline constexpr std::array<Tier, 3> kTiers = {Tier::head, Tier::body, Tier::tail};

std::string_view tier_name(Tier t);

enum class PolicyKind : std::uint8_t { uniform, adaptive };

std::string_view policy_name(PolicyKind k);

struct TierMultipliers {
  double tail = 4.0;
  double body = 1.0;
  double head = 0.5;
};

/// Per-cluster probe budget. Uniform policies give every cluster k_base;
/// adaptive policies scale k_base by the tier of the cluster's frequency.
struct ProbePolicy {
  PolicyKind kind = PolicyKind::uniform;
  std::size_t k_base = 1;
  TierMultipliers multipliers;
  double f_low = 0.0;
  double f_high = 0.0;
  std::vector<Tier> tiers;
  std::vector<std::size_t> probes;  // resolved, each in [1, m]
};

/// x.5 rounds away from zero, then clamp to [1, m].
std::size_t resolve_probes(double multiplier, std::size_t k_base, std::size_t m);

/// tail if f < f_low, head if f > f_high, body otherwise.
Tier classify(std::uint64_t frequency, double f_low, double f_high);

ProbePolicy build_policy(const ClusterStats& stats, std::size_t k_base,
                         TierMultipliers multipliers, std::size_t m);
ProbePolicy uniform_policy(std::size_t k_base, std::size_t m);

struct ProbeChoice {
  std::size_t probes = 0;
  Tier tier = Tier::body;
};

/// Budget for q, decided by its single nearest centroid.
ProbeChoice probes_for(const ProbePolicy& policy, std::span<const float> q,
                       const Centroids& centroids);

struct TierCounters {
  std::uint64_t count = 0;
  double fraction = 0.0;
  double mean_probes = 0.0;
  double mean_cost = 0.0;
};

struct TierTelemetry {
  std::array<TierCounters, 3> tiers;  // indexed by Tier
  bool empty = true;
  double mean_probes = 0.0;
  double mean_cost = 0.0;

  const TierCounters& operator[](Tier t) const { return tiers[static_cast<std::size_t>(t)]; }
};

/// Per-query record kept so aggregation is independent of execution order.
struct QueryOutcome {
  SearchResult result;
  Tier tier = Tier::body;
};

/// Aggregates per-query outcomes in query order.
TierTelemetry summarize(std::span<const QueryOutcome> outcomes);

struct TelemetryRun {
  std::vector<QueryOutcome> outcomes;
  TierTelemetry telemetry;
};

/// Searches every row of `queries` (row-major, index dim) with its policy
/// budget. OpenMP over queries; each query writes only its own slot.
TelemetryRun run_with_telemetry(const ProbePolicy& policy, const InvertedIndex& ix,
                                 std::span<const float> queries, std::size_t top_r);
TelemetryRun run_with_telemetry_serial(const ProbePolicy& policy, const InvertedIndex& ix,
                                        std::span<const float> queries, std::size_t top_r);

}  // namespace aivf
