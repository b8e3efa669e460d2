#include "aivf/policy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "aivf/error.hpp"

namespace aivf {

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::head: return "head";
    case Tier::body: return "body";
    case Tier::tail: return "tail";
  }
  return "?";
}

std::string_view policy_name(PolicyKind k) {
  return k == PolicyKind::uniform ? "uniform" : "adaptive";
}

std::size_t resolve_probes(double multiplier, std::size_t k_base, std::size_t m) {
  const double raw = std::floor(multiplier * static_cast<double>(k_base) + 0.5);
  const double clamped = std::clamp(raw, 1.0, static_cast<double>(m));
  return static_cast<std::size_t>(clamped);
}

Tier classify(std::uint64_t frequency, double f_low, double f_high) {
  const auto f = static_cast<double>(frequency);
  if (f < f_low) return Tier::tail;
  if (f > f_high) return Tier::head;
  return Tier::body;
}

ProbePolicy build_policy(const ClusterStats& stats, std::size_t k_base,
                         TierMultipliers multipliers, std::size_t m) {
  if (stats.num_clusters() == 0) throw DataError("cannot build a policy from empty stats");
  if (k_base == 0) throw ConfigError("k_base must be >= 1");
  if (!(multipliers.tail > 0 && multipliers.body > 0 && multipliers.head > 0)) {
    throw ConfigError("tier multipliers must be positive");
  }
  if (m == 0) throw ConfigError("m must be >= 1");

  ProbePolicy p;
  p.kind = PolicyKind::adaptive;
  p.k_base = k_base;
  p.multipliers = multipliers;
  p.f_low = stats.f_low;
  p.f_high = stats.f_high;
  const std::size_t head = resolve_probes(multipliers.head, k_base, m);
  const std::size_t body = resolve_probes(multipliers.body, k_base, m);
  const std::size_t tail = resolve_probes(multipliers.tail, k_base, m);
  for (auto f : stats.frequency) {
    const Tier t = classify(f, stats.f_low, stats.f_high);
    p.tiers.push_back(t);
    p.probes.push_back(t == Tier::head ? head : t == Tier::tail ? tail : body);
  }
  return p;
}

ProbePolicy uniform_policy(std::size_t k_base, std::size_t m) {
  if (k_base == 0) throw ConfigError("k_base must be >= 1");
  if (m == 0) throw ConfigError("m must be >= 1");
  ProbePolicy p;
  p.kind = PolicyKind::uniform;
  p.k_base = k_base;
  p.multipliers = {1.0, 1.0, 1.0};
  p.tiers.assign(m, Tier::body);
  p.probes.assign(m, std::min(k_base, m));
  return p;
}

ProbeChoice probes_for(const ProbePolicy& policy, std::span<const float> q,
                       const Centroids& centroids) {
  const ClusterId c = assign(centroids, q);
  if (c >= policy.probes.size()) throw DataError("policy does not cover cluster " + std::to_string(c));
  return {policy.probes[c], policy.tiers[c]};
}

TierTelemetry summarize(std::span<const QueryOutcome> outcomes) {
  TierTelemetry t;
  t.empty = outcomes.empty();
  if (t.empty) return t;
  std::array<std::uint64_t, 3> probes{};
  std::array<std::uint64_t, 3> cost{};
  std::uint64_t all_probes = 0;
  std::uint64_t all_cost = 0;
  for (const auto& o : outcomes) {
    const auto k = static_cast<std::size_t>(o.tier);
    ++t.tiers[k].count;
    probes[k] += o.result.probes_used;
    cost[k] += o.result.cost_vectors;
    all_probes += o.result.probes_used;
    all_cost += o.result.cost_vectors;
  }
  const auto total = static_cast<double>(outcomes.size());
  for (std::size_t k = 0; k < 3; ++k) {
    auto& c = t.tiers[k];
    c.fraction = static_cast<double>(c.count) / total;
    if (c.count > 0) {
      c.mean_probes = static_cast<double>(probes[k]) / static_cast<double>(c.count);
      c.mean_cost = static_cast<double>(cost[k]) / static_cast<double>(c.count);
    }
  }
  t.mean_probes = static_cast<double>(all_probes) / total;
  t.mean_cost = static_cast<double>(all_cost) / total;
  return t;
}

namespace {

void check_queries(const InvertedIndex& ix, std::span<const float> queries) {
  if (ix.dim() == 0 || queries.size() % ix.dim() != 0) {
    throw DataError("query block is not a whole number of index-dimension rows");
  }
}

QueryOutcome run_one(const ProbePolicy& policy, const InvertedIndex& ix,
                     std::span<const float> q, std::size_t top_r) {
  const ProbeChoice choice = probes_for(policy, q, ix.centroids());
  return {ix.search(q, choice.probes, top_r), choice.tier};
}

}  // namespace

TelemetryRun run_with_telemetry_serial(const ProbePolicy& policy, const InvertedIndex& ix,
                                        std::span<const float> queries, std::size_t top_r) {
  check_queries(ix, queries);
  const std::size_t dim = ix.dim();
  TelemetryRun run;
  run.outcomes.resize(queries.size() / dim);
  for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
    run.outcomes[i] = run_one(policy, ix, queries.subspan(i * dim, dim), top_r);
  }
  run.telemetry = summarize(run.outcomes);
  return run;
}

TelemetryRun run_with_telemetry(const ProbePolicy& policy, const InvertedIndex& ix,
                                std::span<const float> queries, std::size_t top_r) {
  check_queries(ix, queries);
  const std::size_t dim = ix.dim();
  TelemetryRun run;
  run.outcomes.resize(queries.size() / dim);
  const auto nq = static_cast<std::ptrdiff_t>(run.outcomes.size());
  // Exceptions must not cross the parallel region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < nq; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      run.outcomes[k] = run_one(policy, ix, queries.subspan(k * dim, dim), top_r);
    } catch (...) {
#pragma omp critical(aivf_telemetry_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  run.telemetry = summarize(run.outcomes);
  return run;
}

}  // namespace aivf
