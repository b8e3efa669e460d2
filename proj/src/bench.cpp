#include "aivf/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aivf/error.hpp"

namespace aivf {

void finalize_curve(Curve& curve) {
  std::vector<std::size_t> order(curve.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return curve.points[a].mean_cost < curve.points[b].mean_cost;
  });
  std::vector<CurvePoint> points;
  std::vector<TierTelemetry> telemetry;
  for (std::size_t i : order) {
    points.push_back(curve.points[i]);
    if (i < curve.telemetry.size()) telemetry.push_back(curve.telemetry[i]);
  }
  curve.points = std::move(points);
  curve.telemetry = std::move(telemetry);
  curve.non_monotone.clear();
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].recall_at_1 < curve.points[i - 1].recall_at_1) {
      curve.non_monotone.push_back(i);
    }
  }
}

Curve run_sweep(const InvertedIndex& ix, PolicyKind kind, const ClusterStats& stats,
                const QuerySet& queries, std::span<const std::size_t> k_base_list,
                TierMultipliers multipliers, std::size_t top_r) {
  if (k_base_list.empty()) throw ConfigError("k_base list is empty");
  if (!std::is_sorted(k_base_list.begin(), k_base_list.end())) {
    throw ConfigError("k_base list must be ascending");
  }
  if (queries.size() == 0) throw DataError("sweep needs a nonempty query set");

  Curve curve;
  curve.policy = kind;
  const std::size_t m = ix.num_lists();
  for (std::size_t k : k_base_list) {
    const ProbePolicy policy =
        kind == PolicyKind::uniform ? uniform_policy(k, m) : build_policy(stats, k, multipliers, m);
    const auto run = run_with_telemetry(policy, ix, queries.queries.data(), top_r);
    std::uint64_t hits = 0;
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
      const auto& r = run.outcomes[i].result;
      cost += r.cost_vectors;
      if (!r.hits.empty() && r.hits.front().id == queries.truth_ids[i]) ++hits;
    }
    const auto nq = static_cast<double>(queries.size());
    curve.points.push_back({k, static_cast<double>(cost) / nq, static_cast<double>(hits) / nq});
    curve.telemetry.push_back(run.telemetry);
  }
  finalize_curve(curve);
  return curve;
}

double interpolate_cost_at_recall(std::span<const CurvePoint> curve, double target) {
  if (curve.size() < 2) throw DataError("interpolation needs at least 2 curve points");
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const CurvePoint& a = curve[i];
    const CurvePoint& b = curve[i + 1];
    if (a.recall_at_1 == target) return a.mean_cost;
    if (a.recall_at_1 <= target && target <= b.recall_at_1) {
      if (b.recall_at_1 == target) return b.mean_cost;
      const double t = (target - a.recall_at_1) / (b.recall_at_1 - a.recall_at_1);
      return a.mean_cost + t * (b.mean_cost - a.mean_cost);
    }
  }
  if (curve.back().recall_at_1 == target) return curve.back().mean_cost;
  double lo = curve.front().recall_at_1;
  double hi = lo;
  for (const auto& p : curve) {
    lo = std::min(lo, p.recall_at_1);
    hi = std::max(hi, p.recall_at_1);
  }
  throw UnreachableTarget("recall target " + format6(target) + " is unreachable: curve spans [" +
                          format6(lo) + ", " + format6(hi) + "]");
}

double efficiency_gain(double cost_uniform, double cost_adaptive) {
  if (!(cost_uniform > 0.0) || !(cost_adaptive > 0.0)) {
    throw DataError("efficiency gain needs positive costs");
  }
  return 100.0 * (cost_uniform - cost_adaptive) / cost_uniform;
}

std::vector<TargetResult> evaluate_targets(std::span<const CurvePoint> uniform,
                                           std::span<const CurvePoint> adaptive,
                                           std::span<const double> targets) {
  std::vector<TargetResult> out;
  for (double target : targets) {
    TargetResult r;
    r.recall = target;
    try {
      r.uniform_cost = interpolate_cost_at_recall(uniform, target);
    } catch (const DataError& e) {
      r.note = std::string("uniform: ") + e.what();
    }
    try {
      r.adaptive_cost = interpolate_cost_at_recall(adaptive, target);
    } catch (const DataError& e) {
      if (!r.note.empty()) r.note += "; ";
      r.note += std::string("adaptive: ") + e.what();
    }
    if (r.uniform_cost && r.adaptive_cost) {
      r.gain_percent = efficiency_gain(*r.uniform_cost, *r.adaptive_cost);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) { return std::stod(format6(v)); }

nlohmann::json telemetry_json(const TierTelemetry& t) {
  nlohmann::json j;
  for (Tier tier : kTiers) {
    const auto& c = t[tier];
    j[std::string(tier_name(tier))] = {{"count", c.count},
                                       {"fraction", round6(c.fraction)},
                                       {"mean_probes", round6(c.mean_probes)},
                                       {"mean_cost", round6(c.mean_cost)}};
  }
  j["empty"] = t.empty;
  j["mean_probes"] = round6(t.mean_probes);
  j["mean_cost"] = round6(t.mean_cost);
  return j;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(round6(*v)) : nlohmann::json(nullptr);
}

nlohmann::json curve_json(const Curve& c) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    nlohmann::json p = {{"k_base", c.points[i].k_base},
                        {"mean_cost", round6(c.points[i].mean_cost)},
                        {"recall_at_1", round6(c.points[i].recall_at_1)}};
    if (c.policy == PolicyKind::adaptive && i < c.telemetry.size()) {
      p["telemetry"] = telemetry_json(c.telemetry[i]);
    }
    points.push_back(std::move(p));
  }
  nlohmann::json flagged = nlohmann::json::array();
  for (std::size_t i : c.non_monotone) flagged.push_back(c.points[i].k_base);
  return {{"points", points}, {"non_monotone_k_base", flagged}};
}

}  // namespace

nlohmann::json targets_json(std::span<const TargetResult> targets) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : targets) {
    nlohmann::json e = {{"recall", t.recall},
                        {"uniform_cost", optional_number(t.uniform_cost)},
                        {"adaptive_cost", optional_number(t.adaptive_cost)},
                        {"gain_percent", optional_number(t.gain_percent)}};
    if (!t.note.empty()) e["note"] = t.note;
    j.push_back(std::move(e));
  }
  return j;
}

nlohmann::json summary_json(const BenchReport& report) {
  nlohmann::json j;
  j["config"] = report.config;
  j["targets"] = targets_json(report.targets);
  for (const auto& t : report.targets) {
    j["gain_at_" + format6(t.recall)] = optional_number(t.gain_percent);
  }
  j["curves"] = {{"uniform", curve_json(report.uniform)},
                 {"adaptive", curve_json(report.adaptive)}};
  if (!report.adaptive.telemetry.empty()) {
    j["telemetry"] = telemetry_json(report.adaptive.telemetry.front());
  }
  for (auto it = report.extra.begin(); it != report.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string curves_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "policy,k_base,mean_cost,recall_at_1\n";
  for (const Curve* c : {&report.uniform, &report.adaptive}) {
    for (const auto& p : c->points) {
      out << policy_name(c->policy) << ',' << p.k_base << ',' << format6(p.mean_cost) << ','
          << format6(p.recall_at_1) << '\n';
    }
  }
  return out.str();
}

std::map<std::string, std::vector<CurvePoint>> parse_curves_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "policy,k_base,mean_cost,recall_at_1") {
    throw FormatError("curves CSV must start with 'policy,k_base,mean_cost,recall_at_1'");
  }
  std::map<std::string, std::vector<CurvePoint>> curves;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4) {
      throw FormatError("curves CSV line " + std::to_string(lineno) + ": expected 4 fields");
    }
    try {
      std::size_t used = 0;
      CurvePoint p;
      p.k_base = std::stoul(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("k_base");
      p.mean_cost = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("mean_cost");
      p.recall_at_1 = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("recall_at_1");
      curves[fields[0]].push_back(p);
    } catch (const std::logic_error&) {
      throw FormatError("curves CSV line " + std::to_string(lineno) + ": bad number in '" + line +
                        "'");
    }
  }
  for (auto& [name, points] : curves) {
    std::stable_sort(points.begin(), points.end(),
                     [](const CurvePoint& a, const CurvePoint& b) { return a.mean_cost < b.mean_cost; });
  }
  return curves;
}

std::map<std::string, std::vector<CurvePoint>> load_curves_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curves_csv(ss.str());
}

void emit_report(const BenchReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto csv_path = dir / "curves.csv";
  const auto json_path = dir / "summary.json";
  {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + csv_path.string() + "' for writing");
    out << curves_csv(report);
    if (!out) throw IoError("short write to '" + csv_path.string() + "'");
  }
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + json_path.string() + "' for writing");
  out << summary_json(report).dump(2) << '\n';
  if (!out) throw IoError("short write to '" + json_path.string() + "'");
}

}  // namespace aivf
