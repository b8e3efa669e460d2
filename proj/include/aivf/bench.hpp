#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aivf/error.hpp"
#include "aivf/index.hpp"
#include "aivf/policy.hpp"
#include "aivf/stats.hpp"
#include "aivf/workload.hpp"

namespace aivf {

struct CurvePoint {
  std::size_t k_base = 0;
  double mean_cost = 0.0;
  double recall_at_1 = 0.0;
};

/// Sweep result for one policy, sorted by mean_cost. Points where recall
/// drops as cost grows are kept and listed in `non_monotone` (positions in
/// `points`).
struct Curve {
  PolicyKind policy = PolicyKind::uniform;
  std::vector<CurvePoint> points;
  std::vector<std::size_t> non_monotone;
  std::vector<TierTelemetry> telemetry;  // parallel to `points`
};

/// Thrown when a recall target lies outside what a curve achieves.
class UnreachableTarget : public DataError {
 public:
  using DataError::DataError;
};

/// Sorts by mean_cost (stable) and recomputes the non-monotone flags.
void finalize_curve(Curve& curve);

/// One CurvePoint per k_base; recall@1 compares hits[0] against truth_ids.
Curve run_sweep(const InvertedIndex& ix, PolicyKind kind, const ClusterStats& stats,
                const QuerySet& queries, std::span<const std::size_t> k_base_list,
                TierMultipliers multipliers = {}, std::size_t top_r = 1);

/// Linear interpolation in recall between the first cost-adjacent pair that
/// brackets the target.
double interpolate_cost_at_recall(std::span<const CurvePoint> curve, double target_recall);

/// Percent reduction of the adaptive cost relative to the uniform cost.
double efficiency_gain(double cost_uniform, double cost_adaptive);

struct TargetResult {
  double recall = 0.0;
  std::optional<double> uniform_cost;
  std::optional<double> adaptive_cost;
  std::optional<double> gain_percent;
  std::string note;  // why a value is missing
};

std::vector<TargetResult> evaluate_targets(std::span<const CurvePoint> uniform,
                                           std::span<const CurvePoint> adaptive,
                                           std::span<const double> targets);

struct BenchReport {
  Curve uniform;
  Curve adaptive;
  std::vector<TargetResult> targets;
  nlohmann::json config;  // echoed verbatim
  nlohmann::json extra;   // stage summaries (index, stats, workload)
};

/// %.6g, the precision used for every float in reports.
std::string format6(double v);
/// v rounded to 6 significant digits.
double round6(double v);

nlohmann::json telemetry_json(const TierTelemetry& t);
nlohmann::json targets_json(std::span<const TargetResult> targets);
nlohmann::json summary_json(const BenchReport& report);

/// curves.csv header: policy,k_base,mean_cost,recall_at_1.
std::string curves_csv(const BenchReport& report);
std::map<std::string, std::vector<CurvePoint>> parse_curves_csv(const std::string& text);
std::map<std::string, std::vector<CurvePoint>> load_curves_csv(const std::filesystem::path& path);

/// Writes <dir>/curves.csv and <dir>/summary.json.
void emit_report(const BenchReport& report, const std::filesystem::path& dir);

}  // namespace aivf
