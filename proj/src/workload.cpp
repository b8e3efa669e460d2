#include "aivf/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "aivf/error.hpp"
#include "aivf/kernels.hpp"

namespace aivf {

std::vector<double> zipf_weights(std::size_t m, double s) {
  if (m == 0) throw ConfigError("zipf_weights needs m >= 1");
  if (s < 0.0) throw ConfigError("zipf exponent must be >= 0");
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = std::pow(static_cast<double>(j + 1), -s);
  const double h = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= h;
  return w;
}

std::vector<ClusterId> coherence_ranking(const ClusterStats& stats) {
  std::vector<ClusterId> order;
  for (std::size_t c = 0; c < stats.num_clusters(); ++c) {
    if (stats.frequency[c] > 0 && stats.coherence[c]) order.push_back(static_cast<ClusterId>(c));
  }
  std::stable_sort(order.begin(), order.end(), [&](ClusterId a, ClusterId b) {
    return *stats.coherence[a] > *stats.coherence[b];
  });
  return order;
}

std::vector<VectorId> exact_top1(const VectorSet& vs, const VectorSet& queries) {
  if (vs.dim() != queries.dim()) throw DataError("query and base dimensions differ");
  std::vector<VectorId> ids(queries.size());
  std::vector<float> scores(queries.size());
  kernels::top1_ip(queries.data(), vs.data(), vs.dim(), ids, scores);
  return ids;
}

QuerySet sample_queries(const VectorSet& vs, const InvertedIndex& ix, const ClusterStats& stats,
                        const WorkloadConfig& config) {
  if (config.n_q == 0) throw ConfigError("n_q must be >= 1");
  if (config.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
  if (vs.dim() != ix.dim()) throw DataError("index and vector set dimensions differ");
  if (stats.num_clusters() != ix.num_lists()) throw DataError("stats do not match the index");
  const auto ranking = coherence_ranking(stats);
  if (ranking.empty()) throw DataError("cannot sample queries: every cluster is empty");

  const auto weights = zipf_weights(ranking.size(), config.s);
  std::discrete_distribution<std::size_t> pick_rank(weights.begin(), weights.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  std::mt19937_64 rng(config.seed);

  const std::size_t dim = vs.dim();
  std::vector<float> data;
  data.reserve(config.n_q * dim);
  std::vector<ClusterId> source;
  source.reserve(config.n_q);
  std::vector<double> q(dim);
  for (std::size_t i = 0; i < config.n_q; ++i) {
    const ClusterId c = ranking[pick_rank(rng)];
    const PostingList& list = ix.list(c);
    std::uniform_int_distribution<std::size_t> pick_member(0, list.size() - 1);
    const std::size_t e = pick_member(rng);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        q[j] = list.vectors[e * dim + j] + config.noise_sigma * noise(rng);
        norm += q[j] * q[j];
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < dim; ++j) data.push_back(static_cast<float>(q[j] / norm));
    source.push_back(c);
  }

  QuerySet qs;
  qs.queries = VectorSet(dim, std::move(data), source);
  qs.truth_ids = exact_top1(vs, qs.queries);
  qs.source_cluster = std::move(source);
  qs.seed = config.seed;
  return qs;
}

void save_queries(const QuerySet& qs, const std::filesystem::path& stem) {
  auto avf = stem;
  avf += ".avf";
  save_vectors(qs.queries, avf);
  auto csv = stem;
  csv += ".csv";
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + csv.string() + "' for writing");
  out << "query_index,truth_id,source_cluster\n";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    out << i << ',' << qs.truth_ids[i] << ',' << qs.source_cluster[i] << '\n';
  }
  if (!out) throw IoError("short write to '" + csv.string() + "'");
}

QuerySet load_queries(const std::filesystem::path& stem) {
  auto avf = stem;
  avf += ".avf";
  auto csv = stem;
  csv += ".csv";
  QuerySet qs;
  qs.queries = load_vectors(avf);
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open '" + csv.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "query_index,truth_id,source_cluster") {
    throw FormatError("'" + csv.string() + "' has an unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t idx = 0;
    VectorId truth = 0;
    ClusterId cluster = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> idx >> c1 >> truth >> c2 >> cluster) || c1 != ',' || c2 != ',' ||
        idx != qs.truth_ids.size()) {
      throw FormatError("malformed query sidecar row: '" + line + "'");
    }
    qs.truth_ids.push_back(truth);
    qs.source_cluster.push_back(cluster);
  }
  if (qs.truth_ids.size() != qs.queries.size()) {
    throw FormatError("sidecar has " + std::to_string(qs.truth_ids.size()) + " rows for " +
                      std::to_string(qs.queries.size()) + " query vectors");
  }
  return qs;
}

}  // namespace aivf
