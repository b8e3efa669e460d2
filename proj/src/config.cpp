#include "aivf/config.hpp"

#include <fstream>
#include <set>

#include "aivf/error.hpp"

namespace aivf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void only_keys(const nlohmann::json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

}  // namespace

StageSeeds derive_seeds(std::uint64_t master) {
  return {splitmix64(master ^ 0x67656eull), splitmix64(master ^ 0x6b6d65616e73ull),
          splitmix64(master ^ 0x776f726bull)};
}

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  only_keys(doc, "config", {"seed", "dataset", "index", "workload", "policy", "recall_targets"});
  cfg.document = doc;
  cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed, "config");

  if (doc.contains("dataset")) {
    const auto& ds = doc.at("dataset");
    only_keys(ds, "dataset", {"path", "gen"});
    if (ds.contains("path") && !ds.at("path").is_null()) {
      std::filesystem::path p = get_or<std::string>(ds, "path", "", "dataset");
      cfg.dataset_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (ds.contains("gen") && !ds.at("gen").is_null()) {
      const auto& g = ds.at("gen");
      only_keys(g, "dataset.gen",
                {"n", "dim", "m_concepts", "zipf_exponent_sizes", "alpha", "base_spread"});
      SynthConfig sc;
      sc.n = get_or<std::size_t>(g, "n", sc.n, "dataset.gen");
      sc.dim = get_or<std::size_t>(g, "dim", sc.dim, "dataset.gen");
      sc.m_concepts = get_or<std::size_t>(g, "m_concepts", sc.m_concepts, "dataset.gen");
      sc.zipf_exponent_sizes =
          get_or<double>(g, "zipf_exponent_sizes", sc.zipf_exponent_sizes, "dataset.gen");
      sc.alpha = get_or<double>(g, "alpha", sc.alpha, "dataset.gen");
      sc.base_spread = get_or<double>(g, "base_spread", sc.base_spread, "dataset.gen");
      if (sc.dim < 2) throw ConfigError("dataset.gen.dim must be >= 2");
      if (sc.m_concepts < 2) throw ConfigError("dataset.gen.m_concepts must be >= 2");
      if (!(sc.alpha > 0)) throw ConfigError("dataset.gen.alpha must be > 0");
      if (!(sc.base_spread > 0)) throw ConfigError("dataset.gen.base_spread must be > 0");
      if (sc.n < sc.m_concepts) throw ConfigError("dataset.gen.n must be >= m_concepts");
      cfg.gen = sc;
    }
  }

  if (doc.contains("index")) {
    const auto& ix = doc.at("index");
    only_keys(ix, "index", {"m", "max_iters"});
    cfg.m = get_or<std::size_t>(ix, "m", cfg.m, "index");
    cfg.max_iters = get_or<int>(ix, "max_iters", cfg.max_iters, "index");
  }
  if (cfg.m == 0) throw ConfigError("index.m must be >= 1");
  if (cfg.max_iters < 1) throw ConfigError("index.max_iters must be >= 1");

  if (doc.contains("workload")) {
    const auto& w = doc.at("workload");
    only_keys(w, "workload", {"n_q", "s", "noise_sigma"});
    cfg.workload.n_q = get_or<std::size_t>(w, "n_q", cfg.workload.n_q, "workload");
    cfg.workload.s = get_or<double>(w, "s", cfg.workload.s, "workload");
    cfg.workload.noise_sigma = get_or<double>(w, "noise_sigma", cfg.workload.noise_sigma, "workload");
  }
  if (cfg.workload.n_q == 0) throw ConfigError("workload.n_q must be >= 1");
  if (cfg.workload.s < 0) throw ConfigError("workload.s must be >= 0");
  if (cfg.workload.noise_sigma < 0) throw ConfigError("workload.noise_sigma must be >= 0");

  if (doc.contains("policy")) {
    const auto& p = doc.at("policy");
    only_keys(p, "policy", {"k_base", "multipliers", "percentiles"});
    cfg.k_base_list = get_or<std::vector<std::size_t>>(p, "k_base", cfg.k_base_list, "policy");
    if (p.contains("multipliers")) {
      const auto& mu = p.at("multipliers");
      only_keys(mu, "policy.multipliers", {"tail", "body", "head"});
      cfg.multipliers.tail = get_or<double>(mu, "tail", cfg.multipliers.tail, "policy.multipliers");
      cfg.multipliers.body = get_or<double>(mu, "body", cfg.multipliers.body, "policy.multipliers");
      cfg.multipliers.head = get_or<double>(mu, "head", cfg.multipliers.head, "policy.multipliers");
    }
    if (p.contains("percentiles")) {
      const auto levels = get_or<std::vector<double>>(p, "percentiles", {}, "policy");
      if (levels.size() != 2) throw ConfigError("policy.percentiles must hold [low, high]");
      cfg.levels = {levels[0], levels[1]};
    }
  }
  if (cfg.k_base_list.empty()) throw ConfigError("policy.k_base must be nonempty");
  for (std::size_t i = 0; i < cfg.k_base_list.size(); ++i) {
    if (cfg.k_base_list[i] == 0) throw ConfigError("policy.k_base entries must be >= 1");
    if (i > 0 && cfg.k_base_list[i] <= cfg.k_base_list[i - 1]) {
      throw ConfigError("policy.k_base must be strictly ascending");
    }
  }
  if (!(cfg.multipliers.tail > 0 && cfg.multipliers.body > 0 && cfg.multipliers.head > 0)) {
    throw ConfigError("policy.multipliers must be positive");
  }
  if (!(0.0 < cfg.levels.low && cfg.levels.low < cfg.levels.high && cfg.levels.high < 1.0)) {
    throw ConfigError("policy.percentiles must be strictly increasing inside (0, 1)");
  }

  if (doc.contains("recall_targets")) {
    cfg.recall_targets = get_or<std::vector<double>>(doc, "recall_targets", {}, "config");
  }
  for (double t : cfg.recall_targets) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("recall targets must lie in (0, 1)");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

}  // namespace aivf
