#include "aivf/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "aivf/error.hpp"
#include "aivf/index.hpp"
#include "aivf/quantizer.hpp"

namespace aivf {

namespace fs = std::filesystem;

namespace {

// Runs fn, prefixing any library error with the stage name.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string size_summary(std::vector<std::size_t> sizes) {
  if (sizes.empty()) return "none";
  std::sort(sizes.begin(), sizes.end());
  std::size_t empty = std::count(sizes.begin(), sizes.end(), std::size_t{0});
  std::ostringstream s;
  s << "min=" << sizes.front() << " median=" << sizes[sizes.size() / 2]
    << " max=" << sizes.back() << " empty=" << empty;
  return s.str();
}

nlohmann::json index_summary(const InvertedIndex& ix) {
  std::vector<std::size_t> sizes;
  for (const auto& l : ix.lists()) sizes.push_back(l.size());
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  return {{"m", ix.num_lists()},
          {"n_total", ix.n_total()},
          {"dim", ix.dim()},
          {"empty_lists", std::count(sizes.begin(), sizes.end(), std::size_t{0})},
          {"min_list", *lo},
          {"max_list", *hi},
          {"kmeans_iterations", ix.centroids().iterations_run},
          {"kmeans_sse", round6(ix.centroids().train_sse)}};
}

nlohmann::json fit_json(const std::optional<PowerLawFit>& fit) {
  if (!fit) return nullptr;
  return {{"alpha_hat", round6(fit->alpha_hat)},
          {"intercept", round6(fit->intercept)},
          {"r_squared", round6(fit->r_squared)},
          {"used", fit->used},
          {"excluded", fit->excluded}};
}

std::optional<PowerLawFit> try_fit(const ClusterStats& s) {
  try {
    return fit_power_law(s.frequency, s.coherence);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

fs::path cmd_gen(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  return stage("gen", [&] {
    SynthConfig sc = cfg.gen.value_or(SynthConfig{});
    sc.seed = cfg.seeds().gen;
    const VectorSet vs = generate_synthetic(sc);
    ensure_dir(out_dir);
    const fs::path path = out_dir / "dataset.avf";
    save_vectors(vs, path);
    const auto sizes = concept_sizes(sc.n, sc.m_concepts, sc.zipf_exponent_sizes);
    log << "gen: wrote " << path.string() << " n=" << vs.size() << " dim=" << vs.dim()
        << " concepts=" << sc.m_concepts << " sizes " << size_summary(sizes) << '\n';
    return path;
  });
}

fs::path cmd_build(const BuildOptions& opts, const fs::path& out_dir, std::ostream& log) {
  return stage("build", [&] {
    const VectorSet vs = normalize(load_vectors(opts.dataset));
    KmeansOptions ko;
    ko.m = opts.m;
    ko.max_iters = opts.max_iters;
    ko.seed = opts.seed;
    const Centroids c = train_kmeans(vs, ko);
    const InvertedIndex ix = build_ivf(vs, c);
    ensure_dir(out_dir);
    const fs::path path = out_dir / "index.aivf";
    save_index(ix, path);
    std::vector<std::size_t> sizes;
    for (const auto& l : ix.lists()) sizes.push_back(l.size());
    log << "build: wrote " << path.string() << " m=" << ix.num_lists() << " n=" << ix.n_total()
        << " kmeans_iters=" << c.iterations_run << " lists " << size_summary(sizes) << '\n';
    return path;
  });
}

StatsOutcome cmd_stats(const fs::path& index_path, const fs::path& dataset_path,
                       PercentileLevels levels, const fs::path& out_dir, std::ostream& log) {
  return stage("stats", [&] {
    const InvertedIndex ix = load_index(index_path);
    const VectorSet vs = normalize(load_vectors(dataset_path));
    StatsOutcome out;
    out.stats = compute_stats(vs, ix, levels);
    out.fit = try_fit(out.stats);
    ensure_dir(out_dir);
    out.csv = out_dir / "stats.csv";
    std::ofstream csv(out.csv, std::ios::trunc);
    if (!csv) throw IoError("cannot open '" + out.csv.string() + "' for writing");
    csv << "cluster_id,frequency,radius,coherence\n";
    for (std::size_t c = 0; c < out.stats.num_clusters(); ++c) {
      if (out.stats.frequency[c] == 0) continue;
      csv << c << ',' << out.stats.frequency[c] << ',' << format6(out.stats.radius[c]) << ','
          << format6(*out.stats.coherence[c]) << '\n';
    }
    if (!csv) throw IoError("short write to '" + out.csv.string() + "'");
    log << "stats: wrote " << out.csv.string() << " f_low=" << format6(out.stats.f_low)
        << " f_high=" << format6(out.stats.f_high) << '\n';
    if (out.fit) {
      log << "stats: alpha_hat=" << format6(out.fit->alpha_hat)
          << " r_squared=" << format6(out.fit->r_squared) << " clusters_used=" << out.fit->used
          << " excluded=" << out.fit->excluded << '\n';
    } else {
      log << "stats: power-law fit unavailable (fewer than 3 usable clusters)\n";
    }
    return out;
  });
}

BenchReport cmd_bench(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const StageSeeds seeds = cfg.seeds();
  Stopwatch total;

  VectorSet vs = stage("bench: dataset", [&] {
    if (cfg.dataset_path) return normalize(load_vectors(*cfg.dataset_path));
    if (!cfg.gen) throw ConfigError("config has neither dataset.path nor dataset.gen");
    SynthConfig sc = *cfg.gen;
    sc.seed = seeds.gen;
    return generate_synthetic(sc);
  });
  log << "bench: dataset n=" << vs.size() << " dim=" << vs.dim() << " (" << format6(total.seconds())
      << " s)\n";

  const InvertedIndex ix = stage("bench: build", [&] {
    KmeansOptions ko;
    ko.m = cfg.m;
    ko.max_iters = cfg.max_iters;
    ko.seed = seeds.kmeans;
    return build_ivf(vs, train_kmeans(vs, ko));
  });
  log << "bench: index m=" << ix.num_lists() << " (" << format6(total.seconds()) << " s)\n";

  const ClusterStats stats = stage("bench: stats", [&] { return compute_stats(vs, ix, cfg.levels); });
  const auto fit = try_fit(stats);
  log << "bench: stats f_low=" << format6(stats.f_low) << " f_high=" << format6(stats.f_high)
      << " (" << format6(total.seconds()) << " s)\n";

  WorkloadConfig wc = cfg.workload;
  wc.seed = seeds.workload;
  const QuerySet queries = stage("bench: workload", [&] { return sample_queries(vs, ix, stats, wc); });
  log << "bench: queries n_q=" << queries.size() << " (" << format6(total.seconds()) << " s)\n";

  BenchReport report;
  stage("bench: sweep", [&] {
    report.uniform = run_sweep(ix, PolicyKind::uniform, stats, queries, cfg.k_base_list,
                               cfg.multipliers);
    report.adaptive = run_sweep(ix, PolicyKind::adaptive, stats, queries, cfg.k_base_list,
                                cfg.multipliers);
    report.targets = evaluate_targets(report.uniform.points, report.adaptive.points,
                                      cfg.recall_targets);
    return 0;
  });
  log << "bench: sweeps done (" << format6(total.seconds()) << " s)\n";

  report.config = cfg.document;
  const auto membership = partition_of(ix).membership;
  std::size_t same_cluster = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (membership[queries.truth_ids[i]] == queries.source_cluster[i]) ++same_cluster;
  }
  std::size_t empty = 0;
  for (auto f : stats.frequency) empty += f == 0;
  report.extra = {
      {"seeds",
       {{"master", cfg.seed}, {"gen", seeds.gen}, {"kmeans", seeds.kmeans}, {"workload", seeds.workload}}},
      {"dataset", {{"n", vs.size()}, {"dim", vs.dim()}}},
      {"index", index_summary(ix)},
      {"stats",
       {{"f_low", round6(stats.f_low)},
        {"f_high", round6(stats.f_high)},
        {"empty_clusters", empty},
        {"power_law", fit_json(fit)}}},
      {"workload",
       {{"n_q", queries.size()},
        {"s", wc.s},
        {"noise_sigma", wc.noise_sigma},
        {"truth_in_source_cluster",
         round6(static_cast<double>(same_cluster) / static_cast<double>(queries.size()))}}},
      {"multipliers",
       {{"tail", cfg.multipliers.tail}, {"body", cfg.multipliers.body}, {"head", cfg.multipliers.head}}},
  };

  stage("bench: emit", [&] {
    emit_report(report, out_dir);
    return 0;
  });
  for (const auto& t : report.targets) {
    log << "bench: recall " << format6(t.recall) << " uniform="
        << (t.uniform_cost ? format6(*t.uniform_cost) : "n/a")
        << " adaptive=" << (t.adaptive_cost ? format6(*t.adaptive_cost) : "n/a")
        << " gain=" << (t.gain_percent ? format6(*t.gain_percent) + "%" : "n/a") << '\n';
  }
  log << "bench: wrote " << (out_dir / "summary.json").string() << " (" << format6(total.seconds())
      << " s)\n";
  return report;
}

nlohmann::json cmd_analyze(const fs::path& curves_csv, const std::vector<double>& targets) {
  return stage("analyze", [&] {
    const auto curves = load_curves_csv(curves_csv);
    const auto u = curves.find("uniform");
    const auto a = curves.find("adaptive");
    if (u == curves.end() || a == curves.end()) {
      throw DataError("curves CSV needs both 'uniform' and 'adaptive' rows");
    }
    const auto results = evaluate_targets(u->second, a->second, targets);
    nlohmann::json j;
    j["targets"] = targets_json(results);
    for (const auto& t : results) {
      j["gain_at_" + format6(t.recall)] =
          t.gain_percent ? nlohmann::json(round6(*t.gain_percent)) : nlohmann::json(nullptr);
    }
    return j;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverted-file search with frequency-tiered probe budgets"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  };

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  add_common(gen, false);
  gen->add_option("--seed", seed, "master seed (overrides config)");

  std::string dataset;
  std::size_t m = 0;
  int max_iters = 0;
  auto* build = app.add_subcommand("build", "train the quantizer and build the index");
  add_common(build, false);
  build->add_option("--seed", seed, "master seed (overrides config)");
  build->add_option("--dataset", dataset, "AVF1 vector file");
  build->add_option("--m", m, "number of lists");
  build->add_option("--max-iters", max_iters, "k-means iteration cap");

  std::string index_path;
  auto* stats = app.add_subcommand("stats", "per-cluster frequency and coherence");
  add_common(stats, false);
  stats->add_option("--index", index_path, "AIVF index file")->required();
  stats->add_option("--dataset", dataset, "AVF1 vector file the index was built from")->required();

  auto* bench = app.add_subcommand("bench", "uniform vs adaptive recall-cost sweep");
  add_common(bench, true);
  bench->add_option("--seed", seed, "master seed (overrides config)");

  std::string curves;
  std::vector<double> targets = {0.95, 0.98};
  auto* analyze = app.add_subcommand("analyze", "interpolated cost and gains from a curves CSV");
  analyze->add_option("--curves", curves, "curves CSV (policy,k_base,mean_cost,recall_at_1)")
      ->required();
  analyze->add_option("--targets", targets, "recall targets")->delimiter(',');
  analyze->add_option("--out", out_dir, "write analysis.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto config = [&]() {
      RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
      for (const CLI::App* sub : {gen, build, bench}) {
        if (sub->parsed() && sub->count("--seed") > 0) cfg.seed = seed;
      }
      return cfg;
    };

    if (gen->parsed()) {
      cmd_gen(config(), out_dir, out);
    } else if (build->parsed()) {
      const RunConfig cfg = config();
      BuildOptions opts;
      if (!dataset.empty()) {
        opts.dataset = dataset;
      } else if (cfg.dataset_path) {
        opts.dataset = *cfg.dataset_path;
      } else {
        throw ConfigError("build: --dataset is required");
      }
      opts.m = build->count("--m") > 0 ? m : cfg.m;
      opts.max_iters = build->count("--max-iters") > 0 ? max_iters : cfg.max_iters;
      opts.seed = cfg.seeds().kmeans;
      cmd_build(opts, out_dir, out);
    } else if (stats->parsed()) {
      const RunConfig cfg = config();
      cmd_stats(index_path, dataset, cfg.levels, out_dir, out);
    } else if (bench->parsed()) {
      cmd_bench(config(), out_dir, out);
    } else if (analyze->parsed()) {
      for (double t : targets) {
        if (!(t > 0.0 && t < 1.0)) throw ConfigError("analyze: targets must lie in (0, 1)");
      }
      const auto j = cmd_analyze(curves, targets);
      out << j.dump(2) << '\n';
      if (analyze->count("--out") > 0) {
        ensure_dir(out_dir);
        std::ofstream f(fs::path(out_dir) / "analysis.json", std::ios::trunc);
        if (!f) throw IoError("cannot write analysis.json");
        f << j.dump(2) << '\n';
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace aivf
