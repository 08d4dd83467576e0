// gmm-opt: command-line runner for clustering and latent SVM experiments.
//
//   gmm-opt cluster run --config exp.cfg [--eta 0.02] [--selector walk] ...
//   gmm-opt lssvm run --config exp.cfg --selector multifold
//   gmm-opt sweep --config exp.cfg --etas 0.02,0.1,0.5,1.0
//   gmm-opt gen gmm200 --out points.csv
//
// Exit codes: 0 success, 2 config error, 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmm/harness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace gmm;
using namespace gmm::harness;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Overrides {
  std::string config_path;
  std::optional<double> eta;
  std::optional<std::string> selector;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::vector<std::string> settings;  // key=value
  bool respawn_dead = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Experiment config file (key = value lines)");
    app->add_option("--eta", eta, "Progress coefficient in (0, 1]");
    app->add_option("--selector", selector, "greedy | walk | subset | multifold");
    app->add_option("--trials", trials, "Number of trials");
    app->add_option("--seed", seed, "Base seed; trial i uses seed + i");
    app->add_option("--out", out, "Output directory for artifacts");
    app->add_option("--workers", workers, "Worker threads (0: all cores)");
    app->add_option("--set", settings, "Extra key=value config overrides")->take_all();
    app->add_flag("--respawn-dead", respawn_dead, "Move empty clusters to the farthest point");
  }

  // File first, then flags.
  ExperimentConfig build(std::optional<ProblemKind> problem) const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (problem) c.problem = *problem;
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_field(c, harness::detail::strip(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    if (eta) c.eta = *eta;
    if (selector) set_field(c, "selector", *selector);
    if (trials) c.trials = *trials;
    if (seed) c.seed = *seed;
    if (out) c.out_dir = *out;
    if (workers) c.workers = *workers;
    if (respawn_dead) c.dead = kmeans::DeadClusters::RespawnFarthest;
    c.validate();
    return c;
  }
};

void write_weights(const fs::path& path, const PreparedData& d, const TrialStats& s) {
  const auto& p = d.task().problem;
  nlohmann::ordered_json j;
  j["d"] = p.dimension();
  j["labels"] = p.label_count();
  j["lambda"] = p.lambda();
  j["method"] = s.method;
  auto weights = nlohmann::ordered_json::array();
  for (const auto& t : s.trials) weights.push_back(t.trace.final_solution);
  j["weights"] = std::move(weights);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

void report(const std::vector<TrialStats>& rows, const std::optional<fs::path>& dir) {
  const auto r = compare_report(rows);
  std::cout << r.text;
  if (dir) {
    std::ofstream out(*dir / "comparison.csv");
    out << r.csv;
  }
}

int run_command(const Overrides& o, ProblemKind problem, bool compare_mm) {
  const ExperimentConfig c = o.build(problem);
  const PreparedData d = prepare_data(c);
  const TrialStats stats = run_experiment(c, d);
  std::vector<TrialStats> rows;
  ExperimentConfig baseline = mm_baseline(c);
  if (compare_mm && c.method_label() != baseline.method_label()) {
    rows.push_back(run_experiment(baseline, d));
  }
  rows.push_back(stats);

  std::optional<fs::path> dir;
  if (!c.out_dir.empty()) {
    dir = c.out_dir;
    write_artifacts(*dir, c, stats);
    if (c.problem == ProblemKind::LatentSvm) write_weights(*dir / "weights.json", d, stats);
  }
  report(rows, dir);
  if (dir) std::cout << "artifacts written to " << dir->string() << '\n';
  return 0;
}

int sweep_command(const Overrides& o, const std::vector<double>& etas) {
  for (double eta : etas)
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("config field 'etas': each value must be in (0, 1]");
  const ExperimentConfig c = o.build(std::nullopt);
  const SweepResult sweep = sweep_eta(c, etas);
  std::optional<fs::path> dir;
  if (!c.out_dir.empty()) {
    dir = c.out_dir;
    fs::create_directories(*dir);
    std::ofstream out(*dir / "sweep.csv");
    if (!out) throw std::runtime_error("cannot write sweep.csv");
    sweep.write_long_csv(out);
  } else {
    sweep.write_long_csv(std::cout);
  }
  report(sweep.per_eta, dir);
  return 0;
}

int gen_command(const std::string& what, const std::string& out_path, std::uint64_t seed,
                const std::vector<std::string>& settings) {
  ExperimentConfig c;
  c.mixture.seed = c.window_task.seed = c.shift_task.seed = seed;
  for (const auto& kv : settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_field(c, harness::detail::strip(kv.substr(0, eq)), kv.substr(eq + 1));
  }
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    if (auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    out = &file;
  }
  if (what == "gmm200" || what == "gmm20" || what == "norm25") {
    auto spec = what == "gmm200" ? data::gmm200_spec(seed)
              : what == "gmm20"  ? data::gmm20_spec(seed)
                                 : data::norm25_like_spec(seed);
    data::write_csv(*out, data::gen_mixture(spec));
  } else if (what == "mixture") {
    data::write_csv(*out, data::gen_mixture(c.mixture));
  } else if (what == "latent-shift") {
    data::write_csv(*out, data::gen_latent_shift_task(c.shift_task));
  } else if (what == "latent-window") {
    data::write_csv(*out, data::gen_latent_window_task(c.window_task));
  } else {
    throw ConfigError("unknown generator '" + what + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized majorization-minimization experiments"};
  app.require_subcommand(1);

  auto* cluster = app.add_subcommand("cluster", "k-means clustering");
  auto* cluster_run = cluster->add_subcommand("run", "Run a multi-trial experiment");
  cluster->require_subcommand(1);
  auto* lssvm = app.add_subcommand("lssvm", "Latent structural SVM");
  auto* lssvm_run = lssvm->add_subcommand("run", "Run a multi-trial experiment");
  lssvm->require_subcommand(1);

  Overrides cluster_opts, lssvm_opts, sweep_opts;
  bool cluster_compare = false, lssvm_compare = false;
  cluster_opts.attach(cluster_run);
  cluster_run->add_flag("--compare-mm", cluster_compare, "Also run hard-EM on the same initializations");
  lssvm_opts.attach(lssvm_run);
  lssvm_run->add_flag("--compare-mm", lssvm_compare, "Also run CCCP on the same initializations");

  auto* sweep = app.add_subcommand("sweep", "Run one experiment per progress coefficient");
  sweep_opts.attach(sweep);
  std::vector<double> etas;
  sweep->add_option("--etas", etas, "Comma-separated eta values")->delimiter(',')->required();

  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset as CSV");
  std::string gen_what, gen_out;
  std::uint64_t gen_seed = 0;
  std::vector<std::string> gen_settings;
  gen->add_option("dataset", gen_what, "gmm200 | gmm20 | norm25 | mixture | latent-shift | latent-window")
      ->required();
  gen->add_option("--out", gen_out, "Output file ('-' or omitted: stdout)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--set", gen_settings, "Generator parameters as key=value")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (cluster_run->parsed()) return run_command(cluster_opts, ProblemKind::Clustering, cluster_compare);
    if (lssvm_run->parsed()) return run_command(lssvm_opts, ProblemKind::LatentSvm, lssvm_compare);
    if (sweep->parsed()) return sweep_command(sweep_opts, etas);
    if (gen->parsed()) return gen_command(gen_what, gen_out, gen_seed, gen_settings);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
