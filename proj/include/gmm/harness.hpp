#pragma once

// Multi-trial experiment runner: config parsing, seeded trials, statistics,
// eta sweeps, comparison tables and artifact files.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "gmm/clustering.hpp"
#include "gmm/data.hpp"
#include "gmm/engine.hpp"
#include "gmm/lssvm.hpp"
#include "json.hpp"

namespace gmm::harness {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ProblemKind { Clustering, LatentSvm };
enum class SelectorKind { Greedy, RandomWalk, Subset, Multifold };
enum class LatentInit { Adversarial, Truth, Random };

inline const char* to_string(ProblemKind p) { return p == ProblemKind::Clustering ? "clustering" : "lssvm"; }

inline const char* to_string(SelectorKind s) {
  switch (s) {
    case SelectorKind::Greedy: return "greedy";
    case SelectorKind::RandomWalk: return "walk";
    case SelectorKind::Subset: return "subset";
    case SelectorKind::Multifold: return "multifold";
  }
  return "?";
}

inline const char* to_string(LatentInit l) {
  switch (l) {
    case LatentInit::Adversarial: return "adversarial";
    case LatentInit::Truth: return "truth";
    case LatentInit::Random: return "random";
  }
  return "?";
}

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Clustering;

  // clustering data: gmm20 | gmm200 | norm25 | mixture | file
  std::string dataset = "gmm20";
  data::MixtureSpec mixture = data::gmm20_spec();
  std::string data_file;
  std::vector<std::size_t> drop_columns;
  std::size_t k = 0;  // 0: number of mixture components
  kmeans::InitMethod init = kmeans::InitMethod::RandomPartition;
  kmeans::DeadClusters dead = kmeans::DeadClusters::Origin;

  // latent SVM task: window | shift
  std::string task = "window";
  data::LatentWindowSpec window_task;
  data::LatentShiftSpec shift_task;
  LatentInit latent_init = LatentInit::Adversarial;
  std::size_t folds = 10;
  std::size_t subset_ramp = 10;

  SelectorKind selector = SelectorKind::Greedy;
  std::size_t walk_steps = 10;  // per example
  double eta = 1.0;
  double epsilon = 1e-6;
  std::size_t max_iters = 500;

  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0: hardware concurrency
  std::string out_dir;

  void validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
      throw ConfigError("config field '" + field + "': " + why);
    };
    if (trials < 1) fail("trials", "must be at least 1");
    if (!(eta > 0.0 && eta <= 1.0)) fail("eta", "must be in (0, 1]");
    if (!(epsilon > 0.0)) fail("epsilon", "must be positive");
    if (max_iters < 1) fail("max_iters", "must be at least 1");
    if (walk_steps < 1) fail("walk_steps", "must be at least 1");
    if (problem == ProblemKind::Clustering) {
      if (selector == SelectorKind::Subset || selector == SelectorKind::Multifold)
        fail("selector", std::string(to_string(selector)) + " is only defined for lssvm");
      if (dataset == "file") {
        if (data_file.empty()) fail("data_file", "required when dataset = file");
        if (k == 0) fail("k", "required when dataset = file");
      } else if (dataset == "mixture" || dataset == "gmm20" || dataset == "gmm200" ||
                 dataset == "norm25") {
        try {
          mixture.validate();
        } catch (const std::invalid_argument& e) {
          fail("mixture", e.what());
        }
      } else {
        fail("dataset", "unknown dataset '" + dataset + "'");
      }
    } else {
      if (task == "window") {
        try {
          window_task.validate();
        } catch (const std::invalid_argument& e) {
          fail("task", e.what());
        }
        if (selector == SelectorKind::Multifold && (folds < 2 || folds > window_task.n))
          fail("folds", "must be in [2, n]");
      } else if (task == "shift") {
        try {
          shift_task.validate();
        } catch (const std::invalid_argument& e) {
          fail("task", e.what());
        }
        if (selector == SelectorKind::Multifold && (folds < 2 || folds > shift_task.n))
          fail("folds", "must be in [2, n]");
      } else {
        fail("task", "unknown task '" + task + "'");
      }
      if (subset_ramp < 1) fail("subset_ramp", "must be at least 1");
    }
  }

  std::string method_label() const {
    if (selector == SelectorKind::Greedy && eta == 1.0)
      return problem == ProblemKind::Clustering ? "hard-em" : "cccp";
    char buf[64];
    std::snprintf(buf, sizeof buf, "gmm-%s-eta%g", to_string(selector), eta);
    return buf;
  }

  std::string init_label() const {
    return problem == ProblemKind::Clustering ? std::string(kmeans::to_string(init))
                                              : std::string(to_string(latent_init));
  }
};

namespace detail {

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>)
    r = std::from_chars(first, last, value);
  else
    r = std::from_chars(first, last, value, 10);
  if (text.empty() || r.ec != std::errc() || r.ptr != last)
    throw ConfigError("config field '" + key + "': cannot parse '" + text + "'");
  return value;
}

inline std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (!item.empty()) out.push_back(parse_value<T>(key, item));
  }
  return out;
}

}  // namespace detail

// Applies one key = value setting. Unknown keys are errors.
inline void set_field(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  using detail::parse_value;
  const std::string value = detail::strip(raw);
  auto size = [&] { return parse_value<std::size_t>(key, value); };
  auto real = [&] { return parse_value<double>(key, value); };
  auto bad = [&] { throw ConfigError("config field '" + key + "': invalid value '" + value + "'"); };

  if (key == "problem") {
    if (value == "clustering" || value == "cluster") c.problem = ProblemKind::Clustering;
    else if (value == "lssvm" || value == "latent-svm") c.problem = ProblemKind::LatentSvm;
    else bad();
  } else if (key == "dataset") {
    c.dataset = value;
    if (value == "gmm20") c.mixture = data::gmm20_spec(c.mixture.seed);
    else if (value == "gmm200") c.mixture = data::gmm200_spec(c.mixture.seed);
    else if (value == "norm25") c.mixture = data::norm25_like_spec(c.mixture.seed);
  } else if (key == "data_file") {
    c.data_file = value;
  } else if (key == "drop_cols") {
    c.drop_columns = detail::parse_list<std::size_t>(key, value);
  } else if (key == "components") {
    c.mixture.components = size();
  } else if (key == "dim") {
    c.mixture.dim = size();
  } else if (key == "sigma") {
    c.mixture.sigma = real();
  } else if (key == "square_side") {
    c.mixture.square_side = real();
  } else if (key == "min_separation") {
    c.mixture.min_separation = real();
  } else if (key == "samples_per_component") {
    c.mixture.samples_per_component = size();
  } else if (key == "data_seed") {
    c.mixture.seed = parse_value<std::uint64_t>(key, value);
    c.window_task.seed = c.mixture.seed;
    c.shift_task.seed = c.mixture.seed;
  } else if (key == "k") {
    c.k = size();
  } else if (key == "init") {
    try {
      c.init = kmeans::parse_init_method(value);
    } catch (const std::invalid_argument&) {
      bad();
    }
  } else if (key == "dead_clusters") {
    if (value == "origin") c.dead = kmeans::DeadClusters::Origin;
    else if (value == "respawn") c.dead = kmeans::DeadClusters::RespawnFarthest;
    else bad();
  } else if (key == "task") {
    c.task = value;
  } else if (key == "n") {
    c.window_task.n = c.shift_task.n = size();
  } else if (key == "labels") {
    c.window_task.label_count = c.shift_task.label_count = size();
  } else if (key == "window") {
    c.window_task.window = size();
  } else if (key == "shift") {
    c.window_task.shift = size();
  } else if (key == "shift_magnitude") {
    c.shift_task.shift_magnitude = real();
  } else if (key == "noise") {
    c.window_task.noise = c.shift_task.noise = real();
  } else if (key == "template_scale") {
    c.window_task.template_scale = real();
  } else if (key == "lambda") {
    c.window_task.lambda = c.shift_task.lambda = real();
  } else if (key == "latent_init") {
    if (value == "adversarial") c.latent_init = LatentInit::Adversarial;
    else if (value == "truth") c.latent_init = LatentInit::Truth;
    else if (value == "random") c.latent_init = LatentInit::Random;
    else bad();
  } else if (key == "folds") {
    c.folds = size();
  } else if (key == "subset_ramp") {
    c.subset_ramp = size();
  } else if (key == "selector") {
    if (value == "greedy") c.selector = SelectorKind::Greedy;
    else if (value == "walk" || value == "random-walk") c.selector = SelectorKind::RandomWalk;
    else if (value == "subset") c.selector = SelectorKind::Subset;
    else if (value == "multifold") c.selector = SelectorKind::Multifold;
    else bad();
  } else if (key == "walk_steps") {
    c.walk_steps = size();
  } else if (key == "eta") {
    c.eta = real();
  } else if (key == "epsilon") {
    c.epsilon = real();
  } else if (key == "max_iters") {
    c.max_iters = size();
  } else if (key == "trials") {
    c.trials = size();
  } else if (key == "seed") {
    c.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "workers") {
    c.workers = size();
  } else if (key == "out") {
    c.out_dir = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

// Flat "key = value" lines; '#' starts a comment.
inline void parse_config(std::istream& in, ExperimentConfig& c) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    set_field(c, detail::strip(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ExperimentConfig c;
  parse_config(in, c);
  return c;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["problem"] = to_string(c.problem);
  if (c.problem == ProblemKind::Clustering) {
    j["dataset"] = c.dataset;
    if (c.dataset == "file") {
      j["data_file"] = c.data_file;
      j["drop_cols"] = c.drop_columns;
    } else {
      j["components"] = c.mixture.components;
      j["dim"] = c.mixture.dim;
      j["sigma"] = c.mixture.sigma;
      j["square_side"] = c.mixture.square_side;
      j["min_separation"] = c.mixture.min_separation;
      j["samples_per_component"] = c.mixture.samples_per_component;
      j["data_seed"] = c.mixture.seed;
    }
    j["k"] = c.k;
    j["init"] = kmeans::to_string(c.init);
    j["dead_clusters"] = c.dead == kmeans::DeadClusters::Origin ? "origin" : "respawn";
  } else {
    j["task"] = c.task;
    if (c.task == "window") {
      j["n"] = c.window_task.n;
      j["labels"] = c.window_task.label_count;
      j["window"] = c.window_task.window;
      j["shift"] = c.window_task.shift;
      j["noise"] = c.window_task.noise;
      j["template_scale"] = c.window_task.template_scale;
      j["lambda"] = c.window_task.lambda;
      j["data_seed"] = c.window_task.seed;
    } else {
      j["n"] = c.shift_task.n;
      j["labels"] = c.shift_task.label_count;
      j["shift_magnitude"] = c.shift_task.shift_magnitude;
      j["noise"] = c.shift_task.noise;
      j["lambda"] = c.shift_task.lambda;
      j["data_seed"] = c.shift_task.seed;
    }
    j["latent_init"] = to_string(c.latent_init);
    j["folds"] = c.folds;
    j["subset_ramp"] = c.subset_ramp;
  }
  j["selector"] = to_string(c.selector);
  j["walk_steps"] = c.walk_steps;
  j["eta"] = c.eta;
  j["epsilon"] = c.epsilon;
  j["max_iters"] = c.max_iters;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  return j;
}

// ---------------------------------------------------------------------------
// Trials

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::size_t iterations = 0;
  RunStatus status = RunStatus::MaxIters;
  std::size_t latent_changes = 0;  // final configuration vs initial one
  RunTrace trace;
};

struct TrialStats {
  std::string method;
  std::string init;
  std::uint64_t fingerprint = 0;
  double eta = 1.0;
  double mean = 0.0;
  double std = 0.0;  // population formula
  double best = 0.0;
  double iter_mean = 0.0;
  double iter_std = 0.0;
  std::vector<TrialResult> trials;
};

inline void population_moments(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  sd = std::sqrt(var / static_cast<double>(xs.size()));
}

inline TrialStats summarize(std::string method, std::string init, std::uint64_t fingerprint, double eta,
                            std::vector<TrialResult> trials) {
  if (trials.empty()) throw std::invalid_argument("no trials to summarize");
  TrialStats s{std::move(method), std::move(init), fingerprint, eta, 0, 0, 0, 0, 0, std::move(trials)};
  std::vector<double> finals, iters;
  for (const auto& t : s.trials) {
    finals.push_back(t.final_objective);
    iters.push_back(static_cast<double>(t.iterations));
  }
  population_moments(finals, s.mean, s.std);
  population_moments(iters, s.iter_mean, s.iter_std);
  s.best = *std::min_element(finals.begin(), finals.end());
  return s;
}

// Runs body(i) for i in [0, count) on `workers` threads. The first exception
// is rethrown after all workers finish.
inline void parallel_for(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// The data an experiment runs on, built once and shared by every trial and
// every method.
struct PreparedData {
  std::variant<data::LabeledDataset, Dataset, data::LatentTask> payload;
  std::uint64_t fingerprint = 0;
  std::size_t k = 0;

  const Dataset& points() const {
    if (auto* g = std::get_if<data::LabeledDataset>(&payload)) return g->points;
    return std::get<Dataset>(payload);
  }
  const data::LatentTask& task() const { return std::get<data::LatentTask>(payload); }
};

inline std::uint64_t task_fingerprint(const lssvm::Problem& p) {
  std::vector<double> flat;
  for (const auto& ex : p.examples()) {
    flat.push_back(ex.label);
    flat.push_back(ex.latent_count);
    flat.insert(flat.end(), ex.features.begin(), ex.features.end());
  }
  const std::size_t size = flat.size();
  return Dataset(1, size, std::move(flat)).fingerprint();
}

inline PreparedData prepare_data(const ExperimentConfig& c) {
  c.validate();
  PreparedData d;
  if (c.problem == ProblemKind::Clustering) {
    if (c.dataset == "file") {
      data::CsvOptions opts;
      opts.drop_columns = c.drop_columns;
      d.payload = data::load_csv(c.data_file, opts);
    } else {
      d.payload = data::gen_mixture(c.mixture);
    }
    d.fingerprint = d.points().fingerprint();
    d.k = c.k ? c.k : c.mixture.components;
    if (d.k > d.points().size()) throw ConfigError("config field 'k': larger than the number of points");
  } else {
    d.payload = c.task == "window" ? data::gen_latent_window_task(c.window_task)
                                   : data::gen_latent_shift_task(c.shift_task);
    d.fingerprint = task_fingerprint(d.task().problem);
  }
  return d;
}

inline std::uint64_t trial_seed(const ExperimentConfig& c, std::size_t trial) { return c.seed + trial; }

// Initial state for a trial; depends only on the trial seed and the data, so
// every method sees the same start.
struct TrialStart {
  Solution w0;
  LatentConfig z0;
};

inline TrialStart trial_start(const ExperimentConfig& c, const PreparedData& d, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, {0x1417});
  if (c.problem == ProblemKind::Clustering) {
    auto init = kmeans::initialize(c.init, d.points(), d.k, rng, c.dead);
    return {std::move(init.centers), std::move(init.config)};
  }
  const auto& task = d.task();
  LatentConfig z;
  switch (c.latent_init) {
    case LatentInit::Adversarial: z = data::adversarial_latent(task); break;
    case LatentInit::Truth: z = task.true_latent; break;
    case LatentInit::Random:
      z.resize(task.problem.size());
      for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = static_cast<std::uint32_t>(rng.uniform_index(task.problem.example(i).latent_count));
      break;
  }
  return {Solution(task.problem.dimension(), 0.0), std::move(z)};
}

inline TrialResult run_trial(const ExperimentConfig& c, const PreparedData& d, std::size_t trial) {
  const std::uint64_t seed = trial_seed(c, trial);
  const TrialStart start = trial_start(c, d, seed);
  GmmConfig cfg{.eta = c.eta, .epsilon = c.epsilon, .relative_epsilon = true, .max_iters = c.max_iters,
                .seed = seed};
  RunTrace trace;
  if (c.problem == ProblemKind::Clustering) {
    kmeans::Problem problem(d.points(), d.k, c.dead);
    if (c.selector == SelectorKind::RandomWalk)
      trace = run(problem, start.w0, start.z0, cfg, kmeans::RandomWalkSelector{c.walk_steps});
    else
      trace = run(problem, start.w0, start.z0, cfg, GreedySelector{});
  } else {
    const auto& problem = d.task().problem;
    // CCCP starts from the bound fixed by the initial latent assignment. The
    // other selectors pick the first bound themselves; at w0 = 0 every
    // assignment touches the objective, so any of them is valid.
    RunOptions options;
    if (c.selector == SelectorKind::Greedy) options.first_bound = start.z0;
    switch (c.selector) {
      case SelectorKind::Greedy:
        trace = run(problem, start.w0, start.z0, cfg, GreedySelector{}, options);
        break;
      case SelectorKind::RandomWalk:
        trace = run(problem, start.w0, start.z0, cfg, lssvm::RandomWalkSelector{c.walk_steps}, options);
        break;
      case SelectorKind::Subset:
        trace = run(problem, start.w0, start.z0, cfg, lssvm::SubsetSelector{c.subset_ramp}, options);
        break;
      case SelectorKind::Multifold:
        trace = run(problem, start.w0, start.z0, cfg,
                    lssvm::MultifoldSelector(problem.size(), c.folds, seed), options);
        break;
    }
  }
  TrialResult r;
  r.trial = trial;
  r.seed = seed;
  r.initial_objective = trace.initial_objective();
  r.final_objective = trace.final_objective();
  r.iterations = trace.iterations();
  r.status = trace.status;
  r.latent_changes = trace.changed_from_initial();
  r.trace = std::move(trace);
  return r;
}

inline TrialStats run_experiment(const ExperimentConfig& c, const PreparedData& d) {
  c.validate();
  std::vector<TrialResult> results(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t i) { results[i] = run_trial(c, d, i); });
  return summarize(c.method_label(), c.init_label(), d.fingerprint, c.eta, std::move(results));
}

inline TrialStats run_experiment(const ExperimentConfig& c) { return run_experiment(c, prepare_data(c)); }

// The MM baseline for a config: same data, same initializations.
inline ExperimentConfig mm_baseline(ExperimentConfig c) {
  c.selector = SelectorKind::Greedy;
  c.eta = 1.0;
  return c;
}

// ---------------------------------------------------------------------------
// Output

inline nlohmann::ordered_json stats_to_json(const TrialStats& s) {
  nlohmann::ordered_json j;
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(s.fingerprint));
  j["method"] = s.method;
  j["init"] = s.init;
  j["dataset_fingerprint"] = fp;
  j["eta"] = s.eta;
  j["trials"] = s.trials.size();
  j["final_objective"] = {{"mean", s.mean}, {"std", s.std}, {"best", s.best}};
  j["iterations"] = {{"mean", s.iter_mean}, {"std", s.iter_std}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& t : s.trials)
    rows.push_back({{"trial", t.trial},
                    {"seed", t.seed},
                    {"initial_objective", t.initial_objective},
                    {"final_objective", t.final_objective},
                    {"iterations", t.iterations},
                    {"status", to_string(t.status)},
                    {"latent_changes", t.latent_changes}});
  j["per_trial"] = std::move(rows);
  return j;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// stats.json, results.csv and traces/trial_NNN.csv under dir.
inline void write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& c,
                            const TrialStats& s) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "traces");
  auto open = [](const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  };
  {
    auto j = stats_to_json(s);
    j["config"] = config_to_json(c);
    auto out = open(dir / "stats.json");
    out << j.dump(2) << '\n';
  }
  {
    auto out = open(dir / "results.csv");
    out << "trial,seed,method,init,initial_objective,final_objective,iterations,status,latent_changes\n";
    for (const auto& t : s.trials)
      out << t.trial << ',' << t.seed << ',' << s.method << ',' << s.init << ','
          << format_double(t.initial_objective) << ',' << format_double(t.final_objective) << ','
          << t.iterations << ',' << to_string(t.status) << ',' << t.latent_changes << '\n';
  }
  for (const auto& t : s.trials) {
    char name[32];
    std::snprintf(name, sizeof name, "trial_%03zu.csv", t.trial);
    auto out = open(dir / "traces" / name);
    t.trace.write_csv(out);
  }
}

struct SweepResult {
  std::vector<TrialStats> per_eta;

  void write_long_csv(std::ostream& os) const {
    os << "eta,trial,final_objective,iters\n";
    for (const auto& s : per_eta)
      for (const auto& t : s.trials)
        os << format_double(s.eta) << ',' << t.trial << ',' << format_double(t.final_objective) << ','
           << t.iterations << '\n';
  }
};

inline SweepResult sweep_eta(ExperimentConfig c, const std::vector<double>& etas, const PreparedData& d) {
  if (etas.empty()) throw ConfigError("config field 'etas': empty list");
  SweepResult out;
  for (double eta : etas) {
    c.eta = eta;
    out.per_eta.push_back(run_experiment(c, d));
  }
  return out;
}

inline SweepResult sweep_eta(const ExperimentConfig& c, const std::vector<double>& etas) {
  return sweep_eta(c, etas, prepare_data(c));
}

struct ComparisonReport {
  std::string csv;
  std::string text;
};

// Column order: method, init, mean, std, best, iter_mean, iter_std, trials.
inline ComparisonReport compare_report(const std::vector<TrialStats>& stats) {
  if (stats.empty()) throw std::invalid_argument("nothing to compare");
  for (const auto& s : stats)
    if (s.fingerprint != stats.front().fingerprint)
      throw std::invalid_argument("refusing to compare results from different datasets");
  ComparisonReport r;
  std::ostringstream csv;
  csv << "method,init,mean,std,best,iter_mean,iter_std,trials\n";
  for (const auto& s : stats)
    csv << s.method << ',' << s.init << ',' << format_double(s.mean) << ',' << format_double(s.std) << ','
        << format_double(s.best) << ',' << format_double(s.iter_mean) << ','
        << format_double(s.iter_std) << ',' << s.trials.size() << '\n';
  r.csv = csv.str();

  std::size_t method_w = 6, init_w = 4;
  for (const auto& s : stats) {
    method_w = std::max(method_w, s.method.size());
    init_w = std::max(init_w, s.init.size());
  }
  std::ostringstream text;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %27s  %12s  %15s\n", static_cast<int>(method_w), "method",
                static_cast<int>(init_w), "init", "mean +- std", "best", "iterations");
  text << buf;
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %12.6g +- %-11.4g  %12.6g  %7.2f +- %-5.2f\n",
                  static_cast<int>(method_w), s.method.c_str(), static_cast<int>(init_w), s.init.c_str(),
                  s.mean, s.std, s.best, s.iter_mean, s.iter_std);
    text << buf;
  }
  r.text = text.str();
  return r;
}

// Two-sided sign test on paired samples; ties are dropped.
inline double sign_test_p_value(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sign test needs paired samples");
  std::size_t plus = 0, minus = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) ++plus;
    else if (a[i] > b[i]) ++minus;
  }
  const std::size_t n = plus + minus;
  if (n == 0) return 1.0;
  const std::size_t tail = std::min(plus, minus);
  double p = 0.0;
  for (std::size_t i = 0; i <= tail; ++i)
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                  static_cast<double>(n) * std::log(2.0));
  return std::min(1.0, 2.0 * p);
}

inline std::vector<double> final_objectives(const TrialStats& s) {
  std::vector<double> out;
  for (const auto& t : s.trials) out.push_back(t.final_objective);
  return out;
}

}  // namespace gmm::harness
