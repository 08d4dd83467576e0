#pragma once

// Generalized majorization-minimization engine.
//
// A problem exposes a family of upper bounds on its objective F, each bound
// indexed by a latent configuration z. Every iteration picks a bound whose
// value at the previous solution is below a progress threshold v, then jumps
// to the minimizer of that bound:
//
//   v_0 = F(w_0)
//   b_t  chosen with b_t(w_{t-1}) <= v_{t-1}
//   w_t  = argmin_w b_t(w)
//   d_t  = b_t(w_t) - F(w_t)
//   v_t  = b_t(w_t) - eta * d_t          (stop once d_t < epsilon)
//
// With eta = 1 only bounds that touch F at w_{t-1} qualify, and picking the
// touching bound reproduces classic MM (Lloyd's k-means, CCCP).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gmm/rng.hpp"

namespace gmm {

using Solution = std::vector<double>;
using LatentConfig = std::vector<std::uint32_t>;

// Relative tolerance for every inequality the engine checks; scaled by
// max(1, |F(w_0)|).
inline constexpr double kRelativeTolerance = 1e-9;

class InvalidSelection : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NonFiniteValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GmmConfig {
  double eta = 1.0;
  // Gap threshold. When relative_epsilon is set the effective threshold is
  // epsilon * max(1, |F(w_0)|).
  double epsilon = 1e-6;
  bool relative_epsilon = true;
  std::size_t max_iters = 500;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  }
};

struct GmmState {
  std::size_t t = 0;
  Solution w;
  double v = 0.0;
  double d = 0.0;
  double bound_value = 0.0;
  double objective_value = 0.0;
};

inline double validity_threshold(double bound_value, double gap, double eta) {
  return bound_value - eta * gap;
}

inline double validity_threshold(const GmmState& state, double eta) {
  return validity_threshold(state.bound_value, state.d, eta);
}

enum class RunStatus { ConvergedByGap, MaxIters };

inline const char* to_string(RunStatus s) {
  return s == RunStatus::ConvergedByGap ? "converged-by-gap" : "max-iters";
}

struct IterationRecord {
  std::size_t t = 0;
  double objective = 0.0;
  double bound = 0.0;  // b_t(w_t); F(w_0) for the t = 0 row
  double v = 0.0;
  double d = 0.0;
  std::size_t latent_changes = 0;
  double wall_ms = 0.0;
  // Not serialized; kept for the convergence diagnostics.
  double bound_at_previous = 0.0;  // b_t(w_{t-1})
  double step_sq = 0.0;            // ||w_t - w_{t-1}||^2
  double strong_convexity = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::vector<IterationRecord> records;  // records[0] describes w_0
  RunStatus status = RunStatus::MaxIters;
  double eta = 1.0;
  double tolerance = 0.0;
  double epsilon = 0.0;
  Solution initial_solution;
  Solution final_solution;
  LatentConfig initial_config;
  LatentConfig final_config;
  // Filled only with RunOptions::keep_history; entry t-1 belongs to iteration t.
  std::vector<Solution> solutions;
  std::vector<LatentConfig> configs;

  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
  double initial_objective() const { return records.front().objective; }
  double final_objective() const { return records.back().objective; }
  double final_gap() const { return records.back().d; }

  std::size_t changed_from_initial() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < final_config.size() && i < initial_config.size(); ++i)
      n += final_config[i] != initial_config[i];
    return n;
  }

  static constexpr const char* kCsvHeader = "t,objective,bound,v,d,latent_changes,wall_ms";

  void write_csv(std::ostream& os) const {
    os << kCsvHeader << '\n';
    char buf[256];
    for (const auto& r : records) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%zu,%.3f\n", r.t, r.objective,
                    r.bound, r.v, r.d, r.latent_changes, r.wall_ms);
      os << buf;
    }
  }
};

// What Algorithm-level code needs from a problem. The bound family is indexed
// by LatentConfig; optimize_bound receives the previous solution as a hint.
template <class P>
concept BoundProblem = requires(const P& p, const Solution& w, const LatentConfig& z) {
  { p.dimension() } -> std::convertible_to<std::size_t>;
  { p.objective(w) } -> std::convertible_to<double>;
  { p.bound_value(w, z) } -> std::convertible_to<double>;
  { p.optimize_bound(z, w) } -> std::convertible_to<Solution>;
  { p.touching_config(w) } -> std::convertible_to<LatentConfig>;
};

template <class P>
concept HasStrongConvexity = requires(const P& p, const LatentConfig& z) {
  { p.strong_convexity(z) } -> std::convertible_to<std::optional<double>>;
};

template <class P>
struct SelectionContext {
  const P& problem;
  std::size_t t;
  const Solution& w_prev;
  double v_prev;
  const LatentConfig& z_prev;
  double eta;
  double tolerance;
  Rng& rng;
};

template <BoundProblem P>
bool is_valid(const P& problem, const LatentConfig& candidate, const Solution& w_prev,
              double v_prev, double tolerance) {
  return problem.bound_value(w_prev, candidate) <= v_prev + tolerance;
}

inline std::size_t count_changes(const LatentConfig& a, const LatentConfig& b) {
  std::size_t n = 0;
  const std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) n += a[i] != b[i];
  return n + (std::max(a.size(), b.size()) - m);
}

inline double squared_distance(const Solution& a, const Solution& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// The MM choice: the bound touching F at w_{t-1}. It maximizes g(b, w) = -b(w)
// over the whole family, hence over the valid set.
struct GreedySelector {
  template <class P>
  LatentConfig operator()(const SelectionContext<P>& ctx) const {
    return ctx.problem.touching_config(ctx.w_prev);
  }
};

// Deterministic selection by a bias function g(z, w_prev) over an explicit
// candidate list. Invalid candidates are skipped, ties keep the earliest
// candidate, and the touching configuration is always appended so the
// valid set is never empty.
template <BoundProblem P, class Bias>
LatentConfig select_max_bias(const P& problem, std::vector<LatentConfig> candidates,
                             Bias&& bias, const Solution& w_prev, double v_prev,
                             double tolerance) {
  candidates.push_back(problem.touching_config(w_prev));
  std::optional<std::size_t> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!is_valid(problem, candidates[c], w_prev, v_prev, tolerance)) continue;
    const double g = bias(candidates[c], w_prev);
    if (!best || g > best_value) {
      best = c;
      best_value = g;
    }
  }
  if (!best) throw InvalidSelection("no valid candidate, touching configuration rejected");
  return std::move(candidates[*best]);
}

template <class CandidateFn, class BiasFn>
struct BiasedSelector {
  CandidateFn candidates;
  BiasFn bias;

  template <class P>
  LatentConfig operator()(const SelectionContext<P>& ctx) const {
    return select_max_bias(ctx.problem, candidates(ctx), bias, ctx.w_prev, ctx.v_prev,
                           ctx.tolerance);
  }
};

template <class CandidateFn, class BiasFn>
BiasedSelector(CandidateFn, BiasFn) -> BiasedSelector<CandidateFn, BiasFn>;

struct RunOptions {
  // Forces the bound used at t = 1 (e.g. the latent initialization of a
  // latent SVM). It must still be valid at w_0.
  std::optional<LatentConfig> first_bound;
  bool keep_history = false;
};

namespace detail {
inline void require_finite(double x, const char* what, std::size_t t) {
  if (!std::isfinite(x))
    throw NonFiniteValue(std::string(what) + " is not finite at iteration " + std::to_string(t));
}
}  // namespace detail

// Runs the engine from (w0, z0). z0 is the reference configuration used for
// latent-change counting and is handed to the selector as z_prev at t = 1.
template <BoundProblem P, class Selector>
RunTrace run(const P& problem, const Solution& w0, const LatentConfig& z0, const GmmConfig& cfg,
             Selector&& select, const RunOptions& options = {}) {
  cfg.validate();
  if (w0.size() != problem.dimension())
    throw std::invalid_argument("initial solution has the wrong dimension");

  using Clock = std::chrono::steady_clock;

  RunTrace trace;
  trace.eta = cfg.eta;
  const double f0 = problem.objective(w0);
  detail::require_finite(f0, "objective", 0);
  const double scale = std::max(1.0, std::abs(f0));
  trace.tolerance = kRelativeTolerance * scale;
  trace.epsilon = cfg.relative_epsilon ? cfg.epsilon * scale : cfg.epsilon;
  trace.initial_solution = w0;
  trace.initial_config = z0;

  IterationRecord first;
  first.objective = f0;
  first.bound = f0;
  first.v = f0;
  first.bound_at_previous = f0;
  trace.records.push_back(first);

  Solution w = w0;
  LatentConfig z_prev = z0;
  double v = f0;

  for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
    const auto start = Clock::now();
    Rng rng = Rng::stream(cfg.seed, {0x5e1ec7, t});

    LatentConfig z;
    if (t == 1 && options.first_bound) {
      z = *options.first_bound;
    } else {
      SelectionContext<P> ctx{problem, t, w, v, z_prev, cfg.eta, trace.tolerance, rng};
      z = select(ctx);
    }

    const double at_prev = problem.bound_value(w, z);
    detail::require_finite(at_prev, "bound value", t);
    if (at_prev > v + trace.tolerance)
      throw InvalidSelection("selected bound violates b(w_prev) <= v_prev at iteration " +
                             std::to_string(t));

    Solution w_next = problem.optimize_bound(z, w);
    const double bound = problem.bound_value(w_next, z);
    const double objective = problem.objective(w_next);
    detail::require_finite(bound, "bound value", t);
    detail::require_finite(objective, "objective", t);

    IterationRecord rec;
    rec.t = t;
    rec.objective = objective;
    rec.bound = bound;
    rec.d = bound - objective;
    rec.v = validity_threshold(bound, rec.d, cfg.eta);
    rec.latent_changes = count_changes(z_prev, z);
    rec.bound_at_previous = at_prev;
    rec.step_sq = squared_distance(w_next, w);
    if constexpr (HasStrongConvexity<P>) {
      if (auto m = problem.strong_convexity(z)) rec.strong_convexity = *m;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    trace.records.push_back(rec);
    if (options.keep_history) {
      trace.solutions.push_back(w_next);
      trace.configs.push_back(z);
    }

    w = std::move(w_next);
    z_prev = std::move(z);
    v = rec.v;
    if (rec.d < trace.epsilon) {
      trace.status = RunStatus::ConvergedByGap;
      break;
    }
  }

  trace.final_solution = std::move(w);
  trace.final_config = std::move(z_prev);
  return trace;
}

}  // namespace gmm
