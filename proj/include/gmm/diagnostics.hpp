#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gmm/engine.hpp"

namespace gmm {

struct DiagnosticReport {
  bool monotone_bounds = true;  // b_t(w_t) non-increasing
  bool validity_chain = true;   // b_t(w_{t-1}) <= v_{t-1} and b_t(w_t) <= b_t(w_{t-1})
  bool safety = true;           // F(w_t) <= F(w_0)
  bool gap_summable = true;     // eta * sum d_t bounded by the objective decrease
  // Empty when the run has no strong-convexity modulus for every bound.
  std::optional<bool> solution_convergence;
  std::string skipped;

  double weighted_gap_sum = 0.0;  // eta * sum_t d_t
  double step_sum = 0.0;          // sum_t ||w_t - w_{t-1}||^2
  double step_budget = 0.0;       // (2/m) (F(w_0) - F_lb)
  std::vector<std::string> violations;

  bool ok() const {
    return monotone_bounds && validity_chain && safety && gap_summable &&
           solution_convergence.value_or(true);
  }
};

// Checks the convergence guarantees against a finished trace. `slack` is added
// to the step-length inequality, which only holds up to solver accuracy when
// bounds are minimized iteratively.
inline DiagnosticReport check_theorem_diagnostics(const RunTrace& trace,
                                                  double objective_lower_bound,
                                                  double slack = 0.0) {
  DiagnosticReport report;
  const auto& rec = trace.records;
  if (rec.empty()) return report;
  const double tol = trace.tolerance;
  const double f0 = rec.front().objective;
  char buf[256];
  auto flag = [&](bool& field, const char* what, std::size_t t, double lhs, double rhs) {
    field = false;
    std::snprintf(buf, sizeof buf, "%s at t=%zu: %.17g > %.17g", what, t, lhs, rhs);
    report.violations.emplace_back(buf);
  };

  double gap_sum = 0.0;  // sum_{s<t} d_s
  double min_modulus = std::numeric_limits<double>::infinity();
  bool have_modulus = rec.size() > 1;
  for (std::size_t t = 1; t < rec.size(); ++t) {
    const auto& r = rec[t];
    const auto& p = rec[t - 1];
    if (r.bound > p.bound + tol) flag(report.monotone_bounds, "bound increased", t, r.bound, p.bound);
    if (r.bound_at_previous > p.v + tol)
      flag(report.validity_chain, "b_t(w_{t-1}) above v_{t-1}", t, r.bound_at_previous, p.v);
    if (r.bound > r.bound_at_previous + tol)
      flag(report.validity_chain, "b_t(w_t) above b_t(w_{t-1})", t, r.bound, r.bound_at_previous);
    if (r.objective > f0 + tol) flag(report.safety, "objective above F(w_0)", t, r.objective, f0);

    // eta * sum_{s<t} d_s <= F(w_0) - b_t(w_t), and with d_t included the
    // right-hand side drops to F(w_0) - F(w_t).
    if (trace.eta * gap_sum > f0 - r.bound + tol)
      flag(report.gap_summable, "partial gap sum", t, trace.eta * gap_sum, f0 - r.bound);
    gap_sum += r.d;
    if (trace.eta * gap_sum > f0 - r.objective + tol)
      flag(report.gap_summable, "gap sum", t, trace.eta * gap_sum, f0 - r.objective);

    report.step_sum += r.step_sq;
    if (std::isnan(r.strong_convexity) || r.strong_convexity <= 0.0)
      have_modulus = false;
    else
      min_modulus = std::min(min_modulus, r.strong_convexity);
  }
  report.weighted_gap_sum = trace.eta * gap_sum;
  if (report.weighted_gap_sum > f0 - objective_lower_bound + tol)
    flag(report.gap_summable, "gap sum vs lower bound", rec.size() - 1, report.weighted_gap_sum,
         f0 - objective_lower_bound);

  if (have_modulus) {
    report.step_budget = (2.0 / min_modulus) * (f0 - objective_lower_bound);
    bool fine = true;
    if (report.step_sum > report.step_budget + tol + slack)
      flag(fine, "step-length sum", rec.size() - 1, report.step_sum, report.step_budget);
    report.solution_convergence = fine;
  } else {
    report.skipped = rec.size() > 1 ? "some bound is not strongly convex (e.g. a dead cluster)"
                                    : "no iterations";
  }
  return report;
}

// Distance moved by one more greedy (touching-bound) step from w. Near zero
// at a fixed point of the MM map, which is what convergence to a stationary
// point looks like for piecewise-smooth objectives.
template <BoundProblem P>
double fixed_point_residual(const P& problem, const Solution& w) {
  const Solution next = problem.optimize_bound(problem.touching_config(w), w);
  return std::sqrt(squared_distance(next, w));
}

}  // namespace gmm
