#include <gtest/gtest.h>

#include <cmath>

#include "gmm/data.hpp"
#include "gmm/lssvm.hpp"
#include "oracles.hpp"

using namespace gmm;
using namespace gmm::lssvm;

namespace {

data::LatentTask toy(std::uint64_t seed, double noise = 0.3) {
  data::LatentShiftSpec s;
  s.n = 8;
  s.label_count = 2;
  s.shift_magnitude = 1.0;
  s.noise = noise;
  s.seed = seed;
  return data::gen_latent_shift_task(s);
}

// Binary task with a scalar input and no latent choice: phi(x, y) = x in
// coordinate y.
Problem scalar_task(std::vector<std::pair<double, std::uint32_t>> points, double lambda) {
  std::vector<Example> ex;
  for (auto [x, y] : points) {
    Example e;
    e.label = y;
    e.latent_count = 1;
    e.features = {x, 0.0, 0.0, x};
    ex.push_back(e);
  }
  return Problem(2, 2, lambda, zero_one_loss(2), ex);
}

double tau_qp(const Problem& p) { return 1e-6 * (1.0 + std::abs(p.objective(Solution(p.dimension(), 0.0)))); }

Solution random_w(Rng& rng, std::size_t dim, double scale = 1.0) {
  Solution w(dim);
  for (auto& x : w) x = scale * rng.normal();
  return w;
}

}  // namespace

TEST(LssvmObjective, ZeroWeightsGiveMeanMaxLoss) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto task = toy(seed);
    EXPECT_DOUBLE_EQ(task.problem.objective(Solution(task.problem.dimension(), 0.0)), 1.0);
  }
}

TEST(LssvmObjective, MatchesEnumerationWithHandSetWeights) {
  const auto task = toy(1);
  const Solution w{0.7, -0.2, 0.1, -0.5, 0.9, 0.3};
  EXPECT_NEAR(task.problem.objective(w), oracle::lssvm_objective(task.problem, w), 1e-12);
  Rng rng = Rng::stream(1, {});
  for (int t = 0; t < 50; ++t) {
    const auto v = random_w(rng, 6);
    EXPECT_NEAR(task.problem.objective(v), oracle::lssvm_objective(task.problem, v), 1e-12);
  }
}

TEST(LssvmObjective, SingleLatentValueIsPlainStructuralSvm) {
  const auto p = scalar_task({{1.0, 0}, {-1.0, 1}, {0.5, 0}}, 0.1);
  const Solution w{1.0, -1.0};
  // Example hinge: max(0, 1 - margin) with margin = w.(phi(y_i) - phi(other)).
  double expected = 0.0;
  for (auto [x, y] : std::vector<std::pair<double, int>>{{1.0, 0}, {-1.0, 1}, {0.5, 0}}) {
    const double own = y == 0 ? x * w[0] : x * w[1];
    const double other = y == 0 ? x * w[1] : x * w[0];
    expected += std::max(0.0, 1.0 + other - own);
  }
  expected = 0.5 * 0.1 * 2.0 + expected / 3.0;
  EXPECT_NEAR(p.objective(w), expected, 1e-12);
  EXPECT_EQ(p.objective(w), p.bound_value(w, LatentConfig{0, 0, 0}));
}

TEST(LssvmBound, DominatesObjectiveAndTouchesAtCccpChoice) {
  const auto task = toy(2);
  const auto& p = task.problem;
  Rng rng = Rng::stream(2, {});
  for (int t = 0; t < 30; ++t) {
    const auto w = random_w(rng, p.dimension());
    const double f = p.objective(w);
    const auto touching = p.touching_config(w);
    EXPECT_EQ(touching, oracle::cccp_latent(p, w));
    EXPECT_DOUBLE_EQ(p.bound_value(w, touching), f);
    oracle::for_each_assignment(std::vector<std::uint32_t>(8, 3), [&](const LatentConfig& z) {
      if (rng.uniform01() < 0.02) {
        EXPECT_GE(p.bound_value(w, z), f - 1e-12);
        EXPECT_NEAR(p.bound_value(w, z), oracle::lssvm_bound(p, w, z), 1e-12);
      }
    });
  }
}

TEST(LssvmBound, SingleCoordinateChangeIdentity) {
  const auto task = toy(3);
  const auto& p = task.problem;
  Rng rng = Rng::stream(3, {});
  for (int t = 0; t < 200; ++t) {
    const auto w = random_w(rng, p.dimension());
    LatentConfig z(8);
    for (auto& q : z) q = static_cast<std::uint32_t>(rng.uniform_index(3));
    const double before = p.bound_value(w, z);
    const std::size_t i = rng.uniform_index(8);
    const auto old = z[i];
    z[i] = static_cast<std::uint32_t>(rng.uniform_index(3));
    const auto y = p.example(i).label;
    const double predicted =
        before + (oracle::phi_dot(p, i, y, old, w) - oracle::phi_dot(p, i, y, z[i], w)) / 8.0;
    EXPECT_NEAR(p.bound_value(w, z), predicted, 1e-12);
  }
}

TEST(LssvmBound, HingeTermsAreNonnegative) {
  const auto task = toy(4);
  const auto& p = task.problem;
  Rng rng = Rng::stream(4, {});
  for (int t = 0; t < 100; ++t) {
    const auto w = random_w(rng, p.dimension(), 3.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      EXPECT_GE(p.hinge(w, i, p.best_latent(w, i)), 0.0);
  }
}

TEST(LssvmSolver, HugeLambdaGivesNearZeroWeights) {
  const auto base = toy(5);
  const Problem p(2, base.problem.dimension(), 1e6, zero_one_loss(2), base.problem.examples());
  const auto sol = p.solve_bound(LatentConfig(8, 1));
  for (double x : sol.w) EXPECT_NEAR(x, 0.0, 1e-5);
  EXPECT_NEAR(p.bound_value(sol.w, LatentConfig(8, 1)), 1.0, 1e-5);
}

TEST(LssvmSolver, MatchesDenseGridSearchOnSeparableTask) {
  const auto p = scalar_task({{1.0, 0}, {2.0, 0}, {-1.0, 1}, {-1.5, 1}}, 0.4);
  const LatentConfig z(4, 0);
  const auto sol = p.solve_bound(z);
  const double solver_value = p.bound_value(sol.w, z);
  double grid_best = 1e300;
  Solution arg{0, 0};
  for (int a = -600; a <= 600; ++a)
    for (int b = -600; b <= 600; ++b) {
      const Solution w{a * 0.005, b * 0.005};
      const double v = oracle::lssvm_bound(p, w, z);
      if (v < grid_best) {
        grid_best = v;
        arg = w;
      }
    }
  EXPECT_LE(solver_value, grid_best + tau_qp(p));
  EXPECT_LE(grid_best - solver_value, 1e-3);  // the grid is close to the optimum
  EXPECT_NEAR(sol.w[0], arg[0], 0.02);
  EXPECT_NEAR(sol.w[1], arg[1], 0.02);
}

TEST(LssvmSolver, DualityGapAndSubgradientWithinTolerance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto task = toy(seed, 0.5);
    const auto& p = task.problem;
    Rng rng = Rng::stream(seed, {});
    LatentConfig z(8);
    for (auto& q : z) q = static_cast<std::uint32_t>(rng.uniform_index(3));
    const auto sol = p.solve_bound(z);
    EXPECT_LE(sol.gap, tau_qp(p));
    EXPECT_NEAR(sol.primal, p.bound_value(sol.w, z), 1e-12);
    EXPECT_LE(bound_subgradient_norm(p, z, sol, 1e-6), 1e-4);
    // No perturbation improves on the returned point by more than the gap.
    for (int t = 0; t < 200; ++t) {
      Solution w = sol.w;
      for (auto& x : w) x += 0.01 * rng.normal();
      EXPECT_GE(p.bound_value(w, z), sol.primal - sol.gap - 1e-12);
    }
  }
}

TEST(LssvmSolver, DeterministicAcrossRuns) {
  const auto task = toy(6);
  const LatentConfig z{0, 1, 2, 0, 1, 2, 0, 1};
  const auto a = task.problem.solve_bound(z);
  const auto b = task.problem.solve_bound(z);
  EXPECT_EQ(a.w, b.w);
}

TEST(LssvmSolver, RestrictedSolveNormalizesByIncludedExamples) {
  const auto task = toy(7);
  const auto& p = task.problem;
  const LatentConfig z(8, 1);
  std::vector<char> include{1, 1, 1, 1, 0, 0, 0, 0};
  const auto sol = p.solve_bound(z, include);
  // Same value as a problem built from the first four examples only.
  std::vector<Example> first(p.examples().begin(), p.examples().begin() + 4);
  const Problem sub(2, p.dimension(), p.lambda(), zero_one_loss(2), first);
  const auto ref = sub.solve_bound(LatentConfig(4, 1));
  EXPECT_NEAR(sol.primal, ref.primal, 1e-9);
  EXPECT_EQ(sol.examples.size(), 4u);
}

TEST(LssvmSolver, ReportsNonConvergenceWithAchievedGap) {
  const auto task = toy(8, 1.0);
  SolverConfig tight;
  tight.max_epochs = 1;
  tight.inner_updates = 1;
  tight.gap_tolerance = 1e-15;
  const Problem p(2, task.problem.dimension(), 0.4, zero_one_loss(2), task.problem.examples(), tight);
  try {
    p.solve_bound(LatentConfig(8, 0));
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.gap(), 0.0);
  }
}

TEST(LssvmProblem, ValidatesInputs) {
  std::vector<Example> ex{{0, 1, {1.0, 0.0, 0.0, 1.0}}};
  EXPECT_THROW(Problem(1, 2, 0.4, zero_one_loss(1), ex), std::invalid_argument);
  EXPECT_THROW(Problem(2, 2, 0.0, zero_one_loss(2), ex), std::invalid_argument);
  EXPECT_THROW(Problem(2, 2, 0.4, {0, 1, 1, 1}, ex), std::invalid_argument);   // nonzero diagonal
  EXPECT_THROW(Problem(2, 2, 0.4, {0, -1, 1, 0}, ex), std::invalid_argument);  // negative loss
  EXPECT_THROW(Problem(2, 3, 0.4, zero_one_loss(2), ex), std::invalid_argument);
  std::vector<Example> bad_label{{2, 1, {1.0, 0.0, 0.0, 1.0}}};
  EXPECT_THROW(Problem(2, 2, 0.4, zero_one_loss(2), bad_label), std::invalid_argument);
  const Problem ok(2, 2, 0.4, zero_one_loss(2), ex);
  EXPECT_THROW(ok.bound_value(Solution{0, 0}, LatentConfig{1}), std::out_of_range);
  EXPECT_THROW(ok.objective(Solution{0}), std::invalid_argument);
}

TEST(LssvmPredict, ZeroWeightsReturnLowestIndex) {
  const auto task = toy(9);
  const auto pred = task.problem.predict(Solution(task.problem.dimension(), 0.0), task.problem.example(3));
  EXPECT_EQ(pred, (Prediction{0, 0}));
}

TEST(LssvmPredict, BinaryWithoutLatentIsSignRule) {
  const auto p = scalar_task({{1.0, 0}, {-1.0, 1}}, 0.1);
  const Solution w{0.8, -0.3};
  for (double x : {-2.0, -0.5, 0.3, 1.7}) {
    Example e{0, 1, {x, 0.0, 0.0, x}};
    const std::uint32_t expected = w[0] * x - w[1] * x >= 0 ? 0 : 1;
    EXPECT_EQ(p.predict(w, e).label, expected) << x;
  }
}

TEST(LssvmPredict, TrainedModelBeatsZeroBaseline) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto task = toy(seed);
    const auto& p = task.problem;
    const auto w = p.optimize_bound(task.true_latent, {});
    EXPECT_LE(p.training_error(w), p.training_error(Solution(p.dimension(), 0.0)));
  }
}
