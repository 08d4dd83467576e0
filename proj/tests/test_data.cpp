#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "gmm/data.hpp"
#include "gmm/engine.hpp"
#include "oracles.hpp"

using namespace gmm;
using namespace gmm::data;

TEST(Mixture, Gmm200ShapeMatchesSpecification) {
  const auto d = gen_mixture(gmm200_spec(1));
  EXPECT_EQ(d.points.size(), 10000u);
  EXPECT_EQ(d.points.dim(), 2u);
  EXPECT_EQ(d.means.size(), 400u);
}

TEST(Mixture, SingleComponentSampleMeanNearTrueMean) {
  MixtureSpec s{.components = 1, .dim = 2, .sigma = 1.5, .square_side = 10, .min_separation = 2.5,
                .samples_per_component = 4000, .seed = 3};
  const auto d = gen_mixture(s);
  const double n = 4000;
  for (std::size_t a = 0; a < 2; ++a) {
    double mean = 0.0;
    for (std::size_t i = 0; i < d.points.size(); ++i) mean += d.points.row(i)[a];
    mean /= n;
    EXPECT_NEAR(mean, d.means[a], 5.0 * s.sigma / std::sqrt(n));
  }
}

TEST(Mixture, Gmm20MeansRespectSeparation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = gen_mixture(gmm20_spec(seed));
    ASSERT_EQ(d.means.size(), 40u);
    for (std::size_t a = 0; a < 20; ++a) {
      EXPECT_GE(d.means[2 * a], 0.0);
      EXPECT_LE(d.means[2 * a], 25.0);
      for (std::size_t b = a + 1; b < 20; ++b) {
        const double dx = d.means[2 * a] - d.means[2 * b];
        const double dy = d.means[2 * a + 1] - d.means[2 * b + 1];
        EXPECT_GE(std::sqrt(dx * dx + dy * dy), 2.5);
      }
    }
  }
}

TEST(Mixture, ReproduciblePerSeed) {
  const auto a = gen_mixture(gmm20_spec(7));
  const auto b = gen_mixture(gmm20_spec(7));
  const auto c = gen_mixture(gmm20_spec(8));
  EXPECT_EQ(a.points.values(), b.points.values());
  EXPECT_EQ(a.points.fingerprint(), b.points.fingerprint());
  EXPECT_NE(a.points.fingerprint(), c.points.fingerprint());
}

TEST(Mixture, RejectsInfeasibleSpecs) {
  MixtureSpec s = gmm20_spec();
  s.square_side = 2.0;  // 2.5 sigma floor does not fit
  EXPECT_THROW(gen_mixture(s), std::invalid_argument);
  s = gmm20_spec();
  s.components = 500;
  s.square_side = 10.0;
  s.max_attempts = 20000;
  EXPECT_THROW(gen_mixture(s), std::runtime_error);
  s = gmm20_spec();
  s.sigma = 0.0;
  EXPECT_THROW(gen_mixture(s), std::invalid_argument);
}

TEST(LatentShiftTask, NoiselessPlantedWeightsLeaveOnlyRegularizer) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LatentShiftSpec s;
    s.n = 12;
    s.label_count = 3;
    s.noise = 0.0;
    s.seed = seed;
    const auto task = gen_latent_shift_task(s);
    const auto& p = task.problem;
    double reg = 0.0;
    for (double x : task.planted) reg += x * x;
    reg *= 0.5 * p.lambda();
    const double tol = 1e-9;
    for (std::size_t i = 0; i < p.size(); ++i)
      EXPECT_LE(p.hinge(task.planted, i, p.best_latent(task.planted, i)), tol);
    EXPECT_NEAR(p.objective(task.planted), reg, tol);
    EXPECT_EQ(p.dimension(), 9u);
  }
}

TEST(LatentShiftTask, RequiresTwoExamplesPerLabel) {
  LatentShiftSpec s;
  s.n = 3;
  EXPECT_THROW(gen_latent_shift_task(s), std::invalid_argument);
}

TEST(LatentShiftTask, ZeroShiftMakesLatentsIrrelevant) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LatentShiftSpec s;
    s.n = 8;
    s.shift_magnitude = 0.0;
    s.noise = 0.3;
    s.seed = seed;
    const auto task = gen_latent_shift_task(s);
    const auto& p = task.problem;
    LatentConfig z0(8);
    for (std::size_t i = 0; i < 8; ++i) z0[i] = (task.true_latent[i] + 1) % 3;
    RunOptions opt;
    opt.first_bound = z0;
    const Solution w0(p.dimension(), 0.0);
    const auto cccp = run(p, w0, z0, GmmConfig{}, GreedySelector{}, opt);
    GmmConfig g;
    g.eta = 0.1;
    g.seed = seed;
    const auto gmm = run(p, w0, z0, g, lssvm::MultifoldSelector(8, 2, seed));
    const double tau = 1e-6 * (1.0 + p.objective(w0));
    EXPECT_NEAR(cccp.final_objective(), gmm.final_objective(), 10 * tau);
  }
}

TEST(LatentShiftTask, ToyEnumerationIsFast) {
  LatentShiftSpec s;
  const auto task = gen_latent_shift_task(s);
  const auto& p = task.problem;
  const Solution w{0.3, 0.1, -0.2, -0.4, 0.2, 0.5};
  const auto start = std::chrono::steady_clock::now();
  std::size_t count = 0;
  double best = 1e300;
  oracle::for_each_assignment(std::vector<std::uint32_t>(8, 3), [&](const LatentConfig& z) {
    best = std::min(best, p.bound_value(w, z));
    ++count;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(count, 6561u);
  EXPECT_DOUBLE_EQ(best, p.objective(w));
  EXPECT_LT(secs, 1.0);
}

TEST(LatentWindowTask, NoiselessPlantedWeightsLeaveOnlyRegularizer) {
  LatentWindowSpec s;
  s.n = 20;
  s.window = 6;
  s.shift = 6;
  s.noise = 0.0;
  s.seed = 2;
  const auto task = gen_latent_window_task(s);
  const auto& p = task.problem;
  double reg = 0.0;
  for (double x : task.planted) reg += x * x;
  EXPECT_NEAR(p.objective(task.planted), 0.5 * p.lambda() * reg, 1e-9);
  EXPECT_EQ(p.dimension(), 2u * 7u);
}

TEST(LatentWindowTask, ZeroShiftGivesIdenticalWindows) {
  LatentWindowSpec s;
  s.n = 10;
  s.window = 5;
  s.shift = 0;
  const auto task = gen_latent_window_task(s);
  const auto& p = task.problem;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t y = 0; y < 2; ++y) {
      const auto a = p.feature(i, y, 0);
      const auto b = p.feature(i, y, 2);
      EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    }
}

TEST(LatentTasks, AdversarialInitIsWrongEverywhere) {
  LatentWindowSpec s;
  const auto task = gen_latent_window_task(s);
  const auto z = adversarial_latent(task);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NE(z[i], task.true_latent[i]);
}

TEST(Csv, ThreeRowsTwoColumns) {
  std::istringstream in("1,2\n3,4\n5,6\n");
  const auto d = parse_csv(in);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_EQ(d.row(2)[1], 6.0);
}

TEST(Csv, EmptyInputHasNoRows) {
  std::istringstream in("");
  try {
    parse_csv(in);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "no rows");
  }
}

TEST(Csv, NonNumericCellReportsRowAndColumn) {
  std::istringstream in("1,2\n3,abc\n");
  try {
    parse_csv(in);
    FAIL();
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(Csv, DropsLabelColumnAndDetectsDelimiters) {
  std::istringstream ws("1.5 2.5 1\n  3 4 2\n");
  CsvOptions drop;
  drop.drop_columns = {2};
  const auto a = parse_csv(ws, drop);
  EXPECT_EQ(a.dim(), 2u);
  EXPECT_EQ(a.row(1)[0], 3.0);

  std::istringstream semi("x;y\n1;2\n");
  const auto b = parse_csv(semi);
  EXPECT_EQ(b.size(), 1u);

  std::istringstream tabs("1\t2\n3\t4\n");
  EXPECT_EQ(parse_csv(tabs).dim(), 2u);
}

TEST(Csv, RaggedRowsAreRejected) {
  std::istringstream in("1,2\n3\n");
  EXPECT_THROW(parse_csv(in), std::runtime_error);
}

TEST(Csv, MixtureRoundTrip) {
  MixtureSpec s = gmm20_spec(4);
  s.samples_per_component = 3;
  const auto d = gen_mixture(s);
  std::stringstream buf;
  write_csv(buf, d);
  CsvOptions opts;
  opts.drop_columns = {2};
  const auto back = parse_csv(buf, opts);
  EXPECT_EQ(back.values(), d.points.values());
}

TEST(Csv, LatentTaskExportHasDocumentedColumns) {
  LatentShiftSpec s;
  const auto task = gen_latent_shift_task(s);
  std::stringstream buf;
  write_csv(buf, task);
  std::string header;
  std::getline(buf, header);
  EXPECT_EQ(header, "x1,x2,y,true_shift");
  std::size_t rows = 0;
  for (std::string line; std::getline(buf, line);) ++rows;
  EXPECT_EQ(rows, 8u);
}
