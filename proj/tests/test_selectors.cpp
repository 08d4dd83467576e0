#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gmm/data.hpp"
#include "gmm/lssvm.hpp"
#include "oracles.hpp"

using namespace gmm;
using namespace gmm::lssvm;

namespace {

data::LatentTask toy(std::uint64_t seed, std::size_t n = 8) {
  data::LatentShiftSpec s;
  s.n = n;
  s.shift_magnitude = 1.0;
  s.noise = 0.4;
  s.seed = seed;
  return data::gen_latent_shift_task(s);
}

struct State {
  Solution w;
  LatentConfig z;
  double v;
};

// A plausible engine state: w minimizes the bound for z, and v lies between
// F(w) and b(w) as Algorithm 1 guarantees.
State random_state(const Problem& p, Rng& rng, double eta) {
  LatentConfig z(p.size());
  for (auto& q : z) q = static_cast<std::uint32_t>(rng.uniform_index(3));
  Solution w = p.optimize_bound(z, {});
  for (auto& x : w) x += 0.2 * rng.normal();
  const double b = p.bound_value(w, z);
  const double f = p.objective(w);
  return {w, z, b - eta * (b - f)};
}

double exact_bias(const Problem& p, const std::vector<Solution>& models, const std::vector<std::uint32_t>& fold,
                  const LatentConfig& z) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    total += oracle::loss_augmented(p, i, models[fold[i]]) - oracle::phi_dot(p, i, p.example(i).label, z[i], models[fold[i]]);
  return -total;
}

}  // namespace

TEST(LatentRandomWalk, EveryResultIsValid) {
  const auto task = toy(1);
  const auto& p = task.problem;
  Rng rng = Rng::stream(1, {});
  for (int t = 0; t < 1000; ++t) {
    const auto s = random_state(p, rng, 0.1);
    Rng walk_rng = Rng::stream(t, {2});
    const auto r = random_walk(p, s.w, s.v, 80, walk_rng);
    EXPECT_TRUE(is_valid(p, r.config, s.w, s.v, 1e-12));
  }
}

TEST(LatentRandomWalk, IncrementalBookkeepingMatchesRecomputation) {
  const auto task = toy(2, 200);
  const auto& p = task.problem;
  Rng rng = Rng::stream(2, {});
  const auto s = random_state(p, rng, 0.02);
  const double f = p.objective(s.w);
  const double v = f + 0.5;
  const auto r = random_walk(p, s.w, v, 100000, rng);
  EXPECT_GT(r.accepted, 1024u);
  const double full = p.bound_value(s.w, r.config);
  EXPECT_NEAR(r.bound, full, 1e-9 * std::max(1.0, std::abs(full)));
}

TEST(StochasticSubset, FullSubsetIsTouchingConfiguration) {
  const auto task = toy(3);
  const auto& p = task.problem;
  Rng rng = Rng::stream(3, {});
  const auto s = random_state(p, rng, 0.5);
  const auto z = select_stochastic_subset(p, s.w, s.z, s.v, 10, rng, 0.0);
  EXPECT_EQ(subset_size(8, 10), 8u);
  EXPECT_EQ(z, p.touching_config(s.w));
}

TEST(StochasticSubset, EmptySubsetWithZeroGapKeepsPrevious) {
  const auto task = toy(4);
  const auto& p = task.problem;
  Rng rng = Rng::stream(4, {});
  const auto s = random_state(p, rng, 0.5);
  EXPECT_EQ(subset_size(8, 0), 0u);
  const double v = p.bound_value(s.w, s.z);  // d_{t-1} = 0 means v = b(w_prev)
  EXPECT_EQ(select_stochastic_subset(p, s.w, s.z, v, 0, rng, 0.0), s.z);
}

TEST(StochasticSubset, RampReachesFullSizeAtTen) {
  EXPECT_EQ(subset_size(100, 1), 10u);
  EXPECT_EQ(subset_size(100, 5), 50u);
  EXPECT_EQ(subset_size(7, 1), 1u);
  EXPECT_EQ(subset_size(100, 25), 100u);
}

TEST(StochasticSubset, EveryResultIsValid) {
  const auto task = toy(5);
  const auto& p = task.problem;
  Rng rng = Rng::stream(5, {});
  for (int t = 0; t < 1000; ++t) {
    const auto s = random_state(p, rng, 0.1);
    const auto z = select_stochastic_subset(p, s.w, s.z, s.v, 1 + t % 12, rng, 1e-12);
    EXPECT_TRUE(is_valid(p, z, s.w, s.v, 1e-12));
  }
}

TEST(Repair, ChainSwitchesOneExampleAtATimeTowardTouching) {
  const auto task = toy(6);
  const auto& p = task.problem;
  Rng rng = Rng::stream(6, {});
  for (int t = 0; t < 100; ++t) {
    const auto s = random_state(p, rng, 0.1);
    LatentConfig start(8);
    for (auto& q : start) q = static_cast<std::uint32_t>(rng.uniform_index(3));
    std::vector<LatentConfig> chain;
    const auto out = repair_to_valid(p, s.w, start, s.v, 0.0, &chain);
    ASSERT_FALSE(chain.empty());
    EXPECT_EQ(chain.front(), start);
    EXPECT_EQ(chain.back(), out);
    EXPECT_TRUE(is_valid(p, out, s.w, s.v, 0.0));
    const auto touching = p.touching_config(s.w);
    for (std::size_t c = 1; c < chain.size(); ++c) {
      EXPECT_EQ(count_changes(chain[c - 1], chain[c]), 1u);
      for (std::size_t i = 0; i < 8; ++i)
        if (chain[c][i] != chain[c - 1][i]) {
          EXPECT_EQ(chain[c][i], touching[i]);
        }
    }
    // Every configuration before the last one is invalid.
    for (std::size_t c = 0; c + 1 < chain.size(); ++c) EXPECT_FALSE(is_valid(p, chain[c], s.w, s.v, 0.0));
  }
}

TEST(Folds, RoundRobinAfterSeededShuffle) {
  const auto a = assign_folds(10, 4, 3);
  const auto b = assign_folds(10, 4, 3);
  EXPECT_EQ(a, b);
  std::vector<int> sizes(4, 0);
  for (auto f : a) ++sizes[f];
  EXPECT_EQ(sizes, (std::vector<int>{3, 3, 2, 2}));
  EXPECT_THROW(assign_folds(3, 4, 0), std::invalid_argument);
  EXPECT_THROW(assign_folds(3, 1, 0), std::invalid_argument);
}

TEST(Multifold, FoldModelsEqualToPreviousGiveCccpLatents) {
  const auto task = toy(7);
  const auto& p = task.problem;
  Rng rng = Rng::stream(7, {});
  const auto s = random_state(p, rng, 0.5);
  const auto fold = assign_folds(8, 2, 1);
  const std::vector<Solution> models(2, s.w);
  // The hinge is the augmented max minus the own-label score, so its
  // minimizer over z is the score maximizer.
  EXPECT_EQ(multifold_proposal(p, models, fold, s.w), p.touching_config(s.w));
}

TEST(Multifold, FoldModelsAreTrainedOnComplementaryExamples) {
  const auto task = toy(8);
  const auto& p = task.problem;
  const auto fold = assign_folds(8, 2, 5);
  const LatentConfig z(8, 1);
  const auto models = train_fold_models(p, z, fold, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<Example> rest;
    for (std::size_t i = 0; i < 8; ++i)
      if (fold[i] != k) rest.push_back(p.example(i));
    const Problem sub(2, p.dimension(), p.lambda(), zero_one_loss(2), rest);
    const auto ref = sub.solve_bound(LatentConfig(rest.size(), 1));
    EXPECT_NEAR(sub.bound_value(models[k], LatentConfig(rest.size(), 1)), ref.primal, 1e-8);
  }
}

TEST(Multifold, ChosenAssignmentBeatsTouchingBiasWhenItDiffers) {
  std::size_t differed = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto task = toy(seed);
    const auto& p = task.problem;
    Rng rng = Rng::stream(seed, {});
    const auto s = random_state(p, rng, 0.02);
    MultifoldSelector selector(8, 2, seed);
    SelectionContext<Problem> ctx{p, 2, s.w, s.v, s.z, 0.02, 1e-12, rng};
    const auto chosen = selector(ctx);
    EXPECT_TRUE(is_valid(p, chosen, s.w, s.v, 1e-12));

    const auto models = train_fold_models(p, s.z, selector.fold_of(), 2);
    const auto touching = p.touching_config(s.w);
    const double chosen_bias = exact_bias(p, models, selector.fold_of(), chosen);
    EXPECT_NEAR(chosen_bias, multifold_bias(p, models, selector.fold_of(), chosen), 1e-12);
    if (chosen != touching) {
      ++differed;
      EXPECT_GE(chosen_bias, exact_bias(p, models, selector.fold_of(), touching));
    }
    // Over all 3^8 assignments, nothing scores above the unconstrained
    // per-example optimum the selector proposes.
    double best_any = -1e300;
    oracle::for_each_assignment(std::vector<std::uint32_t>(8, 3), [&](const LatentConfig& z) {
      best_any = std::max(best_any, exact_bias(p, models, selector.fold_of(), z));
    });
    const auto proposal = multifold_proposal(p, models, selector.fold_of(), s.w);
    EXPECT_NEAR(exact_bias(p, models, selector.fold_of(), proposal), best_any, 1e-9);
  }
  EXPECT_GT(differed, 0u);
}

TEST(Multifold, EveryResultIsValid) {
  const auto task = toy(9);
  const auto& p = task.problem;
  Rng rng = Rng::stream(9, {});
  MultifoldSelector selector(8, 4, 9);
  for (int t = 0; t < 300; ++t) {
    const auto s = random_state(p, rng, 0.1);
    SelectionContext<Problem> ctx{p, 2, s.w, s.v, s.z, 0.1, 1e-12, rng};
    EXPECT_TRUE(is_valid(p, selector(ctx), s.w, s.v, 1e-12));
  }
}
