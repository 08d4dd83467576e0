// Hard-EM vs random-walk G-MM on a 20-component synthetic mixture, both
// started from the same random partitions.

#include <cstdio>

#include "gmm/harness.hpp"

using namespace gmm::harness;

int main() {
  ExperimentConfig c;
  c.dataset = "gmm20";
  c.mixture = gmm::data::gmm20_spec(0);
  c.trials = 10;
  c.selector = SelectorKind::RandomWalk;
  c.eta = 0.02;

  const auto data = prepare_data(c);
  const auto walk = run_experiment(c, data);
  const auto hard_em = run_experiment(mm_baseline(c), data);
  std::fputs(compare_report({hard_em, walk}).text.c_str(), stdout);
  std::printf("sign test p = %.3g\n", sign_test_p_value(final_objectives(walk), final_objectives(hard_em)));
}
