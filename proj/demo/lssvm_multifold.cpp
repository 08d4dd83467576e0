// CCCP vs multi-fold G-MM on a latent window task started from wrong
// latent positions. Prints how many latent variables each method moved.

#include <cstdio>

#include "gmm/harness.hpp"

using namespace gmm::harness;

int main() {
  ExperimentConfig c;
  c.problem = ProblemKind::LatentSvm;
  c.task = "window";
  c.window_task = {.n = 40, .label_count = 2, .window = 128, .shift = 128, .template_scale = 0.5,
                   .noise = 1.0, .lambda = 0.4, .seed = 0};
  c.latent_init = LatentInit::Adversarial;
  c.selector = SelectorKind::Multifold;
  c.folds = 4;
  c.eta = 0.1;

  const auto data = prepare_data(c);
  const auto gmm_run = run_experiment(c, data);
  const auto cccp = run_experiment(mm_baseline(c), data);
  std::fputs(compare_report({cccp, gmm_run}).text.c_str(), stdout);
  const double n = static_cast<double>(data.task().problem.size());
  std::printf("latent variables changed: cccp %.0f%%, g-mm %.0f%%\n",
              100.0 * cccp.trials[0].latent_changes / n, 100.0 * gmm_run.trials[0].latent_changes / n);
}
