#pragma once

// Latent structural SVM as a bound-optimization problem.
//
//   F(w) = lambda/2 ||w||^2
//        + 1/n sum_i [ max_{y,z} (w.phi(i,y,z) + Delta(y, y_i)) - max_z w.phi(i,y_i,z) ]
//
// Fixing z_i in the subtracted max gives a convex piecewise-quadratic bound;
// the touching choice z_i = argmax_z w.phi(i,y_i,z) is the CCCP step.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmm/engine.hpp"
#include "gmm/rng.hpp"

namespace gmm::lssvm {

struct Example {
  std::uint32_t label = 0;
  std::uint32_t latent_count = 1;
  // Feature vectors phi(x, y, z), laid out [y][z][feature].
  std::vector<double> features;
};

struct SolverConfig {
  // Stop once the duality gap is below gap_tolerance * (1 + |primal|).
  double gap_tolerance = 1e-10;
  std::size_t max_epochs = 100000;
  // Pairwise updates per example visit.
  std::size_t inner_updates = 8;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double gap) : std::runtime_error(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

struct BoundSolution {
  Solution w;
  // Dual weights per included example over its (y, z) pieces.
  std::vector<std::vector<double>> alpha;
  std::vector<std::size_t> examples;  // which examples the bound covered
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::size_t epochs = 0;
};

struct Prediction {
  std::uint32_t label = 0;
  std::uint32_t latent = 0;
  bool operator==(const Prediction&) const = default;
};

inline std::vector<double> zero_one_loss(std::size_t label_count) {
  std::vector<double> delta(label_count * label_count, 1.0);
  for (std::size_t y = 0; y < label_count; ++y) delta[y * label_count + y] = 0.0;
  return delta;
}

inline double dot(std::span<const double> a, const Solution& w) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * w[j];
  return s;
}

class Problem {
 public:
  Problem(std::size_t label_count, std::size_t feature_dim, double lambda,
          std::vector<double> delta, std::vector<Example> examples, SolverConfig solver = {})
      : labels_(label_count),
        dim_(feature_dim),
        lambda_(lambda),
        delta_(std::move(delta)),
        examples_(std::move(examples)),
        solver_(solver) {
    if (labels_ < 2) throw std::invalid_argument("need at least two labels");
    if (dim_ == 0) throw std::invalid_argument("feature dimension must be positive");
    if (!(lambda_ > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (delta_.size() != labels_ * labels_) throw std::invalid_argument("loss table has wrong size");
    for (std::size_t a = 0; a < labels_; ++a)
      for (std::size_t b = 0; b < labels_; ++b) {
        const double d = delta_[a * labels_ + b];
        if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("loss must be nonnegative");
        if (a == b && d != 0.0) throw std::invalid_argument("loss must vanish on the diagonal");
      }
    if (examples_.empty()) throw std::invalid_argument("no examples");
    for (const auto& ex : examples_) {
      if (ex.label >= labels_) throw std::invalid_argument("example label out of range");
      if (ex.latent_count < 1) throw std::invalid_argument("latent domain must be nonempty");
      if (ex.features.size() != labels_ * ex.latent_count * dim_)
        throw std::invalid_argument("feature tensor has wrong size");
      for (double x : ex.features)
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite feature");
    }
  }

  std::size_t size() const { return examples_.size(); }
  std::size_t label_count() const { return labels_; }
  std::size_t dimension() const { return dim_; }
  double lambda() const { return lambda_; }
  const SolverConfig& solver() const { return solver_; }
  const std::vector<Example>& examples() const { return examples_; }
  const Example& example(std::size_t i) const { return examples_[i]; }

  double delta(std::size_t y, std::size_t truth) const { return delta_[y * labels_ + truth]; }

  std::span<const double> feature(const Example& ex, std::size_t y, std::size_t z) const {
    return {ex.features.data() + (y * ex.latent_count + z) * dim_, dim_};
  }
  std::span<const double> feature(std::size_t i, std::size_t y, std::size_t z) const {
    return feature(examples_[i], y, z);
  }

  double score(const Solution& w, std::size_t i, std::size_t y, std::size_t z) const {
    return dot(feature(i, y, z), w);
  }

  // max_{y,z} (w.phi + Delta(y, y_i))
  double augmented_max(const Solution& w, std::size_t i) const {
    const auto& ex = examples_[i];
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < labels_; ++y)
      for (std::size_t z = 0; z < ex.latent_count; ++z)
        best = std::max(best, dot(feature(ex, y, z), w) + delta(y, ex.label));
    return best;
  }

  // argmax_z w.phi(i, y_i, z), lowest index on ties.
  std::uint32_t best_latent(const Solution& w, std::size_t i) const {
    const auto& ex = examples_[i];
    std::uint32_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t z = 0; z < ex.latent_count; ++z) {
      const double s = dot(feature(ex, ex.label, z), w);
      if (s > best) {
        best = s;
        arg = z;
      }
    }
    return arg;
  }

  // Per-example hinge term with the latent value fixed:
  // max_{y',z'} (w.phi(i,y',z') + Delta(y', y_i)) - w.phi(i, y_i, z).
  double hinge(const Solution& w, std::size_t i, std::uint32_t z) const {
    return augmented_max(w, i) - score(w, i, examples_[i].label, z);
  }

  double regularizer(const Solution& w) const {
    double s = 0.0;
    for (double x : w) s += x * x;
    return 0.5 * lambda_ * s;
  }

  double objective(const Solution& w) const {
    check_dimension(w);
    double loss = 0.0;
    for (std::size_t i = 0; i < examples_.size(); ++i) {
      const auto& ex = examples_[i];
      loss += augmented_max(w, i) - score(w, i, ex.label, best_latent(w, i));
    }
    return regularizer(w) + loss / static_cast<double>(examples_.size());
  }

  double bound_value(const Solution& w, const LatentConfig& z) const {
    check_dimension(w);
    check_config(z);
    double loss = 0.0;
    for (std::size_t i = 0; i < examples_.size(); ++i) loss += hinge(w, i, z[i]);
    return regularizer(w) + loss / static_cast<double>(examples_.size());
  }

  LatentConfig touching_config(const Solution& w) const {
    check_dimension(w);
    LatentConfig z(examples_.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = best_latent(w, i);
    return z;
  }

  std::optional<double> strong_convexity(const LatentConfig&) const { return lambda_; }

  // Minimizes the bound for z restricted to the examples with include[i] set
  // (all examples when include is empty), normalizing the loss by the number
  // of included examples.
  BoundSolution solve_bound(const LatentConfig& z, const std::vector<char>& include = {}) const;

  Solution optimize_bound(const LatentConfig& z, const Solution& /*hint*/) const {
    return solve_bound(z).w;
  }

  Prediction predict(const Solution& w, const Example& ex) const {
    Prediction best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::uint32_t y = 0; y < labels_; ++y)
      for (std::uint32_t z = 0; z < ex.latent_count; ++z) {
        const double s = dot(feature(ex, y, z), w);
        if (s > best_score) {
          best_score = s;
          best = {y, z};
        }
      }
    return best;
  }

  double training_error(const Solution& w) const {
    std::size_t wrong = 0;
    for (const auto& ex : examples_) wrong += predict(w, ex).label != ex.label;
    return static_cast<double>(wrong) / static_cast<double>(examples_.size());
  }

  void check_config(const LatentConfig& z) const {
    if (z.size() != examples_.size()) throw std::invalid_argument("latent assignment length mismatch");
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] >= examples_[i].latent_count) throw std::out_of_range("latent value out of range");
  }

 private:
  void check_dimension(const Solution& w) const {
    if (w.size() != dim_) throw std::invalid_argument("weight vector has the wrong dimension");
  }

  std::size_t labels_;
  std::size_t dim_;
  double lambda_;
  std::vector<double> delta_;
  std::vector<Example> examples_;
  SolverConfig solver_;
};

// Dual block-coordinate ascent. With the linear term folded into each piece,
// the bound is lambda/2 ||w||^2 + 1/m sum_i max_j (a_ij.w + c_ij) where
// a_ij = phi(i,y,z) - phi(i,y_i,z_i) and c_ij = Delta(y, y_i). The dual keeps a
// simplex of weights alpha_i per example with w = -1/(lambda m) sum alpha_ij a_ij,
// and the duality gap 1/m sum_i (max_j s_ij - sum_j alpha_ij s_ij) with
// s_ij = a_ij.w + c_ij certifies the primal suboptimality.
inline BoundSolution Problem::solve_bound(const LatentConfig& z,
                                          const std::vector<char>& include) const {
  check_config(z);
  BoundSolution out;
  for (std::size_t i = 0; i < examples_.size(); ++i)
    if (include.empty() || include.at(i)) out.examples.push_back(i);
  if (out.examples.empty()) throw std::invalid_argument("bound restricted to zero examples");

  const std::size_t m = out.examples.size();
  const double scale = 1.0 / (lambda_ * static_cast<double>(m));
  out.w.assign(dim_, 0.0);
  out.alpha.resize(m);

  for (std::size_t b = 0; b < m; ++b) {
    const auto& ex = examples_[out.examples[b]];
    out.alpha[b].assign(labels_ * ex.latent_count, 0.0);
    out.alpha[b][ex.label * ex.latent_count + z[out.examples[b]]] = 1.0;
  }

  std::vector<double> s;
  // s_j = c_j + (phi_j - phi_anchor).w for example block b.
  auto piece_scores = [&](std::size_t b) {
    const std::size_t i = out.examples[b];
    const auto& ex = examples_[i];
    const double anchor = dot(feature(ex, ex.label, z[i]), out.w);
    s.resize(labels_ * ex.latent_count);
    for (std::size_t y = 0; y < labels_; ++y)
      for (std::size_t q = 0; q < ex.latent_count; ++q)
        s[y * ex.latent_count + q] = delta(y, ex.label) + dot(feature(ex, y, q), out.w) - anchor;
  };

  auto rebuild_w = [&] {
    std::fill(out.w.begin(), out.w.end(), 0.0);
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t i = out.examples[b];
      const auto& ex = examples_[i];
      const auto anchor = feature(ex, ex.label, z[i]);
      for (std::size_t j = 0; j < out.alpha[b].size(); ++j) {
        const double a = out.alpha[b][j];
        if (a == 0.0) continue;
        const auto phi = feature(ex, j / ex.latent_count, j % ex.latent_count);
        for (std::size_t k = 0; k < dim_; ++k) out.w[k] -= scale * a * (phi[k] - anchor[k]);
      }
    }
  };

  auto evaluate = [&] {
    double loss = 0.0;
    double gap = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      piece_scores(b);
      const double top = *std::max_element(s.begin(), s.end());
      double mixed = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j) mixed += out.alpha[b][j] * s[j];
      loss += top;
      gap += top - mixed;
    }
    out.primal = regularizer(out.w) + loss / static_cast<double>(m);
    out.gap = std::max(0.0, gap / static_cast<double>(m));
    out.dual = out.primal - out.gap;
  };

  for (out.epochs = 0; out.epochs < solver_.max_epochs; ++out.epochs) {
    evaluate();
    if (out.gap <= solver_.gap_tolerance * (1.0 + std::abs(out.primal))) return out;

    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t i = out.examples[b];
      const auto& ex = examples_[i];
      auto& alpha = out.alpha[b];
      piece_scores(b);
      for (std::size_t rep = 0; rep < solver_.inner_updates; ++rep) {
        std::size_t up = 0;
        std::size_t down = s.size();
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (s[j] > s[up]) up = j;
          if (alpha[j] > 0.0 && (down == s.size() || s[j] < s[down])) down = j;
        }
        const double violation = s[up] - s[down];
        if (up == down || !(violation > 0.0)) break;

        const auto phi_up = feature(ex, up / ex.latent_count, up % ex.latent_count);
        const auto phi_down = feature(ex, down / ex.latent_count, down % ex.latent_count);
        double curvature = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
          const double diff = phi_up[k] - phi_down[k];
          curvature += diff * diff;
        }
        double step = alpha[down];
        if (curvature > 0.0) step = std::min(step, violation / (curvature * scale));
        if (!(step > 0.0)) break;
        alpha[up] += step;
        alpha[down] -= step;
        if (alpha[down] < 1e-300) {
          alpha[up] += alpha[down];
          alpha[down] = 0.0;
        }
        for (std::size_t k = 0; k < dim_; ++k) out.w[k] -= step * scale * (phi_up[k] - phi_down[k]);
        piece_scores(b);
      }
    }
    rebuild_w();
  }
  evaluate();
  if (out.gap <= solver_.gap_tolerance * (1.0 + std::abs(out.primal))) return out;
  throw SolverError("bound solver did not converge; duality gap " + std::to_string(out.gap),
                    out.gap);
}

// Norm of an explicit subgradient of the bound at sol.w: the solver's dual
// weights restricted to pieces within active_tolerance of the per-example max
// (renormalized; the top piece when no weight survives).
inline double bound_subgradient_norm(const Problem& problem, const LatentConfig& z,
                                     const BoundSolution& sol, double active_tolerance) {
  const std::size_t dim = problem.dimension();
  const std::size_t m = sol.examples.size();
  std::vector<double> g(dim);
  for (std::size_t k = 0; k < dim; ++k) g[k] = problem.lambda() * sol.w[k];
  std::vector<double> s;
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t i = sol.examples[b];
    const auto& ex = problem.example(i);
    const std::size_t pieces = problem.label_count() * ex.latent_count;
    s.resize(pieces);
    for (std::size_t j = 0; j < pieces; ++j)
      s[j] = problem.delta(j / ex.latent_count, ex.label) +
             dot(problem.feature(ex, j / ex.latent_count, j % ex.latent_count), sol.w);
    const double top = *std::max_element(s.begin(), s.end());
    std::vector<double> weight(pieces, 0.0);
    double mass = 0.0;
    for (std::size_t j = 0; j < pieces; ++j)
      if (s[j] >= top - active_tolerance) {
        weight[j] = sol.alpha[b][j];
        mass += weight[j];
      }
    if (mass <= 0.0) {
      weight[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())] = 1.0;
      mass = 1.0;
    }
    const auto anchor = problem.feature(ex, ex.label, z[i]);
    for (std::size_t j = 0; j < pieces; ++j) {
      if (weight[j] == 0.0) continue;
      const auto phi = problem.feature(ex, j / ex.latent_count, j % ex.latent_count);
      const double c = weight[j] / mass / static_cast<double>(m);
      for (std::size_t k = 0; k < dim; ++k) g[k] += c * (phi[k] - anchor[k]);
    }
  }
  double norm = 0.0;
  for (double x : g) norm += x * x;
  return std::sqrt(norm);
}

// ---------------------------------------------------------------------------
// Bound selectors

// Switches examples to their touching latent value, largest per-example bound
// decrease first, until the bound at w_prev is within v_prev + tolerance.
// Every intermediate configuration is appended to `chain` when given.
inline LatentConfig repair_to_valid(const Problem& problem, const Solution& w_prev,
                                    LatentConfig z, double v_prev, double tolerance,
                                    std::vector<LatentConfig>* chain = nullptr) {
  const std::size_t n = problem.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const LatentConfig touching = problem.touching_config(w_prev);
  std::vector<double> decrease(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = problem.example(i).label;
    decrease[i] = (problem.score(w_prev, i, y, touching[i]) - problem.score(w_prev, i, y, z[i])) * inv_n;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return decrease[a] > decrease[b]; });

  if (chain) chain->push_back(z);
  for (std::size_t next = 0; problem.bound_value(w_prev, z) > v_prev + tolerance; ++next) {
    if (next == n) throw InvalidSelection("touching configuration is not valid");
    const std::size_t i = order[next];
    if (z[i] == touching[i]) continue;
    z[i] = touching[i];
    if (chain) chain->push_back(z);
  }
  return z;
}

struct LatentWalkResult {
  LatentConfig config;
  double bound = 0.0;
  std::size_t accepted = 0;
};

// Random walk over latent assignments whose bound at w_prev stays <= v_prev,
// starting from the touching assignment.
inline LatentWalkResult random_walk(const Problem& problem, const Solution& w_prev, double v_prev,
                                    std::size_t steps, Rng& rng) {
  const std::size_t n = problem.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<std::vector<double>> label_scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ex = problem.example(i);
    label_scores[i].resize(ex.latent_count);
    for (std::uint32_t z = 0; z < ex.latent_count; ++z)
      label_scores[i][z] = problem.score(w_prev, i, ex.label, z);
  }
  LatentWalkResult out;
  out.config = problem.touching_config(w_prev);
  out.bound = problem.bound_value(w_prev, out.config);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t i = rng.uniform_index(n);
    const auto count = problem.example(i).latent_count;
    if (count < 2) continue;
    const auto current = out.config[i];
    auto proposal = static_cast<std::uint32_t>(rng.uniform_index(count - 1));
    if (proposal >= current) ++proposal;
    const double delta = (label_scores[i][current] - label_scores[i][proposal]) * inv_n;
    if (out.bound + delta <= v_prev) {
      out.config[i] = proposal;
      out.bound += delta;
      if (++out.accepted % 1024 == 0) out.bound = problem.bound_value(w_prev, out.config);
    }
  }
  return out;
}

struct RandomWalkSelector {
  std::size_t steps_per_example = 10;

  LatentConfig operator()(const SelectionContext<Problem>& ctx) const {
    return random_walk(ctx.problem, ctx.w_prev, ctx.v_prev, steps_per_example * ctx.problem.size(),
                       ctx.rng)
        .config;
  }
};

// |S_t| = min(n, ceil(n t / ramp)).
inline std::size_t subset_size(std::size_t n, std::size_t t, std::size_t ramp = 10) {
  return std::min(n, (n * t + ramp - 1) / ramp);
}

// Refreshes the latent values of a random subset of examples with their
// CCCP choice, keeps the rest, then repairs to validity.
inline LatentConfig select_stochastic_subset(const Problem& problem, const Solution& w_prev,
                                             const LatentConfig& z_prev, double v_prev,
                                             std::size_t t, Rng& rng, double tolerance,
                                             std::size_t ramp = 10) {
  const std::size_t n = problem.size();
  const std::size_t count = subset_size(n, t, ramp);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
  LatentConfig z = z_prev;
  for (std::size_t s = 0; s < count; ++s) z[idx[s]] = problem.best_latent(w_prev, idx[s]);
  return repair_to_valid(problem, w_prev, std::move(z), v_prev, tolerance);
}

struct SubsetSelector {
  std::size_t ramp = 10;

  LatentConfig operator()(const SelectionContext<Problem>& ctx) const {
    return select_stochastic_subset(ctx.problem, ctx.w_prev, ctx.z_prev, ctx.v_prev, ctx.t, ctx.rng,
                                    ctx.tolerance, ramp);
  }
};

// One seeded shuffle, then round-robin fold labels.
inline std::vector<std::uint32_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2 || folds > n) throw std::invalid_argument("need 2 <= folds <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::stream(seed, {0xf01d5});
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::uint32_t> fold(n);
  for (std::size_t r = 0; r < n; ++r) fold[order[r]] = static_cast<std::uint32_t>(r % folds);
  return fold;
}

// w(S \ I_k, z): the bound minimizer over every fold but k.
inline std::vector<Solution> train_fold_models(const Problem& problem, const LatentConfig& z,
                                               const std::vector<std::uint32_t>& fold_of,
                                               std::size_t folds) {
  std::vector<Solution> models;
  models.reserve(folds);
  for (std::size_t k = 0; k < folds; ++k) {
    std::vector<char> include(problem.size());
    for (std::size_t i = 0; i < include.size(); ++i) include[i] = fold_of[i] != k;
    models.push_back(problem.solve_bound(z, include).w);
  }
  return models;
}

// g(z) = -sum_i hinge(w_{fold(i)}, i, z_i).
inline double multifold_bias(const Problem& problem, const std::vector<Solution>& models,
                             const std::vector<std::uint32_t>& fold_of, const LatentConfig& z) {
  double total = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) total += problem.hinge(models[fold_of[i]], i, z[i]);
  return -total;
}

// Per-example hinge minimizer under the held-out fold model. Hinge ties go to
// the CCCP choice under w_prev, then to the lowest index.
inline LatentConfig multifold_proposal(const Problem& problem, const std::vector<Solution>& models,
                                       const std::vector<std::uint32_t>& fold_of,
                                       const Solution& w_prev) {
  LatentConfig z(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto& model = models[fold_of[i]];
    const auto count = problem.example(i).latent_count;
    const auto cccp = problem.best_latent(w_prev, i);
    std::uint32_t arg = cccp;
    double best = problem.hinge(model, i, cccp);
    for (std::uint32_t q = 0; q < count; ++q) {
      const double h = problem.hinge(model, i, q);
      if (h < best) {
        best = h;
        arg = q;
      }
    }
    z[i] = arg;
  }
  return z;
}

// Multi-fold bias selector: propose per-example hinge minimizers under the
// held-out fold models, then walk the repair chain and keep the valid
// candidate with the largest bias.
class MultifoldSelector {
 public:
  MultifoldSelector(std::size_t n, std::size_t folds, std::uint64_t seed)
      : folds_(folds), fold_of_(assign_folds(n, folds, seed)) {}

  std::size_t folds() const { return folds_; }
  const std::vector<std::uint32_t>& fold_of() const { return fold_of_; }

  LatentConfig operator()(const SelectionContext<Problem>& ctx) const {
    const auto models = train_fold_models(ctx.problem, ctx.z_prev, fold_of_, folds_);
    std::vector<LatentConfig> chain;
    repair_to_valid(ctx.problem, ctx.w_prev,
                    multifold_proposal(ctx.problem, models, fold_of_, ctx.w_prev), ctx.v_prev,
                    ctx.tolerance, &chain);
    auto bias = [&](const LatentConfig& z, const Solution&) {
      return multifold_bias(ctx.problem, models, fold_of_, z);
    };
    return select_max_bias(ctx.problem, std::move(chain), bias, ctx.w_prev, ctx.v_prev,
                           ctx.tolerance);
  }

 private:
  std::size_t folds_;
  std::vector<std::uint32_t> fold_of_;
};

}  // namespace gmm::lssvm
