#pragma once

// k-means as a bound-optimization problem. Fixing every point's cluster index
// gives the quadratic bound sum_i ||x_i - mu_{z_i}||^2 >= F(mu), minimized in
// closed form by per-cluster means.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmm/dataset.hpp"
#include "gmm/engine.hpp"
#include "gmm/rng.hpp"

namespace gmm::kmeans {

enum class DeadClusters {
  Origin,          // empty cluster centers collapse to 0
  RespawnFarthest  // empty clusters move onto the points farthest from their centers
};

inline double point_distance(std::span<const double> a, const double* b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

inline std::size_t cluster_count(const Dataset& data, const Solution& centers) {
  if (centers.empty() || centers.size() % data.dim() != 0)
    throw std::invalid_argument("centers do not match the data dimension");
  return centers.size() / data.dim();
}

// Nearest center per point; ties go to the lowest index.
inline LatentConfig nearest_assignment(const Dataset& data, const Solution& centers) {
  const std::size_t k = cluster_count(data, centers);
  const std::size_t dim = data.dim();
  LatentConfig z(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double dist = point_distance(x, centers.data() + c * dim);
      if (dist < best) {
        best = dist;
        arg = static_cast<std::uint32_t>(c);
      }
    }
    z[i] = arg;
  }
  return z;
}

inline double objective(const Dataset& data, const Solution& centers) {
  const std::size_t k = cluster_count(data, centers);
  const std::size_t dim = data.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      best = std::min(best, point_distance(x, centers.data() + c * dim));
    total += best;
  }
  return total;
}

inline double bound_value(const Dataset& data, const Solution& centers, const LatentConfig& z) {
  const std::size_t k = cluster_count(data, centers);
  if (z.size() != data.size()) throw std::invalid_argument("assignment length mismatch");
  const std::size_t dim = data.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (z[i] >= k) throw std::out_of_range("cluster index out of range");
    total += point_distance(data.row(i), centers.data() + z[i] * dim);
  }
  return total;
}

inline Solution optimize_bound(const Dataset& data, const LatentConfig& z, std::size_t k,
                               DeadClusters dead = DeadClusters::Origin) {
  if (z.size() != data.size()) throw std::invalid_argument("assignment length mismatch");
  const std::size_t dim = data.dim();
  Solution mu(k * dim, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (z[i] >= k) throw std::out_of_range("cluster index out of range");
    const auto x = data.row(i);
    double* m = mu.data() + z[i] * dim;
    for (std::size_t j = 0; j < dim; ++j) m[j] += x[j];
    ++count[z[i]];
  }
  std::vector<std::size_t> empty;
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] == 0) {
      empty.push_back(c);
      continue;
    }
    for (std::size_t j = 0; j < dim; ++j) mu[c * dim + j] /= static_cast<double>(count[c]);
  }
  if (dead == DeadClusters::RespawnFarthest && !empty.empty()) {
    // Any value of an empty cluster's center minimizes the bound, so moving
    // it keeps the update exact.
    std::vector<char> taken(data.size(), 0);
    for (std::size_t c : empty) {
      double far = -1.0;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (taken[i] || count[z[i]] == 0) continue;
        const double dist = point_distance(data.row(i), mu.data() + z[i] * dim);
        if (dist > far) {
          far = dist;
          arg = i;
        }
      }
      if (far < 0.0) break;
      taken[arg] = 1;
      const auto x = data.row(arg);
      std::copy(x.begin(), x.end(), mu.begin() + static_cast<std::ptrdiff_t>(c * dim));
    }
  }
  return mu;
}

class Problem {
 public:
  Problem(const Dataset& data, std::size_t k, DeadClusters dead = DeadClusters::Origin)
      : data_(&data), k_(k), dead_(dead) {
    if (k_ == 0) throw std::invalid_argument("k must be at least 1");
  }

  const Dataset& data() const { return *data_; }
  std::size_t k() const { return k_; }
  DeadClusters dead_clusters() const { return dead_; }

  std::size_t dimension() const { return k_ * data_->dim(); }
  double objective(const Solution& w) const { return kmeans::objective(*data_, w); }
  double bound_value(const Solution& w, const LatentConfig& z) const {
    return kmeans::bound_value(*data_, w, z);
  }
  Solution optimize_bound(const LatentConfig& z, const Solution& /*hint*/) const {
    return kmeans::optimize_bound(*data_, z, k_, dead_);
  }
  LatentConfig touching_config(const Solution& w) const { return nearest_assignment(*data_, w); }

  // The bound's Hessian is 2|I_j| I per center block, so it is 2-strongly
  // convex exactly when no cluster is empty.
  std::optional<double> strong_convexity(const LatentConfig& z) const {
    std::vector<char> used(k_, 0);
    for (auto c : z) used[c] = 1;
    for (char u : used)
      if (!u) return std::nullopt;
    return 2.0;
  }

 private:
  const Dataset* data_;
  std::size_t k_;
  DeadClusters dead_;
};

struct WalkResult {
  LatentConfig config;
  double bound = 0.0;  // incrementally tracked bound value at the given centers
  std::size_t accepted = 0;
};

// Random walk over assignments whose bound at `centers` stays <= v_prev.
// Starts from the nearest-center assignment and proposes single-point moves
// to a uniformly chosen different cluster.
inline WalkResult random_walk(const Dataset& data, const Solution& centers, double v_prev,
                              std::size_t steps, Rng& rng) {
  const std::size_t k = cluster_count(data, centers);
  const std::size_t n = data.size();
  const std::size_t dim = data.dim();
  std::vector<double> dist(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c)
      dist[i * k + c] = point_distance(data.row(i), centers.data() + c * dim);

  WalkResult out;
  out.config.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t arg = 0;
    for (std::size_t c = 1; c < k; ++c)
      if (dist[i * k + c] < dist[i * k + arg]) arg = static_cast<std::uint32_t>(c);
    out.config[i] = arg;
  }
  auto recompute = [&] {
    double b = 0.0;
    for (std::size_t i = 0; i < n; ++i) b += dist[i * k + out.config[i]];
    return b;
  };
  out.bound = recompute();
  if (k < 2) return out;

  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t i = rng.uniform_index(n);
    const auto current = out.config[i];
    auto proposal = static_cast<std::uint32_t>(rng.uniform_index(k - 1));
    if (proposal >= current) ++proposal;
    const double delta = dist[i * k + proposal] - dist[i * k + current];
    if (out.bound + delta <= v_prev) {
      out.config[i] = proposal;
      out.bound += delta;
      if (++out.accepted % 1024 == 0) out.bound = recompute();
    }
  }
  return out;
}

inline LatentConfig random_walk_select(const Dataset& data, const Solution& centers,
                                       double v_prev, std::size_t steps, Rng& rng) {
  return random_walk(data, centers, v_prev, steps, rng).config;
}

// Walk length is steps_per_example * n proposals per iteration.
struct RandomWalkSelector {
  std::size_t steps_per_example = 10;

  LatentConfig operator()(const SelectionContext<Problem>& ctx) const {
    const auto& data = ctx.problem.data();
    return random_walk_select(data, ctx.w_prev, ctx.v_prev, steps_per_example * data.size(),
                              ctx.rng);
  }
};

// ---------------------------------------------------------------------------
// Initializers

enum class InitMethod { Forgy, RandomPartition, KMeansPlusPlus };

inline std::string_view to_string(InitMethod m) {
  switch (m) {
    case InitMethod::Forgy: return "forgy";
    case InitMethod::RandomPartition: return "random-partition";
    case InitMethod::KMeansPlusPlus: return "kmeans++";
  }
  return "?";
}

inline InitMethod parse_init_method(std::string_view s) {
  if (s == "forgy") return InitMethod::Forgy;
  if (s == "random-partition" || s == "random_partition") return InitMethod::RandomPartition;
  if (s == "kmeans++" || s == "kmeanspp" || s == "k-means++") return InitMethod::KMeansPlusPlus;
  throw std::invalid_argument("unknown initializer '" + std::string(s) + "'");
}

struct Initialization {
  Solution centers;
  LatentConfig config;
};

namespace detail {
inline Solution gather_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  Solution mu;
  mu.reserve(rows.size() * data.dim());
  for (std::size_t r : rows) {
    const auto x = data.row(r);
    mu.insert(mu.end(), x.begin(), x.end());
  }
  return mu;
}
}  // namespace detail

// k distinct examples chosen uniformly without replacement.
inline Initialization init_forgy(const Dataset& data, std::size_t k, Rng& rng) {
  if (k == 0 || k > data.size()) throw std::invalid_argument("forgy needs 1 <= k <= n");
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.uniform_index(idx.size() - i)]);
  idx.resize(k);
  Initialization init;
  init.centers = detail::gather_rows(data, idx);
  init.config = nearest_assignment(data, init.centers);
  return init;
}

inline Initialization init_random_partition(const Dataset& data, std::size_t k, Rng& rng,
                                            DeadClusters dead = DeadClusters::Origin) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  Initialization init;
  init.config.resize(data.size());
  for (auto& z : init.config) z = static_cast<std::uint32_t>(rng.uniform_index(k));
  init.centers = optimize_bound(data, init.config, k, dead);
  return init;
}

// D^2 seeding with exact weights.
inline Initialization init_kmeanspp(const Dataset& data, std::size_t k, Rng& rng) {
  if (k == 0 || k > data.size()) throw std::invalid_argument("k-means++ needs 1 <= k <= n");
  const std::size_t n = data.size();
  std::vector<std::size_t> chosen{rng.uniform_index(n)};
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = point_distance(data.row(i), data.row(chosen[0]).data());
  while (chosen.size() < k) {
    double total = 0.0;
    for (double x : d2) total += x;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (target < acc) {
          pick = i;
          break;
        }
      }
      while (d2[pick] == 0.0 && pick > 0) --pick;  // guard against rounding at the tail
    } else {
      pick = rng.uniform_index(n);  // every point already coincides with a center
    }
    chosen.push_back(pick);
    const auto c = data.row(pick);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], point_distance(data.row(i), c.data()));
  }
  Initialization init;
  init.centers = detail::gather_rows(data, chosen);
  init.config = nearest_assignment(data, init.centers);
  return init;
}

inline Initialization initialize(InitMethod method, const Dataset& data, std::size_t k, Rng& rng,
                                 DeadClusters dead = DeadClusters::Origin) {
  switch (method) {
    case InitMethod::Forgy: return init_forgy(data, k, rng);
    case InitMethod::RandomPartition: return init_random_partition(data, k, rng, dead);
    case InitMethod::KMeansPlusPlus: return init_kmeanspp(data, k, rng);
  }
  throw std::invalid_argument("unknown initializer");
}

}  // namespace gmm::kmeans
