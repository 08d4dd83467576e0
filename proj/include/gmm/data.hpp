#pragma once

// Seeded synthetic data and CSV input/output.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmm/dataset.hpp"
#include "gmm/lssvm.hpp"
#include "gmm/rng.hpp"

namespace gmm::data {

// ---------------------------------------------------------------------------
// Gaussian mixtures

struct MixtureSpec {
  std::size_t components = 20;
  std::size_t dim = 2;
  double sigma = 1.0;
  double square_side = 25.0;    // means are uniform on [0, side]^dim
  double min_separation = 2.5;  // pairwise mean distance floor, in units of sigma
  std::size_t samples_per_component = 50;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1'000'000;

  void validate() const {
    if (components < 1) throw std::invalid_argument("components must be at least 1");
    if (dim < 1) throw std::invalid_argument("dim must be at least 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(square_side > 0.0)) throw std::invalid_argument("square_side must be positive");
    if (!(min_separation >= 0.0)) throw std::invalid_argument("min_separation must be nonnegative");
    if (!(min_separation * sigma < square_side))
      throw std::invalid_argument("min_separation * sigma must be below square_side");
    if (samples_per_component < 1) throw std::invalid_argument("samples_per_component must be at least 1");
  }
};

inline MixtureSpec gmm200_spec(std::uint64_t seed = 0) {
  return {.components = 200, .dim = 2, .sigma = 1.0, .square_side = 70.0, .min_separation = 2.5,
          .samples_per_component = 50, .seed = seed};
}

inline MixtureSpec gmm20_spec(std::uint64_t seed = 0) {
  return {.components = 20, .dim = 2, .sigma = 1.0, .square_side = 25.0, .min_separation = 2.5,
          .samples_per_component = 50, .seed = seed};
}

// Shaped after the Norm-25 benchmark (25 unit-variance blobs in a 15-D cube);
// not the original file.
inline MixtureSpec norm25_like_spec(std::uint64_t seed = 0) {
  return {.components = 25, .dim = 15, .sigma = 1.0, .square_side = 500.0, .min_separation = 2.5,
          .samples_per_component = 400, .seed = seed};
}

struct LabeledDataset {
  Dataset points;
  std::vector<std::uint32_t> labels;  // generating component per point
  std::vector<double> means;          // components x dim
};

inline LabeledDataset gen_mixture(const MixtureSpec& spec) {
  spec.validate();
  const std::size_t k = spec.components;
  const std::size_t dim = spec.dim;
  const double floor_sq = (spec.min_separation * spec.sigma) * (spec.min_separation * spec.sigma);

  Rng placement = Rng::stream(spec.seed, {0x3ea5});
  std::vector<double> means;
  means.reserve(k * dim);
  std::vector<double> candidate(dim);
  std::size_t attempts = 0;
  while (means.size() < k * dim) {
    if (attempts++ >= spec.max_attempts)
      throw std::runtime_error("could not place mixture means: separation constraint infeasible");
    for (auto& c : candidate) c = placement.uniform(0.0, spec.square_side);
    bool ok = true;
    for (std::size_t j = 0; ok && j < means.size() / dim; ++j) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < dim; ++a) {
        const double diff = candidate[a] - means[j * dim + a];
        d2 += diff * diff;
      }
      ok = d2 >= floor_sq;
    }
    if (ok) means.insert(means.end(), candidate.begin(), candidate.end());
  }

  Rng sampling = Rng::stream(spec.seed, {0x5a3b1e});
  const std::size_t n = k * spec.samples_per_component;
  std::vector<double> values(n * dim);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t s = 0; s < spec.samples_per_component; ++s) {
      const std::size_t i = c * spec.samples_per_component + s;
      labels[i] = static_cast<std::uint32_t>(c);
      for (std::size_t a = 0; a < dim; ++a)
        values[i * dim + a] = means[c * dim + a] + spec.sigma * sampling.normal();
    }
  return {Dataset(n, dim, std::move(values)), std::move(labels), std::move(means)};
}

// ---------------------------------------------------------------------------
// Latent-variable classification tasks

struct LatentTask {
  lssvm::Problem problem;
  std::vector<std::uint32_t> labels;
  std::vector<std::uint32_t> true_latent;
  Solution planted;  // separator used to generate the labels
  // Raw per-example inputs, for CSV export.
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Latent index z in {0, 1, 2} stands for a shift of (z - 1) * shift_magnitude.
inline constexpr std::uint32_t kShiftCount = 3;

struct LatentShiftSpec {
  std::size_t n = 8;
  std::size_t label_count = 2;
  double shift_magnitude = 1.0;
  double noise = 0.0;
  double lambda = 0.4;
  std::uint64_t seed = 0;

  void validate() const {
    if (label_count < 2) throw std::invalid_argument("label_count must be at least 2");
    if (n < 2 * label_count) throw std::invalid_argument("need n >= 2 * label_count");
    if (!(shift_magnitude >= 0.0)) throw std::invalid_argument("shift_magnitude must be nonnegative");
    if (!(noise >= 0.0)) throw std::invalid_argument("noise must be nonnegative");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  }
};

namespace detail {

inline double latent_margin(const lssvm::Problem& problem, const Solution& w, std::size_t i) {
  const auto& ex = problem.example(i);
  double own = -1e300;
  double other = -1e300;
  for (std::uint32_t y = 0; y < problem.label_count(); ++y)
    for (std::uint32_t z = 0; z < ex.latent_count; ++z) {
      const double s = problem.score(w, i, y, z);
      (y == ex.label ? own : other) = std::max(y == ex.label ? own : other, s);
    }
  return own - other;
}

// Rescales w so the smallest latent margin is exactly 1; with a 0-1 loss this
// makes every hinge term vanish.
inline void normalize_margin(const lssvm::Problem& problem, Solution& w) {
  double smallest = 1e300;
  for (std::size_t i = 0; i < problem.size(); ++i)
    smallest = std::min(smallest, latent_margin(problem, w, i));
  if (smallest > 0.0)
    for (auto& x : w) x /= smallest;
}

}  // namespace detail

// 2-D points translated horizontally by the latent shift. phi(x, y, z) puts
// (x1 + shift(z), x2, 1) in block y. Labels come from a planted linear
// separator applied to the point at its true shift; observed points are
// moved off that position by the true shift and then perturbed by noise.
//
// With a linear feature map the shift only adds shift * w_y1 to class y's
// score, so the latent choice reduces to a per-class offset.
inline LatentTask gen_latent_shift_task(const LatentShiftSpec& spec) {
  spec.validate();
  const std::size_t labels = spec.label_count;
  const std::size_t dim = 3 * labels;
  Rng rng = Rng::stream(spec.seed, {0x1a7e47});

  Solution planted(dim);
  for (std::size_t y = 0; y < labels; ++y) {
    const double angle = 2.0 * M_PI * static_cast<double>(y) / static_cast<double>(labels);
    planted[3 * y] = std::cos(angle);
    planted[3 * y + 1] = std::sin(angle);
  }

  // Latent margin of a noiseless observation under the planted weights.
  auto planted_margin = [&](double x1, double x2, std::size_t y) {
    double own = -1e300, other = -1e300;
    for (std::size_t c = 0; c < labels; ++c)
      for (std::uint32_t q = 0; q < kShiftCount; ++q) {
        const double shifted = x1 + (static_cast<double>(q) - 1.0) * spec.shift_magnitude;
        const double s = planted[3 * c] * shifted + planted[3 * c + 1] * x2;
        (c == y ? own : other) = std::max(c == y ? own : other, s);
      }
    return own - other;
  };

  std::vector<lssvm::Example> examples(spec.n);
  std::vector<std::uint32_t> ys(spec.n), shifts(spec.n);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < spec.n; ++i) {
    // Balanced labels: example i belongs to class i mod |Y|. Points are
    // redrawn until the planted weights classify the noiseless observation
    // with a clear margin.
    const auto y = static_cast<std::uint32_t>(i % labels);
    double px = 0.0, py = 0.0, true_shift = 0.0;
    std::uint32_t z = 0;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > 100000) throw std::runtime_error("could not draw a separable point");
      px = rng.uniform(-2.0, 2.0);
      py = rng.uniform(-2.0, 2.0);
      z = static_cast<std::uint32_t>(rng.uniform_index(kShiftCount));
      true_shift = (static_cast<double>(z) - 1.0) * spec.shift_magnitude;
      if (planted_margin(px - true_shift, py, y) > 0.25) break;
    }
    const double x1 = px - true_shift + spec.noise * rng.normal();
    const double x2 = py + spec.noise * rng.normal();

    auto& ex = examples[i];
    ex.label = y;
    ex.latent_count = kShiftCount;
    ex.features.assign(labels * kShiftCount * dim, 0.0);
    for (std::size_t c = 0; c < labels; ++c)
      for (std::uint32_t q = 0; q < kShiftCount; ++q) {
        double* phi = ex.features.data() + (c * kShiftCount + q) * dim + 3 * c;
        phi[0] = x1 + (static_cast<double>(q) - 1.0) * spec.shift_magnitude;
        phi[1] = x2;
        phi[2] = 1.0;
      }
    ys[i] = y;
    shifts[i] = z;
    rows.push_back({x1, x2, static_cast<double>(y), static_cast<double>(z)});
  }
  lssvm::Problem problem(labels, dim, spec.lambda, lssvm::zero_one_loss(labels), std::move(examples));
  detail::normalize_margin(problem, planted);
  return {std::move(problem),        std::move(ys),   std::move(shifts), std::move(planted),
          {"x1", "x2", "y", "true_shift"}, std::move(rows)};
}

// 1-D signals containing a class template at one of three offsets. Window z
// covers samples [z * shift, z * shift + window) and phi(x, y, z) puts
// (window samples, 1) in block y. Unlike the 2-D shift task the latent
// choice here changes which evidence the classifier sees.
struct LatentWindowSpec {
  std::size_t n = 60;
  std::size_t label_count = 2;
  std::size_t window = 8;
  std::size_t shift = 8;  // offset between consecutive windows
  double template_scale = 1.0;
  double noise = 1.0;
  double lambda = 0.4;
  std::uint64_t seed = 0;

  void validate() const {
    if (label_count < 2) throw std::invalid_argument("label_count must be at least 2");
    if (n < 2 * label_count) throw std::invalid_argument("need n >= 2 * label_count");
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    if (!(noise >= 0.0)) throw std::invalid_argument("noise must be nonnegative");
    if (!(template_scale >= 0.0)) throw std::invalid_argument("template_scale must be nonnegative");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  }
  std::size_t signal_length() const { return window + 2 * shift; }
};

inline LatentTask gen_latent_window_task(const LatentWindowSpec& spec) {
  spec.validate();
  const std::size_t labels = spec.label_count;
  const std::size_t block = spec.window + 1;
  const std::size_t dim = labels * block;
  const std::size_t length = spec.signal_length();

  Rng template_rng = Rng::stream(spec.seed, {0x7e3b1a7e});
  std::vector<std::vector<double>> templates(labels, std::vector<double>(spec.window));
  for (auto& t : templates)
    for (auto& x : t) x = spec.template_scale * template_rng.normal();

  Rng rng = Rng::stream(spec.seed, {0x5169a1});
  std::vector<lssvm::Example> examples(spec.n);
  std::vector<std::uint32_t> ys(spec.n), offsets(spec.n);
  std::vector<std::vector<double>> rows;
  std::vector<double> signal(length);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto y = static_cast<std::uint32_t>(i % labels);
    const auto z = static_cast<std::uint32_t>(rng.uniform_index(kShiftCount));
    for (auto& s : signal) s = spec.noise * rng.normal();
    for (std::size_t a = 0; a < spec.window; ++a) signal[z * spec.shift + a] += templates[y][a];

    auto& ex = examples[i];
    ex.label = y;
    ex.latent_count = kShiftCount;
    ex.features.assign(labels * kShiftCount * dim, 0.0);
    for (std::size_t c = 0; c < labels; ++c)
      for (std::uint32_t q = 0; q < kShiftCount; ++q) {
        double* phi = ex.features.data() + (c * kShiftCount + q) * dim + c * block;
        std::copy_n(signal.begin() + q * spec.shift, spec.window, phi);
        phi[spec.window] = 1.0;
      }
    ys[i] = y;
    offsets[i] = z;
    std::vector<double> row{static_cast<double>(y), static_cast<double>(z)};
    row.insert(row.end(), signal.begin(), signal.end());
    rows.push_back(std::move(row));
  }

  Solution planted(dim, 0.0);
  for (std::size_t c = 0; c < labels; ++c)
    std::copy(templates[c].begin(), templates[c].end(), planted.begin() + c * block);

  std::vector<std::string> columns{"y", "true_shift"};
  for (std::size_t a = 0; a < length; ++a) columns.push_back("s" + std::to_string(a));

  LatentTask task{lssvm::Problem(labels, dim, spec.lambda, lssvm::zero_one_loss(labels),
                                 std::move(examples)),
                  std::move(ys), std::move(offsets), std::move(planted), std::move(columns),
                  std::move(rows)};
  detail::normalize_margin(task.problem, task.planted);
  return task;
}

// Every example's latent value moved to a wrong one: (true + 1) mod |Z|.
inline LatentConfig adversarial_latent(const LatentTask& task) {
  LatentConfig z(task.true_latent.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (task.true_latent[i] + 1) % kShiftCount;
  return z;
}

// ---------------------------------------------------------------------------
// CSV

struct CsvOptions {
  std::optional<char> delimiter;  // detected from the first line when empty
  std::vector<std::size_t> drop_columns;
};

namespace detail {

inline char detect_delimiter(std::string_view line) {
  for (char c : {',', ';', '\t'})
    if (line.find(c) != std::string_view::npos) return c;
  return ' ';
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  if (delim == ' ') {
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos == line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      cells.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    return cells;
  }
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = line.find(delim, start);
    cells.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return cells;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

}  // namespace detail

// Rectangular numeric table -> Dataset. A first line with no numeric cell is
// treated as a header. Column indices in drop_columns refer to the file.
inline Dataset parse_csv(std::istream& in, const CsvOptions& options = {}) {
  std::string line;
  std::optional<char> delim = options.delimiter;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::vector<double> values;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (!delim) delim = detail::detect_delimiter(line);
    const auto cells = detail::split(line, *delim);
    if (first) {
      first = false;
      bool any_number = false;
      for (auto c : cells) any_number = any_number || detail::parse_number(c).has_value();
      if (!any_number) continue;
    }
    if (columns == 0) {
      columns = cells.size();
      for (auto c : options.drop_columns)
        if (c >= columns) throw std::invalid_argument("drop column " + std::to_string(c) + " out of range");
    } else if (cells.size() != columns) {
      throw std::runtime_error("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                               " columns, expected " + std::to_string(columns));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (std::find(options.drop_columns.begin(), options.drop_columns.end(), c) !=
          options.drop_columns.end())
        continue;
      const auto v = detail::parse_number(cells[c]);
      if (!v || !std::isfinite(*v))
        throw std::runtime_error("non-numeric cell at row " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": '" + std::string(detail::trim(cells[c])) + "'");
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("no rows");
  const std::size_t dim = values.size() / rows;
  if (dim == 0) throw std::runtime_error("no columns left after dropping");
  return Dataset(rows, dim, std::move(values));
}

inline Dataset load_csv(const std::string& path, const CsvOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_csv(in, options);
}

inline void write_table(std::ostream& os, const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

// Points plus ground-truth component label as the last column.
inline void write_csv(std::ostream& os, const LabeledDataset& d) {
  std::vector<std::string> header;
  for (std::size_t a = 0; a < d.points.dim(); ++a) header.push_back("x" + std::to_string(a + 1));
  header.push_back("component");
  std::vector<std::vector<double>> rows(d.points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = d.points.row(i);
    rows[i].assign(r.begin(), r.end());
    rows[i].push_back(d.labels[i]);
  }
  write_table(os, header, rows);
}

inline void write_csv(std::ostream& os, const LatentTask& task) { write_table(os, task.columns, task.rows); }

}  // namespace gmm::data
