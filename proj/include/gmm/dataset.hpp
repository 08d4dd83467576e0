#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gmm/rng.hpp"

namespace gmm {

// Dense row-major n x dim point matrix.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::size_t n, std::size_t dim, std::vector<double> values)
      : n_(n), dim_(dim), values_(std::move(values)) {
    if (n_ == 0 || dim_ == 0) throw std::invalid_argument("dataset must have n >= 1 and dim >= 1");
    if (values_.size() != n_ * dim_) throw std::invalid_argument("dataset size mismatch");
    for (double x : values_)
      if (!std::isfinite(x)) throw std::invalid_argument("dataset contains a non-finite value");
  }

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  const std::vector<double>& values() const { return values_; }

  // FNV-1a over the raw bit patterns; used to refuse comparing results that
  // came from different data.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t x) {
      for (int b = 0; b < 8; ++b) {
        h ^= (x >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    feed(n_);
    feed(dim_);
    for (double x : values_) feed(std::bit_cast<std::uint64_t>(x));
    return h;
  }

 private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

}  // namespace gmm
