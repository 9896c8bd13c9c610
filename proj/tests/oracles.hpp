#pragma once

// Slow, obviously-correct reference computations shared by the tests.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "ghd/core.hpp"

namespace oracle {

inline std::vector<std::uint64_t> pair_histogram(const ghd::CubeSet& a, const ghd::CubeSet& b) {
  std::vector<std::uint64_t> h(a.dimension() + 1, 0);
  for (auto x : a.elements())
    for (auto y : b.elements()) {
      std::size_t d = 0;
      for (std::size_t i = 0; i < a.dimension(); ++i) d += ((x >> i) & 1) != ((y >> i) & 1);
      ++h[d];
    }
  return h;
}

// xi_rho(A x B) summed pair by pair from the product formula.
inline long double xi_mass(const ghd::CubeSet& a, const ghd::CubeSet& b, double rho) {
  const std::size_t n = a.dimension();
  const long double keep = (1.0L + rho) / 2.0L, flip = (1.0L - rho) / 2.0L;
  long double s = 0.0L;
  for (auto x : a.elements())
    for (auto y : b.elements()) {
      long double w = std::pow(2.0L, -static_cast<long double>(n));
      for (std::size_t i = 0; i < n; ++i) w *= (((x ^ y) >> i) & 1) ? flip : keep;
      s += w;
    }
  return s;
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long double binomial_pmf(std::size_t n, long double p, std::size_t d) {
  long double c = 1.0L;
  for (std::size_t i = 1; i <= d; ++i) c = c * static_cast<long double>(n - d + i) / static_cast<long double>(i);
  return c * std::pow(p, static_cast<long double>(d)) * std::pow(1.0L - p, static_cast<long double>(n - d));
}

// Number of k-subsets of [n] that meet a fixed d-set in exactly j points.
inline std::uint64_t hypergeometric_count(std::uint64_t n, std::uint64_t d, std::uint64_t k, std::uint64_t j) {
  return choose(d, j) * choose(n - d, k - j);
}

// Rectangle sums over every (nonempty rows) x (nonempty cols) of a 2^n x 2^n
// weight table, by direct double loop. Returns {min, argmin rows, argmin cols}.
struct RectangleExtreme {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

inline RectangleExtreme min_rectangle(std::size_t n, const std::function<double(std::uint64_t, std::uint64_t)>& w) {
  const std::uint64_t size = std::uint64_t{1} << n;
  RectangleExtreme best;
  for (std::uint64_t rows = 1; rows < (std::uint64_t{1} << size); ++rows)
    for (std::uint64_t cols = 1; cols < (std::uint64_t{1} << size); ++cols) {
      double s = 0.0;
      for (std::uint64_t x = 0; x < size; ++x) {
        if (!((rows >> x) & 1)) continue;
        for (std::uint64_t y = 0; y < size; ++y)
          if ((cols >> y) & 1) s += w(x, y);
      }
      if (s < best.value) best = {s, rows, cols};
    }
  return best;
}

inline std::vector<std::uint64_t> mask_elements(std::uint64_t mask) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t i = 0; i < 64; ++i)
    if ((mask >> i) & 1) v.push_back(i);
  return v;
}

// Worst promise error of the sampling protocol by counting k-subsets.
inline double sampling_worst_error(std::size_t n, double t, double g, std::size_t k) {
  const auto params = ghd::GhdParams::make(n, t, g);
  const double total = static_cast<double>(choose(n, k));
  double worst = 0.0;
  for (std::size_t d = 0; d <= n; ++d) {
    const ghd::Label truth = ghd::ghd_label_for_distance(params, d);
    if (truth == ghd::Label::star) continue;
    std::uint64_t bad = 0;
    for (std::size_t j = 0; j <= std::min(d, k); ++j) {
      const bool says_zero = static_cast<double>(j) * static_cast<double>(n) <= static_cast<double>(k) * t;
      if (says_zero != (truth == ghd::Label::zero)) bad += hypergeometric_count(n, d, k, j);
    }
    worst = std::max(worst, static_cast<double>(bad) / total);
  }
  return worst;
}

}  // namespace oracle
