#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ghd/core.hpp"

namespace ghd {

// Dense transforms hold 2^n machine words.
inline constexpr std::size_t kMaxTransformBits = 26;
// Pair-enumeration fallback limit on |A|*|B|.
inline constexpr std::uint64_t kMaxEnumeratedPairs = 100'000'000;

// In-place unnormalised Walsh-Hadamard transform. Unsigned integer input
// wraps mod 2^64, which keeps integer convolutions exact (see xor_convolution).
template <typename T>
void walsh_hadamard(std::span<T> a) {
  const std::size_t size = a.size();
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t i = 0; i < size; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const T u = a[j];
        const T v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

// out[z] = #{(x, y) in A x B : x xor y = z}, over all 2^n values of z.
// Throws CapacityError for n > kMaxTransformBits.
std::vector<std::uint64_t> xor_convolution(const CubeSet& a, const CubeSet& b);

struct DistanceHistogram {
  std::size_t n = 0;
  std::vector<std::uint64_t> counts;  // counts[d] = #{(x,y) in A x B : dist(x,y) = d}

  std::uint64_t total() const;
};

enum class HistogramMethod { automatic, transform, enumerate };

DistanceHistogram distance_histogram(const CubeSet& a, const CubeSet& b,
                                     HistogramMethod method = HistogramMethod::automatic);

// xi_rho mass of one pair at distance d: 2^-n ((1+rho)/2)^(n-d) ((1-rho)/2)^d.
double xi_pair_weight(std::size_t n, double rho, std::size_t d);

double xi_measure(const DistanceHistogram& hist, double rho);
double xi_measure(const CubeSet& a, const CubeSet& b, double rho);

// Both sides of 1/2 (xi_{-rho} + xi_rho)(A x B) >= (1 - eps) xi_0(A x B).
struct CubeInequalityReport {
  std::size_t n = 0;
  double rho = 0.0;
  double eps = 0.0;
  double xi0 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  // (1 - rho^2)^(n/2) E[cosh(ln((1+rho)/(1-rho)) (dist - n/2))], evaluated directly.
  double cosh_form = 0.0;
  // Same quantity as lhs / xi0.
  double cosh_form_ratio = 0.0;
  bool empty = false;
};

CubeInequalityReport cube_inequality_margin(const DistanceHistogram& hist, double rho, double eps);
CubeInequalityReport cube_inequality_margin(const CubeSet& a, const CubeSet& b, double rho, double eps);

nlohmann::json to_json(const CubeInequalityReport& report);

// A = {0^{n/2} x : |x| = n/4}, B = {x 0^{n/2} : |x| = n/4}; n divisible by 4.
// Every pair sits at distance exactly n/2.
std::pair<CubeSet, CubeSet> concentrated_block_sets(std::size_t n);

}  // namespace ghd
