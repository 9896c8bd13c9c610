#pragma once

#include <cstdint>
#include <span>

namespace ghd {

inline constexpr double kZ95 = 1.959963984540054;

// Binomial proportion with a normal-approximation 95% half-width.
struct Proportion {
  double value = 0.0;
  double ci95 = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
};

Proportion make_proportion(std::uint64_t successes, std::uint64_t trials);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Pearson goodness of fit of observed counts against expected probabilities.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected);

double chi_square_upper_tail(double statistic, double dof);

// Pr[chi^2_k <= x]
double chi_square_cdf(double x, double k);

double normal_cdf(double x);
double normal_upper_tail(double x);
// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);
// Inverse of normal_upper_tail on (0, 1); accurate far into the tail.
double normal_upper_quantile(double q);

}  // namespace ghd
