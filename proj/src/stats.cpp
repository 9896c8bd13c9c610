#include "ghd/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "ghd/errors.hpp"

namespace ghd {

Proportion make_proportion(std::uint64_t successes, std::uint64_t trials) {
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  if (trials == 0) return p;
  p.value = static_cast<double>(successes) / static_cast<double>(trials);
  p.ci95 = kZ95 * std::sqrt(p.value * (1.0 - p.value) / static_cast<double>(trials));
  return p;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw InvalidInput("chi_square_gof: need matching vectors with at least two cells");
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected[i] * total;
    if (e <= 0.0) throw InvalidInput("chi_square_gof: expected count must be positive");
    const double diff = static_cast<double>(observed[i]) - e;
    r.statistic += diff * diff / e;
  }
  r.dof = static_cast<double>(observed.size() - 1);
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

double chi_square_upper_tail(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

double chi_square_cdf(double x, double k) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(k / 2.0, x / 2.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_upper_quantile(double q) {
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), q));
}

}  // namespace ghd
