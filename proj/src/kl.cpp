#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <boost/math/special_functions/digamma.hpp>

#include "ghd/errors.hpp"
#include "ghd/gauss.hpp"

namespace ghd {

namespace {

constexpr double kClip = 8.0;
constexpr std::size_t kMaxBinsPerAxis = 4096;

double gauss_mass(double a, double b) {
  if (a >= 0.0) return normal_upper_tail(a) - normal_upper_tail(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return 1.0 - normal_cdf(a) - normal_upper_tail(b);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Bins over [max(min, -8), min(max, 8)]; the outer bins reach to -inf and +inf.
struct Axis {
  double lo = 0.0;
  double width = 1.0;
  std::size_t bins = 1;
  std::vector<double> mass;  // gamma mass of each bin

  std::size_t index(double x) const {
    if (!(x >= lo)) return 0;
    const auto i = static_cast<std::size_t>((x - lo) / width);
    return std::min(i, bins - 1);
  }
};

Axis make_axis(std::span<const double> samples, double exponent) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double h = 2.0 * iqr * std::pow(static_cast<double>(sorted.size()), -exponent);
  Axis ax;
  ax.lo = std::max(sorted.front(), -kClip);
  const double hi = std::min(sorted.back(), kClip);
  const double span = hi - ax.lo;
  if (!(span > 0.0) || !(h > 0.0)) {
    ax.bins = 1;
    ax.width = 1.0;
  } else {
    ax.bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(span / h)), 1, kMaxBinsPerAxis);
    ax.width = span / static_cast<double>(ax.bins);
  }
  ax.mass.resize(ax.bins);
  for (std::size_t j = 0; j < ax.bins; ++j) {
    const double a = j == 0 ? -std::numeric_limits<double>::infinity() : ax.lo + static_cast<double>(j) * ax.width;
    const double b = j + 1 == ax.bins ? std::numeric_limits<double>::infinity()
                                      : ax.lo + static_cast<double>(j + 1) * ax.width;
    ax.mass[j] = gauss_mass(a, b);
  }
  return ax;
}

struct BinnedResult {
  double plugin = 0.0;
  double tv = 0.0;
  double tolerance = 0.0;
  std::size_t occupied = 0;
};

// Plug-in divergence, total variation and its noise scale from bin counts
// against reference masses. `count_of` enumerates every bin.
template <typename Mass, typename Count>
BinnedResult binned_divergence(std::size_t bins, double n, Mass mass_of, Count count_of) {
  BinnedResult r;
  for (std::size_t j = 0; j < bins; ++j) {
    const double q = mass_of(j);
    const double p = count_of(j) / n;
    if (p > 0.0) {
      r.plugin += p * std::log(p / q);
      ++r.occupied;
    }
    r.tv += std::fabs(p - q);
    r.tolerance += std::sqrt(q / n);
  }
  r.tv /= 2.0;
  r.tolerance /= 2.0;
  return r;
}

KLEstimate finish(double raw, KLMethod method, std::uint64_t n, double bias, const BinnedResult& b) {
  KLEstimate k;
  k.method = method;
  k.sample_count = n;
  k.bias_note = bias;
  k.clipped = raw < 0.0;
  k.value = std::max(raw, 0.0);
  k.pinsker.tv = b.tv;
  k.pinsker.bound = std::sqrt(k.value / 2.0);
  k.pinsker.tolerance = b.tolerance;
  k.pinsker.ok = b.tv <= k.pinsker.bound + b.tolerance;
  return k;
}

BinnedResult binned_1d(std::span<const double> samples, const Axis& ax) {
  std::vector<double> counts(ax.bins, 0.0);
  for (double x : samples) counts[ax.index(x)] += 1.0;
  return binned_divergence(ax.bins, static_cast<double>(samples.size()),
                           [&](std::size_t j) { return ax.mass[j]; }, [&](std::size_t j) { return counts[j]; });
}

double spacing_entropy(std::span<const double> samples, std::size_t m) {
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= m ? i - m : 0;
    const std::size_t hi = std::min(i + m, n - 1);
    // Boundary weights shrink the window factor near the ends of the sample.
    double c = 2.0;
    if (i < m) c = 1.0 + static_cast<double>(i) / md;
    else if (i + m >= n) c = 1.0 + static_cast<double>(n - 1 - i) / md;
    const double gap = std::max(x[hi] - x[lo], std::numeric_limits<double>::min());
    s += std::log(nd / (c * md) * gap);
  }
  return s / nd;
}

}  // namespace

std::string_view to_string(KLMethod m) { return m == KLMethod::binned ? "binned" : "spacing"; }

nlohmann::json to_json(const KLEstimate& k) {
  return {{"value", k.value},
          {"method", to_string(k.method)},
          {"sample_count", k.sample_count},
          {"bias_note", k.bias_note},
          {"clipped", k.clipped},
          {"pinsker", {{"tv", k.pinsker.tv}, {"bound", k.pinsker.bound}, {"tolerance", k.pinsker.tolerance}, {"ok", k.pinsker.ok}}}};
}

KLEstimate kl_to_gaussian(std::span<const double> samples, KLMethod method) {
  const std::size_t n = samples.size();
  if (method == KLMethod::binned && n < kMinBinnedSamples)
    throw InvalidInput("binned divergence estimate needs at least 10^4 samples");
  if (method == KLMethod::spacing && n < 100) throw InvalidInput("spacing divergence estimate needs at least 100 samples");
  for (double x : samples)
    if (!std::isfinite(x)) throw InvalidInput("samples must be finite");

  const Axis ax = make_axis(samples, 1.0 / 3.0);
  const BinnedResult b = binned_1d(samples, ax);
  const double nd = static_cast<double>(n);
  if (method == KLMethod::binned) {
    const double bias = (static_cast<double>(b.occupied) - 1.0) / (2.0 * nd);
    return finish(b.plugin - bias, method, n, bias, b);
  }
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(nd))));
  double second = 0.0;
  for (double x : samples) second += x * x;
  const double cross = 0.5 * std::log(2.0 * std::numbers::pi) + 0.5 * second / nd;
  const double md = static_cast<double>(m);
  const double bias = std::log(2.0 * md) - boost::math::digamma(2.0 * md);
  return finish(cross - spacing_entropy(samples, m), method, n, bias, b);
}

KLComparison kl_to_gaussian_both(std::span<const double> samples) {
  KLComparison c;
  c.binned = kl_to_gaussian(samples, KLMethod::binned);
  c.spacing = kl_to_gaussian(samples, KLMethod::spacing);
  const double hi = std::max(c.binned.value, c.spacing.value);
  c.disagree = hi > 0.01 && std::fabs(c.binned.value - c.spacing.value) > 0.25 * hi;
  return c;
}

KLEstimate kl_to_gaussian_2d(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInput("paired samples must have equal length");
  if (xs.size() < kMinBinnedSamples) throw InvalidInput("binned divergence estimate needs at least 10^4 samples");
  const Axis ax = make_axis(xs, 0.25), ay = make_axis(ys, 0.25);
  std::unordered_map<std::size_t, double> counts;
  for (std::size_t i = 0; i < xs.size(); ++i) counts[ax.index(xs[i]) * ay.bins + ay.index(ys[i])] += 1.0;
  const double nd = static_cast<double>(xs.size());
  const BinnedResult b = binned_divergence(
      ax.bins * ay.bins, nd, [&](std::size_t j) { return ax.mass[j / ay.bins] * ay.mass[j % ay.bins]; },
      [&](std::size_t j) {
        const auto it = counts.find(j);
        return it == counts.end() ? 0.0 : it->second;
      });
  const double bias = (static_cast<double>(b.occupied) - 1.0) / (2.0 * nd);
  return finish(b.plugin - bias, KLMethod::binned, xs.size(), bias, b);
}

}  // namespace ghd
