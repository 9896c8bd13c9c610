#include "ghd/cubexform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace ghd {

namespace {

void check_same_dimension(const CubeSet& a, const CubeSet& b) {
  if (a.dimension() != b.dimension()) throw InvalidInput("cube sets of different dimension");
}

void check_rho(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [-1, 1]");
}

std::vector<std::uint64_t> dense_indicator(const CubeSet& s) {
  std::vector<std::uint64_t> v(std::size_t{1} << s.dimension(), 0);
  for (auto e : s.elements()) v[e] = 1;
  return v;
}

// log(1 + cosh-style) helper: log cosh(v) without overflow.
double log_cosh(double v) {
  const double a = std::fabs(v);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

std::vector<std::uint64_t> xor_convolution(const CubeSet& a, const CubeSet& b) {
  check_same_dimension(a, b);
  const std::size_t n = a.dimension();
  if (n > kMaxTransformBits) throw CapacityError("xor_convolution: n exceeds the dense transform limit");
  // Arithmetic is mod 2^64. The true result of the inverse transform is
  // 2^n * conv[z] <= 2^n * min(|A|,|B|) <= 2^(2n) < 2^64, so the residue is exact.
  std::vector<std::uint64_t> fa = dense_indicator(a);
  std::vector<std::uint64_t> fb = dense_indicator(b);
  walsh_hadamard<std::uint64_t>(fa);
  walsh_hadamard<std::uint64_t>(fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  fb.clear();
  fb.shrink_to_fit();
  walsh_hadamard<std::uint64_t>(fa);
  for (auto& v : fa) v >>= n;
  return fa;
}

std::uint64_t DistanceHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

DistanceHistogram distance_histogram(const CubeSet& a, const CubeSet& b, HistogramMethod method) {
  check_same_dimension(a, b);
  const std::size_t n = a.dimension();
  DistanceHistogram h{n, std::vector<std::uint64_t>(n + 1, 0)};
  if (a.empty() || b.empty()) return h;

  const unsigned __int128 pairs = static_cast<unsigned __int128>(a.size()) * b.size();
  if (method == HistogramMethod::automatic) {
    const bool dense_ok = n <= kMaxTransformBits;
    const double transform_cost = static_cast<double>(n + 1) * std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n, 60)));
    if (dense_ok && !(static_cast<double>(pairs) < transform_cost)) method = HistogramMethod::transform;
    else method = HistogramMethod::enumerate;
  }
  if (method == HistogramMethod::enumerate) {
    if (pairs > kMaxEnumeratedPairs)
      throw CapacityError("distance_histogram: too many pairs for enumeration at this n");
    for (auto x : a.elements())
      for (auto y : b.elements()) ++h.counts[static_cast<std::size_t>(std::popcount(x ^ y))];
    return h;
  }
  const std::vector<std::uint64_t> conv = xor_convolution(a, b);
  for (std::size_t z = 0; z < conv.size(); ++z) h.counts[static_cast<std::size_t>(std::popcount(z))] += conv[z];
  return h;
}

double xi_pair_weight(std::size_t n, double rho, std::size_t d) {
  check_rho(rho);
  const double up = 1.0 + rho;
  const double down = 1.0 - rho;
  const auto nd = static_cast<double>(n);
  const auto dd = static_cast<double>(d);
  // 4^-n (1+rho)^(n-d) (1-rho)^d, directly unless it leaves the normal range.
  const double log_mag = std::fabs((nd - dd) * std::log(up / 2.0)) + std::fabs(dd * std::log(down / 2.0));
  if (log_mag <= 700.0) {
    return std::ldexp(std::pow(up, nd - dd) * std::pow(down, dd), -2 * static_cast<int>(n));
  }
  if ((up == 0.0 && n > d) || (down == 0.0 && d > 0)) return 0.0;
  double lw = -2.0 * nd * std::log(2.0);
  if (n > d) lw += (nd - dd) * std::log(up);
  if (d > 0) lw += dd * std::log(down);
  return std::exp(lw);
}

double xi_measure(const DistanceHistogram& hist, double rho) {
  check_rho(rho);
  double total = 0.0;
  for (std::size_t d = 0; d <= hist.n; ++d) {
    if (hist.counts[d] == 0) continue;
    total += static_cast<double>(hist.counts[d]) * xi_pair_weight(hist.n, rho, d);
  }
  return total;
}

double xi_measure(const CubeSet& a, const CubeSet& b, double rho) {
  check_rho(rho);
  return xi_measure(distance_histogram(a, b), rho);
}

CubeInequalityReport cube_inequality_margin(const DistanceHistogram& hist, double rho, double eps) {
  check_rho(rho);
  CubeInequalityReport r;
  r.n = hist.n;
  r.rho = rho;
  r.eps = eps;
  const std::uint64_t pairs = hist.total();
  if (pairs == 0) {
    r.empty = true;
    return r;
  }
  r.xi0 = xi_measure(hist, 0.0);
  r.lhs = 0.5 * (xi_measure(hist, -rho) + xi_measure(hist, rho));
  r.rhs = (1.0 - eps) * r.xi0;
  r.margin = r.lhs - r.rhs;
  r.cosh_form_ratio = r.lhs / r.xi0;

  const double nd = static_cast<double>(hist.n);
  const double inv_pairs = 1.0 / static_cast<double>(pairs);
  double direct = 0.0;
  if (std::fabs(rho) == 1.0) {
    // Only the distance-0 and distance-n classes survive: 1/2 2^n (frac_0 + frac_n).
    direct = 0.5 * std::ldexp(1.0, static_cast<int>(hist.n)) *
             static_cast<double>(hist.counts.front() + hist.counts.back()) * inv_pairs;
    if (hist.n == 0) direct = 1.0;
  } else {
    const double scale = 0.5 * nd * std::log1p(-rho * rho);
    const double slope = std::log1p(rho) - std::log1p(-rho);
    for (std::size_t d = 0; d <= hist.n; ++d) {
      if (hist.counts[d] == 0) continue;
      const double u = static_cast<double>(d) - nd / 2.0;
      direct += static_cast<double>(hist.counts[d]) * inv_pairs * std::exp(scale + log_cosh(slope * u));
    }
  }
  r.cosh_form = direct;
  return r;
}

CubeInequalityReport cube_inequality_margin(const CubeSet& a, const CubeSet& b, double rho, double eps) {
  check_rho(rho);
  return cube_inequality_margin(distance_histogram(a, b), rho, eps);
}

nlohmann::json to_json(const CubeInequalityReport& r) {
  return nlohmann::json{{"n", r.n},
                        {"rho", r.rho},
                        {"eps", r.eps},
                        {"xi0", r.xi0},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"margin", r.margin},
                        {"cosh_form", r.cosh_form},
                        {"cosh_form_ratio", r.cosh_form_ratio},
                        {"empty", r.empty},
                        {"exact", true}};
}

std::pair<CubeSet, CubeSet> concentrated_block_sets(std::size_t n) {
  if (n == 0 || n % 4 != 0) throw InvalidInput("concentrated_block_sets: n must be a positive multiple of 4");
  if (n > 64) throw InvalidInput("concentrated_block_sets: n must be at most 64");
  const std::size_t half = n / 2;
  std::vector<std::uint64_t> high, low;
  // Enumerate half-length words of weight n/4 by Gosper's hack.
  const std::uint64_t limit = std::uint64_t{1} << half;
  for (std::uint64_t w = (std::uint64_t{1} << (n / 4)) - 1; w < limit;) {
    low.push_back(w);              // x 0^{n/2}: x occupies the first n/2 positions
    high.push_back(w << half);     // 0^{n/2} x
    const std::uint64_t c = w & (0 - w);
    const std::uint64_t r = w + c;
    w = (((r ^ w) >> 2) / c) | r;
  }
  return {CubeSet::from_elements(n, std::move(high)), CubeSet::from_elements(n, std::move(low))};
}

}  // namespace ghd
