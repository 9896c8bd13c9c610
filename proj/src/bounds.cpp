#include "ghd/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/binomial.hpp>

#include "ghd/errors.hpp"
#include "ghd/rng.hpp"

namespace ghd {

namespace {

std::uint64_t cube_size(std::size_t n) { return std::uint64_t{1} << n; }

void check_rectangle(const Rectangle& r, std::size_t n) {
  if (r.rows.dimension() != n || r.cols.dimension() != n)
    throw InvalidInput("rectangle dimension does not match the law");
}

const PairLaw& require(const std::optional<PairLaw>& law, const char* name) {
  if (!law) throw InvalidInput(std::string("certificate is missing ") + name);
  return *law;
}

// Signed weight S(x, y) of a single pair. Distance-only weights use a kernel
// indexed by dist(x, y); anything else is a dense 4^n table.
class PairKernel {
 public:
  static PairKernel by_distance(std::size_t n, std::vector<double> k) {
    PairKernel p;
    p.n_ = n;
    p.by_distance_ = std::move(k);
    if (n <= kMaxTransformBits) {
      p.spectrum_.resize(cube_size(n));
      for (std::uint64_t z = 0; z < p.spectrum_.size(); ++z)
        p.spectrum_[z] = p.by_distance_[static_cast<std::size_t>(std::popcount(z))];
      walsh_hadamard<double>(p.spectrum_);
    }
    return p;
  }

  static PairKernel dense(std::size_t n, std::vector<double> table) {
    PairKernel p;
    p.n_ = n;
    p.table_ = std::move(table);
    return p;
  }

  std::size_t dimension() const { return n_; }
  bool distance_only() const { return !by_distance_.empty(); }

  double at(std::uint64_t x, std::uint64_t y) const {
    if (distance_only()) return by_distance_[static_cast<std::size_t>(std::popcount(x ^ y))];
    return table_[(x << n_) | y];
  }

  // out[x] = sum_y S(x, y) ind[y]
  std::vector<double> row_gains(std::span<const std::uint8_t> ind) const {
    const std::uint64_t size = cube_size(n_);
    std::vector<double> out(size, 0.0);
    if (distance_only()) {
      for (std::uint64_t y = 0; y < size; ++y) out[y] = ind[y];
      walsh_hadamard<double>(out);
      for (std::uint64_t z = 0; z < size; ++z) out[z] *= spectrum_[z];
      walsh_hadamard<double>(out);
      const double scale = std::ldexp(1.0, -static_cast<int>(n_));
      for (auto& v : out) v *= scale;
      return out;
    }
    for (std::uint64_t x = 0; x < size; ++x) {
      const double* row = table_.data() + (x << n_);
      double s = 0.0;
      for (std::uint64_t y = 0; y < size; ++y)
        if (ind[y]) s += row[y];
      out[x] = s;
    }
    return out;
  }

  // out[y] = sum_x S(x, y) ind[x]
  std::vector<double> col_gains(std::span<const std::uint8_t> ind) const {
    if (distance_only()) return row_gains(ind);
    const std::uint64_t size = cube_size(n_);
    std::vector<double> out(size, 0.0);
    for (std::uint64_t x = 0; x < size; ++x) {
      if (!ind[x]) continue;
      const double* row = table_.data() + (x << n_);
      for (std::uint64_t y = 0; y < size; ++y) out[y] += row[y];
    }
    return out;
  }

  double rectangle_sum(const Rectangle& r) const {
    if (distance_only()) {
      const DistanceHistogram h = distance_histogram(r.rows, r.cols);
      double s = 0.0;
      for (std::size_t d = 0; d < h.counts.size(); ++d)
        if (h.counts[d]) s += static_cast<double>(h.counts[d]) * by_distance_[d];
      return s;
    }
    double s = 0.0;
    for (auto x : r.rows.elements())
      for (auto y : r.cols.elements()) s += at(x, y);
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> by_distance_;
  std::vector<double> spectrum_;
  std::vector<double> table_;
};

// Smallest admissible subset of `values`: every negative entry, topped up with
// the smallest remaining entries until it has at least `required` members.
std::vector<std::uint8_t> best_subset(std::span<const double> values, std::uint64_t required, double& total) {
  required = std::max<std::uint64_t>(required, 1);
  std::vector<std::uint8_t> ind(values.size(), 0);
  std::uint64_t count = 0;
  total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < 0.0) {
      ind[i] = 1;
      ++count;
      total += values[i];
    }
  if (count >= required) return ind;
  std::vector<std::uint32_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(required - 1), idx.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b] || (values[a] == values[b] && a < b); });
  std::fill(ind.begin(), ind.end(), 0);
  total = 0.0;
  for (std::uint64_t i = 0; i < required; ++i) {
    ind[idx[i]] = 1;
    total += values[idx[i]];
  }
  return ind;
}

std::uint64_t required_pairs(std::size_t n, double min_mass) {
  if (min_mass <= 0.0) return 0;
  if (min_mass > 1.0) throw InfeasibleError("minimum rectangle mass exceeds 1");
  return static_cast<std::uint64_t>(std::ceil(min_mass * std::ldexp(1.0, static_cast<int>(2 * n)) - 1e-9));
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return a == 0 ? 0 : (a + b - 1) / b; }

struct ScanResult {
  Rectangle rect;
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t examined = 0;
};

std::uint64_t rectangle_count_exhaustive(std::size_t n) {
  const std::uint64_t sides = (std::uint64_t{1} << cube_size(n)) - 1;
  return sides * sides;
}

// Global minimum of sum_{R} S over rectangles with at least `min_pairs` pairs.
ScanResult minimize_exhaustive(const PairKernel& k, std::uint64_t min_pairs) {
  const std::size_t n = k.dimension();
  if (n > kMaxExhaustiveScanBits) throw CapacityError("exhaustive rectangle scan is limited to n <= 4");
  const std::uint64_t size = cube_size(n);
  std::vector<double> table(size * size);
  for (std::uint64_t x = 0; x < size; ++x)
    for (std::uint64_t y = 0; y < size; ++y) table[x * size + y] = k.at(x, y);

  ScanResult best;
  best.examined = rectangle_count_exhaustive(n);
  std::vector<double> colsum(size, 0.0);
  std::uint64_t row_mask = 0;
  std::uint64_t best_rows = 0;
  std::vector<std::uint8_t> best_cols;
  const std::uint64_t subsets = std::uint64_t{1} << size;
  for (std::uint64_t s = 1; s < subsets; ++s) {
    const unsigned r = static_cast<unsigned>(std::countr_zero(s));
    const bool adding = !((row_mask >> r) & 1ULL);
    row_mask ^= std::uint64_t{1} << r;
    for (std::uint64_t y = 0; y < size; ++y) colsum[y] += adding ? table[r * size + y] : -table[r * size + y];
    const auto rows = static_cast<std::uint64_t>(std::popcount(row_mask));
    const std::uint64_t need = ceil_div(min_pairs, rows);
    if (need > size) continue;
    double total = 0.0;
    auto cols = best_subset(colsum, need, total);
    if (total < best.value) {
      best.value = total;
      best_rows = row_mask;
      best_cols = std::move(cols);
    }
  }
  std::vector<std::uint8_t> row_ind(size, 0);
  for (std::uint64_t x = 0; x < size; ++x) row_ind[x] = (best_rows >> x) & 1ULL;
  best.rect = Rectangle{CubeSet::from_indicator(n, row_ind), CubeSet::from_indicator(n, best_cols)};
  best.value = k.rectangle_sum(best.rect);
  return best;
}

std::vector<std::uint8_t> random_indicator(std::uint64_t size, double density, CounterRng& rng) {
  std::vector<std::uint8_t> ind(size, 0);
  for (auto& b : ind) b = rng.uniform01() < density;
  return ind;
}

std::uint64_t count_ones(std::span<const std::uint8_t> ind) {
  return static_cast<std::uint64_t>(std::count(ind.begin(), ind.end(), std::uint8_t{1}));
}

// Random rectangle whose row and column densities are drawn so that the
// expected pair count clears `min_pairs`; redrawn until it actually does.
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> random_rectangle(std::size_t n, std::uint64_t min_pairs,
                                                                                 CounterRng& rng) {
  const std::uint64_t size = cube_size(n);
  const double floor_density = std::sqrt(static_cast<double>(min_pairs)) / static_cast<double>(size);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double lo = std::min(1.0, floor_density);
    const double dx = lo + (1.0 - lo) * rng.uniform_open();
    const double dy = lo + (1.0 - lo) * rng.uniform_open();
    auto rows = random_indicator(size, dx, rng);
    auto cols = random_indicator(size, dy, rng);
    const std::uint64_t nr = count_ones(rows), nc = count_ones(cols);
    if (nr > 0 && nc > 0 && nr * nc >= min_pairs) return {std::move(rows), std::move(cols)};
  }
  return {std::vector<std::uint8_t>(size, 1), std::vector<std::uint8_t>(size, 1)};
}

ScanResult minimize_random(const PairKernel& k, std::uint64_t min_pairs, std::uint64_t draws, std::uint64_t seed) {
  const std::size_t n = k.dimension();
  if (n > kMaxTransformBits) throw CapacityError("rectangle scans are limited to n <= 26");
  ScanResult best;
  for (std::uint64_t i = 0; i < draws; ++i) {
    CounterRng rng(derive_seed(seed, i));
    auto [rows, cols] = random_rectangle(n, min_pairs, rng);
    Rectangle r{CubeSet::from_indicator(n, rows), CubeSet::from_indicator(n, cols)};
    const double v = k.rectangle_sum(r);
    ++best.examined;
    if (v < best.value) {
      best.value = v;
      best.rect = std::move(r);
    }
  }
  return best;
}

// Alternating exact best responses from random starts: with the columns fixed
// the optimal rows are the negative row gains, and vice versa. Each half-step
// scores every single-element toggle on one side. A converged local minimum is
// kicked by random toggles and the kick is kept under a Metropolis rule.
ScanResult minimize_greedy(const PairKernel& k, std::uint64_t min_pairs, std::uint64_t restarts, std::uint64_t seed) {
  const std::size_t n = k.dimension();
  if (n > kMaxTransformBits) throw CapacityError("rectangle scans are limited to n <= 26");
  const std::uint64_t size = cube_size(n);
  constexpr int kMaxSweeps = 64;
  constexpr int kKicks = 4;
  ScanResult best;
  std::vector<std::uint8_t> best_rows, best_cols;

  for (std::uint64_t r = 0; r < std::max<std::uint64_t>(restarts, 1); ++r) {
    CounterRng rng(derive_seed(seed, r));
    auto [rows, cols] = random_rectangle(n, min_pairs, rng);

    auto descend = [&](std::vector<std::uint8_t>& xs, std::vector<std::uint8_t>& ys) {
      double value = std::numeric_limits<double>::infinity();
      for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double row_total = 0.0, col_total = 0.0;
        const auto g = k.row_gains(ys);
        auto new_xs = best_subset(g, ceil_div(min_pairs, count_ones(ys)), row_total);
        const auto h = k.col_gains(new_xs);
        auto new_ys = best_subset(h, ceil_div(min_pairs, count_ones(new_xs)), col_total);
        best.examined += 2 * size;
        const double tol = 1e-13 * (std::fabs(col_total) + std::ldexp(1.0, -2 * static_cast<int>(n)));
        const bool improved = col_total < value - tol;
        xs = std::move(new_xs);
        ys = std::move(new_ys);
        value = std::min(value, col_total);
        if (!improved) break;
      }
      return value;
    };

    double current = descend(rows, cols);
    auto keep = [&](double v, const std::vector<std::uint8_t>& xs, const std::vector<std::uint8_t>& ys) {
      if (v < best.value) {
        best.value = v;
        best_rows = xs;
        best_cols = ys;
      }
    };
    keep(current, rows, cols);

    for (int kick = 0; kick < kKicks; ++kick) {
      auto xs = rows, ys = cols;
      for (auto& b : xs) if (rng.uniform01() < 1.0 / 16.0) b ^= 1;
      for (auto& b : ys) if (rng.uniform01() < 1.0 / 16.0) b ^= 1;
      const std::uint64_t nx = count_ones(xs), ny = count_ones(ys);
      if (nx == 0 || ny == 0 || nx * ny < min_pairs) continue;
      const double v = descend(xs, ys);
      keep(v, xs, ys);
      const double temperature = 0.01 * std::max(std::fabs(current), std::numeric_limits<double>::min());
      if (v <= current || rng.uniform_open() < std::exp(-(v - current) / temperature)) {
        current = v;
        rows = std::move(xs);
        cols = std::move(ys);
      }
    }
  }
  best.rect = Rectangle{CubeSet::from_indicator(n, best_rows), CubeSet::from_indicator(n, best_cols)};
  best.value = k.rectangle_sum(best.rect);
  return best;
}

ScanResult minimize(const PairKernel& k, const ScanOptions& options) {
  const std::uint64_t min_pairs = required_pairs(k.dimension(), options.min_xi0_mass);
  switch (options.mode) {
    case ScanMode::exhaustive: return minimize_exhaustive(k, min_pairs);
    case ScanMode::random: return minimize_random(k, min_pairs, options.budget, options.seed);
    case ScanMode::greedy: return minimize_greedy(k, min_pairs, options.budget, options.seed);
  }
  throw InvalidInput("unknown scan mode");
}

nlohmann::json rectangle_json(const Rectangle& r) {
  constexpr std::size_t kMaxListed = 1 << 16;
  auto side = [](const CubeSet& s) {
    nlohmann::json j{{"size", s.size()}};
    if (s.size() <= kMaxListed) {
      nlohmann::json pts = nlohmann::json::array();
      for (auto e : s.elements()) pts.push_back(BitString::from_index(s.dimension(), e).to_string());
      j["points"] = std::move(pts);
    }
    return j;
  };
  return {{"n", r.rows.dimension()}, {"rows", side(r.rows)}, {"cols", side(r.cols)}};
}

bool sorted_disjoint(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return true;
}

std::vector<double> joker_kernel(const CorruptionCertificate& cert, std::size_t n) {
  const PairLaw& m0 = require(cert.mu0, "mu0");
  const PairLaw& m1 = require(cert.mu1, "mu1");
  const PairLaw& mp = require(cert.muplus, "mu+");
  if (m0.dimension() != n || m1.dimension() != n || mp.dimension() != n)
    throw InvalidInput("certificate laws have a different dimension");
  std::vector<double> k(n + 1);
  for (std::size_t d = 0; d <= n; ++d)
    k[d] = cert.alpha0 * m0.pair_weight(d) - cert.alpha1 * m1.pair_weight(d) + cert.alphaplus * mp.pair_weight(d);
  return k;
}

}  // namespace

CommMatrix CommMatrix::build(std::size_t n, const std::function<Label(std::uint64_t, std::uint64_t)>& label) {
  if (n == 0) throw InvalidInput("matrix dimension must be positive");
  if (n > kMaxDenseMatrixBits) throw CapacityError("dense matrices are limited to n <= 14");
  CommMatrix m;
  m.n_ = n;
  const std::uint64_t size = cube_size(n);
  m.table_.resize(size * size);
  for (std::uint64_t x = 0; x < size; ++x)
    for (std::uint64_t y = 0; y < size; ++y) m.table_[(x << n) | y] = static_cast<std::uint8_t>(label(x, y));
  return m;
}

CommMatrix CommMatrix::constant(std::size_t n, Label label) {
  return build(n, [label](std::uint64_t, std::uint64_t) { return label; });
}

std::uint64_t CommMatrix::preimage_size(Label label) const {
  return static_cast<std::uint64_t>(std::count(table_.begin(), table_.end(), static_cast<std::uint8_t>(label)));
}

std::optional<std::vector<Label>> CommMatrix::distance_labels() const {
  std::vector<int> seen(n_ + 1, -1);
  const std::uint64_t size = cube_size(n_);
  for (std::uint64_t x = 0; x < size; ++x)
    for (std::uint64_t y = 0; y < size; ++y) {
      const auto d = static_cast<std::size_t>(std::popcount(x ^ y));
      const int v = table_[(x << n_) | y];
      if (seen[d] < 0) seen[d] = v;
      else if (seen[d] != v) return std::nullopt;
    }
  std::vector<Label> out(n_ + 1);
  for (std::size_t d = 0; d <= n_; ++d) out[d] = static_cast<Label>(seen[d]);
  return out;
}

CommMatrix build_ghd_matrix(const GhdParams& params) {
  std::vector<Label> by_distance(params.n + 1);
  for (std::size_t d = 0; d <= params.n; ++d) by_distance[d] = ghd_label_for_distance(params, d);
  return CommMatrix::build(params.n, [&](std::uint64_t x, std::uint64_t y) {
    return by_distance[static_cast<std::size_t>(std::popcount(x ^ y))];
  });
}

Rectangle annoying_rectangle(std::size_t n, std::size_t s) {
  if (s > n) throw InvalidInput("annoying rectangle: s exceeds n");
  const std::uint64_t prefix = (std::uint64_t{1} << s) - 1;
  std::vector<std::uint64_t> rows, cols;
  for (std::uint64_t x = 0; x < cube_size(n); ++x) {
    if ((x & prefix) == 0) rows.push_back(x);
    if ((x & prefix) == prefix) cols.push_back(x);
  }
  return Rectangle{CubeSet::from_elements(n, std::move(rows)), CubeSet::from_elements(n, std::move(cols))};
}

PairLaw PairLaw::xi(std::size_t n, double p) {
  if (!(p >= -1.0 && p <= 1.0)) throw InvalidInput("xi law: p must lie in [-1, 1]");
  PairLaw law;
  law.n_ = n;
  law.weights_.resize(n + 1);
  for (std::size_t d = 0; d <= n; ++d) law.weights_[d] = xi_pair_weight(n, p, d);
  law.descriptor_ = {{"kind", "xi"}, {"n", n}, {"p", p}};
  return law;
}

PairLaw PairLaw::distance_conditioned(std::size_t n, std::vector<double> q) {
  if (q.size() != n + 1) throw InvalidInput("distance law needs n + 1 probabilities");
  double total = 0.0;
  for (double v : q) {
    if (!(v >= 0.0)) throw InvalidInput("distance law: probabilities must be non-negative");
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvalidInput("distance law: probabilities must sum to 1");
  PairLaw law;
  law.n_ = n;
  law.weights_.resize(n + 1);
  for (std::size_t d = 0; d <= n; ++d)
    law.weights_[d] = q[d] / (std::ldexp(1.0, static_cast<int>(n)) *
                              boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(d)));
  law.descriptor_ = {{"kind", "distance_conditioned"}, {"n", n}, {"probabilities", q}};
  return law;
}

double mass_on_rectangle(const PairLaw& law, const Rectangle& rect) {
  check_rectangle(rect, law.dimension());
  if (rect.empty()) return 0.0;
  const DistanceHistogram h = distance_histogram(rect.rows, rect.cols);
  if (law.descriptor().at("kind") == "xi") return xi_measure(h, law.descriptor().at("p").get<double>());
  double s = 0.0;
  for (std::size_t d = 0; d < h.counts.size(); ++d) s += static_cast<double>(h.counts[d]) * law.pair_weight(d);
  return s;
}

CorruptionCertificate ghd_certificate(std::size_t n, double b, double m) {
  const double rho = 4.0 * b / std::sqrt(static_cast<double>(n));
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("certificate: need 0 <= 4b/sqrt(n) <= 1");
  CorruptionCertificate c;
  c.mu0 = PairLaw::xi(n, rho);
  c.mu1 = PairLaw::xi(n, 0.0);
  c.muplus = PairLaw::xi(n, -rho);
  c.m = m;
  return c;
}

CorruptionBound corruption_lower_bound(const CorruptionCertificate& cert) {
  if (!(cert.alpha0 > 0.0 && cert.alpha1 > 0.0 && cert.alphaplus >= 0.0))
    throw InvalidInput("certificate: alpha0, alpha1 must be positive and alpha+ non-negative");
  if (!(cert.eps >= 0.0)) throw InvalidInput("certificate: eps must be non-negative");
  const double total = cert.alpha0 + cert.alpha1;
  if (!(cert.eps < (cert.alpha1 - cert.alphaplus) / total))
    throw InfeasibleError("certificate: eps must be below (alpha1 - alpha+) / (alpha0 + alpha1)");
  CorruptionBound b;
  b.slack0 = cert.alpha1 - cert.alphaplus - total * cert.eps;
  b.eps_prime = b.slack0 / (2.0 * total);
  b.beta = std::log2(b.slack0 / 2.0);
  b.bound = cert.m + b.beta;
  b.nu_weight0 = cert.alpha0 / total;
  b.nu_weight1 = cert.alpha1 / total;
  b.nu = {{"kind", "mixture"},
          {"weights", {b.nu_weight0, b.nu_weight1}},
          {"components", {cert.mu0 ? cert.mu0->descriptor() : nlohmann::json("mu0"),
                          cert.mu1 ? cert.mu1->descriptor() : nlohmann::json("mu1")}}};
  return b;
}

nlohmann::json to_json(const CorruptionBound& b) {
  return {{"slack0", b.slack0}, {"eps_prime", b.eps_prime}, {"beta", b.beta}, {"bound", b.bound}, {"nu", b.nu}};
}

double joker_slack(const CorruptionCertificate& cert, const Rectangle& rect) {
  const std::size_t n = rect.rows.dimension();
  check_rectangle(rect, n);
  const double additive = std::exp2(-cert.m);
  if (rect.empty()) return additive;
  return PairKernel::by_distance(n, joker_kernel(cert, n)).rectangle_sum(rect) + additive;
}

std::string_view to_string(ScanMode mode) {
  switch (mode) {
    case ScanMode::exhaustive: return "exhaustive";
    case ScanMode::random: return "random";
    case ScanMode::greedy: return "greedy";
  }
  return "?";
}

ScanMode scan_mode_from_string(std::string_view s) {
  if (s == "exhaustive") return ScanMode::exhaustive;
  if (s == "random") return ScanMode::random;
  if (s == "greedy") return ScanMode::greedy;
  throw InvalidInput("unknown scan mode: " + std::string(s));
}

nlohmann::json to_json(const RectangleScanReport& r) {
  return {{"mode", to_string(r.mode)},
          {"min_slack", r.min_slack},
          {"rectangles_examined", r.rectangles_examined},
          {"worst_rectangle", rectangle_json(r.worst)}};
}

RectangleScanReport check_joker_inequality(const CorruptionCertificate& cert, std::size_t n, const ScanOptions& options) {
  const PairKernel k = PairKernel::by_distance(n, joker_kernel(cert, n));
  ScanResult res = minimize(k, options);
  RectangleScanReport report;
  report.mode = options.mode;
  report.rectangles_examined = res.examined;
  report.worst = std::move(res.rect);
  report.min_slack = res.value + std::exp2(-cert.m);
  return report;
}

nlohmann::json to_json(const DiscrepancyReport& r) {
  return {{"mode", to_string(r.mode)},
          {"max_discrepancy", r.max_discrepancy},
          {"rectangles_examined", r.rectangles_examined},
          {"witness", rectangle_json(r.witness)}};
}

DiscrepancyReport discrepancy_scan(const PairLaw& mu, const CommMatrix& matrix, const ScanOptions& options) {
  const std::size_t n = matrix.dimension();
  if (mu.dimension() != n) throw InvalidInput("law and matrix dimensions differ");
  auto sign = [](Label l) { return l == Label::zero ? 1.0 : l == Label::one ? -1.0 : 0.0; };

  auto kernel = [&](double orientation) {
    if (const auto labels = matrix.distance_labels()) {
      std::vector<double> k(n + 1);
      for (std::size_t d = 0; d <= n; ++d) k[d] = orientation * sign((*labels)[d]) * mu.pair_weight(d);
      return PairKernel::by_distance(n, std::move(k));
    }
    if (options.mode != ScanMode::exhaustive && n > 12)
      throw CapacityError("discrepancy scans of general matrices are limited to n <= 12");
    const std::uint64_t size = cube_size(n);
    std::vector<double> table(size * size);
    for (std::uint64_t x = 0; x < size; ++x)
      for (std::uint64_t y = 0; y < size; ++y)
        table[(x << n) | y] = orientation * sign(matrix.label(x, y)) *
                              mu.pair_weight(static_cast<std::size_t>(std::popcount(x ^ y)));
    return PairKernel::dense(n, std::move(table));
  };

  DiscrepancyReport report;
  report.mode = options.mode;
  report.max_discrepancy = -1.0;
  for (double orientation : {1.0, -1.0}) {
    ScanOptions o = options;
    o.seed = derive_seed(options.seed, orientation > 0 ? 0 : 1);
    ScanResult res = minimize(kernel(orientation), o);
    report.rectangles_examined = options.mode == ScanMode::exhaustive ? res.examined : report.rectangles_examined + res.examined;
    const double disc = std::fabs(res.value);
    if (disc > report.max_discrepancy) {
      report.max_discrepancy = disc;
      report.witness = std::move(res.rect);
    }
  }
  return report;
}

PartitionAudit partition_slack_audit(const CorruptionCertificate& cert, std::span<const Rectangle> rectangles) {
  if (rectangles.empty()) throw InvalidInput("partition audit needs at least one rectangle");
  const std::size_t n = rectangles.front().rows.dimension();
  for (std::size_t i = 0; i < rectangles.size(); ++i) {
    check_rectangle(rectangles[i], n);
    for (std::size_t j = i + 1; j < rectangles.size(); ++j)
      if (!sorted_disjoint(rectangles[i].rows.elements(), rectangles[j].rows.elements()) &&
          !sorted_disjoint(rectangles[i].cols.elements(), rectangles[j].cols.elements()))
        throw InvalidInput("partition audit: rectangles overlap");
  }
  PartitionAudit audit;
  DistanceHistogram merged{n, std::vector<std::uint64_t>(n + 1, 0)};
  for (const auto& r : rectangles) {
    audit.summed += joker_slack(cert, r);
    if (r.empty()) continue;
    const DistanceHistogram h = distance_histogram(r.rows, r.cols);
    for (std::size_t d = 0; d <= n; ++d) merged.counts[d] += h.counts[d];
  }
  const auto k = joker_kernel(cert, n);
  for (std::size_t d = 0; d <= n; ++d) audit.direct += static_cast<double>(merged.counts[d]) * k[d];
  audit.direct += static_cast<double>(rectangles.size()) * std::exp2(-cert.m);
  audit.difference = std::fabs(audit.summed - audit.direct);
  return audit;
}

}  // namespace ghd
