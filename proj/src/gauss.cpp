#include "ghd/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "ghd/errors.hpp"
#include "ghd/parallel.hpp"

namespace ghd {

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr double kUnitTolerance = 1e-9;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// gamma([a, b]) without cancellation in either tail.
double gauss_mass(double a, double b) {
  if (a >= 0.0) return normal_upper_tail(a) - normal_upper_tail(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return 1.0 - normal_cdf(a) - normal_upper_tail(b);
}

// Standard normal restricted to [lo, hi] by inversion.
double truncated_normal(double lo, double hi, CounterRng& rng) {
  const double u = rng.uniform_open();
  if (lo >= 0.0) {
    const double qlo = normal_upper_tail(lo), qhi = normal_upper_tail(hi);
    return normal_upper_quantile(qhi + u * (qlo - qhi));
  }
  if (hi <= 0.0) {
    const double qlo = normal_upper_tail(-hi), qhi = normal_upper_tail(-lo);
    return -normal_upper_quantile(qhi + u * (qlo - qhi));
  }
  const double plo = normal_cdf(lo), phi = normal_cdf(hi);
  return normal_quantile(plo + u * (phi - plo));
}

void check_eta(double eta) {
  if (!(eta >= -1.0 && eta <= 1.0)) throw InvalidInput("eta must lie in [-1, 1]");
}

std::vector<double> standard_normal(std::size_t n, CounterRng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

}  // namespace

GaussSetPredicate GaussSetPredicate::everything() { return {}; }

GaussSetPredicate GaussSetPredicate::halfspace(std::vector<double> a, double t) {
  if (a.empty() || norm(a) == 0.0) throw InvalidInput("halfspace: normal vector must be nonzero");
  GaussSetPredicate p;
  p.kind_ = Kind::halfspace;
  p.a_ = std::move(a);
  p.t_ = t;
  return p;
}

GaussSetPredicate GaussSetPredicate::symmetric_slab(std::vector<double> a, double t) {
  if (a.empty() || norm(a) == 0.0) throw InvalidInput("slab: normal vector must be nonzero");
  if (!(t >= 0.0)) throw InvalidInput("slab: half-width must be non-negative");
  GaussSetPredicate p;
  p.kind_ = Kind::symmetric_slab;
  p.a_ = std::move(a);
  p.t_ = t;
  return p;
}

GaussSetPredicate GaussSetPredicate::shell(double r1, double r2) {
  if (!(r1 >= 0.0 && r2 > r1)) throw InvalidInput("shell: need 0 <= r1 < r2");
  GaussSetPredicate p;
  p.kind_ = Kind::shell;
  p.r1_ = r1;
  p.r2_ = r2;
  return p;
}

GaussSetPredicate GaussSetPredicate::coord_threshold(double t) {
  if (!(t >= 0.0)) throw InvalidInput("coordinate threshold must be non-negative");
  GaussSetPredicate p;
  p.kind_ = Kind::coord_threshold;
  p.a_ = {1.0};
  p.t_ = t;
  return p;
}

GaussSetPredicate GaussSetPredicate::custom(Custom predicate, bool symmetric, std::string label) {
  if (!predicate) throw InvalidInput("custom predicate is empty");
  GaussSetPredicate p;
  p.kind_ = Kind::custom;
  p.custom_ = std::move(predicate);
  p.custom_symmetric_ = symmetric;
  p.label_ = std::move(label);
  return p;
}

GaussSetPredicate GaussSetPredicate::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    auto get = [&](const char* key) {
      if (params.contains(key)) return params.at(key);
      return j.at(key);
    };
    if (kind == "everything") return everything();
    if (kind == "halfspace") return halfspace(get("a").get<std::vector<double>>(), get("t").get<double>());
    if (kind == "symmetric_slab") return symmetric_slab(get("a").get<std::vector<double>>(), get("t").get<double>());
    if (kind == "coord_threshold") return coord_threshold(get("t").get<double>());
    if (kind == "shell") {
      const auto r2 = get("r2");
      return shell(get("r1").get<double>(), r2.is_null() ? std::numeric_limits<double>::infinity() : r2.get<double>());
    }
    throw InvalidInput("set predicate kind cannot be built from JSON: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed set predicate: ") + e.what());
  }
}

nlohmann::json GaussSetPredicate::to_json() const {
  switch (kind_) {
    case Kind::everything: return {{"kind", "everything"}, {"params", nlohmann::json::object()}};
    case Kind::halfspace: return {{"kind", "halfspace"}, {"params", {{"a", a_}, {"t", t_}}}};
    case Kind::symmetric_slab: return {{"kind", "symmetric_slab"}, {"params", {{"a", a_}, {"t", t_}}}};
    case Kind::coord_threshold: return {{"kind", "coord_threshold"}, {"params", {{"t", t_}}}};
    case Kind::shell: {
      nlohmann::json r2 = std::isinf(r2_) ? nlohmann::json(nullptr) : nlohmann::json(r2_);
      return {{"kind", "shell"}, {"params", {{"r1", r1_}, {"r2", r2}}}};
    }
    case Kind::custom: return {{"kind", "custom"}, {"params", {{"label", label_}, {"symmetric", custom_symmetric_}}}};
  }
  return {};
}

bool GaussSetPredicate::symmetric() const {
  switch (kind_) {
    case Kind::halfspace: return false;
    case Kind::custom: return custom_symmetric_;
    default: return true;
  }
}

void GaussSetPredicate::check_dimension(std::size_t n) const {
  if (n == 0) throw InvalidInput("dimension must be positive");
  if (a_.size() > n) throw InvalidInput("set predicate direction is longer than the dimension");
}

double GaussSetPredicate::projection(std::span<const double> x) const {
  return dot(a_, x.first(a_.size()));
}

bool GaussSetPredicate::contains(std::span<const double> x) const {
  switch (kind_) {
    case Kind::everything: return true;
    case Kind::halfspace: return projection(x) > t_;
    case Kind::symmetric_slab: return std::fabs(projection(x)) <= t_;
    case Kind::coord_threshold: return std::fabs(x[0]) > t_;
    case Kind::shell: {
      const double r2 = dot(x, x);
      return r2 >= r1_ * r1_ && r2 <= r2_ * r2_;
    }
    case Kind::custom: return custom_(x);
  }
  return false;
}

std::optional<double> GaussSetPredicate::exact_measure(std::size_t n) const {
  check_dimension(n);
  switch (kind_) {
    case Kind::everything: return 1.0;
    case Kind::halfspace: return normal_upper_tail(t_ / norm(a_));
    case Kind::symmetric_slab: {
      const double s = t_ / norm(a_);
      return gauss_mass(-s, s);
    }
    case Kind::coord_threshold: return 2.0 * normal_upper_tail(t_);
    case Kind::shell: {
      const double k = static_cast<double>(n) / 2.0;
      const double hi = std::isinf(r2_) ? 1.0 : boost::math::gamma_p(k, r2_ * r2_ / 2.0);
      return hi - boost::math::gamma_p(k, r1_ * r1_ / 2.0);
    }
    case Kind::custom: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> GaussSetPredicate::sample_conditional(std::size_t n, CounterRng& rng) const {
  check_dimension(n);
  std::vector<double> x = standard_normal(n, rng);
  switch (kind_) {
    case Kind::everything: return x;
    case Kind::halfspace:
    case Kind::symmetric_slab: {
      const double len = norm(a_);
      const double s = t_ / len;
      const double v = kind_ == Kind::halfspace ? truncated_normal(s, std::numeric_limits<double>::infinity(), rng)
                                                : truncated_normal(-s, s, rng);
      const double shift = v - projection(x) / len;
      for (std::size_t i = 0; i < a_.size(); ++i) x[i] += shift * a_[i] / len;
      return x;
    }
    case Kind::coord_threshold: {
      const double v = truncated_normal(t_, std::numeric_limits<double>::infinity(), rng);
      x[0] = rng.uniform01() < 0.5 ? v : -v;
      return x;
    }
    case Kind::shell: {
      const double k = static_cast<double>(n) / 2.0;
      const double u = rng.uniform_open();
      double r_sq;
      const double plo = boost::math::gamma_p(k, r1_ * r1_ / 2.0);
      if (plo > 0.5) {
        const double qlo = boost::math::gamma_q(k, r1_ * r1_ / 2.0);
        const double qhi = std::isinf(r2_) ? 0.0 : boost::math::gamma_q(k, r2_ * r2_ / 2.0);
        r_sq = 2.0 * boost::math::gamma_q_inv(k, qhi + u * (qlo - qhi));
      } else {
        const double phi = std::isinf(r2_) ? 1.0 : boost::math::gamma_p(k, r2_ * r2_ / 2.0);
        r_sq = 2.0 * boost::math::gamma_p_inv(k, plo + u * (phi - plo));
      }
      const double scale = std::sqrt(r_sq) / norm(x);
      for (auto& v : x) v *= scale;
      return x;
    }
    case Kind::custom: {
      const auto max_attempts = static_cast<std::uint64_t>(10.0 / kRejectionFloor);
      for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        if (custom_(x)) return x;
        for (auto& v : x) v = rng.normal();
      }
      throw InfeasibleError("rejection sampling: acceptance below the 1e-6 floor");
    }
  }
  return x;
}

std::pair<std::vector<double>, std::vector<double>> sample_eta_pair(const EtaPairLaw& law, std::uint64_t seed) {
  check_eta(law.eta);
  CounterRng rng(seed);
  std::vector<double> x = standard_normal(law.n, rng);
  std::vector<double> y(law.n);
  const double c = std::sqrt(1.0 - law.eta * law.eta);
  for (std::size_t i = 0; i < law.n; ++i) y[i] = law.eta * x[i] + c * rng.normal();
  return {std::move(x), std::move(y)};
}

nlohmann::json to_json(const CorrelationReport& r) {
  return {{"n", r.n},
          {"eta", r.eta},
          {"trials", r.trials},
          {"p_plus", r.p_plus},
          {"p_minus", r.p_minus},
          {"gA", r.gA},
          {"gB", r.gB},
          {"ratio", r.ratio},
          {"ratio_ci95", r.ratio_ci95},
          {"one_sided", r.one_sided},
          {"one_sided_ci95", r.one_sided_ci95}};
}

CorrelationReport mc_correlation_bound(const GaussSetPredicate& A, const GaussSetPredicate& B, std::size_t n, double eta,
                                       std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  check_eta(eta);
  if (trials < 10000) throw InvalidInput("correlation bound needs at least 10^4 trials");
  const auto ea = A.exact_measure(n), eb = B.exact_measure(n);
  if (ea && eb && *ea * *eb < kRejectionFloor)
    throw InfeasibleError("gamma(A) gamma(B) is below the 1e-6 floor");

  // Per-trial vector W = (1_A(x) 1_B(y+), 1_A(x) 1_B(y-), 1_A(x), (1_B(y+) + 1_B(y-)) / 2).
  constexpr std::size_t kDim = 4;
  struct Sums {
    double m[kDim] = {};
    double c[kDim][kDim] = {};
  };
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Sums> parts(chunks);
  const double c = std::sqrt(1.0 - eta * eta);
  parallel_for(chunks, resolve_workers(workers), [&](std::size_t chunk) {
    CounterRng rng(derive_seed(seed, chunk));
    const std::uint64_t begin = chunk * kChunk, end = std::min(trials, begin + kChunk);
    std::vector<double> x(n), z(n), yp(n), ym(n);
    Sums& s = parts[chunk];
    for (std::uint64_t t = begin; t < end; ++t) {
      for (auto& v : x) v = rng.normal();
      for (auto& v : z) v = rng.normal();
      for (std::size_t i = 0; i < n; ++i) {
        yp[i] = eta * x[i] + c * z[i];
        ym[i] = -eta * x[i] + c * z[i];
      }
      const double a = A.contains(x) ? 1.0 : 0.0;
      const double bp = B.contains(yp) ? 1.0 : 0.0;
      const double bm = B.contains(ym) ? 1.0 : 0.0;
      const double w[kDim] = {a * bp, a * bm, a, 0.5 * (bp + bm)};
      for (std::size_t i = 0; i < kDim; ++i) {
        s.m[i] += w[i];
        for (std::size_t j = 0; j < kDim; ++j) s.c[i][j] += w[i] * w[j];
      }
    }
  });
  Sums total;
  for (const auto& p : parts)
    for (std::size_t i = 0; i < kDim; ++i) {
      total.m[i] += p.m[i];
      for (std::size_t j = 0; j < kDim; ++j) total.c[i][j] += p.c[i][j];
    }
  const double N = static_cast<double>(trials);
  double mean[kDim], cov[kDim][kDim];
  for (std::size_t i = 0; i < kDim; ++i) mean[i] = total.m[i] / N;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) cov[i][j] = total.c[i][j] / N - mean[i] * mean[j];

  CorrelationReport r;
  r.n = n;
  r.eta = eta;
  r.trials = trials;
  r.p_plus = mean[0];
  r.p_minus = mean[1];
  r.gA = mean[2];
  r.gB = mean[3];
  if (r.gA * r.gB < kRejectionFloor) throw InfeasibleError("estimated gamma(A) gamma(B) is below the 1e-6 floor");
  const double denom = r.gA * r.gB;
  r.ratio = 0.5 * (r.p_plus + r.p_minus) / denom;
  r.one_sided = r.p_plus / denom;
  auto delta_ci = [&](const double (&grad)[kDim]) {
    double var = 0.0;
    for (std::size_t i = 0; i < kDim; ++i)
      for (std::size_t j = 0; j < kDim; ++j) var += grad[i] * cov[i][j] * grad[j];
    return kZ95 * std::sqrt(std::max(var, 0.0) / N);
  };
  const double g_ratio[kDim] = {0.5 / denom, 0.5 / denom, -r.ratio / r.gA, -r.ratio / r.gB};
  const double g_one[kDim] = {1.0 / denom, 0.0, -r.one_sided / r.gA, -r.one_sided / r.gB};
  r.ratio_ci95 = delta_ci(g_ratio);
  r.one_sided_ci95 = delta_ci(g_one);
  return r;
}

HermiteRule gauss_hermite(std::size_t count) {
  if (count == 0) throw InvalidInput("Gauss-Hermite rule needs at least one node");
  // Newton iteration on the orthonormal Hermite recurrence with the classical
  // asymptotic starting guesses for the largest roots.
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const double n = static_cast<double>(count);
  HermiteRule rule{std::vector<double>(count), std::vector<double>(count)};
  double z = 0.0;
  for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * rule.nodes[0];
    else if (i == 3) z = 1.91 * z - 0.91 * rule.nodes[1];
    else z = 2.0 * z - rule.nodes[i - 2];
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 1; j <= count; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / jd) * p2 - std::sqrt((jd - 1.0) / jd) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[count - 1 - i] = -z;
    rule.weights[i] = rule.weights[count - 1 - i] = 2.0 / (pp * pp);
  }
  return rule;
}

double gaussian_expectation(const std::function<double(double)>& f) {
  static const HermiteRule rule = gauss_hermite(kHermiteNodes);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(std::numbers::sqrt2 * rule.nodes[i]);
  return s / std::sqrt(std::numbers::pi);
}

CoshCheck cosh_expectation_check(double alpha, double z) {
  if (!(std::fabs(alpha) <= 4.0 && std::fabs(z) <= 10.0)) throw InvalidInput("cosh check needs |alpha| <= 4 and |z| <= 10");
  CoshCheck c;
  c.quadrature = gaussian_expectation([&](double x) { return std::cosh(alpha * x + z); });
  c.closed_form = std::cosh(z) * std::exp(alpha * alpha / 2.0);
  return c;
}

nlohmann::json to_json(const ProjectionReport& r) {
  return {{"direction", r.direction},
          {"kl", to_json(r.kl)},
          {"kl_spacing", to_json(r.kl_spacing)},
          {"methods_disagree", r.methods_disagree},
          {"alpha", r.alpha},
          {"decomposition_note", r.decomposition_note}};
}

nlohmann::json to_json(const ProjectionSummary& s) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  return {{"orthonormal", s.orthonormal}, {"eps", s.eps}, {"fraction_within_eps", s.fraction_within_eps},
          {"reports", std::move(reports)}};
}

ProjectionSummary projection_experiment(const GaussSetPredicate& A, std::size_t n,
                                        const std::vector<std::vector<double>>& directions, std::uint64_t samples,
                                        std::uint64_t seed, double eps) {
  if (directions.empty()) throw InvalidInput("projection experiment needs at least one direction");
  for (const auto& d : directions)
    if (d.size() != n) throw InvalidInput("direction length must equal n");
  const DeltaOrthogonality orth = delta_orthogonality(directions, 0.0);

  std::vector<std::vector<double>> proj(directions.size(), std::vector<double>(samples));
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  parallel_for(chunks, resolve_workers(), [&](std::size_t chunk) {
    CounterRng rng(derive_seed(seed, chunk));
    const std::uint64_t begin = chunk * kChunk, end = std::min(samples, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::vector<double> x = A.sample_conditional(n, rng);
      for (std::size_t d = 0; d < directions.size(); ++d) proj[d][i] = dot(directions[d], x);
    }
  });

  ProjectionSummary summary;
  summary.eps = eps;
  summary.orthonormal = orth.max_proj_sq <= 1e-12;
  std::size_t within = 0;
  for (std::size_t d = 0; d < directions.size(); ++d) {
    ProjectionReport r;
    r.direction = directions[d];
    const KLComparison both = kl_to_gaussian_both(proj[d]);
    r.kl = both.binned;
    r.kl_spacing = both.spacing;
    r.methods_disagree = both.disagree;
    r.alpha = std::sqrt(std::max(0.0, 1.0 - orth.proj_sq[d]));
    r.decomposition_note = "unconditional divergence of <x, y>; surrogate for the divergence conditioned on y";
    if (r.kl.value <= eps) ++within;
    summary.reports.push_back(std::move(r));
  }
  summary.fraction_within_eps = static_cast<double>(within) / static_cast<double>(directions.size());
  return summary;
}

DeltaOrthogonality delta_orthogonality(const std::vector<std::vector<double>>& vectors, double delta) {
  for (const auto& v : vectors)
    if (std::fabs(norm(v) - 1.0) > kUnitTolerance) throw InvalidInput("delta orthogonality: vectors must be unit");
  constexpr double kSlack = 1e-12;

  // Modified Gram-Schmidt; returns the squared projection of v on span(basis)
  // and extends the basis with the normalized residual.
  auto project = [](std::vector<std::vector<double>>& basis, const std::vector<double>& v) {
    std::vector<double> r = v;
    double proj_sq = 0.0;
    for (const auto& q : basis) {
      const double c = dot(q, r);
      proj_sq += c * c;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * q[i];
    }
    const double len = norm(r);
    if (len > 1e-10) {
      for (auto& x : r) x /= len;
      basis.push_back(std::move(r));
    }
    return std::min(proj_sq, 1.0);
  };

  DeltaOrthogonality out;
  std::vector<std::vector<double>> all, chosen;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double p = project(all, vectors[i]);
    out.proj_sq.push_back(p);
    out.max_proj_sq = std::max(out.max_proj_sq, p);
    auto trial = chosen;
    if (project(trial, vectors[i]) <= delta + kSlack) {
      chosen = std::move(trial);
      out.greedy_subsequence.push_back(i);
    }
  }
  out.ok = out.max_proj_sq <= delta + kSlack;
  return out;
}

NormConcentration gaussian_norm_concentration(std::size_t n, double beta, std::uint64_t trials, std::uint64_t seed,
                                              unsigned workers) {
  if (n == 0) throw InvalidInput("dimension must be positive");
  if (!(beta >= 0.0)) throw InvalidInput("beta must be non-negative");
  if (trials == 0) throw InvalidInput("trials must be positive");
  const double nd = static_cast<double>(n);
  const double lo = (1.0 - beta) * nd, hi = (1.0 + beta) * nd;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> outside(chunks, 0);
  parallel_for(chunks, resolve_workers(workers), [&](std::size_t chunk) {
    CounterRng rng(derive_seed(seed, chunk));
    const std::uint64_t begin = chunk * kChunk, end = std::min(trials, begin + kChunk);
    for (std::uint64_t t = begin; t < end; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = rng.normal();
        s += v * v;
      }
      if (s < lo || s > hi) ++outside[chunk];
    }
  });
  std::uint64_t count = 0;
  for (auto c : outside) count += c;
  NormConcentration r;
  r.outside = make_proportion(count, trials);
  r.exact = (lo > 0.0 ? chi_square_cdf(lo, nd) : 0.0) + boost::math::gamma_q(nd / 2.0, hi / 2.0);
  return r;
}

double sign_map(double eta) {
  check_eta(eta);
  return 1.0 - 2.0 / std::numbers::pi * std::acos(eta);
}

double sign_map_inverse(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [-1, 1]");
  return std::cos(std::numbers::pi * (1.0 - rho) / 2.0);
}

Proportion sign_disagreement(double eta, std::uint64_t trials, std::uint64_t seed) {
  check_eta(eta);
  if (trials == 0) throw InvalidInput("trials must be positive");
  CounterRng rng(seed);
  const double c = std::sqrt(1.0 - eta * eta);
  std::uint64_t differ = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double x = rng.normal();
    const double y = eta * x + c * rng.normal();
    if ((x < 0.0) != (y < 0.0)) ++differ;
  }
  return make_proportion(differ, trials);
}

std::vector<double> random_unit_vector(std::size_t n, CounterRng& rng) {
  if (n == 0) throw InvalidInput("dimension must be positive");
  std::vector<double> v = standard_normal(n, rng);
  const double len = norm(v);
  for (auto& x : v) x /= len;
  return v;
}

}  // namespace ghd
