#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "ghd/errors.hpp"
#include "ghd/gauss.hpp"

using namespace ghd;

namespace {

std::vector<double> normal_samples(std::size_t count, double mu, double sigma, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = mu + sigma * rng.normal();
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("eta-correlated pairs") {
  const auto [x1, y1] = sample_eta_pair({20, 1.0}, 5);
  CHECK(x1 == y1);
  CHECK(sample_eta_pair({20, 0.3}, 9) == sample_eta_pair({20, 0.3}, 9));
  CHECK_THROWS_AS(sample_eta_pair({3, 1.5}, 1), InvalidInput);

  // Independence at eta = 0 and the inner-product mean at eta = 0.6.
  for (double eta : {0.0, 0.6}) {
    const std::size_t trials = 20000, n = 5;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const auto [x, y] = sample_eta_pair({n, eta}, derive_seed(77, i));
      const double v = dot(x, y) / static_cast<double>(n);
      s += v;
      s2 += v * v;
    }
    const double mean = s / trials;
    const double sd = std::sqrt((s2 / trials - mean * mean) / trials);
    CHECK(std::fabs(mean - eta) < 3.0 * sd);
  }

  // Exchangeability: the first coordinates of x and y have the same law.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < 20000; ++i) {
    const auto [x, y] = sample_eta_pair({1, 0.7}, derive_seed(3, i));
    xs.push_back(x[0]);
    ys.push_back(y[0]);
  }
  CHECK(kl_to_gaussian(xs).value < 0.01);
  CHECK(kl_to_gaussian(ys).value < 0.01);
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); i += 50) {
    const double frac_y = static_cast<double>(std::upper_bound(ys.begin(), ys.end(), xs[i]) - ys.begin()) / ys.size();
    ks = std::max(ks, std::fabs(frac_y - static_cast<double>(i + 1) / xs.size()));
  }
  CHECK(ks < 1.63 / std::sqrt(10000.0));  // two-sample KS at the 1% level
}

TEST_CASE("set predicates") {
  const std::vector<double> x = {1.5, -0.2, 0.0};
  CHECK(GaussSetPredicate::halfspace({1.0}, 1.0).contains(x));
  CHECK_FALSE(GaussSetPredicate::halfspace({-1.0}, 1.0).contains(x));
  CHECK(GaussSetPredicate::coord_threshold(1.0).contains(x));
  CHECK(GaussSetPredicate::symmetric_slab({0.0, 1.0}, 0.5).contains(x));
  CHECK(GaussSetPredicate::symmetric_slab({1.0}, 1.0).symmetric());
  CHECK_FALSE(GaussSetPredicate::halfspace({1.0}, 1.0).symmetric());

  const auto shell = GaussSetPredicate::shell(2.0, 3.0);
  const auto back = GaussSetPredicate::from_json(shell.to_json());
  CHECK(back.to_json() == shell.to_json());
  CHECK(GaussSetPredicate::from_json({{"kind", "halfspace"}, {"params", {{"a", {0.6, 0.8}}, {"t", 0.1}}}}).exact_measure(2).value() ==
        doctest::Approx(normal_upper_tail(0.1)));
  CHECK_THROWS_AS(GaussSetPredicate::from_json({{"kind", "blob"}}), InvalidInput);
  CHECK_FALSE(GaussSetPredicate::custom([](std::span<const double>) { return true; }).exact_measure(3).has_value());
}

TEST_CASE("exact measures agree with Monte Carlo") {
  const std::size_t n = 6;
  const std::vector<GaussSetPredicate> sets = {
      GaussSetPredicate::halfspace({0.0, 1.0, 1.0}, 0.4), GaussSetPredicate::symmetric_slab({1.0}, 0.8),
      GaussSetPredicate::shell(2.0, 2.8), GaussSetPredicate::coord_threshold(1.2)};
  for (const auto& s : sets) {
    CounterRng rng(11);
    const std::uint64_t trials = 40000;
    std::uint64_t hits = 0;
    std::vector<double> x(n);
    for (std::uint64_t i = 0; i < trials; ++i) {
      for (auto& v : x) v = rng.normal();
      hits += s.contains(x);
    }
    const double p = s.exact_measure(n).value();
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::fabs(static_cast<double>(hits) / trials - p) < 3.0 * sigma);

    // Conditional samples land inside the set.
    for (int i = 0; i < 200; ++i) REQUIRE(s.contains(s.sample_conditional(n, rng)));
  }
}

TEST_CASE("conditional samplers have the right law") {
  CounterRng rng(4);
  std::vector<double> tail;
  const auto thr = GaussSetPredicate::coord_threshold(1.0);
  for (int i = 0; i < 20000; ++i) tail.push_back(std::fabs(thr.sample_conditional(2, rng)[0]));
  // E[|x| : |x| > t] = phi(t) / Q(t).
  double mean = 0.0;
  for (double v : tail) mean += v;
  mean /= tail.size();
  const double want = std::exp(-0.5) / std::sqrt(2 * std::numbers::pi) / normal_upper_tail(1.0);
  CHECK(mean == doctest::Approx(want).epsilon(0.01));

  const auto rare = GaussSetPredicate::custom([](std::span<const double> x) { return x[0] > 6.0; });
  CHECK_THROWS_AS(rare.sample_conditional(1, rng), InfeasibleError);
}

TEST_CASE("correlation ratio") {
  const auto all = GaussSetPredicate::everything();
  const auto r = mc_correlation_bound(all, all, 10, 0.3, 10000, 1);
  CHECK(r.ratio == 1.0);
  CHECK(r.one_sided == 1.0);

  const auto slab = GaussSetPredicate::symmetric_slab({1.0}, 0.7);
  const auto half = GaussSetPredicate::halfspace({0.6, 0.8}, 0.2);
  const auto ind = mc_correlation_bound(slab, half, 20, 0.0, 40000, 2);
  CHECK(std::fabs(ind.ratio - 1.0) <= ind.ratio_ci95);

  const auto pos = mc_correlation_bound(slab, half, 100, 0.05, 40000, 3);
  CHECK(pos.ratio >= 1.0 - 1e-2 - pos.ratio_ci95);
  CHECK(pos.ratio_ci95 > 0.0);

  // Opposing half-spaces: one-sided ratio below 1 and shrinking as t grows.
  double last = 2.0;
  for (double t : {1.0, 1.5, 2.0}) {
    const auto a = GaussSetPredicate::halfspace({-1.0}, t);
    const auto b = GaussSetPredicate::halfspace({1.0}, t);
    const auto rep = mc_correlation_bound(a, b, 100, 0.05, 200000, 4);
    CHECK(rep.one_sided < 1.0);
    CHECK(rep.one_sided < last);
    last = rep.one_sided;
  }

  CHECK_THROWS_AS(mc_correlation_bound(all, all, 3, 0.1, 100, 1), InvalidInput);
  CHECK_THROWS_AS(mc_correlation_bound(GaussSetPredicate::coord_threshold(5.0), GaussSetPredicate::coord_threshold(5.0), 3, 0.1,
                                       10000, 1),
                  InfeasibleError);
  CHECK(to_json(pos).contains("ratio_ci95"));
}

TEST_CASE("worker count does not change results") {
  const auto a = GaussSetPredicate::symmetric_slab({1.0}, 1.0);
  const auto b = GaussSetPredicate::halfspace({1.0, 1.0}, 0.0);
  const auto one = mc_correlation_bound(a, b, 8, 0.2, 20000, 6, 1);
  const auto many = mc_correlation_bound(a, b, 8, 0.2, 20000, 6, 3);
  CHECK(one.p_plus == many.p_plus);
  CHECK(one.ratio == many.ratio);
}

TEST_CASE("Hermite quadrature") {
  const HermiteRule rule = gauss_hermite(kHermiteNodes);
  double w = 0.0;
  for (double v : rule.weights) w += v;
  CHECK(w == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(gaussian_expectation([](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gaussian_expectation([](double x) { return x * x * x * x; }) == doctest::Approx(3.0).epsilon(1e-12));

  for (double z : {-2.0, 0.0, 5.0}) {
    const auto c = cosh_expectation_check(0.0, z);
    CHECK(c.quadrature == doctest::Approx(std::cosh(z)).epsilon(1e-13));
    CHECK(c.closed_form == doctest::Approx(std::cosh(z)).epsilon(1e-15));
  }
  const auto unit = cosh_expectation_check(1.0, 0.0);
  CHECK(std::fabs(unit.closed_form - 1.6487212707) < 1e-10);
  CHECK(std::fabs(unit.quadrature - 1.6487212707) < 1e-10);
  const auto big = cosh_expectation_check(2.0, 3.0);
  CHECK(std::fabs(big.quadrature / big.closed_form - 1.0) < 1e-9);
  CHECK_THROWS_AS(cosh_expectation_check(4.5, 0.0), InvalidInput);
}

TEST_CASE("KL calibration") {
  const auto null = kl_to_gaussian(normal_samples(100000, 0.0, 1.0, 1));
  CHECK(null.value <= 0.01);
  CHECK(null.pinsker.ok);
  CHECK(null.bias_note > 0.0);

  const auto shifted = kl_to_gaussian_both(normal_samples(100000, 1.0, 1.0, 2));
  CHECK(shifted.binned.value == doctest::Approx(0.5).epsilon(0.1));
  CHECK(shifted.spacing.value == doctest::Approx(0.5).epsilon(0.1));
  CHECK_FALSE(shifted.disagree);
  CHECK(shifted.binned.pinsker.ok);

  const double wide = (4.0 - 1.0 - std::log(4.0)) / 2.0;
  const auto w = kl_to_gaussian_both(normal_samples(100000, 0.0, 2.0, 3));
  CHECK(w.binned.value == doctest::Approx(wide).epsilon(0.1));
  CHECK(w.spacing.value == doctest::Approx(wide).epsilon(0.1));
  CHECK(w.binned.pinsker.ok);

  CHECK_THROWS_AS(kl_to_gaussian(normal_samples(500, 0.0, 1.0, 4)), InvalidInput);
  CHECK(kl_to_gaussian(normal_samples(500, 0.0, 1.0, 4), KLMethod::spacing).method == KLMethod::spacing);
  CHECK(to_json(null)["method"] == "binned");
}

TEST_CASE("chain rule on a correlated bivariate normal") {
  const double r = 0.8;
  const double joint = -0.5 * std::log(1 - r * r);
  // D(X1) = 0 and D(X2 | X1) is the KL of N(r x1, 1 - r^2) to N(0, 1) averaged over x1.
  const double s2 = 1 - r * r;
  const double conditional = gaussian_expectation([&](double x1) { return 0.5 * (s2 + r * r * x1 * x1 - 1 - std::log(s2)); });
  CHECK(conditional == doctest::Approx(joint).epsilon(1e-12));

  CounterRng rng(12);
  std::vector<double> xs(200000), ys(200000);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng.normal();
    ys[i] = r * xs[i] + std::sqrt(s2) * rng.normal();
  }
  CHECK(kl_to_gaussian_2d(xs, ys).value == doctest::Approx(joint).epsilon(0.15));
}

TEST_CASE("projection experiment") {
  const std::size_t n = 4;
  const std::vector<std::vector<double>> basis = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const auto free = projection_experiment(GaussSetPredicate::everything(), n, basis, 100000, 1);
  CHECK(free.orthonormal);
  CHECK(free.fraction_within_eps == 1.0);
  for (const auto& rep : free.reports) CHECK(rep.kl.value <= 0.01);

  const auto split = projection_experiment(GaussSetPredicate::coord_threshold(2.0), n, {basis[0], basis[1]}, 100000, 2);
  CHECK(split.reports[0].kl.value >= 0.5);
  CHECK(split.reports[1].kl.value <= 0.01);
  CHECK(split.fraction_within_eps == 0.5);
  CHECK(split.reports[0].kl.pinsker.ok);

  const double c = std::sqrt(0.5);
  const auto skew = projection_experiment(GaussSetPredicate::everything(), 2, {{1, 0}, {c, c}}, 20000, 3);
  CHECK_FALSE(skew.orthonormal);
  CHECK(skew.reports[1].alpha == doctest::Approx(c));
  CHECK_THROWS_AS(projection_experiment(GaussSetPredicate::everything(), 2, {{1, 1}}, 20000, 3), InvalidInput);
  CHECK(to_json(skew)["reports"].size() == 2);
}

TEST_CASE("delta orthogonality") {
  const std::vector<std::vector<double>> basis = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto b = delta_orthogonality(basis, 0.0);
  CHECK(b.ok);
  CHECK(b.max_proj_sq == 0.0);
  CHECK(b.greedy_subsequence.size() == 3);

  const double d = 0.3;
  const auto edge = delta_orthogonality({{1, 0}, {std::sqrt(d), std::sqrt(1 - d)}}, d);
  CHECK(edge.ok);
  CHECK(edge.max_proj_sq == doctest::Approx(d).epsilon(1e-14));
  CHECK_FALSE(delta_orthogonality({{1, 0}, {std::sqrt(d), std::sqrt(1 - d)}}, 0.29).ok);

  CounterRng rng(8);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(random_unit_vector(100, rng));
  const auto sphere = delta_orthogonality(pts, 0.9);
  CHECK(sphere.ok);
  CHECK(sphere.greedy_subsequence.size() == 50);
  CHECK(delta_orthogonality(pts, 0.1).greedy_subsequence.size() >= 5);
  CHECK_THROWS_AS(delta_orthogonality({{1, 1}}, 0.5), InvalidInput);
}

TEST_CASE("norm concentration") {
  const auto none = gaussian_norm_concentration(5, 0.0, 1000, 1);
  CHECK(none.outside.value == 1.0);
  const auto one = gaussian_norm_concentration(1, 0.5, 100000, 2);
  const double exact = 1.0 - (boost::math::cdf(boost::math::chi_squared(1.0), 1.5) - boost::math::cdf(boost::math::chi_squared(1.0), 0.5));
  CHECK(one.exact == doctest::Approx(exact).epsilon(1e-12));
  CHECK(std::fabs(one.outside.value - exact) <= one.outside.ci95);
  const auto wide = gaussian_norm_concentration(60, 1.0, 20000, 3);
  CHECK(wide.exact < 1e-5);
  CHECK(wide.outside.value <= 1e-3);
}

TEST_CASE("sign map") {
  CHECK(sign_map(0.0) == doctest::Approx(0.0));
  CHECK(sign_map(1.0) == 1.0);
  CHECK(sign_map(-1.0) == -1.0);
  CHECK(sign_map(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  double prev = -2.0;
  for (int i = 0; i <= 400; ++i) {
    const double eta = -1.0 + i / 200.0;
    const double rho = sign_map(eta);
    CHECK(rho > prev);
    prev = rho;
    CHECK(std::fabs(sign_map_inverse(rho) - eta) < 1e-12);
    CHECK(std::fabs(sign_map(sign_map_inverse(eta)) - eta) < 1e-12);
  }
  CHECK_THROWS_AS(sign_map(1.1), InvalidInput);

  for (double eta : {-0.4, 0.3, 0.9}) {
    const auto p = sign_disagreement(eta, 100000, 7);
    const double want = std::acos(eta) / std::numbers::pi;
    CHECK(std::fabs(p.value - want) < 3.0 * std::sqrt(want * (1 - want) / p.trials));
  }
}
