#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ghd/rng.hpp"
#include "ghd/stats.hpp"

namespace ghd {

// Subset of R^n. Direction vectors may be shorter than n; missing
// coordinates are zero, so e_1 is simply {1}.
class GaussSetPredicate {
 public:
  enum class Kind { everything, halfspace, symmetric_slab, shell, coord_threshold, custom };
  using Custom = std::function<bool(std::span<const double>)>;

  static GaussSetPredicate everything();
  // {x : <a, x> > t}
  static GaussSetPredicate halfspace(std::vector<double> a, double t);
  // {x : |<a, x>| <= t}
  static GaussSetPredicate symmetric_slab(std::vector<double> a, double t);
  // {x : r1 <= |x| <= r2}
  static GaussSetPredicate shell(double r1, double r2);
  // {x : |x_1| > t}
  static GaussSetPredicate coord_threshold(double t);
  static GaussSetPredicate custom(Custom predicate, bool symmetric = false, std::string label = "custom");

  static GaussSetPredicate from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }
  bool symmetric() const;
  bool contains(std::span<const double> x) const;
  // gamma^n(A), when known in closed form.
  std::optional<double> exact_measure(std::size_t n) const;
  // x ~ gamma^n conditioned on A. Structured kinds are sampled exactly;
  // custom predicates use rejection and throw InfeasibleError when fewer than
  // one draw in 10^6 is accepted.
  std::vector<double> sample_conditional(std::size_t n, CounterRng& rng) const;

 private:
  void check_dimension(std::size_t n) const;
  double projection(std::span<const double> x) const;

  Kind kind_ = Kind::everything;
  std::vector<double> a_;
  double t_ = 0.0;
  double r1_ = 0.0;
  double r2_ = 0.0;
  Custom custom_;
  bool custom_symmetric_ = false;
  std::string label_;
};

inline constexpr double kRejectionFloor = 1e-6;

struct EtaPairLaw {
  std::size_t n = 1;
  double eta = 0.0;
};

// y = eta x + sqrt(1 - eta^2) z with x, z independent standard Gaussians.
std::pair<std::vector<double>, std::vector<double>> sample_eta_pair(const EtaPairLaw& law, std::uint64_t seed);

struct CorrelationReport {
  std::size_t n = 0;
  double eta = 0.0;
  std::uint64_t trials = 0;
  double p_plus = 0.0;   // Pr[x in A, y in B] at +eta
  double p_minus = 0.0;  // same at -eta
  double gA = 0.0;
  double gB = 0.0;
  double ratio = 0.0;    // (p_plus + p_minus) / (2 gA gB)
  double ratio_ci95 = 0.0;
  double one_sided = 0.0;  // p_plus / (gA gB)
  double one_sided_ci95 = 0.0;
};

nlohmann::json to_json(const CorrelationReport& r);

// All four probabilities come from common random numbers (x, z) with
// y_(+/-) = +/-eta x + sqrt(1 - eta^2) z; ci95 by the delta method.
CorrelationReport mc_correlation_bound(const GaussSetPredicate& A, const GaussSetPredicate& B, std::size_t n, double eta,
                                       std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

struct CoshCheck {
  double quadrature = 0.0;
  double closed_form = 0.0;
};

inline constexpr std::size_t kHermiteNodes = 160;

// Nodes and weights for int e^{-x^2} f(x) dx.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

HermiteRule gauss_hermite(std::size_t count);
// E_{x ~ N(0,1)} f(x) with the 160-node rule.
double gaussian_expectation(const std::function<double(double)>& f);

// E[cosh(alpha x + z)] by quadrature next to cosh(z) e^{alpha^2 / 2}; |alpha| <= 4, |z| <= 10.
CoshCheck cosh_expectation_check(double alpha, double z);

enum class KLMethod { binned, spacing };

std::string_view to_string(KLMethod m);

struct PinskerAudit {
  double tv = 0.0;         // binned total variation to gamma
  double bound = 0.0;      // sqrt(value / 2)
  double tolerance = 0.0;  // sum_j sqrt(q_j / N) / 2
  bool ok = true;
};

struct KLEstimate {
  double value = 0.0;  // nats
  KLMethod method = KLMethod::binned;
  std::uint64_t sample_count = 0;
  double bias_note = 0.0;  // Miller-Madow term (K - 1) / 2N, already subtracted for binned
  bool clipped = false;    // raw estimate was negative
  PinskerAudit pinsker;
};

nlohmann::json to_json(const KLEstimate& k);

inline constexpr std::size_t kMinBinnedSamples = 10000;

// D(P || N(0,1)) from samples of P. Binned: Freedman-Diaconis plug-in over
// [-8, 8]. Spacing: Vasicek m-spacing entropy with m = sqrt(N).
KLEstimate kl_to_gaussian(std::span<const double> samples, KLMethod method = KLMethod::binned);

struct KLComparison {
  KLEstimate binned;
  KLEstimate spacing;
  bool disagree = false;  // relative difference above 25%
};

KLComparison kl_to_gaussian_both(std::span<const double> samples);

// D(P || N(0, I_2)) for paired samples, binned plug-in.
KLEstimate kl_to_gaussian_2d(std::span<const double> xs, std::span<const double> ys);

struct ProjectionReport {
  std::vector<double> direction;
  KLEstimate kl;
  KLEstimate kl_spacing;
  bool methods_disagree = false;
  double alpha = 1.0;  // norm of the part orthogonal to earlier directions
  std::string decomposition_note;
};

struct ProjectionSummary {
  std::vector<ProjectionReport> reports;
  bool orthonormal = false;
  double eps = 0.0;
  double fraction_within_eps = 0.0;  // share of directions with binned KL <= eps
};

nlohmann::json to_json(const ProjectionReport& r);
nlohmann::json to_json(const ProjectionSummary& s);

// For each direction y, the law of <x, y> with x ~ gamma^n | A.
ProjectionSummary projection_experiment(const GaussSetPredicate& A, std::size_t n,
                                        const std::vector<std::vector<double>>& directions, std::uint64_t samples,
                                        std::uint64_t seed, double eps = 0.01);

struct DeltaOrthogonality {
  bool ok = true;
  double max_proj_sq = 0.0;
  std::vector<double> proj_sq;  // squared projection of y_i on span(y_1..y_{i-1})
  std::vector<std::size_t> greedy_subsequence;
};

DeltaOrthogonality delta_orthogonality(const std::vector<std::vector<double>>& vectors, double delta);

struct NormConcentration {
  Proportion outside;  // fraction with |x|^2 outside [(1-beta) n, (1+beta) n]
  double exact = 0.0;  // same probability from the chi-square law
};

NormConcentration gaussian_norm_concentration(std::size_t n, double beta, std::uint64_t trials, std::uint64_t seed,
                                              unsigned workers = 0);

// rho = 1 - (2/pi) arccos(eta) and its inverse eta = cos(pi (1 - rho) / 2).
double sign_map(double eta);
double sign_map_inverse(double rho);

// Monte Carlo Pr[sign x != sign y] for a scalar eta-correlated pair.
Proportion sign_disagreement(double eta, std::uint64_t trials, std::uint64_t seed);

std::vector<double> random_unit_vector(std::size_t n, CounterRng& rng);

}  // namespace ghd
