#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghd/core.hpp"
#include "ghd/cubexform.hpp"

namespace ghd {

inline constexpr std::size_t kMaxDenseMatrixBits = 14;
inline constexpr std::size_t kMaxExhaustiveScanBits = 4;

// Dense label table over {0,1}^n x {0,1}^n, n <= 14. Row x, column y.
class CommMatrix {
 public:
  static CommMatrix build(std::size_t n, const std::function<Label(std::uint64_t, std::uint64_t)>& label);
  static CommMatrix constant(std::size_t n, Label label);

  std::size_t dimension() const { return n_; }
  Label label(std::uint64_t x, std::uint64_t y) const { return static_cast<Label>(table_[(x << n_) | y]); }
  // Size of f^{-1}(label).
  std::uint64_t preimage_size(Label label) const;
  // Label of each distance class, when the label depends on dist(x, y) only.
  std::optional<std::vector<Label>> distance_labels() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> table_;
};

CommMatrix build_ghd_matrix(const GhdParams& params);

struct Rectangle {
  CubeSet rows;
  CubeSet cols;

  bool empty() const { return rows.empty() || cols.empty(); }
};

// {x : x_1..x_s = 0} x {y : y_1..y_s = 1}
Rectangle annoying_rectangle(std::size_t n, std::size_t s);

// Law on pairs whose mass at (x, y) depends on dist(x, y) only: xi_p, or an
// explicit distance distribution spread uniformly inside each distance class.
class PairLaw {
 public:
  static PairLaw xi(std::size_t n, double p);
  static PairLaw distance_conditioned(std::size_t n, std::vector<double> distance_probabilities);

  std::size_t dimension() const { return n_; }
  // Mass of a single pair at distance d.
  double pair_weight(std::size_t d) const { return weights_[d]; }
  std::span<const double> pair_weights() const { return weights_; }
  nlohmann::json descriptor() const { return descriptor_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> weights_;
  nlohmann::json descriptor_;
};

double mass_on_rectangle(const PairLaw& law, const Rectangle& rect);

// Constants of a corruption-with-jokers certificate plus its three laws.
struct CorruptionCertificate {
  std::optional<PairLaw> mu0;
  std::optional<PairLaw> mu1;
  std::optional<PairLaw> muplus;
  double alpha0 = 0.5;
  double alpha1 = 2.0 / 3.0;
  double alphaplus = 0.5;
  double eps = 0.125;
  double m = 0.0;
};

// mu0 = xi_{4b/sqrt n}, mu1 = xi_0, mu+ = xi_{-4b/sqrt n}, alpha1 = 2/3, alpha0 = alpha+ = 1/2, eps = 1/8.
CorruptionCertificate ghd_certificate(std::size_t n, double b, double m);

struct CorruptionBound {
  double slack0 = 0.0;     // alpha1 - alpha+ - (alpha0 + alpha1) eps
  double eps_prime = 0.0;  // (alpha0 + alpha1) eps' = slack0 / 2
  double beta = 0.0;       // log2(slack0 / 2)
  double bound = 0.0;      // m + beta
  double nu_weight0 = 0.0; // nu = w0 mu0 + w1 mu1
  double nu_weight1 = 0.0;
  nlohmann::json nu;
};

// Throws InfeasibleError unless eps < (alpha1 - alpha+) / (alpha0 + alpha1).
CorruptionBound corruption_lower_bound(const CorruptionCertificate& cert);

nlohmann::json to_json(const CorruptionBound& bound);

// alpha0 mu0(R) + 2^-m - alpha1 mu1(R) + alpha+ mu+(R). The empty rectangle has slack 2^-m.
double joker_slack(const CorruptionCertificate& cert, const Rectangle& rect);

enum class ScanMode { exhaustive, random, greedy };

std::string_view to_string(ScanMode mode);
ScanMode scan_mode_from_string(std::string_view s);

struct ScanOptions {
  ScanMode mode = ScanMode::greedy;
  std::uint64_t seed = 0;
  // random: rectangles drawn; greedy: restarts.
  std::uint64_t budget = 64;
  // Only rectangles with xi_0 mass |X||Y|/4^n at least this are considered.
  double min_xi0_mass = 0.0;
};

struct RectangleScanReport {
  ScanMode mode = ScanMode::greedy;
  Rectangle worst;
  double min_slack = 0.0;
  std::uint64_t rectangles_examined = 0;
};

nlohmann::json to_json(const RectangleScanReport& report);

// Searches for the rectangle of least joker slack. Exhaustive mode (n <= 4)
// is a global minimum: each row set is paired with its optimal column set in
// closed form. Random and greedy modes accept n <= 26.
RectangleScanReport check_joker_inequality(const CorruptionCertificate& cert, std::size_t n, const ScanOptions& options);

struct DiscrepancyReport {
  ScanMode mode = ScanMode::greedy;
  Rectangle witness;
  double max_discrepancy = 0.0;
  std::uint64_t rectangles_examined = 0;
};

nlohmann::json to_json(const DiscrepancyReport& report);

// max over scanned rectangles of |mu(R & f^-1(0)) - mu(R & f^-1(1))|.
DiscrepancyReport discrepancy_scan(const PairLaw& mu, const CommMatrix& matrix, const ScanOptions& options);

struct PartitionAudit {
  double summed = 0.0;   // sum of per-rectangle slacks
  double direct = 0.0;   // slack of the union, with one 2^-m per rectangle
  double difference = 0.0;
};

// Throws InvalidInput if two rectangles overlap.
PartitionAudit partition_slack_audit(const CorruptionCertificate& cert, std::span<const Rectangle> rectangles);

}  // namespace ghd
