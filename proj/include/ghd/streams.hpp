#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ghd/core.hpp"
#include "ghd/protocols.hpp"
#include "ghd/stats.hpp"

namespace ghd {

// One-pass-at-a-time streaming algorithm whose whole state can be shipped as
// a fixed-size bit string and resumed elsewhere.
class StreamingEstimator {
 public:
  virtual ~StreamingEstimator() = default;
  virtual void update(std::uint64_t element) = 0;
  virtual double estimate() const = 0;
  virtual BitString serialize() const = 0;
  virtual void deserialize(const BitString& state) = 0;
  virtual std::size_t state_bits() const = 0;
  virtual std::size_t passes_supported() const = 0;
  // Empty estimator of the same kind, with a new hash seed.
  virtual std::unique_ptr<StreamingEstimator> fresh(std::uint64_t seed) const = 0;
  virtual nlohmann::json descriptor() const = 0;
};

// k-minimum-values distinct-count sketch. State: a 64-bit occupancy count
// followed by k 64-bit slots, 64 (k + 1) bits regardless of the stream.
class KmvSketch final : public StreamingEstimator {
 public:
  KmvSketch(std::size_t k, std::uint64_t seed);

  void update(std::uint64_t element) override;
  // Exact count while fewer than k hashes are held, else (k - 1) / v_k with
  // v_k the k-th smallest hash scaled to (0, 1].
  double estimate() const override;
  BitString serialize() const override;
  void deserialize(const BitString& state) override;
  std::size_t state_bits() const override { return 64 * (k_ + 1); }
  std::size_t passes_supported() const override { return std::numeric_limits<std::size_t>::max(); }
  std::unique_ptr<StreamingEstimator> fresh(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;

  std::size_t k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t stored() const { return values_.size(); }

 private:
  std::uint64_t hash(std::uint64_t element) const;

  std::size_t k_;
  std::uint64_t seed_;
  std::uint64_t key_;
  std::set<std::uint64_t> values_;
};

std::unique_ptr<KmvSketch> kmv_f0(std::size_t k, std::uint64_t seed = 0);

// k = ceil(6 / eps^2)
std::size_t kmv_k_for_eps(double eps);

// Alice's elements 2i + x_i and Bob's 2i + y_i for i = 1..n.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> ghd_to_f0_stream(const BitString& x, const BitString& y);

std::uint64_t exact_f0(std::span<const std::uint64_t> stream);
std::uint64_t exact_f0(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

struct ReductionAccounting {
  std::size_t passes = 0;
  std::size_t state_bits = 0;
  std::size_t messages = 0;    // 2p - 1
  std::size_t total_bits = 0;  // (2p - 1) S
};

nlohmann::json to_json(const ReductionAccounting& a);

// Estimator accuracy that keeps the promise classes apart when the estimate
// of n + dist is thresholded at n + t: g / (2 (n + t + g)).
double f0_accuracy_for(const GhdParams& params);

// Alice streams her segment and sends the state to Bob, who continues on his
// segment; with p passes the state travels 2p - 1 times. Bob outputs 1 iff
// the final estimate exceeds n + t. The hash seed comes from the public coins.
std::pair<ProtocolPtr, ReductionAccounting> streaming_to_protocol(std::shared_ptr<const StreamingEstimator> estimator,
                                                                  std::size_t passes, const GhdParams& params);

// Rebuilds a protocol described by {"name": "streaming", ...}.
ProtocolPtr streaming_protocol_from_json(const nlohmann::json& descriptor);

// Share of seeds on which a k-sketch misses the exact count of `distinct`
// elements by more than a factor 1 +/- eps.
Proportion kmv_failure_rate(std::size_t k, double eps, std::uint64_t distinct, std::uint64_t trials, std::uint64_t seed,
                            unsigned workers = 0);

// Least k (by bisection over [2, k_max]) whose failure rate is at most `target`.
std::size_t kmv_minimal_k(double eps, std::uint64_t distinct, std::uint64_t trials, std::uint64_t seed, double target,
                          std::size_t k_max, unsigned workers = 0);

// Newline-delimited unsigned integers.
std::vector<std::uint64_t> read_stream(std::istream& in);
void write_stream(std::ostream& out, std::span<const std::uint64_t> stream);
// 8-byte little-endian bit length, then the bits packed little-endian.
void write_state_blob(std::ostream& out, const BitString& state);
BitString read_state_blob(std::istream& in);

}  // namespace ghd
