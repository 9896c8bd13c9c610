#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghd/errors.hpp"
#include "ghd/rng.hpp"

namespace ghd {

// Parameters of the partial function ghd_{n,t,g}.
struct GhdParams {
  std::size_t n = 1;
  double t = 0.0;
  double g = 0.0;

  // Validating constructor: n >= 1, t and g in [0, n].
  static GhdParams make(std::size_t n, double t, double g);
  bool operator==(const GhdParams&) const = default;
};

enum class Label : std::uint8_t { zero = 0, one = 1, star = 2 };

std::string_view to_string(Label label);

// Exact integer-vs-real promise comparisons. No rounding of t-g or t+g takes place.
bool distance_at_most_difference(std::int64_t d, double t, double g);  // d <= t - g
bool distance_exceeds_sum(std::int64_t d, double t, double g);         // d >  t + g

Label ghd_label_for_distance(const GhdParams& params, std::size_t distance);

// Fixed-length binary word packed into 64-bit limbs. Bit i is x_{i+1}; in the
// text form, character i is bit i.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitString from_string(std::string_view bits);
  // Bit i of `index` becomes bit i of the string; n <= 64.
  static BitString from_index(std::size_t n, std::uint64_t index);
  static BitString random(std::size_t n, CounterRng& rng);
  static BitString zeros(std::size_t n) { return BitString(n); }
  static BitString ones(std::size_t n) { return zeros(n).complement(); }

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  void set(std::size_t i, bool v) {
    const std::uint64_t mask = 1ULL << (i & 63);
    if (v) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  std::size_t popcount() const;
  std::uint64_t to_index() const;  // n <= 64
  std::string to_string() const;

  BitString complement() const;
  BitString operator^(const BitString& other) const;
  BitString concat(const BitString& tail) const;
  BitString repeat(std::size_t k) const;
  // out[j] = in[perm[j]]
  BitString permuted(std::span<const std::uint32_t> perm) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool operator==(const BitString&) const = default;

 private:
  void mask_tail();

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const BitString& x, const BitString& y);
Label ghd_label(const GhdParams& params, const BitString& x, const BitString& y);

// Uniform random d-subset of [n] flipped in a copy of x.
BitString flip_random_subset(const BitString& x, std::size_t d, CounterRng& rng);

// Subset of {0,1}^n, n <= 64, kept as a sorted list of element indices.
class CubeSet {
 public:
  static constexpr std::size_t kMaxDenseBits = 30;

  CubeSet() = default;
  explicit CubeSet(std::size_t n) : n_(n) { check_dimension(n); }

  static CubeSet from_elements(std::size_t n, std::vector<std::uint64_t> elements);
  static CubeSet from_indicator(std::size_t n, std::span<const std::uint8_t> indicator);
  static CubeSet full(std::size_t n);
  // Each point kept independently with probability `density`.
  static CubeSet random(std::size_t n, double density, std::uint64_t seed);

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(std::uint64_t x) const;
  std::span<const std::uint64_t> elements() const { return elements_; }
  std::vector<std::uint8_t> to_indicator() const;

  // {x xor 1^n : x in this set}
  CubeSet flip_all() const;

  bool operator==(const CubeSet&) const = default;

 private:
  static void check_dimension(std::size_t n);

  std::size_t n_ = 0;
  std::vector<std::uint64_t> elements_;
};

// Text format: "n=<int>" then one n-character 0/1 string per line.
void write_cube_set_text(std::ostream& out, const CubeSet& set);
CubeSet read_cube_set_text(std::istream& in);
// Dense format: 8-byte little-endian n, then a 2^n-bit little-endian bitmap.
void write_cube_set_dense(std::ostream& out, const CubeSet& set);
CubeSet read_cube_set_dense(std::istream& in);

// The law xi_p: x uniform, each bit of y flipped independently with probability (1-p)/2.
struct CubePairLaw {
  std::size_t n = 1;
  double p = 0.0;

  double flip_probability() const { return (1.0 - p) / 2.0; }
};

std::pair<BitString, BitString> sample_xi(const CubePairLaw& law, std::uint64_t seed);

// Distribution of dist(x, y) under xi_p: Binomial(n, (1-p)/2).
struct DistanceLaw {
  std::size_t n = 0;
  double p = 0.0;
  std::vector<double> pmf;

  double mean() const;
  double cdf(std::int64_t d) const;  // Pr[dist <= d]
};

DistanceLaw distance_law(std::size_t n, double p);

// Smallest b on a 0.01 grid such that, at this n,
//   Pr_{xi_{4b/sqrt n}}[dist <= n/2 - (b + sqrt2) sqrt n] >= 1 - eps  and
//   Pr_{xi_0}[dist >= n/2 - (b - sqrt2) sqrt n]           >= 1 - eps,
// checked with exact binomial CDFs. Throws InfeasibleError if no grid point works
// (b is capped by 4b/sqrt n <= 1 and (b + sqrt2) sqrt n <= n/2).
double binomial_tail_b(double eps, std::size_t n);

}  // namespace ghd
