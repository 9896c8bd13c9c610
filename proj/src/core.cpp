#include "ghd/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ghd {

GhdParams GhdParams::make(std::size_t n, double t, double g) {
  if (n == 0) throw InvalidInput("ghd: n must be positive");
  const double nd = static_cast<double>(n);
  if (!(t >= 0.0 && t <= nd)) throw InvalidInput("ghd: threshold t must lie in [0, n]");
  if (!(g >= 0.0 && g <= nd)) throw InvalidInput("ghd: gap g must lie in [0, n]");
  return GhdParams{n, t, g};
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::zero: return "0";
    case Label::one: return "1";
    case Label::star: return "*";
  }
  return "?";
}

namespace {

// Split a finite non-negative double into an exact integer part and a fraction in [0, 1).
std::pair<std::int64_t, double> split_real(double v) {
  const double whole = std::floor(v);
  return {static_cast<std::int64_t>(whole), v - whole};  // exact subtraction
}

}  // namespace

bool distance_at_most_difference(std::int64_t d, double t, double g) {
  const auto [ti, tf] = split_real(t);
  const auto [gi, gf] = split_real(g);
  // d <= (ti - gi) + (tf - gf) with tf - gf in (-1, 1).
  const std::int64_t k = d - (ti - gi);
  if (k <= -1) return true;
  if (k >= 1) return false;
  return gf <= tf;
}

bool distance_exceeds_sum(std::int64_t d, double t, double g) {
  const auto [ti, tf] = split_real(t);
  const auto [gi, gf] = split_real(g);
  // d > (ti + gi) + (tf + gf) with tf + gf in [0, 2).
  const std::int64_t k = d - (ti + gi);
  if (k <= 0) return false;
  if (k >= 2) return true;
  // k == 1: need tf + gf < 1, decided without rounding.
  if (tf < 0.5 && gf < 0.5) return true;
  if (gf >= 0.5) return tf < 1.0 - gf;  // 1 - gf exact (Sterbenz)
  return gf < 1.0 - tf;
}

Label ghd_label_for_distance(const GhdParams& params, std::size_t distance) {
  const auto d = static_cast<std::int64_t>(distance);
  if (distance_at_most_difference(d, params.t, params.g)) return Label::zero;
  if (distance_exceeds_sum(d, params.t, params.g)) return Label::one;
  return Label::star;
}

// ---------------------------------------------------------------------------
// BitString

BitString BitString::from_string(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') out.set(i, true);
    else if (bits[i] != '0') throw InvalidInput("bitstring: expected only '0' and '1'");
  }
  return out;
}

BitString BitString::from_index(std::size_t n, std::uint64_t index) {
  if (n > 64) throw InvalidInput("bitstring: index form needs n <= 64");
  BitString out(n);
  if (n > 0) out.words_[0] = n == 64 ? index : (index & ((1ULL << n) - 1));
  return out;
}

BitString BitString::random(std::size_t n, CounterRng& rng) {
  BitString out(n);
  for (auto& w : out.words_) w = rng();
  out.mask_tail();
  return out;
}

void BitString::mask_tail() {
  if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (1ULL << (n_ % 64)) - 1;
}

std::size_t BitString::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::uint64_t BitString::to_index() const {
  if (n_ > 64) throw InvalidInput("bitstring: index form needs n <= 64");
  return words_.empty() ? 0 : words_[0];
}

std::string BitString::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitString BitString::complement() const {
  BitString out = *this;
  for (auto& w : out.words_) w = ~w;
  out.mask_tail();
  return out;
}

BitString BitString::operator^(const BitString& other) const {
  if (other.n_ != n_) throw InvalidInput("bitstring: length mismatch");
  BitString out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] ^= other.words_[i];
  return out;
}

BitString BitString::concat(const BitString& tail) const {
  BitString out(n_ + tail.n_);
  std::copy(words_.begin(), words_.end(), out.words_.begin());
  if (n_ % 64 == 0) {
    std::copy(tail.words_.begin(), tail.words_.end(), out.words_.begin() + static_cast<std::ptrdiff_t>(n_ / 64));
  } else {
    for (std::size_t i = 0; i < tail.n_; ++i)
      if (tail.get(i)) out.set(n_ + i, true);
  }
  return out;
}

BitString BitString::repeat(std::size_t k) const {
  BitString out(0);
  for (std::size_t i = 0; i < k; ++i) out = out.concat(*this);
  return out;
}

BitString BitString::permuted(std::span<const std::uint32_t> perm) const {
  if (perm.size() != n_) throw InvalidInput("bitstring: permutation length mismatch");
  BitString out(n_);
  for (std::size_t j = 0; j < n_; ++j)
    if (get(perm[j])) out.set(j, true);
  return out;
}

std::size_t hamming_distance(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) throw InvalidInput("hamming_distance: length mismatch");
  const auto a = x.words();
  const auto b = y.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return d;
}

Label ghd_label(const GhdParams& params, const BitString& x, const BitString& y) {
  if (x.size() != params.n || y.size() != params.n)
    throw InvalidInput("ghd_label: input length differs from n");
  return ghd_label_for_distance(params, hamming_distance(x, y));
}

BitString flip_random_subset(const BitString& x, std::size_t d, CounterRng& rng) {
  const std::size_t n = x.size();
  if (d > n) throw InvalidInput("flip_random_subset: d exceeds n");
  BitString y = x;
  if (2 * d <= n) {
    // Floyd's sampling of a d-subset.
    std::vector<std::uint8_t> chosen(n, 0);
    for (std::size_t j = n - d; j < n; ++j) {
      const auto r = static_cast<std::size_t>(rng.below(j + 1));
      const std::size_t pick = chosen[r] ? j : r;
      chosen[pick] = 1;
      y.flip(pick);
    }
  } else {
    y = y.complement();
    std::vector<std::uint8_t> chosen(n, 0);
    for (std::size_t j = d; j < n; ++j) {  // n - d positions left unflipped
      const auto r = static_cast<std::size_t>(rng.below(j + 1));
      const std::size_t pick = chosen[r] ? j : r;
      chosen[pick] = 1;
      y.flip(pick);
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// CubeSet

void CubeSet::check_dimension(std::size_t n) {
  if (n == 0 || n > 64) throw InvalidInput("cube set: dimension must be in [1, 64]");
}

CubeSet CubeSet::from_elements(std::size_t n, std::vector<std::uint64_t> elements) {
  CubeSet s(n);
  if (n < 64) {
    for (auto e : elements)
      if (e >> n) throw InvalidInput("cube set: element outside {0,1}^n");
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  s.elements_ = std::move(elements);
  return s;
}

CubeSet CubeSet::from_indicator(std::size_t n, std::span<const std::uint8_t> indicator) {
  if (n > kMaxDenseBits) throw CapacityError("cube set: dense indicator too large");
  if (indicator.size() != (std::size_t{1} << n)) throw InvalidInput("cube set: indicator must have 2^n entries");
  CubeSet s(n);
  for (std::size_t x = 0; x < indicator.size(); ++x)
    if (indicator[x]) s.elements_.push_back(x);
  return s;
}

CubeSet CubeSet::full(std::size_t n) {
  if (n > kMaxDenseBits) throw CapacityError("cube set: full cube too large to list");
  CubeSet s(n);
  s.elements_.resize(std::size_t{1} << n);
  std::iota(s.elements_.begin(), s.elements_.end(), std::uint64_t{0});
  return s;
}

CubeSet CubeSet::random(std::size_t n, double density, std::uint64_t seed) {
  if (n > kMaxDenseBits) throw CapacityError("cube set: random dense set too large");
  if (!(density >= 0.0 && density <= 1.0)) throw InvalidInput("cube set: density must be in [0, 1]");
  CubeSet s(n);
  CounterRng rng(seed);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < count; ++x)
    if (rng.uniform01() < density) s.elements_.push_back(x);
  return s;
}

bool CubeSet::contains(std::uint64_t x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::vector<std::uint8_t> CubeSet::to_indicator() const {
  if (n_ > kMaxDenseBits) throw CapacityError("cube set: dense indicator too large");
  std::vector<std::uint8_t> ind(std::size_t{1} << n_, 0);
  for (auto e : elements_) ind[e] = 1;
  return ind;
}

CubeSet CubeSet::flip_all() const {
  const std::uint64_t mask = n_ == 64 ? ~0ULL : ((1ULL << n_) - 1);
  std::vector<std::uint64_t> out;
  out.reserve(elements_.size());
  for (auto e : elements_) out.push_back(e ^ mask);
  return from_elements(n_, std::move(out));
}

void write_cube_set_text(std::ostream& out, const CubeSet& set) {
  out << "n=" << set.dimension() << '\n';
  for (auto e : set.elements()) out << BitString::from_index(set.dimension(), e).to_string() << '\n';
}

CubeSet read_cube_set_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n=", 0) != 0)
    throw InvalidInput("cube set text: missing 'n=<int>' header");
  std::size_t n = 0;
  try {
    n = std::stoul(line.substr(2));
  } catch (const std::exception&) {
    throw InvalidInput("cube set text: bad header");
  }
  if (n == 0 || n > 64) throw InvalidInput("cube set text: n must be in [1, 64]");
  std::vector<std::uint64_t> elems;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() != n) throw InvalidInput("cube set text: element length differs from n");
    elems.push_back(BitString::from_string(line).to_index());
  }
  const std::size_t listed = elems.size();
  CubeSet s = CubeSet::from_elements(n, std::move(elems));
  if (s.size() != listed) throw InvalidInput("cube set text: duplicate element");
  return s;
}

void write_cube_set_dense(std::ostream& out, const CubeSet& set) {
  const std::size_t n = set.dimension();
  if (n > CubeSet::kMaxDenseBits) throw CapacityError("cube set dense: n too large");
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(n) >> (8 * i)) & 0xff));
  std::vector<std::uint8_t> bytes(((std::size_t{1} << n) + 7) / 8, 0);
  for (auto e : set.elements()) bytes[e >> 3] |= static_cast<std::uint8_t>(1u << (e & 7));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

CubeSet read_cube_set_dense(std::istream& in) {
  unsigned char header[8];
  if (!in.read(reinterpret_cast<char*>(header), 8)) throw InvalidInput("cube set dense: truncated header");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(header[i]) << (8 * i);
  if (n == 0 || n > CubeSet::kMaxDenseBits) throw InvalidInput("cube set dense: n out of range");
  std::vector<std::uint8_t> bytes(((std::size_t{1} << n) + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
    throw InvalidInput("cube set dense: truncated bitmap");
  std::vector<std::uint64_t> elems;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
    if ((bytes[x >> 3] >> (x & 7)) & 1u) elems.push_back(x);
  return CubeSet::from_elements(n, std::move(elems));
}

// ---------------------------------------------------------------------------
// Correlated pairs and distance laws

std::pair<BitString, BitString> sample_xi(const CubePairLaw& law, std::uint64_t seed) {
  if (!(law.p >= -1.0 && law.p <= 1.0)) throw InvalidInput("sample_xi: p must lie in [-1, 1]");
  CounterRng rng(seed);
  BitString x = BitString::random(law.n, rng);
  BitString y = x;
  const double q = law.flip_probability();
  for (std::size_t i = 0; i < law.n; ++i)
    if (rng.uniform01() < q) y.flip(i);
  return {std::move(x), std::move(y)};
}

double DistanceLaw::mean() const {
  double m = 0.0;
  for (std::size_t d = 0; d < pmf.size(); ++d) m += static_cast<double>(d) * pmf[d];
  return m;
}

double DistanceLaw::cdf(std::int64_t d) const {
  if (d < 0) return 0.0;
  double s = 0.0;
  const auto last = std::min<std::size_t>(static_cast<std::size_t>(d), pmf.size() - 1);
  for (std::size_t i = 0; i <= last; ++i) s += pmf[i];
  return std::min(1.0, s);
}

DistanceLaw distance_law(std::size_t n, double p) {
  if (!(p >= -1.0 && p <= 1.0)) throw InvalidInput("distance_law: p must lie in [-1, 1]");
  DistanceLaw law{n, p, std::vector<double>(n + 1, 0.0)};
  const double q = (1.0 - p) / 2.0;
  if (q <= 0.0) {
    law.pmf[0] = 1.0;
    return law;
  }
  if (q >= 1.0) {
    law.pmf[n] = 1.0;
    return law;
  }
  // Start at the mode with a unit value, walk outward with the ratio recurrence
  // pmf(d+1)/pmf(d) = (n-d)/(d+1) * q/(1-q), then normalise.
  const double ratio = q / (1.0 - q);
  const auto mode = std::min<std::size_t>(n, static_cast<std::size_t>(std::floor((static_cast<double>(n) + 1.0) * q)));
  std::vector<double>& w = law.pmf;
  w[mode] = 1.0;
  for (std::size_t d = mode; d < n; ++d)
    w[d + 1] = w[d] * static_cast<double>(n - d) / static_cast<double>(d + 1) * ratio;
  for (std::size_t d = mode; d > 0; --d)
    w[d - 1] = w[d] * static_cast<double>(d) / static_cast<double>(n - d + 1) / ratio;
  // Sum smallest-first to keep the normaliser accurate.
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  for (auto& v : w) v /= total;
  return law;
}

double binomial_tail_b(double eps, std::size_t n) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("binomial_tail_b: eps must lie in (0, 1)");
  if (n == 0) throw InvalidInput("binomial_tail_b: n must be positive");
  const double nd = static_cast<double>(n);
  const double rn = std::sqrt(nd);
  const double root2 = std::sqrt(2.0);
  const DistanceLaw uniform = distance_law(n, 0.0);
  for (int step = 1;; ++step) {
    const double b = 0.01 * step;
    const double p = 4.0 * b / rn;
    const double lower_threshold = nd / 2.0 - (b + root2) * rn;
    if (p > 1.0 || lower_threshold < 0.0) break;
    const double upper_threshold = nd / 2.0 - (b - root2) * rn;
    const double close = distance_law(n, p).cdf(static_cast<std::int64_t>(std::floor(lower_threshold)));
    const double far = 1.0 - uniform.cdf(static_cast<std::int64_t>(std::ceil(upper_threshold)) - 1);
    if (close >= 1.0 - eps && far >= 1.0 - eps) return b;
  }
  throw InfeasibleError("binomial_tail_b: no feasible b at n = " + std::to_string(n));
}

}  // namespace ghd
