#include "ghd/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace ghd {

std::string_view to_string(Party party) { return party == Party::alice ? "alice" : "bob"; }

bool Transcript::operator==(const Transcript& other) const {
  if (total_bits != other.total_bits || rounds != other.rounds || messages.size() != other.messages.size())
    return false;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages[i].sender != other.messages[i].sender || !(messages[i].payload == other.messages[i].payload))
      return false;
  }
  return true;
}

nlohmann::json to_json(const Transcript& t) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : t.messages) msgs.push_back({{"sender", to_string(m.sender)}, {"bits", m.bits()}});
  return {{"messages", msgs}, {"total_bits", t.total_bits}, {"rounds", t.rounds}};
}

// ---------------------------------------------------------------------------
// PublicCoins

PublicCoins PublicCoins::enumerated(std::uint64_t outcome) {
  PublicCoins c(0);
  c.enumerated_ = true;
  c.outcome_ = outcome;
  return c;
}

CounterRng PublicCoins::stream(std::uint64_t tag) const {
  if (enumerated_) throw ContractViolation("public coins: enumerated coins carry no random stream");
  return CounterRng(derive_seed(seed_, tag));
}

PublicCoins PublicCoins::derive(std::uint64_t tag) const {
  if (enumerated_) return *this;
  return PublicCoins(derive_seed(seed_, 0x5eed0000ULL + tag));
}

// ---------------------------------------------------------------------------
// Problems

Label gis_label(const GisParams& params, const BitString& x, const BitString& y) {
  if (x.size() != params.n || y.size() != params.n) throw InvalidInput("gis_label: input length differs from n");
  std::size_t common = 0;
  const auto a = x.words();
  const auto b = y.words();
  for (std::size_t i = 0; i < a.size(); ++i) common += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  const auto c = static_cast<std::int64_t>(common);
  if (distance_at_most_difference(c, params.t, params.g)) return Label::zero;
  if (distance_exceeds_sum(c, params.t, params.g)) return Label::one;
  return Label::star;
}

Label gip_label(const GipParams& params, const BitString& x, const BitString& y) {
  if (x.size() != params.n || y.size() != params.n) throw InvalidInput("gip_label: input length differs from n");
  // <x,y> = 1 - 2d/n; compare n - 2d against eps * n.
  const double n = static_cast<double>(params.n);
  const double scaled = n - 2.0 * static_cast<double>(hamming_distance(x, y));
  if (scaled >= params.eps * n) return Label::zero;
  if (scaled <= -params.eps * n) return Label::one;
  return Label::star;
}

Label gip_label(double eps, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("gip_label: dimension mismatch");
  const double ip = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
  if (ip >= eps) return Label::zero;
  if (ip <= -eps) return Label::one;
  return Label::star;
}

Label problem_label(const Problem& problem, const BitString& x, const BitString& y) {
  return std::visit(
      [&](const auto& p) -> Label {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GhdParams>) return ghd_label(p, x, y);
        else if constexpr (std::is_same_v<T, GisParams>) return gis_label(p, x, y);
        else return gip_label(p, x, y);
      },
      problem);
}

std::size_t problem_input_length(const Problem& problem) {
  return std::visit([](const auto& p) { return p.n; }, problem);
}

nlohmann::json to_json(const Problem& problem) {
  return std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GhdParams>) return {{"problem", "ghd"}, {"n", p.n}, {"t", p.t}, {"g", p.g}};
        else if constexpr (std::is_same_v<T, GisParams>) return {{"problem", "gis"}, {"n", p.n}, {"t", p.t}, {"g", p.g}};
        else return {{"problem", "gip"}, {"n", p.n}, {"eps", p.eps}};
      },
      problem);
}

Problem problem_from_json(const nlohmann::json& j) {
  const std::string kind = j.value("problem", "ghd");
  const auto n = j.at("n").get<std::size_t>();
  if (kind == "ghd") return GhdParams::make(n, j.at("t").get<double>(), j.at("g").get<double>());
  if (kind == "gis") return GisParams{n, j.at("t").get<double>(), j.at("g").get<double>()};
  if (kind == "gip") return GipParams{n, j.at("eps").get<double>()};
  throw InvalidInput("unknown problem kind: " + kind);
}

// ---------------------------------------------------------------------------
// Execution

ProtocolRun run_endpoints(Endpoint& alice, Endpoint& bob, std::size_t declared_cost) {
  ProtocolRun run;
  Party turn = Party::alice;
  std::optional<BitString> last;
  for (;;) {
    Endpoint& speaker = turn == Party::alice ? alice : bob;
    std::optional<BitString> msg = speaker.respond(last ? &*last : nullptr);
    if (!msg) break;
    run.transcript.total_bits += msg->size();
    if (run.transcript.total_bits > declared_cost)
      throw ContractViolation("protocol sent " + std::to_string(run.transcript.total_bits) +
                              " bits, above its declared cost " + std::to_string(declared_cost));
    run.transcript.messages.push_back(Message{turn, *msg});
    ++run.transcript.rounds;
    last = std::move(msg);
    turn = turn == Party::alice ? Party::bob : Party::alice;
  }
  run.output = bob.output();
  return run;
}

ProtocolRun run_protocol(const Protocol& protocol, const BitString& x, const BitString& y,
                         const PublicCoins& coins) {
  const std::size_t n = protocol.input_length();
  if (x.size() != n || y.size() != n) throw InvalidInput("run_protocol: input length differs from the protocol's n");
  auto alice = protocol.make_endpoint(Party::alice, x, coins);
  auto bob = protocol.make_endpoint(Party::bob, y, coins);
  return run_endpoints(*alice, *bob, protocol.declared_cost());
}

ProtocolRun run_protocol(const Protocol& protocol, const BitString& x, const BitString& y, std::uint64_t seed) {
  return run_protocol(protocol, x, y, PublicCoins(seed));
}

// ---------------------------------------------------------------------------
// Trivial protocol

namespace {

class SendInputEndpoint final : public Endpoint {
 public:
  explicit SendInputEndpoint(BitString x) : x_(std::move(x)) {}
  std::optional<BitString> respond(const BitString*) override {
    if (sent_) return std::nullopt;
    sent_ = true;
    return x_;
  }

 private:
  BitString x_;
  bool sent_ = false;
};

class TrivialBob final : public Endpoint {
 public:
  TrivialBob(GhdParams params, BitString y) : params_(params), y_(std::move(y)) {}
  std::optional<BitString> respond(const BitString* incoming) override {
    if (!incoming) throw ContractViolation("trivial protocol: Bob expected Alice's input");
    out_ = ghd_label(params_, *incoming, y_);
    // Inside the gap either answer is acceptable; answer 0.
    if (out_ == Label::star) out_ = Label::zero;
    return std::nullopt;
  }
  Label output() const override { return out_; }

 private:
  GhdParams params_;
  BitString y_;
  Label out_ = Label::star;
};

class TrivialProtocol final : public Protocol {
 public:
  explicit TrivialProtocol(GhdParams params) : params_(params) {}
  std::string name() const override { return "trivial"; }
  Problem problem() const override { return params_; }
  std::size_t declared_cost() const override { return params_.n; }
  std::optional<std::uint64_t> coin_outcomes() const override { return 1; }
  std::unique_ptr<Endpoint> make_endpoint(Party party, const BitString& input, const PublicCoins&) const override {
    if (party == Party::alice) return std::make_unique<SendInputEndpoint>(input);
    return std::make_unique<TrivialBob>(params_, input);
  }
  nlohmann::json descriptor() const override {
    return {{"name", name()}, {"params", to_json(Problem{params_})}, {"reductions", nlohmann::json::array()}};
  }

 private:
  GhdParams params_;
};

// ---------------------------------------------------------------------------
// Sampling protocol

// C(n, k) if it is at most `cap`.
std::optional<std::uint64_t> binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return std::nullopt;
  }
  return static_cast<std::uint64_t>(c);
}

// Combination with lexicographic rank `index` among k-subsets of [n].
std::vector<std::uint32_t> unrank_subset(std::size_t n, std::size_t k, std::uint64_t index) {
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (;; ++next) {
      // Subsets whose next element is `next`: C(n - next - 1, k - slot - 1).
      const std::uint64_t block = *binomial_capped(n - next - 1, k - slot - 1, ~0ULL);
      if (index < block) break;
      index -= block;
    }
    out.push_back(static_cast<std::uint32_t>(next++));
  }
  return out;
}

constexpr std::uint64_t kMaxEnumerableCoins = std::uint64_t{1} << 32;

std::vector<std::uint32_t> sample_coordinates(std::size_t n, std::size_t k, const PublicCoins& coins) {
  if (coins.is_enumerated()) {
    const auto total = binomial_capped(n, k, kMaxEnumerableCoins);
    if (!total || coins.outcome() >= *total) throw ContractViolation("sampling protocol: coin outcome out of range");
    return unrank_subset(n, k, coins.outcome());
  }
  CounterRng rng = coins.stream(0);
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

class SamplingAlice final : public Endpoint {
 public:
  SamplingAlice(BitString x, std::vector<std::uint32_t> coords) : x_(std::move(x)), coords_(std::move(coords)) {}
  std::optional<BitString> respond(const BitString*) override {
    if (sent_) return std::nullopt;
    sent_ = true;
    BitString msg(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) msg.set(i, x_.get(coords_[i]));
    return msg;
  }

 private:
  BitString x_;
  std::vector<std::uint32_t> coords_;
  bool sent_ = false;
};

class SamplingBob final : public Endpoint {
 public:
  SamplingBob(GhdParams params, BitString y, std::vector<std::uint32_t> coords)
      : params_(params), y_(std::move(y)), coords_(std::move(coords)) {}
  std::optional<BitString> respond(const BitString* incoming) override {
    if (!incoming || incoming->size() != coords_.size())
      throw ContractViolation("sampling protocol: Bob expected k sampled bits");
    std::size_t disagree = 0;
    for (std::size_t i = 0; i < coords_.size(); ++i) disagree += incoming->get(i) != y_.get(coords_[i]);
    // 0 iff disagree <= k t / n, decided exactly as disagree * n <= k * t.
    const double k = static_cast<double>(coords_.size());
    const double lhs = static_cast<double>(disagree) * static_cast<double>(params_.n);
    out_ = std::fma(k, params_.t, -lhs) >= 0.0 ? Label::zero : Label::one;
    return std::nullopt;
  }
  Label output() const override { return out_; }

 private:
  GhdParams params_;
  BitString y_;
  std::vector<std::uint32_t> coords_;
  Label out_ = Label::star;
};

class SamplingProtocol final : public Protocol {
 public:
  SamplingProtocol(GhdParams params, std::size_t k) : params_(params), k_(k) {}
  std::string name() const override { return "sampling"; }
  Problem problem() const override { return params_; }
  std::size_t declared_cost() const override { return k_; }
  std::optional<std::uint64_t> coin_outcomes() const override {
    return binomial_capped(params_.n, k_, kMaxEnumerableCoins);
  }
  std::unique_ptr<Endpoint> make_endpoint(Party party, const BitString& input,
                                          const PublicCoins& coins) const override {
    auto coords = sample_coordinates(params_.n, k_, coins);
    if (party == Party::alice) return std::make_unique<SamplingAlice>(input, std::move(coords));
    return std::make_unique<SamplingBob>(params_, input, std::move(coords));
  }
  nlohmann::json descriptor() const override {
    nlohmann::json p = to_json(Problem{params_});
    p["k"] = k_;
    return {{"name", name()}, {"params", p}, {"reductions", nlohmann::json::array()}};
  }

 private:
  GhdParams params_;
  std::size_t k_;
};

// ---------------------------------------------------------------------------
// Hyperplane protocol

std::vector<double> sign_bits_directions(std::size_t dimension, std::size_t k, const PublicCoins& coins) {
  CounterRng rng = coins.stream(0);
  std::vector<double> dirs(dimension * k);
  for (auto& v : dirs) v = rng.normal();
  return dirs;
}

BitString side_signature(std::span<const double> x, std::span<const double> dirs, std::size_t k) {
  const std::size_t d = x.size();
  BitString sig(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double ip = std::inner_product(x.begin(), x.end(), dirs.begin() + static_cast<std::ptrdiff_t>(j * d), 0.0);
    if (ip < 0.0) sig.set(j, true);
  }
  return sig;
}

class HyperplaneEndpoint final : public Endpoint {
 public:
  HyperplaneEndpoint(Party party, std::vector<double> x, std::size_t k, const PublicCoins& coins)
      : party_(party), k_(k) {
    const auto dirs = sign_bits_directions(x.size(), k, coins);
    signature_ = side_signature(x, dirs, k);
  }
  std::optional<BitString> respond(const BitString* incoming) override {
    if (party_ == Party::alice) {
      if (sent_) return std::nullopt;
      sent_ = true;
      return signature_;
    }
    if (!incoming || incoming->size() != k_) throw ContractViolation("hyperplane protocol: Bob expected k sign bits");
    const std::size_t disagree = hamming_distance(*incoming, signature_);
    out_ = 2 * disagree < k_ ? Label::zero : Label::one;
    return std::nullopt;
  }
  Label output() const override {
    if (party_ != Party::bob) throw ContractViolation("hyperplane protocol: only Bob outputs");
    return out_;
  }

 private:
  Party party_;
  std::size_t k_;
  BitString signature_;
  bool sent_ = false;
  Label out_ = Label::star;
};

}  // namespace

ProtocolPtr trivial_protocol(const GhdParams& params) { return std::make_shared<TrivialProtocol>(params); }

ProtocolPtr sampling_protocol(const GhdParams& params, std::size_t k) {
  if (k < 1 || k > params.n) throw InvalidInput("sampling_protocol: k must lie in [1, n]");
  return std::make_shared<SamplingProtocol>(params, k);
}

HyperplaneGipProtocol::HyperplaneGipProtocol(std::size_t dimension, std::size_t k, double eps)
    : dimension_(dimension), k_(k), eps_(eps) {
  if (dimension == 0) throw InvalidInput("hyperplane protocol: dimension must be positive");
  if (k == 0) throw InvalidInput("hyperplane protocol: k must be positive");
  if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidInput("hyperplane protocol: eps must lie in [0, 1]");
}

std::unique_ptr<Endpoint> HyperplaneGipProtocol::make_endpoint(Party party, const BitString& input,
                                                               const PublicCoins& coins) const {
  if (input.size() != dimension_) throw InvalidInput("hyperplane protocol: input length differs from dimension");
  return make_vector_endpoint(party, embed_cube_point(input), coins);
}

std::unique_ptr<Endpoint> HyperplaneGipProtocol::make_vector_endpoint(Party party, std::vector<double> input,
                                                                      const PublicCoins& coins) const {
  if (input.size() != dimension_) throw InvalidInput("hyperplane protocol: vector dimension mismatch");
  const double norm = std::sqrt(std::inner_product(input.begin(), input.end(), input.begin(), 0.0));
  if (norm == 0.0) throw InvalidInput("hyperplane protocol: zero vector input");
  for (auto& v : input) v /= norm;
  return std::make_unique<HyperplaneEndpoint>(party, std::move(input), k_, coins);
}

nlohmann::json HyperplaneGipProtocol::descriptor() const {
  nlohmann::json p = to_json(Problem{GipParams{dimension_, eps_}});
  p["k"] = k_;
  return {{"name", name()}, {"params", p}, {"reductions", nlohmann::json::array()}};
}

std::shared_ptr<const HyperplaneGipProtocol> hyperplane_gip_protocol(std::size_t dimension, std::size_t k,
                                                                     double eps) {
  return std::make_shared<HyperplaneGipProtocol>(dimension, k, eps);
}

VectorRun run_gip_vectors(const HyperplaneGipProtocol& protocol, std::span<const double> x,
                          std::span<const double> y, std::uint64_t seed) {
  VectorRun out;
  auto unit = [&](std::span<const double> v) {
    const double norm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-9) out.normalized = true;
  };
  unit(x);
  unit(y);
  const PublicCoins coins(seed);
  auto alice = protocol.make_vector_endpoint(Party::alice, std::vector<double>(x.begin(), x.end()), coins);
  auto bob = protocol.make_vector_endpoint(Party::bob, std::vector<double>(y.begin(), y.end()), coins);
  out.run = run_endpoints(*alice, *bob, protocol.declared_cost());
  return out;
}

std::vector<double> embed_cube_point(const BitString& x) {
  const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x.get(i) ? -s : s;
  return v;
}

}  // namespace ghd
