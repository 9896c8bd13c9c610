#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ghd/core.hpp"

namespace ghd {

enum class Party { alice, bob };

std::string_view to_string(Party party);

struct Message {
  Party sender = Party::alice;
  BitString payload;

  std::size_t bits() const { return payload.size(); }
};

struct Transcript {
  std::vector<Message> messages;
  std::size_t total_bits = 0;
  std::size_t rounds = 0;  // sender alternations; every message changes the speaker

  bool operator==(const Transcript& other) const;
};

nlohmann::json to_json(const Transcript& transcript);

// Shared public randomness. Either a seeded stream, or (for exact evaluation)
// a fixed index into a protocol's finite coin space.
class PublicCoins {
 public:
  explicit PublicCoins(std::uint64_t seed) : seed_(seed) {}
  static PublicCoins enumerated(std::uint64_t outcome);

  bool is_enumerated() const { return enumerated_; }
  std::uint64_t outcome() const { return outcome_; }
  std::uint64_t seed() const { return seed_; }

  // Independent generator for a named purpose. Enumerated coins have no
  // continuous randomness to give, so this throws ContractViolation for them.
  CounterRng stream(std::uint64_t tag) const;
  // Coins for a nested protocol; enumerated coins pass through unchanged.
  PublicCoins derive(std::uint64_t tag) const;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t outcome_ = 0;
  bool enumerated_ = false;
};

// One party's view of a run. respond() receives the peer's previous message
// (nullptr on Alice's opening turn) and returns the next message, or nullopt
// once the party has nothing further to send.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual std::optional<BitString> respond(const BitString* incoming) = 0;
  virtual Label output() const { throw ContractViolation("this endpoint produces no output"); }
};

// gap-intersection-size on subsets of [n] encoded as indicator strings.
struct GisParams {
  std::size_t n = 1;
  double t = 0.0;
  double g = 0.0;
  bool operator==(const GisParams&) const = default;
};

// gap-inner-product on the embedded cube x -> ((-1)^{x_i} / sqrt n)_i, where
// <x, y> = 1 - 2 dist(x, y) / n. Label 0 means <x,y> >= eps, 1 means <x,y> <= -eps.
struct GipParams {
  std::size_t n = 1;
  double eps = 0.0;
  bool operator==(const GipParams&) const = default;
};

using Problem = std::variant<GhdParams, GisParams, GipParams>;

Label gis_label(const GisParams& params, const BitString& x, const BitString& y);
Label gip_label(const GipParams& params, const BitString& x, const BitString& y);
Label gip_label(double eps, std::span<const double> x, std::span<const double> y);
Label problem_label(const Problem& problem, const BitString& x, const BitString& y);
std::size_t problem_input_length(const Problem& problem);
nlohmann::json to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& j);

// Immutable protocol description. Each run builds fresh endpoints; Bob's
// endpoint produces the output bit, which is not counted in the cost.
class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual std::string name() const = 0;
  virtual Problem problem() const = 0;
  virtual std::size_t declared_cost() const = 0;
  // Size of the public-coin space when it is finite and small enough to enumerate.
  virtual std::optional<std::uint64_t> coin_outcomes() const { return std::nullopt; }
  virtual std::unique_ptr<Endpoint> make_endpoint(Party party, const BitString& input,
                                                  const PublicCoins& coins) const = 0;
  // {name, params, reductions: [...]}
  virtual nlohmann::json descriptor() const = 0;

  std::size_t input_length() const { return problem_input_length(problem()); }
};

using ProtocolPtr = std::shared_ptr<const Protocol>;

struct ProtocolRun {
  Label output = Label::star;
  Transcript transcript;
};

// Alternates Alice, Bob, Alice, ... until a party declines to send.
// Throws ContractViolation once the transcript exceeds declared_cost.
ProtocolRun run_endpoints(Endpoint& alice, Endpoint& bob, std::size_t declared_cost);
ProtocolRun run_protocol(const Protocol& protocol, const BitString& x, const BitString& y, std::uint64_t seed);
ProtocolRun run_protocol(const Protocol& protocol, const BitString& x, const BitString& y,
                         const PublicCoins& coins);

// Alice sends x; Bob outputs ghd_label. Cost n.
ProtocolPtr trivial_protocol(const GhdParams& params);

// Public coins pick S subset of [n] with |S| = k; Alice sends x restricted to S;
// Bob outputs 0 iff |{i in S : x_i != y_i}| <= k t / n. Cost k.
ProtocolPtr sampling_protocol(const GhdParams& params, std::size_t k);

// k shared Gaussian directions; Alice sends the k signs of <r_j, x>; Bob
// outputs 0 ("<x,y> >= eps") iff fewer than half the signs disagree. Cost k.
class HyperplaneGipProtocol final : public Protocol {
 public:
  HyperplaneGipProtocol(std::size_t dimension, std::size_t k, double eps);

  std::string name() const override { return "hyperplane"; }
  Problem problem() const override { return GipParams{dimension_, eps_}; }
  std::size_t declared_cost() const override { return k_; }
  std::unique_ptr<Endpoint> make_endpoint(Party party, const BitString& input,
                                          const PublicCoins& coins) const override;
  nlohmann::json descriptor() const override;

  // Real-vector entry point; the input is normalised if it is not a unit vector.
  std::unique_ptr<Endpoint> make_vector_endpoint(Party party, std::vector<double> input,
                                                 const PublicCoins& coins) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t k() const { return k_; }
  double eps() const { return eps_; }

 private:
  std::size_t dimension_;
  std::size_t k_;
  double eps_;
};

std::shared_ptr<const HyperplaneGipProtocol> hyperplane_gip_protocol(std::size_t dimension, std::size_t k,
                                                                     double eps);

struct VectorRun {
  ProtocolRun run;
  bool normalized = false;  // set when an input was not unit length within 1e-9
};

VectorRun run_gip_vectors(const HyperplaneGipProtocol& protocol, std::span<const double> x,
                          std::span<const double> y, std::uint64_t seed);

// Cube embedding x -> ((-1)^{x_i} / sqrt n)_i.
std::vector<double> embed_cube_point(const BitString& x);

// ---------------------------------------------------------------------------
// Reduction toolkit. Each reduction wraps an inner protocol for a harder (or
// re-encoded) instance and exposes the outer problem; cost is unchanged.

struct WidenGap { double g = 0.0; };               // outer gap g >= inner gap
struct Repeat { std::size_t k = 1; };              // inputs repeated k times
struct Pad { std::size_t ell = 0; std::size_t m = 0; };  // Alice += 0^{ell+m}, Bob += 1^ell 0^m
struct Complement {};                              // Alice flips every bit; t -> n - t
struct CenterShift { double b = 0.0; };            // Pad with ell = round(n/2 + b sqrt n), m = n - ell
struct RandomizeUniform {};                        // shared z, sigma: input -> sigma(input xor z)
struct GisEncode { double t = 0.0; double g = 0.0; };  // gap-intersection-size -> ghd on 3n bits

using Reduction = std::variant<WidenGap, Repeat, Pad, Complement, CenterShift, RandomizeUniform, GisEncode>;

nlohmann::json to_json(const Reduction& reduction);
Reduction reduction_from_json(const nlohmann::json& j);

// Outer problem obtained by wrapping a protocol for `inner` with `reduction`.
// Throws InvalidInput when the inner problem does not have the required shape.
Problem reduced_problem(const Reduction& reduction, const Problem& inner);

// The input map a party applies before handing its string to the inner protocol.
BitString reduce_input(const Reduction& reduction, Party party, const BitString& input, const PublicCoins& coins);

ProtocolPtr apply_reduction(const Reduction& reduction, ProtocolPtr inner);

// ghd parameters on 3n bits whose promise classes coincide with those of gis_{n,t,g}
// (answers flipped) under the GisEncode input map.
GhdParams gis_inner_params(std::size_t n, double t, double g);

// Builds trivial / sampling / hyperplane base protocols and applies the listed
// reductions. Other base names are handed to `fallback` when one is given.
ProtocolPtr protocol_from_json(const nlohmann::json& descriptor,
                               const std::function<ProtocolPtr(const nlohmann::json&)>& fallback = {});

// ---------------------------------------------------------------------------
// Error estimation

enum class ErrorMode { worst_case_promise, distributional, by_distance };

std::string_view to_string(ErrorMode mode);

struct ErrorEstimate {
  ErrorMode mode = ErrorMode::distributional;
  double value = 0.0;
  double ci95 = 0.0;
  std::uint64_t trials = 0;
  bool exact = false;
  // by_distance mode: delta_d with its interval; worst-case mode: the adversarial distances tried.
  std::vector<double> by_distance;
  std::vector<double> by_distance_ci95;
  std::vector<std::size_t> distances;
};

nlohmann::json to_json(const ErrorEstimate& estimate);

struct PromiseWorstCase {};
struct XiDistribution { double p = 0.0; };
struct ExplicitPairs { std::vector<std::pair<BitString, BitString>> pairs; };

using ErrorSpec = std::variant<PromiseWorstCase, XiDistribution, ExplicitPairs>;

// Boundary distances floor(t-g) and the least integer above t+g that lie in [0, n].
std::vector<std::size_t> adversarial_distances(const GhdParams& params);

// Monte Carlo error with a normal-approximation ci95. Worst-case promise error
// (ghd problems only) is the max over the adversarial distances, `trials` each.
ErrorEstimate estimate_error(const Protocol& protocol, const ErrorSpec& spec, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers = 0);

// Enumerates every input pair and every public-coin outcome. Requires n <= 12
// and a finite coin space.
ErrorEstimate exact_error(const Protocol& protocol, const ErrorSpec& spec);

// delta_d for d = 0..n on uniform pairs at distance d (uniform x, uniform d-subset flipped).
ErrorEstimate error_by_distance_profile(const Protocol& protocol, std::uint64_t trials_per_d,
                                        std::uint64_t seed, unsigned workers = 0);

}  // namespace ghd
