#include "ghd/protocols.hpp"

#include <cmath>
#include <numeric>

namespace ghd {

namespace {

constexpr std::uint64_t kRandomizeTag = 0x72616e64ULL;

const GhdParams& require_ghd(const Problem& inner, const char* what) {
  const auto* p = std::get_if<GhdParams>(&inner);
  if (!p) throw InvalidInput(std::string(what) + ": inner protocol must solve a ghd instance");
  return *p;
}

std::size_t center_shift_ell(std::size_t n, double b) {
  const double nd = static_cast<double>(n);
  const double ell = std::round(nd / 2.0 + b * std::sqrt(nd));
  if (ell < 0.0 || ell > nd) throw InvalidInput("center_shift: n/2 + b sqrt(n) must lie in [0, n]");
  return static_cast<std::size_t>(ell);
}

BitString weight_complement_block(std::size_t n, std::size_t weight) {
  // 1^{n - weight} 0^{weight}
  BitString block(n);
  for (std::size_t i = 0; i + weight < n; ++i) block.set(i, true);
  return block;
}

bool flips_output(const Reduction& r) {
  return std::holds_alternative<Complement>(r) || std::holds_alternative<GisEncode>(r);
}

class FlippedOutput final : public Endpoint {
 public:
  explicit FlippedOutput(std::unique_ptr<Endpoint> inner) : inner_(std::move(inner)) {}
  std::optional<BitString> respond(const BitString* incoming) override { return inner_->respond(incoming); }
  Label output() const override {
    const Label l = inner_->output();
    if (l == Label::zero) return Label::one;
    if (l == Label::one) return Label::zero;
    return l;
  }

 private:
  std::unique_ptr<Endpoint> inner_;
};

class ReducedProtocol final : public Protocol {
 public:
  ReducedProtocol(Reduction reduction, ProtocolPtr inner)
      : reduction_(std::move(reduction)), inner_(std::move(inner)), outer_(reduced_problem(reduction_, inner_->problem())) {}

  std::string name() const override { return inner_->name(); }
  Problem problem() const override { return outer_; }
  std::size_t declared_cost() const override { return inner_->declared_cost(); }
  std::optional<std::uint64_t> coin_outcomes() const override {
    if (std::holds_alternative<RandomizeUniform>(reduction_)) return std::nullopt;
    return inner_->coin_outcomes();
  }
  std::unique_ptr<Endpoint> make_endpoint(Party party, const BitString& input,
                                          const PublicCoins& coins) const override {
    if (input.size() != input_length()) throw InvalidInput("reduced protocol: input length differs from n");
    const PublicCoins inner_coins =
        std::holds_alternative<RandomizeUniform>(reduction_) ? coins.derive(1) : coins;
    auto ep = inner_->make_endpoint(party, reduce_input(reduction_, party, input, coins), inner_coins);
    if (flips_output(reduction_)) return std::make_unique<FlippedOutput>(std::move(ep));
    return ep;
  }
  nlohmann::json descriptor() const override {
    nlohmann::json d = inner_->descriptor();
    d["reductions"].push_back(to_json(reduction_));
    return d;
  }

 private:
  Reduction reduction_;
  ProtocolPtr inner_;
  Problem outer_;
};

}  // namespace

GhdParams gis_inner_params(std::size_t n, double t, double g) {
  const double nd = static_cast<double>(n);
  // dist of the encoded pair is 2n - 2|x & y|. Label-0 gis inputs have dist >= D0,
  // label-1 inputs dist < D1; integer cut points make both classes exact.
  const double upper = std::ceil(2.0 * nd - 2.0 * t + 2.0 * g) - 1.0;  // T + G
  const double lower = std::ceil(2.0 * nd - 2.0 * t - 2.0 * g) - 1.0;  // T - G
  return GhdParams::make(3 * n, (upper + lower) / 2.0, (upper - lower) / 2.0);
}

Problem reduced_problem(const Reduction& reduction, const Problem& inner) {
  return std::visit(
      [&](const auto& r) -> Problem {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, WidenGap>) {
          const GhdParams& p = require_ghd(inner, "widen_gap");
          if (r.g < p.g) throw InvalidInput("widen_gap: new gap must be at least the inner gap");
          return GhdParams::make(p.n, p.t, r.g);
        } else if constexpr (std::is_same_v<T, Repeat>) {
          const GhdParams& p = require_ghd(inner, "repeat");
          if (r.k == 0 || p.n % r.k != 0) throw InvalidInput("repeat: k must divide the inner input length");
          const double k = static_cast<double>(r.k);
          return GhdParams::make(p.n / r.k, p.t / k, p.g / k);
        } else if constexpr (std::is_same_v<T, Pad>) {
          const GhdParams& p = require_ghd(inner, "pad");
          if (r.ell + r.m >= p.n) throw InvalidInput("pad: ell + m_pad + n must equal the inner input length");
          const std::size_t n = p.n - r.ell - r.m;
          return GhdParams::make(n, p.t - static_cast<double>(r.ell), p.g);
        } else if constexpr (std::is_same_v<T, Complement>) {
          const GhdParams& p = require_ghd(inner, "complement");
          return GhdParams::make(p.n, static_cast<double>(p.n) - p.t, p.g);
        } else if constexpr (std::is_same_v<T, CenterShift>) {
          const GhdParams& p = require_ghd(inner, "center_shift");
          if (p.n % 2 != 0) throw InvalidInput("center_shift: inner input length must be 2n");
          const std::size_t n = p.n / 2;
          const std::size_t ell = center_shift_ell(n, r.b);
          return GhdParams::make(n, p.t - static_cast<double>(ell), p.g);
        } else if constexpr (std::is_same_v<T, RandomizeUniform>) {
          if (std::holds_alternative<GisParams>(inner))
            throw InvalidInput("randomize_uniform: preserves distance only; not valid for gis instances");
          return inner;
        } else {
          const GhdParams& p = require_ghd(inner, "gis_encode");
          if (p.n % 3 != 0) throw InvalidInput("gis_encode: inner input length must be 3n");
          const std::size_t n = p.n / 3;
          const GhdParams want = gis_inner_params(n, r.t, r.g);
          if (std::fabs(want.t - p.t) > 1e-9 || std::fabs(want.g - p.g) > 1e-9)
            throw InvalidInput("gis_encode: inner parameters must equal gis_inner_params(n, t, g)");
          return GisParams{n, r.t, r.g};
        }
      },
      reduction);
}

BitString reduce_input(const Reduction& reduction, Party party, const BitString& input, const PublicCoins& coins) {
  const std::size_t n = input.size();
  return std::visit(
      [&](const auto& r) -> BitString {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, WidenGap>) {
          return input;
        } else if constexpr (std::is_same_v<T, Repeat>) {
          return input.repeat(r.k);
        } else if constexpr (std::is_same_v<T, Pad>) {
          if (party == Party::alice) return input.concat(BitString::zeros(r.ell + r.m));
          return input.concat(BitString::ones(r.ell)).concat(BitString::zeros(r.m));
        } else if constexpr (std::is_same_v<T, Complement>) {
          return party == Party::alice ? input.complement() : input;
        } else if constexpr (std::is_same_v<T, CenterShift>) {
          const std::size_t ell = center_shift_ell(n, r.b);
          return reduce_input(Pad{ell, n - ell}, party, input, coins);
        } else if constexpr (std::is_same_v<T, RandomizeUniform>) {
          CounterRng rng = coins.stream(kRandomizeTag);
          const BitString z = BitString::random(n, rng);
          std::vector<std::uint32_t> sigma(n);
          std::iota(sigma.begin(), sigma.end(), 0u);
          for (std::size_t i = n; i > 1; --i) std::swap(sigma[i - 1], sigma[rng.below(i)]);
          return (input ^ z).permuted(sigma);
        } else {
          const std::size_t w = input.popcount();
          if (party == Party::alice) return input.concat(weight_complement_block(n, w)).concat(BitString::zeros(n));
          return input.concat(BitString::zeros(n)).concat(weight_complement_block(n, w));
        }
      },
      reduction);
}

ProtocolPtr apply_reduction(const Reduction& reduction, ProtocolPtr inner) {
  if (!inner) throw InvalidInput("apply_reduction: null inner protocol");
  return std::make_shared<ReducedProtocol>(reduction, std::move(inner));
}

nlohmann::json to_json(const Reduction& reduction) {
  return std::visit(
      [](const auto& r) -> nlohmann::json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, WidenGap>) return {{"kind", "widen_gap"}, {"g", r.g}};
        else if constexpr (std::is_same_v<T, Repeat>) return {{"kind", "repeat"}, {"k", r.k}};
        else if constexpr (std::is_same_v<T, Pad>) return {{"kind", "pad"}, {"ell", r.ell}, {"m", r.m}};
        else if constexpr (std::is_same_v<T, Complement>) return {{"kind", "complement"}};
        else if constexpr (std::is_same_v<T, CenterShift>) return {{"kind", "center_shift"}, {"b", r.b}};
        else if constexpr (std::is_same_v<T, RandomizeUniform>) return {{"kind", "randomize_uniform"}};
        else return {{"kind", "gis_encode"}, {"t", r.t}, {"g", r.g}};
      },
      reduction);
}

Reduction reduction_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "widen_gap") return WidenGap{j.at("g").get<double>()};
  if (kind == "repeat") return Repeat{j.at("k").get<std::size_t>()};
  if (kind == "pad") return Pad{j.at("ell").get<std::size_t>(), j.at("m").get<std::size_t>()};
  if (kind == "complement") return Complement{};
  if (kind == "center_shift") return CenterShift{j.at("b").get<double>()};
  if (kind == "randomize_uniform") return RandomizeUniform{};
  if (kind == "gis_encode") return GisEncode{j.at("t").get<double>(), j.at("g").get<double>()};
  throw InvalidInput("unknown reduction kind: " + kind);
}

ProtocolPtr protocol_from_json(const nlohmann::json& descriptor,
                               const std::function<ProtocolPtr(const nlohmann::json&)>& fallback) {
  try {
    const std::string name = descriptor.at("name").get<std::string>();
    const nlohmann::json& params = descriptor.at("params");
    ProtocolPtr p;
    if (name == "trivial") {
      p = trivial_protocol(std::get<GhdParams>(problem_from_json(params)));
    } else if (name == "sampling") {
      p = sampling_protocol(std::get<GhdParams>(problem_from_json(params)), params.at("k").get<std::size_t>());
    } else if (name == "hyperplane") {
      const auto gip = std::get<GipParams>(problem_from_json(params));
      p = hyperplane_gip_protocol(gip.n, params.at("k").get<std::size_t>(), gip.eps);
    } else if (fallback) {
      p = fallback(descriptor);
    } else {
      throw InvalidInput("unknown protocol name: " + name);
    }
    if (descriptor.contains("reductions"))
      for (const auto& r : descriptor.at("reductions")) p = apply_reduction(reduction_from_json(r), p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("protocol descriptor: ") + e.what());
  } catch (const std::bad_variant_access&) {
    throw InvalidInput("protocol descriptor: params describe the wrong problem kind");
  }
}

}  // namespace ghd
