#include "ghd/streams.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "ghd/errors.hpp"
#include "ghd/parallel.hpp"
#include "ghd/rng.hpp"

namespace ghd {

namespace {

// Slot i occupies bits 64i .. 64i + 63, which is exactly limb i.
void put_word(BitString& s, std::size_t slot, std::uint64_t w) { s.words()[slot] = w; }

std::uint64_t get_word(const BitString& s, std::size_t slot) { return s.words()[slot]; }

class StreamingEndpoint final : public Endpoint {
 public:
  StreamingEndpoint(Party party, std::vector<std::uint64_t> segment, std::unique_ptr<StreamingEstimator> est,
                    std::size_t passes, double threshold)
      : party_(party), segment_(std::move(segment)), est_(std::move(est)), passes_(passes), threshold_(threshold) {}

  std::optional<BitString> respond(const BitString* incoming) override {
    if (incoming) est_->deserialize(*incoming);
    if (party_ == Party::alice) {
      if (pass_ == passes_) return std::nullopt;
      ++pass_;
      feed();
      return est_->serialize();
    }
    ++pass_;
    feed();
    if (pass_ == passes_) {
      output_ = est_->estimate() > threshold_ ? Label::one : Label::zero;
      return std::nullopt;
    }
    return est_->serialize();
  }

  Label output() const override {
    if (party_ != Party::bob || !output_) throw ContractViolation("streaming protocol: no output yet");
    return *output_;
  }

 private:
  void feed() {
    for (auto e : segment_) est_->update(e);
  }

  Party party_;
  std::vector<std::uint64_t> segment_;
  std::unique_ptr<StreamingEstimator> est_;
  std::size_t passes_;
  double threshold_;
  std::size_t pass_ = 0;
  std::optional<Label> output_;
};

class StreamingProtocol final : public Protocol {
 public:
  StreamingProtocol(std::shared_ptr<const StreamingEstimator> est, std::size_t passes, GhdParams params)
      : est_(std::move(est)), passes_(passes), params_(params) {}

  std::string name() const override { return "streaming"; }
  Problem problem() const override { return params_; }
  std::size_t declared_cost() const override { return (2 * passes_ - 1) * est_->state_bits(); }

  std::unique_ptr<Endpoint> make_endpoint(Party party, const BitString& input, const PublicCoins& coins) const override {
    if (input.size() != params_.n) throw InvalidInput("streaming protocol: input length differs from n");
    std::vector<std::uint64_t> segment(params_.n);
    for (std::size_t i = 0; i < params_.n; ++i) segment[i] = 2 * (i + 1) + (input.get(i) ? 1 : 0);
    const std::uint64_t hash_seed = coins.stream(0)();
    return std::make_unique<StreamingEndpoint>(party, std::move(segment), est_->fresh(hash_seed), passes_,
                                               static_cast<double>(params_.n) + params_.t);
  }

  nlohmann::json descriptor() const override {
    nlohmann::json p = to_json(Problem{params_});
    p["passes"] = passes_;
    p["estimator"] = est_->descriptor();
    return {{"name", name()}, {"params", p}, {"reductions", nlohmann::json::array()}};
  }

 private:
  std::shared_ptr<const StreamingEstimator> est_;
  std::size_t passes_;
  GhdParams params_;
};

}  // namespace

KmvSketch::KmvSketch(std::size_t k, std::uint64_t seed) : k_(k), seed_(seed), key_(splitmix64(seed ^ 0x6b6d76ULL)) {
  if (k < 2) throw InvalidInput("KMV sketch needs k >= 2");
}

std::uint64_t KmvSketch::hash(std::uint64_t element) const { return splitmix64(element ^ key_); }

void KmvSketch::update(std::uint64_t element) {
  const std::uint64_t h = hash(element);
  if (values_.size() < k_) {
    values_.insert(h);
    return;
  }
  const auto largest = std::prev(values_.end());
  if (h < *largest && values_.insert(h).second) values_.erase(std::prev(values_.end()));
}

double KmvSketch::estimate() const {
  if (values_.size() < k_) return static_cast<double>(values_.size());
  const double vk = (static_cast<double>(*values_.rbegin()) + 1.0) * 0x1.0p-64;
  return static_cast<double>(k_ - 1) / vk;
}

BitString KmvSketch::serialize() const {
  BitString s(state_bits());
  put_word(s, 0, values_.size());
  std::size_t slot = 1;
  for (auto v : values_) put_word(s, slot++, v);
  return s;
}

void KmvSketch::deserialize(const BitString& state) {
  if (state.size() != state_bits()) throw InvalidInput("KMV state has the wrong size");
  const std::uint64_t count = get_word(state, 0);
  if (count > k_) throw InvalidInput("KMV state holds more than k values");
  values_.clear();
  for (std::uint64_t i = 0; i < count; ++i) values_.insert(get_word(state, i + 1));
}

std::unique_ptr<StreamingEstimator> KmvSketch::fresh(std::uint64_t seed) const { return std::make_unique<KmvSketch>(k_, seed); }

nlohmann::json KmvSketch::descriptor() const { return {{"kind", "kmv"}, {"k", k_}, {"seed", seed_}}; }

std::unique_ptr<KmvSketch> kmv_f0(std::size_t k, std::uint64_t seed) { return std::make_unique<KmvSketch>(k, seed); }

std::size_t kmv_k_for_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("sketch accuracy must lie in (0, 1)");
  return static_cast<std::size_t>(std::ceil(6.0 / (eps * eps) - 1e-9));
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> ghd_to_f0_stream(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) throw InvalidInput("inputs must have equal length");
  std::vector<std::uint64_t> a(x.size()), b(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = 2 * (i + 1) + (x.get(i) ? 1 : 0);
    b[i] = 2 * (i + 1) + (y.get(i) ? 1 : 0);
  }
  return {std::move(a), std::move(b)};
}

std::uint64_t exact_f0(std::span<const std::uint64_t> stream) {
  std::vector<std::uint64_t> v(stream.begin(), stream.end());
  std::sort(v.begin(), v.end());
  return static_cast<std::uint64_t>(std::unique(v.begin(), v.end()) - v.begin());
}

std::uint64_t exact_f0(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::vector<std::uint64_t> v(a.begin(), a.end());
  v.insert(v.end(), b.begin(), b.end());
  return exact_f0(v);
}

nlohmann::json to_json(const ReductionAccounting& a) {
  return {{"passes", a.passes}, {"state_bits", a.state_bits}, {"messages", a.messages}, {"total_bits", a.total_bits}};
}

double f0_accuracy_for(const GhdParams& params) {
  if (!(params.g > 0.0)) throw InvalidInput("stream reduction needs a positive gap");
  return params.g / (2.0 * (static_cast<double>(params.n) + params.t + params.g));
}

std::pair<ProtocolPtr, ReductionAccounting> streaming_to_protocol(std::shared_ptr<const StreamingEstimator> estimator,
                                                                  std::size_t passes, const GhdParams& params) {
  if (!estimator) throw InvalidInput("streaming protocol needs an estimator");
  if (passes == 0) throw InvalidInput("streaming protocol needs at least one pass");
  if (passes > estimator->passes_supported()) throw InvalidInput("estimator does not support that many passes");
  if (estimator->state_bits() == 0) throw InvalidInput("estimator state is not serializable");
  ReductionAccounting acc;
  acc.passes = passes;
  acc.state_bits = estimator->state_bits();
  acc.messages = 2 * passes - 1;
  acc.total_bits = acc.messages * acc.state_bits;
  return {std::make_shared<StreamingProtocol>(std::move(estimator), passes, params), acc};
}

ProtocolPtr streaming_protocol_from_json(const nlohmann::json& descriptor) {
  try {
    if (descriptor.at("name") != "streaming") throw InvalidInput("not a streaming protocol descriptor");
    const nlohmann::json& params = descriptor.at("params");
    const auto ghd = std::get<GhdParams>(problem_from_json(params));
    const nlohmann::json& est = params.at("estimator");
    if (est.at("kind") != "kmv") throw InvalidInput("unknown estimator kind");
    auto sketch = kmv_f0(est.at("k").get<std::size_t>(), est.value("seed", std::uint64_t{0}));
    return streaming_to_protocol(std::move(sketch), params.at("passes").get<std::size_t>(), ghd).first;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("streaming descriptor: ") + e.what());
  } catch (const std::bad_variant_access&) {
    throw InvalidInput("streaming descriptor: params must describe a ghd problem");
  }
}

Proportion kmv_failure_rate(std::size_t k, double eps, std::uint64_t distinct, std::uint64_t trials, std::uint64_t seed,
                            unsigned workers) {
  if (trials == 0) throw InvalidInput("trials must be positive");
  std::vector<std::uint8_t> failed(trials, 0);
  parallel_for(trials, resolve_workers(workers), [&](std::size_t t) {
    KmvSketch sketch(k, derive_seed(seed, t));
    for (std::uint64_t e = 0; e < distinct; ++e) sketch.update(e);
    const double truth = static_cast<double>(distinct);
    failed[t] = std::fabs(sketch.estimate() - truth) > eps * truth;
  });
  std::uint64_t count = 0;
  for (auto f : failed) count += f;
  return make_proportion(count, trials);
}

std::size_t kmv_minimal_k(double eps, std::uint64_t distinct, std::uint64_t trials, std::uint64_t seed, double target,
                          std::size_t k_max, unsigned workers) {
  if (k_max < 2) throw InvalidInput("k_max must be at least 2");
  if (kmv_failure_rate(k_max, eps, distinct, trials, seed, workers).value > target)
    throw InfeasibleError("no k up to k_max reaches the target failure rate");
  std::size_t lo = 2, hi = k_max;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (kmv_failure_rate(mid, eps, distinct, trials, seed, workers).value <= target) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

std::vector<std::uint64_t> read_stream(std::istream& in) {
  std::vector<std::uint64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    try {
      std::size_t pos = 0;
      if (line.find('-') != std::string::npos) throw InvalidInput("negative stream element");
      out.push_back(std::stoull(line, &pos));
      if (line.find_first_not_of(" \t\r", pos) != std::string::npos) throw InvalidInput("bad stream element: " + line);
    } catch (const std::logic_error&) {
      throw InvalidInput("bad stream element: " + line);
    }
  }
  return out;
}

void write_stream(std::ostream& out, std::span<const std::uint64_t> stream) {
  for (auto e : stream) out << e << '\n';
}

void write_state_blob(std::ostream& out, const BitString& state) {
  const std::uint64_t bits = state.size();
  for (int b = 0; b < 8; ++b) out.put(static_cast<char>((bits >> (8 * b)) & 0xff));
  for (std::size_t byte = 0; byte < (bits + 7) / 8; ++byte) {
    unsigned v = 0;
    for (std::size_t b = 0; b < 8 && 8 * byte + b < bits; ++b) v |= static_cast<unsigned>(state.get(8 * byte + b)) << b;
    out.put(static_cast<char>(v));
  }
}

BitString read_state_blob(std::istream& in) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    const int c = in.get();
    if (c == EOF) throw InvalidInput("state blob: truncated header");
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  if (bits > (std::uint64_t{1} << 36)) throw CapacityError("state blob too large");
  BitString s(bits);
  for (std::size_t byte = 0; byte < (bits + 7) / 8; ++byte) {
    const int c = in.get();
    if (c == EOF) throw InvalidInput("state blob: truncated payload");
    for (std::size_t b = 0; b < 8 && 8 * byte + b < bits; ++b) s.set(8 * byte + b, (c >> b) & 1);
  }
  return s;
}

}  // namespace ghd
