#include <algorithm>
#include <cmath>

#include "ghd/cubexform.hpp"
#include "ghd/parallel.hpp"
#include "ghd/protocols.hpp"
#include "ghd/stats.hpp"

namespace ghd {

namespace {

constexpr std::uint64_t kChunk = 512;

// Counts trials i in [0, trials) for which failed(i) holds; chunked so the
// result does not depend on the worker count.
template <typename Failed>
std::uint64_t count_failures(std::uint64_t trials, unsigned workers, Failed&& failed) {
  const std::size_t chunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> per_chunk(chunks, 0);
  parallel_for(chunks, resolve_workers(workers), [&](std::size_t c) {
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t hi = std::min(trials, lo + kChunk);
    std::uint64_t local = 0;
    for (std::uint64_t i = lo; i < hi; ++i) local += failed(i) ? 1 : 0;
    per_chunk[c] = local;
  });
  std::uint64_t total = 0;
  for (auto v : per_chunk) total += v;
  return total;
}

bool wrong(Label truth, Label output) { return truth != Label::star && output != truth; }

// One trial at a fixed distance: uniform x, uniform d-subset flipped.
bool fails_at_distance(const Protocol& protocol, std::size_t d, std::uint64_t trial_seed) {
  CounterRng rng(trial_seed);
  const BitString x = BitString::random(protocol.input_length(), rng);
  const BitString y = flip_random_subset(x, d, rng);
  const Label truth = problem_label(protocol.problem(), x, y);
  if (truth == Label::star) return false;
  return run_protocol(protocol, x, y, rng()).output != truth;
}

}  // namespace

std::string_view to_string(ErrorMode mode) {
  switch (mode) {
    case ErrorMode::worst_case_promise: return "worst_case_promise";
    case ErrorMode::distributional: return "distributional";
    case ErrorMode::by_distance: return "by_distance";
  }
  return "?";
}

nlohmann::json to_json(const ErrorEstimate& e) {
  nlohmann::json j{{"mode", to_string(e.mode)}, {"value", e.value}, {"ci95", e.ci95},
                   {"trials", e.trials},      {"exact", e.exact}};
  if (!e.by_distance.empty()) {
    j["by_distance"] = e.by_distance;
    j["by_distance_ci95"] = e.by_distance_ci95;
  }
  if (!e.distances.empty()) j["distances"] = e.distances;
  return j;
}

std::vector<std::size_t> adversarial_distances(const GhdParams& params) {
  std::vector<std::size_t> out;
  const auto n = static_cast<std::int64_t>(params.n);
  // Largest label-0 distance and smallest label-1 distance.
  for (std::int64_t d = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor(params.t - params.g)) + 1); d >= 0; --d) {
    if (distance_at_most_difference(d, params.t, params.g)) {
      out.push_back(static_cast<std::size_t>(d));
      break;
    }
  }
  for (std::int64_t d = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(params.t + params.g)) - 1); d <= n; ++d) {
    if (distance_exceeds_sum(d, params.t, params.g)) {
      out.push_back(static_cast<std::size_t>(d));
      break;
    }
  }
  return out;
}

ErrorEstimate estimate_error(const Protocol& protocol, const ErrorSpec& spec, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw InvalidInput("estimate_error: trials must be at least 1");
  ErrorEstimate est;
  est.trials = trials;
  const std::size_t n = protocol.input_length();

  if (std::holds_alternative<PromiseWorstCase>(spec)) {
    const Problem problem = protocol.problem();
    const auto* params = std::get_if<GhdParams>(&problem);
    if (!params) throw InvalidInput("estimate_error: worst-case promise mode needs a ghd protocol");
    est.mode = ErrorMode::worst_case_promise;
    est.distances = adversarial_distances(*params);
    if (est.distances.empty()) throw InvalidInput("estimate_error: promise has no inputs at this n");
    est.value = -1.0;
    for (std::size_t j = 0; j < est.distances.size(); ++j) {
      const std::size_t d = est.distances[j];
      const std::uint64_t base = derive_seed(seed, j);
      const auto fails = count_failures(trials, workers, [&](std::uint64_t i) {
        return fails_at_distance(protocol, d, derive_seed(base, i));
      });
      const Proportion p = make_proportion(fails, trials);
      est.by_distance.push_back(p.value);
      est.by_distance_ci95.push_back(p.ci95);
      if (p.value > est.value) {
        est.value = p.value;
        est.ci95 = p.ci95;
      }
    }
    est.trials = trials * est.distances.size();
    return est;
  }

  est.mode = ErrorMode::distributional;
  std::uint64_t fails = 0;
  if (const auto* xi = std::get_if<XiDistribution>(&spec)) {
    if (!(xi->p >= -1.0 && xi->p <= 1.0)) throw InvalidInput("estimate_error: xi parameter must lie in [-1, 1]");
    const Problem problem = protocol.problem();
    fails = count_failures(trials, workers, [&](std::uint64_t i) {
      const auto [x, y] = sample_xi(CubePairLaw{n, xi->p}, derive_seed(seed, 2 * i));
      const Label truth = problem_label(problem, x, y);
      if (truth == Label::star) return false;
      return run_protocol(protocol, x, y, derive_seed(seed, 2 * i + 1)).output != truth;
    });
  } else {
    const auto& pairs = std::get<ExplicitPairs>(spec).pairs;
    if (pairs.empty()) throw InvalidInput("estimate_error: explicit pair set is empty");
    const Problem problem = protocol.problem();
    fails = count_failures(trials, workers, [&](std::uint64_t i) {
      const auto& [x, y] = pairs[i % pairs.size()];
      return wrong(problem_label(problem, x, y), run_protocol(protocol, x, y, derive_seed(seed, i)).output);
    });
  }
  const Proportion p = make_proportion(fails, trials);
  est.value = p.value;
  est.ci95 = p.ci95;
  return est;
}

ErrorEstimate exact_error(const Protocol& protocol, const ErrorSpec& spec) {
  const auto outcomes = protocol.coin_outcomes();
  if (!outcomes) throw CapacityError("exact_error: protocol has no finite public-coin space");
  const std::size_t n = protocol.input_length();
  const Problem problem = protocol.problem();

  // Fraction of coin outcomes on which the protocol errs at (x, y).
  auto error_rate = [&](const BitString& x, const BitString& y) {
    const Label truth = problem_label(problem, x, y);
    if (truth == Label::star) return 0.0;
    std::uint64_t bad = 0;
    for (std::uint64_t c = 0; c < *outcomes; ++c)
      bad += run_protocol(protocol, x, y, PublicCoins::enumerated(c)).output != truth;
    return static_cast<double>(bad) / static_cast<double>(*outcomes);
  };

  ErrorEstimate est;
  est.exact = true;
  if (const auto* explicit_pairs = std::get_if<ExplicitPairs>(&spec)) {
    est.mode = ErrorMode::distributional;
    if (explicit_pairs->pairs.empty()) throw InvalidInput("exact_error: explicit pair set is empty");
    double sum = 0.0;
    for (const auto& [x, y] : explicit_pairs->pairs) sum += error_rate(x, y);
    est.value = sum / static_cast<double>(explicit_pairs->pairs.size());
    est.trials = explicit_pairs->pairs.size() * *outcomes;
    return est;
  }

  if (n > 12) throw CapacityError("exact_error: input enumeration needs n <= 12");
  const std::uint64_t points = std::uint64_t{1} << n;
  const auto* xi = std::get_if<XiDistribution>(&spec);
  est.mode = xi ? ErrorMode::distributional : ErrorMode::worst_case_promise;
  std::vector<double> worst_at(n + 1, 0.0);
  double total = 0.0;
  for (std::uint64_t xi_idx = 0; xi_idx < points; ++xi_idx) {
    const BitString x = BitString::from_index(n, xi_idx);
    for (std::uint64_t yi_idx = 0; yi_idx < points; ++yi_idx) {
      const BitString y = BitString::from_index(n, yi_idx);
      const double r = error_rate(x, y);
      const std::size_t d = hamming_distance(x, y);
      if (xi) total += xi_pair_weight(n, xi->p, d) * r;
      worst_at[d] = std::max(worst_at[d], r);
    }
  }
  est.trials = points * points * *outcomes;
  if (xi) {
    est.value = total;
  } else {
    est.value = *std::max_element(worst_at.begin(), worst_at.end());
    est.by_distance = worst_at;
  }
  return est;
}

ErrorEstimate error_by_distance_profile(const Protocol& protocol, std::uint64_t trials_per_d, std::uint64_t seed,
                                        unsigned workers) {
  if (trials_per_d == 0) throw InvalidInput("error_by_distance_profile: trials must be at least 1");
  const std::size_t n = protocol.input_length();
  ErrorEstimate est;
  est.mode = ErrorMode::by_distance;
  est.trials = trials_per_d * (n + 1);
  const DistanceLaw uniform = distance_law(n, 0.0);
  double var = 0.0;
  for (std::size_t d = 0; d <= n; ++d) {
    const std::uint64_t base = derive_seed(seed, d);
    const auto fails = count_failures(trials_per_d, workers, [&](std::uint64_t i) {
      return fails_at_distance(protocol, d, derive_seed(base, i));
    });
    const Proportion p = make_proportion(fails, trials_per_d);
    est.by_distance.push_back(p.value);
    est.by_distance_ci95.push_back(p.ci95);
    est.distances.push_back(d);
    // Implied error under the uniform distribution: sum_d mu_{n,0}(d) delta_d.
    est.value += uniform.pmf[d] * p.value;
    var += uniform.pmf[d] * uniform.pmf[d] * p.ci95 * p.ci95;
  }
  est.ci95 = std::sqrt(var);
  return est;
}

}  // namespace ghd
