#include "ghd/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ghd/bounds.hpp"
#include "ghd/core.hpp"
#include "ghd/cubexform.hpp"
#include "ghd/errors.hpp"
#include "ghd/gauss.hpp"
#include "ghd/protocols.hpp"
#include "ghd/streams.hpp"

namespace ghd {

namespace {

using Json = nlohmann::json;

struct Param {
  const char* name;
  const char* fallback;
  const char* help;
};

struct Command {
  const char* name;
  const char* help;
  std::vector<Param> params;
};

const std::vector<Command>& command_table() {
  static const std::vector<Command> table = {
      {"cube-inequality", "margin of 1/2 (xi_-rho + xi_rho)(AxB) >= (1-eps) xi_0(AxB)",
       {{"n", "16", "cube dimension"},
        {"rho", "auto", "correlation, or auto for 4b/sqrt(n) with the binomial-tail b"},
        {"eps", "1/3", "slack on the right-hand side"},
        {"tail-eps", "1/8", "tail level used to pick b when rho is auto"},
        {"sets", "random", "random, concentrated or file"},
        {"density", "9/10", "density of random sets"},
        {"pairs", "1", "number of random set pairs"},
        {"set-a", "", "text cube set file for A"},
        {"set-b", "", "text cube set file for B"}}},
      {"gauss-correlation", "Monte Carlo correlation ratio for two Gaussian sets",
       {{"n", "100", "dimension"},
        {"eta", "", "correlation; empty means eta-scale / sqrt(n)"},
        {"eta-scale", "1/2", "c in eta = c / sqrt(n)"},
        {"set-a", R"({"kind":"symmetric_slab","params":{"a":[1],"t":1}})", "JSON set predicate A"},
        {"set-b", R"({"kind":"halfspace","params":{"a":[1],"t":0.5}})", "JSON set predicate B"}}},
      {"cosh-check", "Gauss-Hermite E[cosh(alpha x + z)] against cosh(z) e^{alpha^2/2}",
       {{"alpha", "1", "alpha, |alpha| <= 4"}, {"z", "0", "z, |z| <= 10"}, {"grid", "0", "if > 0, a grid x grid sweep"}}},
      {"projection", "divergence from Gaussianity of one-dimensional projections of a conditioned Gaussian",
       {{"n", "20", "dimension"},
        {"set", R"({"kind":"coord_threshold","params":{"t":2}})", "JSON set predicate"},
        {"directions", "basis", "basis or random"},
        {"count", "0", "number of directions (0: n for basis, 10 for random)"},
        {"samples", "100000", "samples per direction"},
        {"eps", "1/100", "divergence threshold for the within-eps fraction"}}},
      {"protocol-error", "error of a ghd protocol",
       {{"protocol", "", "JSON protocol descriptor (overrides kind/n/t/g/k)"},
        {"kind", "sampling", "trivial, sampling or streaming"},
        {"n", "64", "input length"},
        {"t", "auto", "threshold (auto: n/2)"},
        {"g", "auto", "gap (auto: sqrt n)"},
        {"k", "auto", "sample size or sketch size (auto: min(n, ceil(18 n^2/g^2)) or ceil(6/eps^2))"},
        {"mode", "worst", "worst, xi, by-distance, exact or exact-xi"},
        {"p", "0", "xi correlation for xi modes"}}},
      {"reduction-chain", "wrap a base protocol in reductions and measure the outer problem",
       {{"protocol", R"({"name":"sampling","params":{"kind":"ghd","n":64,"t":32,"g":8,"k":64}})",
         "JSON base protocol descriptor"},
        {"reductions", "[]", "JSON array of reductions, applied in order"},
        {"mode", "worst", "worst or xi"},
        {"p", "0", "xi correlation for xi mode"}}},
      {"joker-scan", "search for rectangles of least joker slack",
       {{"n", "16", "cube dimension"},
        {"b", "1/2", "mu0 = xi_{4b/sqrt n}, mu+ = xi_{-4b/sqrt n}"},
        {"delta", "1/20", "m = delta n and minimum xi_0 mass 2^{-delta n}"},
        {"m", "auto", "additive exponent (auto: delta n)"},
        {"min-mass", "auto", "minimum xi_0 mass of scanned rectangles (auto: 2^{-delta n})"},
        {"mode", "greedy", "exhaustive, random or greedy"},
        {"budget", "64", "random draws or greedy restarts"}}},
      {"corruption-bound", "lower bound from a corruption-with-jokers certificate",
       {{"alpha0", "1/2", ""}, {"alpha1", "2/3", ""}, {"alphaplus", "1/2", ""}, {"eps", "1/8", ""}, {"m", "0", ""}}},
      {"discrepancy", "largest rectangle discrepancy of the ghd matrix under xi_p",
       {{"n", "4", "cube dimension"},
        {"t", "auto", "threshold (auto: n/2)"},
        {"g", "0", "gap"},
        {"p", "0", "xi correlation"},
        {"mode", "exhaustive", "exhaustive, random or greedy"},
        {"budget", "64", "random draws or greedy restarts"}}},
      {"stream-reduce", "ghd protocol built from a multi-pass distinct-count sketch",
       {{"n", "1024", "input length"},
        {"t", "auto", "threshold (auto: n/2)"},
        {"g", "auto", "gap (auto: sqrt n)"},
        {"passes", "1", "streaming passes"},
        {"eps", "auto", "sketch accuracy (auto: g / (2 (n + t + g)))"},
        {"k", "auto", "sketch size (auto: ceil(6/eps^2))"}}},
      {"norm-concentration", "fraction of Gaussian vectors with |x|^2 outside [(1-beta)n, (1+beta)n]",
       {{"n", "50", "dimension"}, {"beta", "1/2", "relative width"}}},
  };
  return table;
}

const Command& find_command(const std::string& name) {
  for (const auto& c : command_table())
    if (name == c.name) return c;
  throw InvalidInput("unknown command: " + name);
}

// Typed access to the string parameters of a spec.
class Params {
 public:
  Params(const ExperimentSpec& spec, const Command& cmd) : values_(spec.parameters) {
    for (const auto& p : cmd.params) values_.try_emplace(p.name, p.fallback);
    for (const auto& [k, v] : values_) {
      bool known = false;
      for (const auto& p : cmd.params) known = known || k == p.name;
      if (!known) throw InvalidInput("unknown parameter for " + spec.command + ": " + k);
    }
  }

  const std::string& str(const std::string& key) const { return values_.at(key); }
  bool is_auto(const std::string& key) const { return str(key) == "auto" || str(key).empty(); }
  double real(const std::string& key) const {
    try {
      return parse_fraction(str(key));
    } catch (const InvalidInput& e) {
      throw InvalidInput("--" + key + ": " + e.what());
    }
  }
  std::uint64_t count(const std::string& key) const {
    const std::string& s = str(key);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw InvalidInput("--" + key + " must be a non-negative integer");
    return v;
  }
  Json json(const std::string& key) const {
    try {
      return Json::parse(str(key));
    } catch (const Json::exception& e) {
      throw InvalidInput("--" + key + " is not valid JSON: " + e.what());
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

struct Report {
  std::vector<Json> rows;
};

CubeSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_cube_set_text(in);
}

GhdParams ghd_from(const Params& p, std::size_t n) {
  const double t = p.is_auto("t") ? static_cast<double>(n) / 2.0 : p.real("t");
  const double g = p.is_auto("g") ? std::sqrt(static_cast<double>(n)) : p.real("g");
  return GhdParams::make(n, t, g);
}

std::size_t sampling_k(const GhdParams& params) {
  const double n = static_cast<double>(params.n);
  if (!(params.g > 0.0)) return params.n;
  const double k = std::ceil(18.0 * n * n / (params.g * params.g) - 1e-9);
  return k >= n ? params.n : static_cast<std::size_t>(k);
}

ProtocolPtr streaming_fallback(const Json& descriptor) { return streaming_protocol_from_json(descriptor); }

Json error_row(const ErrorEstimate& e) {
  Json j = to_json(e);
  j["exact"] = e.exact;
  return j;
}

ErrorEstimate measure_error(const Protocol& protocol, const std::string& mode, double p, const ExperimentSpec& spec) {
  if (mode == "worst") return estimate_error(protocol, PromiseWorstCase{}, spec.trials, spec.seed, spec.workers);
  if (mode == "xi") return estimate_error(protocol, XiDistribution{p}, spec.trials, spec.seed, spec.workers);
  if (mode == "by-distance") return error_by_distance_profile(protocol, spec.trials, spec.seed, spec.workers);
  if (mode == "exact") return exact_error(protocol, PromiseWorstCase{});
  if (mode == "exact-xi") return exact_error(protocol, XiDistribution{p});
  throw InvalidInput("unknown error mode: " + mode);
}

Report cube_inequality(const ExperimentSpec& spec, const Params& p) {
  const std::size_t n = p.count("n");
  const double eps = p.real("eps");
  double rho;
  Json rho_info;
  if (p.is_auto("rho")) {
    const double b = binomial_tail_b(p.real("tail-eps"), n);
    rho = 4.0 * b / std::sqrt(static_cast<double>(n));
    rho_info = {{"b", b}, {"rule", "4b/sqrt(n)"}};
  } else {
    rho = p.real("rho");
  }
  Report r;
  auto emit = [&](const CubeSet& a, const CubeSet& b, std::size_t index) {
    Json j = to_json(cube_inequality_margin(a, b, rho, eps));
    j["pair"] = index;
    j["size_a"] = a.size();
    j["size_b"] = b.size();
    if (!rho_info.is_null()) j["rho_choice"] = rho_info;
    j["exact"] = true;
    r.rows.push_back(std::move(j));
  };
  const std::string sets = (!p.str("set-a").empty() || !p.str("set-b").empty()) ? "file" : p.str("sets");
  if (sets == "file") {
    emit(read_set_file(p.str("set-a")), read_set_file(p.str("set-b")), 0);
  } else if (sets == "concentrated") {
    const auto [a, b] = concentrated_block_sets(n);
    emit(a, b, 0);
  } else if (sets == "random") {
    const double density = p.real("density");
    for (std::uint64_t i = 0; i < p.count("pairs"); ++i)
      emit(CubeSet::random(n, density, derive_seed(spec.seed, 2 * i)),
           CubeSet::random(n, density, derive_seed(spec.seed, 2 * i + 1)), i);
  } else {
    throw InvalidInput("--sets must be random, concentrated or file");
  }
  return r;
}

Report gauss_correlation(const ExperimentSpec& spec, const Params& p) {
  const std::size_t n = p.count("n");
  const double eta = p.str("eta").empty() ? p.real("eta-scale") / std::sqrt(static_cast<double>(n)) : p.real("eta");
  const auto A = GaussSetPredicate::from_json(p.json("set-a"));
  const auto B = GaussSetPredicate::from_json(p.json("set-b"));
  Json j = to_json(mc_correlation_bound(A, B, n, eta, spec.trials, spec.seed, spec.workers));
  j["set_a"] = A.to_json();
  j["set_b"] = B.to_json();
  j["a_symmetric"] = A.symmetric();
  j["exact"] = false;
  return {{std::move(j)}};
}

Report cosh_check(const ExperimentSpec&, const Params& p) {
  Report r;
  auto emit = [&](double alpha, double z) {
    const CoshCheck c = cosh_expectation_check(alpha, z);
    r.rows.push_back({{"alpha", alpha},
                      {"z", z},
                      {"quadrature", c.quadrature},
                      {"closed_form", c.closed_form},
                      {"relative_difference", std::fabs(c.quadrature - c.closed_form) / c.closed_form},
                      {"exact", true}});
  };
  const std::uint64_t grid = p.count("grid");
  if (grid == 0) {
    emit(p.real("alpha"), p.real("z"));
  } else {
    for (std::uint64_t i = 0; i < grid; ++i)
      for (std::uint64_t k = 0; k < grid; ++k) {
        const double fa = grid == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(grid - 1);
        const double fz = grid == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(grid - 1);
        emit(-4.0 + 8.0 * fa, -10.0 + 20.0 * fz);
      }
  }
  return r;
}

Report projection(const ExperimentSpec& spec, const Params& p) {
  const std::size_t n = p.count("n");
  const auto A = GaussSetPredicate::from_json(p.json("set"));
  const std::string kind = p.str("directions");
  std::vector<std::vector<double>> dirs;
  std::uint64_t count = p.count("count");
  if (kind == "basis") {
    if (count == 0) count = n;
    if (count > n) throw InvalidInput("--count exceeds n for basis directions");
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      dirs.push_back(std::move(e));
    }
  } else if (kind == "random") {
    if (count == 0) count = 10;
    CounterRng rng(derive_seed(spec.seed, 0xd1));
    for (std::size_t i = 0; i < count; ++i) dirs.push_back(random_unit_vector(n, rng));
  } else {
    throw InvalidInput("--directions must be basis or random");
  }
  Json j = to_json(projection_experiment(A, n, dirs, p.count("samples"), spec.seed, p.real("eps")));
  j["set"] = A.to_json();
  j["exact"] = false;
  return {{std::move(j)}};
}

Report protocol_error(const ExperimentSpec& spec, const Params& p) {
  ProtocolPtr protocol;
  if (!p.str("protocol").empty()) {
    protocol = protocol_from_json(p.json("protocol"), streaming_fallback);
  } else {
    const std::size_t n = p.count("n");
    const GhdParams params = ghd_from(p, n);
    const std::string kind = p.str("kind");
    if (kind == "trivial") {
      protocol = trivial_protocol(params);
    } else if (kind == "sampling") {
      protocol = sampling_protocol(params, p.is_auto("k") ? sampling_k(params) : p.count("k"));
    } else if (kind == "streaming") {
      const std::size_t k = p.is_auto("k") ? kmv_k_for_eps(f0_accuracy_for(params)) : p.count("k");
      protocol = streaming_to_protocol(kmv_f0(k, spec.seed), 1, params).first;
    } else {
      throw InvalidInput("--kind must be trivial, sampling or streaming");
    }
  }
  Json j = error_row(measure_error(*protocol, p.str("mode"), p.real("p"), spec));
  j["protocol"] = protocol->descriptor();
  j["cost"] = protocol->declared_cost();
  return {{std::move(j)}};
}

Report reduction_chain(const ExperimentSpec& spec, const Params& p) {
  Json descriptor = p.json("protocol");
  const Json reductions = p.json("reductions");
  if (!reductions.is_array()) throw InvalidInput("--reductions must be a JSON array");
  if (!descriptor.contains("reductions")) descriptor["reductions"] = Json::array();
  for (const auto& r : reductions) descriptor["reductions"].push_back(r);
  const ProtocolPtr protocol = protocol_from_json(descriptor, streaming_fallback);
  Json j = error_row(measure_error(*protocol, p.str("mode"), p.real("p"), spec));
  j["protocol"] = protocol->descriptor();
  j["outer_problem"] = to_json(protocol->problem());
  j["cost"] = protocol->declared_cost();
  return {{std::move(j)}};
}

Report joker_scan(const ExperimentSpec& spec, const Params& p) {
  const std::size_t n = p.count("n");
  const double delta = p.real("delta");
  const double m = p.is_auto("m") ? delta * static_cast<double>(n) : p.real("m");
  CorruptionCertificate cert = ghd_certificate(n, p.real("b"), m);
  ScanOptions options;
  options.mode = scan_mode_from_string(p.str("mode"));
  options.seed = spec.seed;
  options.budget = p.count("budget");
  options.min_xi0_mass = p.is_auto("min-mass") ? std::exp2(-delta * static_cast<double>(n)) : p.real("min-mass");
  Json j = to_json(check_joker_inequality(cert, n, options));
  j["n"] = n;
  j["b"] = p.real("b");
  j["m"] = m;
  j["min_xi0_mass"] = options.min_xi0_mass;
  j["exact"] = options.mode == ScanMode::exhaustive;
  return {{std::move(j)}};
}

Report corruption_bound(const ExperimentSpec&, const Params& p) {
  CorruptionCertificate cert;
  cert.alpha0 = p.real("alpha0");
  cert.alpha1 = p.real("alpha1");
  cert.alphaplus = p.real("alphaplus");
  cert.eps = p.real("eps");
  cert.m = p.real("m");
  Json j = to_json(corruption_lower_bound(cert));
  j["m"] = cert.m;
  j["exact"] = true;
  return {{std::move(j)}};
}

Report discrepancy(const ExperimentSpec& spec, const Params& p) {
  const std::size_t n = p.count("n");
  const GhdParams params = GhdParams::make(n, p.is_auto("t") ? static_cast<double>(n) / 2.0 : p.real("t"), p.real("g"));
  ScanOptions options;
  options.mode = scan_mode_from_string(p.str("mode"));
  options.seed = spec.seed;
  options.budget = p.count("budget");
  Json j = to_json(discrepancy_scan(PairLaw::xi(n, p.real("p")), build_ghd_matrix(params), options));
  j["problem"] = to_json(Problem{params});
  j["exact"] = options.mode == ScanMode::exhaustive;
  return {{std::move(j)}};
}

Report stream_reduce(const ExperimentSpec& spec, const Params& p) {
  const std::size_t n = p.count("n");
  const GhdParams params = ghd_from(p, n);
  const double eps = p.is_auto("eps") ? f0_accuracy_for(params) : p.real("eps");
  const std::size_t k = p.is_auto("k") ? kmv_k_for_eps(eps) : p.count("k");
  auto [protocol, accounting] = streaming_to_protocol(kmv_f0(k, spec.seed), p.count("passes"), params);

  CounterRng rng(derive_seed(spec.seed, 0x5e));
  const BitString x = BitString::random(n, rng);
  const BitString y = BitString::random(n, rng);
  const ProtocolRun run = run_protocol(*protocol, x, y, derive_seed(spec.seed, 0x5f));

  Json j = to_json(accounting);
  j["eps_f0"] = eps;
  j["k"] = k;
  j["measured_total_bits"] = run.transcript.total_bits;
  j["measured_messages"] = run.transcript.messages.size();
  j["error"] = error_row(estimate_error(*protocol, PromiseWorstCase{}, spec.trials, spec.seed, spec.workers));
  j["problem"] = to_json(Problem{params});
  j["exact"] = false;
  return {{std::move(j)}};
}

Report norm_concentration(const ExperimentSpec& spec, const Params& p) {
  const NormConcentration c = gaussian_norm_concentration(p.count("n"), p.real("beta"), spec.trials, spec.seed, spec.workers);
  return {{{{"n", p.count("n")},
            {"beta", p.real("beta")},
            {"fraction_outside", c.outside.value},
            {"ci95", c.outside.ci95},
            {"trials", c.outside.trials},
            {"exact_fraction", c.exact},
            {"exact", false}}}};
}

Report dispatch(const ExperimentSpec& spec) {
  const Command& cmd = find_command(spec.command);
  const Params p(spec, cmd);
  static const std::map<std::string, std::function<Report(const ExperimentSpec&, const Params&)>> handlers = {
      {"cube-inequality", cube_inequality},   {"gauss-correlation", gauss_correlation},
      {"cosh-check", cosh_check},             {"projection", projection},
      {"protocol-error", protocol_error},     {"reduction-chain", reduction_chain},
      {"joker-scan", joker_scan},             {"corruption-bound", corruption_bound},
      {"discrepancy", discrepancy},           {"stream-reduce", stream_reduce},
      {"norm-concentration", norm_concentration}};
  return handlers.at(cmd.name)(spec, p);
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  std::string cell = j.is_string() ? j.get<std::string>() : j.dump();
  if (cell.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : cell) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    cell = quoted + "\"";
  }
  out.emplace_back(prefix, std::move(cell));
}

void write_report(const ExperimentSpec& spec, const Report& report, std::ostream& out) {
  const Json header = {{"type", "header"}, {"spec", to_json(spec)}};
  if (spec.format == "csv") {
    out << "# " << header.dump() << '\n';
    bool first = true;
    for (const auto& row : report.rows) {
      std::vector<std::pair<std::string, std::string>> cells;
      flatten(row, "", cells);
      if (first) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i].first;
        out << '\n';
        first = false;
      }
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i].second;
      out << '\n';
    }
    return;
  }
  out << header.dump() << '\n';
  for (const auto& row : report.rows) {
    Json line = {{"type", "result"}, {"command", spec.command}};
    line.update(row);
    out << line.dump() << '\n';
  }
}

}  // namespace

nlohmann::json to_json(const ExperimentSpec& spec) {
  return {{"command", spec.command}, {"parameters", spec.parameters}, {"seed", spec.seed},
          {"trials", spec.trials},   {"output", spec.output},         {"format", spec.format}};
}

double parse_fraction(std::string_view text) {
  auto parse_real = [](std::string_view s) {
    if (s.empty()) throw InvalidInput("empty number");
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
      throw InvalidInput("not a number: " + std::string(s));
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_real(text);
  auto parse_int = [](std::string_view s) {
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      throw InvalidInput("fractions need integer parts: " + std::string(s));
    return v;
  };
  const long long num = parse_int(text.substr(0, slash));
  const long long den = parse_int(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator");
  return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<std::string> experiment_commands() {
  std::vector<std::string> out;
  for (const auto& c : command_table()) out.emplace_back(c.name);
  return out;
}

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.format != "jsonl" && spec.format != "csv") throw InvalidInput("--format must be jsonl or csv");
    const Report report = dispatch(spec);
    if (spec.output.empty()) {
      write_report(spec, report, out);
    } else {
      std::ofstream file(spec.output);
      if (!file) throw InvalidInput("cannot open output file " + spec.output);
      write_report(spec, report, file);
    }
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ghdlab: gap-Hamming-distance experiments"};
  app.require_subcommand(1);
  ExperimentSpec spec;
  std::uint64_t seed = 0, trials = 10000;
  std::string output, format = "jsonl";
  unsigned workers = 0;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : command_table()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    auto& store = values[cmd.name];
    for (const auto& p : cmd.params) {
      store[p.name] = p.fallback;
      sub->add_option(std::string("--") + p.name, store[p.name], p.help)->capture_default_str();
    }
    sub->add_option("--seed", seed, "experiment seed");
    sub->add_option("--trials", trials, "Monte Carlo trials");
    sub->add_option("--output", output, "report path (default: standard output)");
    sub->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    sub->add_option("--workers", workers, "worker threads (default: GHD_WORKERS or all cores)");
    subs[cmd.name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, msg, msg);
    if (code == 0) {
      out << msg.str();
      return kExitOk;
    }
    err << msg.str();
    return kExitInvalid;
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) {
      spec.command = name;
      spec.parameters = values[name];
    }
  spec.seed = seed;
  spec.trials = trials;
  spec.output = output;
  spec.format = format;
  spec.workers = workers;
  return run(spec, out, err);
}

}  // namespace ghd
