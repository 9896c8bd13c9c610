#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "ghd/cli.hpp"
#include "ghd/errors.hpp"

using namespace ghd;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ghdlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("fractions") {
  CHECK(parse_fraction("2/3") == 2.0 / 3.0);
  CHECK(parse_fraction("-1/8") == -0.125);
  CHECK(parse_fraction("0.25") == 0.25);
  CHECK(parse_fraction("7") == 7.0);
  CHECK_THROWS_AS(parse_fraction("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_fraction("a/3"), InvalidInput);
  CHECK_THROWS_AS(parse_fraction("1.5/2"), InvalidInput);
  CHECK_THROWS_AS(parse_fraction(""), InvalidInput);
}

TEST_CASE("command list") {
  const auto cmds = experiment_commands();
  CHECK(cmds.size() == 11);
  for (const char* c : {"cube-inequality", "gauss-correlation", "cosh-check", "projection", "protocol-error", "reduction-chain",
                        "joker-scan", "corruption-bound", "discrepancy", "stream-reduce", "norm-concentration"})
    CHECK(std::find(cmds.begin(), cmds.end(), c) != cmds.end());
}

TEST_CASE("corruption bound report") {
  const Outcome o = invoke({"corruption-bound", "--alpha1", "2/3", "--alpha0", "1/2", "--alphaplus", "1/2", "--eps", "1/8", "--m", "32"});
  REQUIRE(o.code == kExitOk);
  const auto rows = lines(o.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["type"] == "header");
  CHECK(rows[0]["spec"]["parameters"]["alpha1"] == "2/3");
  CHECK(rows[0]["spec"]["parameters"]["m"] == "32");
  CHECK(rows[0]["spec"]["command"] == "corruption-bound");
  CHECK(std::fabs(rows[1]["bound"].get<double>() - (32.0 - std::log2(96.0))) < 1e-12);
  CHECK(rows[1]["exact"] == true);

  CHECK(invoke({"corruption-bound", "--eps", "1/7"}).code == kExitInfeasible);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"nonsense"}).code == kExitInvalid);
  CHECK(invoke({"cosh-check", "--alpha", "x"}).code == kExitInvalid);
  CHECK(invoke({"cosh-check", "--alpha", "9"}).code == kExitInvalid);
  CHECK(invoke({"cosh-check", "--format", "xml"}).code == kExitInvalid);
  CHECK(invoke({"discrepancy", "--n", "20"}).code == kExitCapacity);
  CHECK(invoke({"joker-scan", "--n", "6", "--mode", "exhaustive"}).code == kExitCapacity);
  CHECK(invoke({"gauss-correlation", "--set-a", R"({"kind":"coord_threshold","params":{"t":6}})"}).code == kExitInfeasible);
  CHECK(invoke({"cube-inequality", "--n", "16", "--rho", "auto", "--sets", "random", "--density", "0.9", "--seed", "7"}).code ==
        kExitInfeasible);
  CHECK(invoke({"--help"}).code == kExitOk);

  ExperimentSpec bad;
  bad.command = "cosh-check";
  bad.parameters["beta"] = "1";
  std::ostringstream out, err;
  CHECK(run(bad, out, err) == kExitInvalid);
  CHECK(err.str().find("beta") != std::string::npos);
}

TEST_CASE("every command runs with small settings") {
  const std::vector<std::vector<std::string>> cases = {
      {"cube-inequality", "--n", "8", "--rho", "1/4", "--pairs", "3"},
      {"cube-inequality", "--n", "8", "--rho", "1/2", "--sets", "concentrated", "--eps", "0"},
      {"gauss-correlation", "--n", "20", "--trials", "10000"},
      {"cosh-check", "--grid", "3"},
      {"projection", "--n", "3", "--samples", "10000"},
      {"protocol-error", "--n", "32", "--trials", "200"},
      {"protocol-error", "--n", "6", "--g", "2", "--t", "3", "--k", "4", "--mode", "exact"},
      {"reduction-chain", "--reductions", R"([{"kind":"complement"}])", "--trials", "200"},
      {"joker-scan", "--n", "8", "--budget", "4"},
      {"discrepancy", "--n", "3"},
      {"stream-reduce", "--n", "64", "--passes", "2", "--trials", "50"},
      {"norm-concentration", "--n", "10", "--trials", "2000"},
  };
  for (const auto& c : cases) {
    const Outcome o = invoke(c);
    INFO(c[0] << ": " << o.err);
    REQUIRE(o.code == kExitOk);
    const auto rows = lines(o.out);
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0]["type"] == "header");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i]["command"] == c[0]);
  }
}

TEST_CASE("stream-reduce accounting") {
  const Outcome o = invoke({"stream-reduce", "--n", "256", "--passes", "2", "--trials", "20", "--seed", "1"});
  REQUIRE(o.code == kExitOk);
  const json row = lines(o.out)[1];
  const std::size_t s = row["state_bits"];
  CHECK(row["messages"] == 3);
  CHECK(row["total_bits"] == 3 * s);
  CHECK(row["measured_total_bits"] == 3 * s);
}

TEST_CASE("reports reproduce byte for byte") {
  const std::vector<std::string> args = {"gauss-correlation", "--n", "30", "--trials", "20000", "--seed", "5"};
  const Outcome a = invoke(args);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--workers", "3"});
  const Outcome b = invoke(threaded);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  const json row = lines(a.out)[1];
  CHECK(row.contains("ratio_ci95"));
  std::vector<std::string> other = args;
  other[6] = "6";
  CHECK(invoke(other).out != a.out);
}

TEST_CASE("csv output and output files") {
  const auto path = std::filesystem::temp_directory_path() / "ghdlab_cli_test.csv";
  const Outcome o = invoke({"cosh-check", "--grid", "2", "--format", "csv", "--output", path.string()});
  REQUIRE(o.code == kExitOk);
  CHECK(o.out.empty());
  std::ifstream in(path);
  std::string header, columns, first;
  std::getline(in, header);
  std::getline(in, columns);
  std::getline(in, first);
  CHECK(header.rfind("# {", 0) == 0);
  CHECK(json::parse(header.substr(2))["spec"]["format"] == "csv");
  CHECK(columns.find("quadrature") != std::string::npos);
  CHECK(std::count(columns.begin(), columns.end(), ',') == std::count(first.begin(), first.end(), ','));
  std::filesystem::remove(path);
}

TEST_CASE("installed binary") {
  const std::string bin = GHDLAB_BINARY;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("corruption-bound --m 32") == 0);
  CHECK(status("corruption-bound --eps 1/7") == kExitInfeasible);
  CHECK(status("discrepancy --n 20") == kExitCapacity);
  CHECK(status("no-such-command") == kExitInvalid);
  CHECK(status("norm-concentration --n 5 --trials 1000 --workers 2") == 0);
  CHECK(::setenv("GHD_WORKERS", "2", 1) == 0);
  CHECK(status("norm-concentration --n 5 --trials 1000") == 0);
  CHECK(::setenv("GHD_WORKERS", "zero", 1) == 0);
  CHECK(status("norm-concentration --n 5 --trials 1000") == 0);  // unparsable value falls back to the default
  ::unsetenv("GHD_WORKERS");
}
