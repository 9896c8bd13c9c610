#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ghd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitInfeasible = 4;

struct ExperimentSpec {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  std::string output;         // empty: standard output
  std::string format = "jsonl";  // jsonl or csv
  unsigned workers = 0;       // 0: GHD_WORKERS or hardware concurrency
};

nlohmann::json to_json(const ExperimentSpec& spec);

// "a/b", an integer, or a decimal. Fractions are divided once, in double.
double parse_fraction(std::string_view text);

std::vector<std::string> experiment_commands();

// Runs one experiment and writes the report; returns the process exit code.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

// Parses argv into an ExperimentSpec and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ghd
