#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sfa::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kCheckFailed = 1, kInputError = 2 };

struct RunConfig {
  std::string subcommand;            // classify | solve | verify | compose | empirical
  std::vector<std::string> problems; // problem files (compose takes several)
  std::optional<std::string> family; // closed-form family instead of a file
  std::optional<int> modes;          // m
  std::optional<int> grid;           // n
  std::optional<double> tail_eps;
  int degree = 5;
  long long steps = 1000000;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::optional<std::string> from;   // verify: directory of a previous solve
  bool allow_nondiscrete = false;
  bool trajectory_csv = false;       // empirical: also write trajectory.csv
  double delta_tol = 1e-3;           // verify: delta-eigenvalue gap
};

// Executes one subcommand.  Returns 0 when every check passes, 1 on check
// failures (reports are still written) and 2 on input or configuration
// errors.  Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& err);

// Parses argv into a RunConfig and runs it.
int main_entry(int argc, char** argv);

}  // namespace sfa::cli
