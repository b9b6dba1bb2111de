#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfa/coefficients.hpp"

namespace sfa {

// Problem definition read from disk.  Two layouts are accepted:
//
//   schema_version = 1
//   [problem]
//   family = "gaussian_hermite"   # uniform_cosine | power_law | tabulated
//   k0 = 1.0
//   [solver]                      # optional defaults
//   modes = 4
//
// or a bare two-column CSV (s, p) read as a tabulated density with K = 1.
// Tabulated families name CSV files `density` and optionally `dynamics`
// relative to the problem file; both are interpolated monotonically and the
// density is normalized.
struct ProblemFile {
  std::string path;
  std::string family;
  FamilyParameters parameters;
  CoefficientProblem problem;
  std::optional<int> modes;
  std::optional<int> grid;
  std::optional<double> tail_eps;
};

// Throws InputError for unreadable or malformed files.
ProblemFile load_problem_file(const std::string& path);
ProblemFile parse_problem_text(const std::string& text, const std::string& base_dir,
                               const std::string& path = "<text>");

struct Table {
  std::vector<double> s;
  std::vector<double> value;
};

// Two numeric columns, comma separated, optional header line, strictly
// increasing s.
Table read_table_csv(const std::string& path);

CoefficientProblem tabulated_problem(const Table& density, const std::optional<Table>& dynamics,
                                     double k0 = 1.0);

}  // namespace sfa
