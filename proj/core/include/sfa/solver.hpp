#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfa/classification.hpp"
#include "sfa/coefficients.hpp"
#include "sfa/eigenpair.hpp"
#include "sfa/tridiagonal.hpp"

namespace sfa {

struct Truncation {
  Interval effective;
  double tail_mass = 0.0;  // total p-mass outside `effective`
  double tail_left = 0.0;
  double tail_right = 0.0;
  std::string rule;
};

// Finite interval whose outside p-mass is at most eps_tail, the budget split
// evenly over the truncated (singular) endpoints; regular endpoints are kept.
// Each cut is found by bisection on the log distance from the center.
Truncation truncate_domain(const CoefficientProblem& problem, double eps_tail);

// n nodes on the truncated interval, equidistributing the monitor
// 1/(2 (b - a)) + sqrt(p) / (2 integral sqrt(p)).  Constant densities give
// the uniform grid exactly.
std::vector<double> build_grid(const CoefficientProblem& problem, const Truncation& truncation,
                               int n);

// Flux-form three-point discretization of -(r y')' + q y = lambda w y with
// zero boundary flux: stiffness tridiagonal (diag, off), lumped mass.
struct DiscreteOperator {
  std::vector<double> grid;
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> mass;     // p_i * trapezoid weight
  std::vector<double> density;  // p_i
  std::vector<double> r_mid;    // r at cell midpoints
  std::vector<double> potential_diag;  // q_i * weight (empty without q)

  std::size_t size() const { return grid.size(); }
  std::vector<double> apply(const std::vector<double>& x) const;
};

DiscreteOperator discretize(const CoefficientProblem& problem, const Truncation& truncation,
                            int n);

struct SolveOptions {
  int modes = 5;              // m nonconstant modes; m + 1 pairs are returned
  int grid = 2048;            // n nodes
  double tail_eps = 1e-12;
  bool allow_nondiscrete = false;
  bool refinement_pass = true;  // second solve on 2n nodes for error estimates
  // Skips classification when the caller already has a verdict.
  std::optional<Decision> known_verdict;
};

struct SolveResult {
  Truncation truncation;
  std::vector<Eigenpair> pairs;  // index 0 = constant mode
  Decision verdict = Decision::Unknown;
  bool override_used = false;
  int grid = 0;
  std::vector<double> lambda_refined;  // eigenvalues on 2n nodes (if computed)
};

// Solves the eigenproblem on an already discretized operator.
std::vector<Eigenpair> solve_discrete(const DiscreteOperator& op, int count, bool has_potential);

SolveResult solve_eigenpairs(const CoefficientProblem& problem, const SolveOptions& options);

// (value, derivative) of the interpolated eigenfunction.
std::pair<double, double> evaluate_solution(const Eigenpair& pair, double s);

}  // namespace sfa
