#pragma once

#include <vector>

namespace sfa {

// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct SymTridiagonal {
  std::vector<double> d;
  std::vector<double> e;

  std::size_t size() const { return d.size(); }
  std::vector<double> multiply(const std::vector<double>& x) const;
  // Number of eigenvalues strictly below x (Sturm count of T - x I).
  int count_below(double x) const;
  // Gershgorin interval containing the spectrum.
  std::pair<double, double> bounds() const;
};

struct TridiagonalEigen {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // unit 2-norm
  std::vector<double> residuals;             // ||T x - lambda x||
  bool converged = true;
};

// The `count` smallest eigenpairs by Sturm-count bisection and inverse
// iteration with partial-pivot LU.  Vectors of nearby eigenvalues are
// reorthogonalized.  Throws ConvergenceError when a residual stays large.
TridiagonalEigen smallest_eigenpairs(const SymTridiagonal& t, int count);

// Solves (T - shift I) x = b with partial pivoting (in place on b).
void solve_shifted(const SymTridiagonal& t, double shift, std::vector<double>& b);

}  // namespace sfa
