#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sfa/coefficients.hpp"
#include "sfa/eigenpair.hpp"

namespace sfa {

// Equidistant samples s(t_k), t_k = k dt, of one source.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> s;

  std::size_t size() const { return s.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

// Reflected Euler-Maruyama for ds = (1/2)(K p)'/p dt + sqrt(K) dW, started at
// the problem's center (or its median for the full line).  Reflection folds
// steps back into finite endpoints.  Throws PreconditionError when
// sqrt(K dt) exceeds 10% of the domain width (or the scale when unbounded).
Trajectory sample_trajectory(const CoefficientProblem& problem, std::size_t steps, double dt,
                             std::uint64_t seed);

struct SpheringTransform {
  Eigen::VectorXd mean;
  Eigen::MatrixXd whitening;  // S, with z = S (h - mean)
};

struct LinearSfaResult {
  Eigen::MatrixXd features;       // T x m output signals y = A_m^T z
  Eigen::VectorXd eigenvalues;    // all eigenvalues of <zdot zdot^T>, ascending
  Eigen::MatrixXd extraction;     // A_m, columns a_i
  SpheringTransform sphering;
  double data_min = 0.0;          // expansion rescales s to [-1, 1]
  double data_max = 0.0;
  bool legendre_basis = false;
  // Checks on the training data.
  double sphered_mean_max = 0.0;
  double sphered_cov_deviation = 0.0;
  double orthonormality_deviation = 0.0;
};

// Polynomial expansion (monomials up to degree 6, Legendre above), sphering,
// forward-difference derivative covariance and its m smallest eigenvectors.
// Throws PreconditionError on bad sizes and DomainError when the expanded
// covariance is rank deficient.
LinearSfaResult run_linear_sfa(const Trajectory& trajectory, int degree, int m);

// Expanded features of s under the fitted transform (no sphering).
Eigen::RowVectorXd expand(double s, int degree, double data_min, double data_max, bool legendre);

struct CorrelationReport {
  Eigen::MatrixXd abs_corr;             // features x harmonics
  std::vector<int> constant_features;   // excluded (zero variance)
};

// |Pearson correlation| between each feature column and each analytic
// harmonic evaluated along the trajectory (clamped to the pair's grid).
CorrelationReport compare_to_analytic(const Eigen::MatrixXd& features,
                                      const std::vector<Eigenpair>& harmonics,
                                      const Trajectory& trajectory);

}  // namespace sfa
