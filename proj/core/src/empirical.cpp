#include "sfa/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sfa/classification.hpp"
#include "sfa/errors.hpp"

namespace sfa {

Trajectory sample_trajectory(const CoefficientProblem& problem, std::size_t steps, double dt,
                             std::uint64_t seed) {
  if (steps < 2) throw PreconditionError("sample_trajectory: need at least 2 steps");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("sample_trajectory: dt must be positive");
  const auto& dom = problem.domain();
  const double start = density_median(problem);
  const double width = dom.bounded() ? dom.width() : problem.scale();
  const double first_step = std::sqrt(problem.K(start) * dt);
  if (!(first_step <= 0.1 * width)) {
    std::ostringstream msg;
    msg << "sample_trajectory: dt too large, step sqrt(K dt) = " << first_step
        << " exceeds 10% of the length scale " << width;
    throw PreconditionError(msg.str());
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Trajectory out;
  out.dt = dt;
  out.s.resize(steps);
  double s = start;
  const double lo = dom.left_finite() ? std::nextafter(dom.left, dom.right) : dom.left;
  const double hi = dom.right_finite() ? std::nextafter(dom.right, dom.left) : dom.right;
  for (std::size_t k = 0; k < steps; ++k) {
    out.s[k] = s;
    const double kv = problem.K(s);
    const double drift = 0.5 * kv * eval_log_derivative(problem, LogDerivativeOf::Flux, s);
    double next = s + drift * dt + std::sqrt(kv * dt) * normal(rng);
    for (int fold = 0; fold < 8; ++fold) {
      if (dom.left_finite() && next < dom.left) {
        next = 2.0 * dom.left - next;
      } else if (dom.right_finite() && next > dom.right) {
        next = 2.0 * dom.right - next;
      } else {
        break;
      }
    }
    s = std::clamp(next, lo, hi);
  }
  return out;
}

Eigen::RowVectorXd expand(double s, int degree, double data_min, double data_max, bool legendre) {
  const double x = 2.0 * (s - data_min) / (data_max - data_min) - 1.0;
  Eigen::RowVectorXd h(degree);
  if (legendre) {
    double p0 = 1.0;
    double p1 = x;
    h(0) = p1;
    for (int k = 2; k <= degree; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      h(k - 1) = p2;
      p0 = p1;
      p1 = p2;
    }
  } else {
    double v = 1.0;
    for (int k = 1; k <= degree; ++k) {
      v *= x;
      h(k - 1) = v;
    }
  }
  return h;
}

LinearSfaResult run_linear_sfa(const Trajectory& trajectory, int degree, int m) {
  const std::size_t T = trajectory.size();
  if (degree < 1 || degree > 10) throw PreconditionError("run_linear_sfa: degree must be in [1, 10]");
  if (m < 1 || m > degree) throw PreconditionError("run_linear_sfa: need 1 <= m <= degree");
  if (T < 100 * static_cast<std::size_t>(degree)) {
    throw PreconditionError("run_linear_sfa: trajectory shorter than 100 x basis size");
  }
  LinearSfaResult out;
  const auto [mn, mx] = std::minmax_element(trajectory.s.begin(), trajectory.s.end());
  out.data_min = *mn;
  out.data_max = *mx;
  if (!(out.data_max > out.data_min)) throw DomainError("run_linear_sfa: trajectory is constant");
  out.legendre_basis = degree > 6;

  const Eigen::Index n = static_cast<Eigen::Index>(T);
  Eigen::MatrixXd h(n, degree);
  for (Eigen::Index t = 0; t < n; ++t) {
    h.row(t) = expand(trajectory.s[t], degree, out.data_min, out.data_max, out.legendre_basis);
  }
  out.sphering.mean = h.colwise().mean().transpose();
  h.rowwise() -= out.sphering.mean.transpose();
  const Eigen::MatrixXd cov = (h.transpose() * h) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ce(cov);
  const Eigen::VectorXd ev = ce.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * ev.maxCoeff())) {
    throw DomainError("run_linear_sfa: expanded covariance is rank deficient on this data");
  }
  out.sphering.whitening =
      ce.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * ce.eigenvectors().transpose();
  const Eigen::MatrixXd z = h * out.sphering.whitening;
  h.resize(0, 0);

  Eigen::MatrixXd zdot_cov = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index t = 0; t + 1 < n; ++t) {
    const Eigen::RowVectorXd d = (z.row(t + 1) - z.row(t)) / trajectory.dt;
    zdot_cov.noalias() += d.transpose() * d;
  }
  zdot_cov /= static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> de(zdot_cov);
  out.eigenvalues = de.eigenvalues();
  out.extraction = de.eigenvectors().leftCols(m);
  out.features = z * out.extraction;

  out.sphered_mean_max = z.colwise().mean().cwiseAbs().maxCoeff();
  const Eigen::MatrixXd zc = (z.transpose() * z) / static_cast<double>(n);
  out.sphered_cov_deviation = (zc - Eigen::MatrixXd::Identity(degree, degree)).cwiseAbs().maxCoeff();
  out.orthonormality_deviation =
      (out.extraction.transpose() * out.extraction - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  return out;
}

CorrelationReport compare_to_analytic(const Eigen::MatrixXd& features,
                                      const std::vector<Eigenpair>& harmonics,
                                      const Trajectory& trajectory) {
  const Eigen::Index n = features.rows();
  if (n != static_cast<Eigen::Index>(trajectory.size())) {
    throw PreconditionError("compare_to_analytic: feature and trajectory lengths differ");
  }
  if (n < 2) throw PreconditionError("compare_to_analytic: need at least 2 samples");
  auto centered_unit = [](Eigen::VectorXd v, bool* constant) {
    v.array() -= v.mean();
    const double nrm = v.norm();
    *constant = !(nrm > 1e-12 * std::sqrt(static_cast<double>(v.size())));
    if (!*constant) v /= nrm;
    return v;
  };
  CorrelationReport out;
  out.abs_corr = Eigen::MatrixXd::Zero(features.cols(), static_cast<Eigen::Index>(harmonics.size()));
  std::vector<Eigen::VectorXd> harm;
  for (const auto& pair : harmonics) {
    Eigen::VectorXd v(n);
    const double lo = pair.g.front();
    const double hi = pair.g.back();
    for (Eigen::Index t = 0; t < n; ++t) v(t) = pair.g(std::clamp(trajectory.s[t], lo, hi));
    bool constant = false;
    harm.push_back(centered_unit(std::move(v), &constant));
  }
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    bool constant = false;
    const Eigen::VectorXd f = centered_unit(features.col(i), &constant);
    if (constant) {
      out.constant_features.push_back(static_cast<int>(i));
      out.abs_corr.row(i).setConstant(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    for (std::size_t j = 0; j < harm.size(); ++j) {
      out.abs_corr(i, static_cast<Eigen::Index>(j)) = std::abs(f.dot(harm[j]));
    }
  }
  return out;
}

}  // namespace sfa
