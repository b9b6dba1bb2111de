#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "sfa/empirical.hpp"
#include "sfa/errors.hpp"
#include "sfa/solver.hpp"

using namespace sfa;

namespace {

std::vector<Eigenpair> harmonics(const CoefficientProblem& p, int m) {
  SolveOptions o;
  o.modes = m;
  o.grid = 2048;
  auto pairs = solve_eigenpairs(p, o).pairs;
  return {pairs.begin() + 1, pairs.end()};
}

const Trajectory& uniform_traj() {
  static const Trajectory t = sample_trajectory(uniform_cosine(), 1000000, 1e-3, 42);
  return t;
}

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

}  // namespace

TEST(Sampler, UniformDeciles) {
  const Trajectory& t = uniform_traj();
  std::vector<int> counts(10, 0);
  for (double s : t.s) {
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
    ++counts[std::min(9, static_cast<int>(s * 10.0))];
  }
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(t.size()), 0.1, 0.02);
}

TEST(Sampler, GaussianVariance) {
  const Trajectory t = sample_trajectory(gaussian_hermite(), 10000000, 1e-2, 3);
  double mean = 0.0, sq = 0.0;
  for (double s : t.s) {
    mean += s;
    sq += s * s;
  }
  mean /= static_cast<double>(t.size());
  const double var = sq / static_cast<double>(t.size()) - mean * mean;
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Sampler, Deterministic) {
  const Trajectory a = sample_trajectory(gaussian_hermite(), 5000, 1e-3, 9);
  const Trajectory b = sample_trajectory(gaussian_hermite(), 5000, 1e-3, 9);
  const Trajectory c = sample_trajectory(gaussian_hermite(), 5000, 1e-3, 10);
  EXPECT_EQ(a.s, b.s);
  EXPECT_NE(a.s, c.s);
  EXPECT_DOUBLE_EQ(a.time(10), 10 * 1e-3);
}

TEST(Sampler, RejectsLargeSteps) {
  EXPECT_THROW(sample_trajectory(uniform_cosine(), 100, 0.5, 1), PreconditionError);
  EXPECT_THROW(sample_trajectory(uniform_cosine(), 100, -1.0, 1), PreconditionError);
}

TEST(LinearSfa, UniformRecoversHarmonics) {
  const Trajectory& t = uniform_traj();
  const LinearSfaResult r = run_linear_sfa(t, 5, 2);
  EXPECT_FALSE(r.legendre_basis);
  EXPECT_LT(r.sphered_mean_max, 1e-10);
  EXPECT_LT(r.sphered_cov_deviation, 1e-8);
  EXPECT_LT(r.orthonormality_deviation, 1e-8);
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    EXPECT_GE(r.eigenvalues(i), 0.0);
    if (i > 0) EXPECT_GE(r.eigenvalues(i), r.eigenvalues(i - 1));
  }
  EXPECT_NEAR(r.eigenvalues(0) / r.eigenvalues(1), 0.25, 0.15 * 0.25);

  // Unit variance and decorrelated outputs.
  const Eigen::MatrixXd c = r.features.rowwise() - r.features.colwise().mean();
  const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(c.rows());
  EXPECT_NEAR(cov(0, 0), 1.0, 1e-8);
  EXPECT_NEAR(cov(1, 1), 1.0, 1e-8);
  EXPECT_LT(std::abs(cov(0, 1)), 0.02);

  const CorrelationReport cr = compare_to_analytic(r.features, harmonics(uniform_cosine(), 2), t);
  EXPECT_GT(cr.abs_corr(0, 0), 0.95);
  EXPECT_GT(cr.abs_corr(1, 1), 0.95);
  EXPECT_LT(cr.abs_corr(0, 1), 0.2);
  EXPECT_LT(cr.abs_corr(1, 0), 0.2);
  EXPECT_TRUE(cr.constant_features.empty());
}

TEST(LinearSfa, GaussianRecoversHermiteHarmonics) {
  const Trajectory t = sample_trajectory(gaussian_hermite(), 1000000, 1e-3, 5);
  const LinearSfaResult r = run_linear_sfa(t, 6, 3);
  const CorrelationReport cr = compare_to_analytic(r.features, harmonics(gaussian_hermite(), 3), t);
  for (int i = 0; i < 3; ++i) EXPECT_GT(cr.abs_corr(i, i), 0.9) << "i = " << i;
}

TEST(LinearSfa, LegendreBasisAboveDegreeSix) {
  const LinearSfaResult r = run_linear_sfa(uniform_traj(), 8, 3);
  EXPECT_TRUE(r.legendre_basis);
  EXPECT_LT(r.sphered_cov_deviation, 1e-8);
  EXPECT_LT(r.orthonormality_deviation, 1e-8);
}

TEST(LinearSfa, Preconditions) {
  const Trajectory shortened{1e-3, std::vector<double>(uniform_traj().s.begin(), uniform_traj().s.begin() + 400)};
  EXPECT_THROW(run_linear_sfa(shortened, 5, 2), PreconditionError);
  EXPECT_THROW(run_linear_sfa(uniform_traj(), 11, 2), PreconditionError);
  EXPECT_THROW(run_linear_sfa(uniform_traj(), 3, 4), PreconditionError);
  Trajectory two_level{1e-3, {}};
  for (int i = 0; i < 1000; ++i) two_level.s.push_back(i % 2 == 0 ? 0.2 : 0.7);
  EXPECT_THROW(run_linear_sfa(two_level, 3, 1), DomainError);
}

TEST(CompareToAnalytic, ConstantFeatureFlaggedAndLengthChecked) {
  const Trajectory& t = uniform_traj();
  Eigen::MatrixXd f(static_cast<Eigen::Index>(t.size()), 2);
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    f(i, 0) = std::cos(3.14159 * t.s[static_cast<std::size_t>(i)]);
    f(i, 1) = 4.0;
  }
  const CorrelationReport cr = compare_to_analytic(f, harmonics(uniform_cosine(), 1), t);
  ASSERT_EQ(cr.constant_features, std::vector<int>{1});
  EXPECT_TRUE(std::isnan(cr.abs_corr(1, 0)));
  EXPECT_GT(cr.abs_corr(0, 0), 0.999);
  EXPECT_THROW(compare_to_analytic(f.topRows(10), harmonics(uniform_cosine(), 1), t), PreconditionError);
}

TEST(LinearSfa, LongerTrajectoriesDoNotWorsenRecovery) {
  const auto h = harmonics(uniform_cosine(), 2);
  auto gaps = [&](std::size_t steps, std::uint64_t seed) {
    const Trajectory t = sample_trajectory(uniform_cosine(), steps, 1e-3, seed);
    const auto cr = compare_to_analytic(run_linear_sfa(t, 5, 2).features, h, t);
    return std::pair{1.0 - cr.abs_corr(0, 0), 1.0 - cr.abs_corr(1, 1)};
  };
  const auto a1 = gaps(100000, 1), a2 = gaps(100000, 2), a3 = gaps(100000, 3);
  const auto b1 = gaps(200000, 1), b2 = gaps(200000, 2), b3 = gaps(200000, 3);
  EXPECT_LE(median3(b1.first, b2.first, b3.first), median3(a1.first, a2.first, a3.first));
  EXPECT_LE(median3(b1.second, b2.second, b3.second), median3(a1.second, a2.second, a3.second));
}
