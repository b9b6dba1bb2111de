#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sfa/analysis.hpp"
#include "sfa/errors.hpp"
#include "sfa/solver.hpp"

using namespace sfa;

namespace {

SolveResult solve(const CoefficientProblem& p, int modes, int grid) {
  SolveOptions o;
  o.modes = modes;
  o.grid = grid;
  return solve_eigenpairs(p, o);
}

const SolveResult& uniform() {
  static const SolveResult r = solve(uniform_cosine(), 5, 2048);
  return r;
}

const SolveResult& gaussian() {
  static const SolveResult r = solve(gaussian_hermite(), 5, 4096);
  return r;
}

// g = s^2 on [-1, 1] with p = 1/2, K = 1: the zero at 0 is also a
// stationary point.
Eigenpair parabola() {
  std::vector<double> s, g, f;
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + i / 100.0;
    s.push_back(x);
    g.push_back(x * x);
    f.push_back(0.5 * 2.0 * x);
  }
  Eigenpair p;
  p.index = 2;
  p.lambda = 1.0;
  p.g = GridFunction(s, g);
  p.flux = GridFunction(s, f);
  p.density.assign(s.size(), 0.5);
  return p;
}

int interior_count(const std::vector<double>& pts, const Eigenpair& p) {
  int n = 0;
  for (double x : pts) n += (x > p.g.front() && x < p.g.back()) ? 1 : 0;
  return n;
}

}  // namespace

TEST(Zeros, UniformSecondHarmonic) {
  const ZeroSet z = find_zeros(uniform().pairs[2]);
  ASSERT_EQ(z.zeros.size(), 2u);
  EXPECT_NEAR(z.zeros[0], 0.25, 1e-6);
  EXPECT_NEAR(z.zeros[1], 0.75, 1e-6);
  EXPECT_TRUE(find_zeros(uniform().pairs[0]).zeros.empty());
}

TEST(Zeros, GaussianThirdHarmonicMatchesHermiteRoots) {
  const ZeroSet z = find_zeros(gaussian().pairs[3]);
  ASSERT_EQ(z.zeros.size(), 3u);
  EXPECT_NEAR(z.zeros[0], -std::sqrt(3.0), 1e-3);
  EXPECT_NEAR(z.zeros[1], 0.0, 1e-3);
  EXPECT_NEAR(z.zeros[2], std::sqrt(3.0), 1e-3);
  EXPECT_NEAR(z.zeros[0], -z.zeros[2], 1e-3);
}

TEST(Zeros, CountEqualsIndex) {
  for (const SolveResult* r : {&uniform(), &gaussian()}) {
    for (const auto& p : r->pairs) EXPECT_EQ(static_cast<int>(find_zeros(p).zeros.size()), p.index);
  }
}

TEST(Stationary, UniformExamples) {
  const StationarySet s1 = find_stationary_points(uniform().pairs[1]);
  ASSERT_EQ(s1.points.size(), 2u);
  EXPECT_NEAR(s1.points[0], 0.0, 1e-12);
  EXPECT_NEAR(s1.points[1], 1.0, 1e-12);
  const StationarySet s2 = find_stationary_points(uniform().pairs[2]);
  ASSERT_EQ(s2.points.size(), 3u);
  EXPECT_NEAR(s2.points[1], 0.5, 1e-6);
  EXPECT_TRUE(find_stationary_points(uniform().pairs[0]).degenerate);
}

TEST(Interlace, Examples) {
  EXPECT_TRUE(interlace_check(uniform().pairs[3]).interlace_ok);
  const OscillationReport g4 = interlace_check(gaussian().pairs[4]);
  EXPECT_TRUE(g4.interlace_ok);
  EXPECT_EQ(g4.zeros.size(), 4u);
  EXPECT_EQ(interior_count(g4.stationary_points, gaussian().pairs[4]), 3);
}

TEST(Interlace, AllPropertiesOnBothFamilies) {
  for (const SolveResult* r : {&uniform(), &gaussian()}) {
    for (int i = 1; i <= 5; ++i) {
      const OscillationReport o = interlace_check(r->pairs[i]);
      EXPECT_TRUE(o.property1 && o.property2 && o.property3 && o.property4) << "i = " << i;
      EXPECT_TRUE(o.coincidence_violations.empty());
    }
  }
}

TEST(Interlace, ParabolaCoincidenceIsFlagged) {
  const OscillationReport o = interlace_check(parabola());
  EXPECT_FALSE(o.interlace_ok);
  EXPECT_FALSE(o.property3);
  EXPECT_FALSE(o.coincidence_violations.empty());
}

TEST(Interlace, ConstantModeRefused) {
  EXPECT_THROW(interlace_check(uniform().pairs[0]), PreconditionError);
}

TEST(Monotone, FirstHarmonics) {
  EXPECT_TRUE(first_harmonic_monotonicity(uniform().pairs[1]));
  EXPECT_TRUE(first_harmonic_monotonicity(gaussian().pairs[1]));
  EXPECT_FALSE(is_strictly_monotone(uniform().pairs[2]));
  EXPECT_THROW(first_harmonic_monotonicity(uniform().pairs[2]), PreconditionError);
}

TEST(Delta, Examples) {
  const DeltaReport u1 = delta_report(uniform_cosine(), uniform().pairs[1]);
  EXPECT_NEAR(u1.delta_value, oracle::kPi * oracle::kPi, 1e-4);
  EXPECT_LT(u1.relative_gap, 1e-5);

  const DeltaReport g2 = delta_report(gaussian_hermite(), gaussian().pairs[2]);
  EXPECT_NEAR(g2.delta_value, 2.0, 2e-3);
  for (int s = 0; s < 2; ++s) {
    EXPECT_TRUE(g2.boundary_flux[s].decays_tenfold);
    EXPECT_TRUE(g2.weighted_square[s].decays_tenfold);
  }
  EXPECT_FALSE(g2.window_note.empty());

  EXPECT_NEAR(delta_report(gaussian_hermite(), gaussian().pairs[0]).delta_value, 0.0, 1e-12);
}

TEST(Delta, GapBelowToleranceForFirstFivePairs) {
  for (int i = 1; i <= 5; ++i) {
    EXPECT_LT(delta_report(uniform_cosine(), uniform().pairs[i]).relative_gap, 1e-3);
    EXPECT_LT(delta_report(gaussian_hermite(), gaussian().pairs[i]).relative_gap, 1e-3);
  }
}

TEST(SturmPicone, Examples) {
  EXPECT_TRUE(sturm_picone_check(uniform().pairs[1], uniform().pairs[2]).ok);
  EXPECT_TRUE(sturm_picone_check(gaussian().pairs[2], gaussian().pairs[3]).ok);
  const SturmPiconeResult same = sturm_picone_check(uniform().pairs[1], uniform().pairs[1]);
  EXPECT_TRUE(same.ok);
  EXPECT_TRUE(same.degenerate_input);
  EXPECT_FALSE(sturm_picone_check(uniform().pairs[2], uniform().pairs[1]).ok);
  EXPECT_THROW(sturm_picone_check(uniform().pairs[1], gaussian().pairs[2]), PreconditionError);
}

TEST(Chebyshev, UniformRelationAndRefusal) {
  EXPECT_LT(chebyshev_relation_check(uniform_cosine(), uniform().pairs[1], uniform().pairs[2]), 1e-3);
  EXPECT_LT(chebyshev_relation_check(uniform_cosine(), uniform().pairs[1], uniform().pairs[3]), 1e-3);
  EXPECT_THROW(chebyshev_relation_check(gaussian_hermite(), gaussian().pairs[1], gaussian().pairs[2]),
               NotApplicable);
}

TEST(CharacteristicRoots, GaussianBranches) {
  // -b +- sqrt(b^2 - lambda/K) with b = (pK)'/(2pK) = -s/2.
  const CharacteristicRoots r = characteristic_roots(gaussian_hermite(), Side::Right, 1.0);
  EXPECT_TRUE(r.plus.diverges());
  EXPECT_EQ(r.plus.sign, 1);
  EXPECT_TRUE(r.minus.converges_to_zero());
  EXPECT_FALSE(r.complex_tail);
}

TEST(CharacteristicRoots, RefusalAndComplexTail) {
  EXPECT_THROW(characteristic_roots(uniform_cosine(), Side::Right, 1.0), NotApplicable);
  const CharacteristicRoots pl = characteristic_roots(power_law_counterexample(0.5), Side::Right, 1.0);
  EXPECT_TRUE(pl.complex_tail);
  EXPECT_FALSE(pl.complex_at.empty());
}
