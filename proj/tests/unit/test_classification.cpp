#include <cmath>

#include <gtest/gtest.h>

#include "sfa/classification.hpp"
#include "sfa/errors.hpp"

using namespace sfa;

namespace {

// p = exp(-|s|) / 2 on the real line, K = 1.
CoefficientProblem laplace_density() {
  ScalarField p([](double s) { return 0.5 * std::exp(-std::abs(s)); },
                [](double s) { return -0.5 * std::copysign(1.0, s) * std::exp(-std::abs(s)); },
                [](double s) { return std::log(0.5) - std::abs(s); },
                [](double s) { return -std::copysign(1.0, s); });
  return CoefficientProblem(Interval(-kInf, kInf), std::move(p), ScalarField::constant(1.0));
}

CoefficientProblem unit_form(ScalarField q) {
  return CoefficientProblem::unit_form_problem(Interval(0.0, kInf), std::move(q));
}

}  // namespace

TEST(ClassifyEndpoint, Examples) {
  const EndpointReport u = classify_endpoint(uniform_cosine(), Side::Left);
  EXPECT_TRUE(u.regular);
  EXPECT_EQ(u.kind, EndpointKind::Regular);
  for (const auto& c : u.criteria) EXPECT_EQ(c.status, Status::NotApplicable) << c.name;

  const EndpointReport g = classify_endpoint(gaussian_hermite(), Side::Right);
  EXPECT_FALSE(g.regular);
  EXPECT_EQ(g.kind, EndpointKind::LimitPoint);

  const EndpointReport pl = classify_endpoint(power_law_counterexample(0.5), Side::Right);
  EXPECT_FALSE(pl.regular);
  EXPECT_TRUE(classify_endpoint(power_law_counterexample(0.5), Side::Left).regular);
}

TEST(SimpleCriterion, Examples) {
  const CriterionResult g = simple_criterion(gaussian_hermite(), Side::Right);
  EXPECT_TRUE(g.verdict.diverges());
  EXPECT_TRUE(g.satisfied());

  const CriterionResult pl = simple_criterion(power_law_counterexample(0.5), Side::Right);
  EXPECT_TRUE(pl.verdict.converges_to_zero());
  EXPECT_FALSE(pl.satisfied());

  const CriterionResult lap = simple_criterion(laplace_density(), Side::Right);
  ASSERT_TRUE(lap.verdict.converges());
  EXPECT_NEAR(lap.verdict.value, 1.0, 1e-9);
  EXPECT_FALSE(lap.satisfied());
}

TEST(SfaCriterion, GaussianIsSufficientAndNecessary) {
  const SfaCriterionResult r = sfa_criterion(gaussian_hermite(), Side::Right);
  EXPECT_TRUE(r.main.verdict.diverges());
  EXPECT_TRUE(r.sufficient);
  EXPECT_TRUE(r.necessity_holds);
  ASSERT_EQ(r.necessary.size(), 3u);
  for (const auto& c : r.necessary) EXPECT_TRUE(c.satisfied()) << c.name;
}

TEST(SfaCriterion, QuadraticDynamicsPowerLaw) {
  // (sqrt K)' = 1 and sqrt K p'/p = -1.5: limit |1 - 1.5| = 0.5.
  const SfaCriterionResult r = sfa_criterion(power_law_counterexample(0.5, 1.0, 2.0), Side::Right);
  ASSERT_TRUE(r.main.verdict.converges());
  EXPECT_NEAR(r.main.verdict.value, 0.5, 1e-6);
  EXPECT_FALSE(r.sufficient);
}

TEST(SfaCriterion, RejectsNonDensityTail) {
  const CoefficientProblem flat(Interval(0.0, kInf), ScalarField::constant(1.0), ScalarField::constant(1.0));
  EXPECT_THROW(sfa_criterion(flat, Side::Right), PreconditionError);
}

TEST(SfaCriterion, AgreesWithSimpleForConstantDynamics) {
  const std::vector<std::pair<CoefficientProblem, Side>> cases{
      {gaussian_hermite(), Side::Left},      {gaussian_hermite(2.0), Side::Right},
      {power_law_counterexample(0.25), Side::Right}, {power_law_counterexample(1.0), Side::Right},
      {laplace_density(), Side::Right},
  };
  for (const auto& [problem, side] : cases) {
    EXPECT_EQ(simple_criterion(problem, side).satisfied(), sfa_criterion(problem, side).sufficient);
  }
}

TEST(RomanovLimit, Examples) {
  EXPECT_TRUE(romanov_limit(gaussian_hermite(), Side::Right, 0.0).converges_to_zero());
  const LimitVerdict pl = romanov_limit(power_law_counterexample(0.5), Side::Right, 2.0);
  EXPECT_FALSE(pl.converges_to_zero());
  EXPECT_EQ(romanov_limit(uniform_cosine(), Side::Left).kind, LimitKind::NotApplicable);
}

TEST(RomanovLimit, AgreesWithSimpleCriterion) {
  for (double eps : {0.25, 0.5, 1.0}) {
    const auto p = power_law_counterexample(eps);
    EXPECT_EQ(romanov_limit(p, Side::Right).converges_to_zero(), simple_criterion(p, Side::Right).satisfied());
  }
  EXPECT_EQ(romanov_limit(gaussian_hermite(), Side::Right).converges_to_zero(),
            simple_criterion(gaussian_hermite(), Side::Right).satisfied());
}

TEST(Molchanov, Examples) {
  const LimitVerdict lin = molchanov_criterion(unit_form(ScalarField([](double x) { return x; })), 1.0);
  EXPECT_TRUE(lin.diverges());
  const LimitVerdict sine =
      molchanov_criterion(unit_form(ScalarField([](double x) { return std::sin(x); })), 2.0 * std::acos(-1.0));
  EXPECT_TRUE(sine.converges_to_zero());
  EXPECT_THROW(molchanov_criterion(gaussian_hermite(), 1.0), NotApplicable);
}

TEST(SpectrumVerdict, Examples) {
  const SpectrumVerdict g = spectrum_verdict(gaussian_hermite());
  EXPECT_EQ(g.discrete, Decision::Yes);
  EXPECT_TRUE(g.bd);
  EXPECT_FALSE(g.justification.empty());

  const SpectrumVerdict u = spectrum_verdict(uniform_cosine());
  EXPECT_EQ(u.discrete, Decision::Yes);
  EXPECT_TRUE(u.bd);

  for (double eps : {0.25, 0.5, 1.0}) {
    const SpectrumVerdict pl = spectrum_verdict(power_law_counterexample(eps));
    EXPECT_EQ(pl.discrete, Decision::No) << eps;
    EXPECT_FALSE(pl.bd);
  }
  EXPECT_EQ(spectrum_verdict(laplace_density()).discrete, Decision::No);
}

TEST(SpectrumVerdict, BdImpliesDiscrete) {
  for (const auto& p : {uniform_cosine(), gaussian_hermite(), power_law_counterexample(0.5), laplace_density()}) {
    const SpectrumVerdict v = spectrum_verdict(p);
    if (v.bd) EXPECT_EQ(v.discrete, Decision::Yes);
  }
}

TEST(DefaultX0, RegularEndpointOrMedian) {
  EXPECT_EQ(default_x0(power_law_counterexample(0.5)), 1.0);
  EXPECT_NEAR(default_x0(gaussian_hermite()), 0.0, 1e-9);
  EXPECT_NEAR(density_median(power_law_counterexample(0.5)), 4.0, 1e-6);
}
