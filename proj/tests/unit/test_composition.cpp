#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sfa/composition.hpp"
#include "sfa/errors.hpp"
#include "sfa/solver.hpp"

using namespace sfa;

namespace {

const std::vector<Eigenpair>& uniform_pairs() {
  static const std::vector<Eigenpair> pairs = [] {
    SolveOptions o;
    o.modes = 4;
    o.grid = 1024;
    return solve_eigenpairs(uniform_cosine(), o).pairs;
  }();
  return pairs;
}

std::vector<Eigenpair> fabricated(std::vector<double> lambdas) {
  std::vector<Eigenpair> out;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    Eigenpair p;
    p.index = static_cast<int>(i);
    p.lambda = lambdas[i];
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST(Enumerate, TwoUniformSources) {
  const std::vector<std::vector<Eigenpair>> src{uniform_pairs(), uniform_pairs()};
  const auto c = enumerate_slowest(src, 3);
  ASSERT_EQ(c.size(), 3u);
  const double pi2 = oracle::kPi * oracle::kPi;
  EXPECT_EQ(c[0].multi_index, (MultiIndex{0, 1}));
  EXPECT_EQ(c[1].multi_index, (MultiIndex{1, 0}));
  EXPECT_EQ(c[2].multi_index, (MultiIndex{1, 1}));
  EXPECT_NEAR(c[0].lambda, pi2, 1e-5 * pi2);
  EXPECT_NEAR(c[1].lambda, pi2, 1e-5 * pi2);
  EXPECT_NEAR(c[2].lambda, 2.0 * pi2, 2e-5 * pi2);
  EXPECT_EQ(c[0].degeneracy, 2);
  EXPECT_EQ(c[2].degeneracy, 1);
  // (1,1) strictly beats (2,0).
  const auto more = enumerate_slowest(src, 5);
  EXPECT_LT(more[2].lambda, more[3].lambda);
  EXPECT_EQ(more[3].multi_index, (MultiIndex{0, 2}));
  EXPECT_EQ(more[4].multi_index, (MultiIndex{2, 0}));
}

TEST(Enumerate, LambdaIsSumOfFactors) {
  const std::vector<std::vector<Eigenpair>> src{uniform_pairs(), uniform_pairs(), uniform_pairs()};
  for (const auto& c : enumerate_slowest(src, 10)) {
    double sum = 0.0;
    for (const auto* f : c.factors) sum += f->lambda;
    EXPECT_NEAR(c.lambda, sum, 1e-12 * sum);
    EXPECT_EQ(c.factors.size(), 3u);
    EXPECT_NE(c.multi_index, (MultiIndex{0, 0, 0}));
  }
}

TEST(Enumerate, SingleSourceReproducesList) {
  const auto c = enumerate_slowest({uniform_pairs()}, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(c[i].multi_index, (MultiIndex{i + 1}));
    EXPECT_EQ(c[i].lambda, uniform_pairs()[i + 1].lambda);
  }
}

TEST(Enumerate, OrderingAndFabricatedHead) {
  auto a = fabricated({0.0, 3.0, 5.0, 9.0});
  auto b = fabricated({0.0, 4.0, 6.0});
  auto c = enumerate_slowest({a, b}, 6);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(c[i - 1].lambda, c[i].lambda);
  EXPECT_EQ(c.front().multi_index, (MultiIndex{1, 0}));
  b = fabricated({0.0, 1.0, 6.0});
  c = enumerate_slowest({a, b}, 6);
  EXPECT_EQ(c.front().multi_index, (MultiIndex{0, 1}));
  EXPECT_EQ(c.front().lambda, 1.0);
}

TEST(Enumerate, SwappingSourcesMirrorsIndices) {
  const auto a = fabricated({0.0, 2.0, 7.0});
  const auto b = fabricated({0.0, 3.0, 4.0});
  const auto ab = enumerate_slowest({a, b}, 6);
  const auto ba = enumerate_slowest({b, a}, 6);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    EXPECT_EQ(ab[i].lambda, ba[i].lambda);
    EXPECT_EQ(ab[i].multi_index[0], ba[i].multi_index[1]);
  }
}

TEST(Enumerate, Errors) {
  const auto a = fabricated({0.0, 1.0});
  EXPECT_THROW(enumerate_slowest({a, a}, 4), PreconditionError);
  EXPECT_THROW(enumerate_slowest({a, fabricated({0.0})}, 1), PreconditionError);
  EXPECT_THROW(enumerate_slowest({a, fabricated({0.0, -1.0})}, 1), PreconditionError);
  EXPECT_THROW(enumerate_slowest({}, 1), PreconditionError);
}

TEST(Evaluate, ProductsOfHarmonics) {
  const std::vector<std::vector<Eigenpair>> src{uniform_pairs(), uniform_pairs()};
  const auto c = enumerate_slowest(src, 3);
  EXPECT_NEAR(evaluate_composite(c[2], {0.0, 0.0}), 2.0, 1e-3);
  EXPECT_EQ(evaluate_composite(c[1], {0.3, 0.1}), evaluate_composite(c[1], {0.3, 0.9}));
  CompositeSolution zero = c[0];
  zero.multi_index = {0, 0};
  EXPECT_EQ(evaluate_composite(zero, {0.2, 0.7}), 1.0);
  EXPECT_THROW(evaluate_composite(c[0], {0.1}), PreconditionError);
  EXPECT_THROW(evaluate_composite(c[2], {0.1, 1.5}), DomainError);
}

TEST(Orthonormality, FirstFiveComposites) {
  const std::vector<std::vector<Eigenpair>> src{uniform_pairs(), uniform_pairs()};
  EXPECT_LT(composite_orthonormality_error(enumerate_slowest(src, 5), 64), 1e-3);
}
