#include <gtest/gtest.h>

#include <cmath>

#include "uadam/config.hpp"
#include "uadam/errors.hpp"
#include "uadam/momentum.hpp"
#include "uadam/oracle.hpp"

namespace uadam {
namespace {

constexpr double kTight = 1e-15;

void expect_near_vec(const ParamVector& a, const ParamVector& b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "coordinate " << i;
}

TEST(SumUpdate, BetaZeroReturnsGradient) {
  MomentumState s(2, 0.0, 0.0);
  const ParamVector mbar = sum_update(s, {1.0, 2.0});
  EXPECT_EQ(s.m(), (ParamVector{1.0, 2.0}));
  EXPECT_EQ(mbar, (ParamVector{1.0, 2.0}));
}

TEST(SumUpdate, LambdaTildeOneIsSgdDirection) {
  for (double beta : {0.0, 0.5, 0.9, 0.99}) {
    MomentumState s(2, beta, 1.0);
    sum_update(s, {0.7, 0.1});
    EXPECT_EQ(sum_update(s, {3.0, -1.0}), (ParamVector{3.0, -1.0}));
  }
}

TEST(SumUpdate, OneStepByHand) {
  MomentumState s(2, 0.9, 0.0);
  const ParamVector mbar = sum_update(s, {2.0, -4.0});
  expect_near_vec(s.m(), {0.2, -0.4}, kTight);
  expect_near_vec(mbar, {0.2, -0.4}, kTight);
}

TEST(SumUpdate, RejectsBadInputs) {
  EXPECT_THROW(MomentumState(2, 1.0, 0.0), ConfigError);
  EXPECT_THROW(MomentumState(2, 0.5, 1.5), ConfigError);
  MomentumState s(2, 0.5, 0.0);
  EXPECT_THROW(sum_update(s, {1.0}), ConfigError);
}

TEST(SumUpdate, ConstantGradientClosedForm) {
  const double beta = 0.8;
  const ParamVector c{1.5, -2.0};
  MomentumState s(2, beta, 0.0);
  for (int t = 1; t <= 40; ++t) {
    sum_update(s, c);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_NEAR(std::abs(s.m()[i] - c[i]), std::pow(beta, t) * std::abs(c[i]), 1e-14);
    }
  }
}

TEST(SumUpdate, MaxLambdaYieldsGradientEveryStep) {
  const double beta = 0.9;
  UAdamConfig c;
  c.beta = beta;
  c.lambda = 1.0 / (1.0 - beta);
  MomentumState s(3, beta, c.lambda_tilde());
  for (int t = 0; t < 20; ++t) {
    const ParamVector g{std::sin(t), std::cos(t), 0.1 * t};
    EXPECT_EQ(sum_update(s, g), g);
  }
}

TEST(Shb, ByHandAndSpecialCases) {
  expect_near_vec(shb_step({1.0}, {0.8}, {2.0}, 0.1, 0.5), {0.9}, kTight);
  expect_near_vec(shb_step({1.0, 2.0}, {1.0, 2.0}, {1.0, 1.0}, 0.1, 0.7), {0.9, 1.9}, kTight);
  expect_near_vec(shb_step({1.0}, {5.0}, {3.0}, 0.1, 0.0), {0.7}, kTight);
}

TEST(Snag1, LookaheadByHand) {
  Snag1State st{{-0.1}};
  auto grad = [](const ParamVector& x) { return x; };
  const ParamVector next = snag1_step(st, {1.0}, grad, 0.1, 0.9);
  EXPECT_NEAR(st.m_bar[0], -0.181, kTight);
  EXPECT_NEAR(next[0], 0.819, kTight);
}

TEST(Snag1, BetaZeroIsSgdAndZeroMomentumUsesX) {
  auto grad = [](const ParamVector& x) { return 2.0 * x; };
  Snag1State st{{0.0}};
  expect_near_vec(snag1_step(st, {1.0}, grad, 0.1, 0.0), {0.8}, kTight);
  Snag1State fresh{{0.0}};
  expect_near_vec(snag1_step(fresh, {1.0}, grad, 0.1, 0.9), {0.8}, kTight);
}

TEST(Snag2, ByHandAndBetaZero) {
  Snag2State st{{0.0}};
  const ParamVector next = snag2_step(st, {1.0}, {1.0}, 0.1, 0.9);
  EXPECT_NEAR(st.m[0], 0.1, kTight);
  EXPECT_NEAR(next[0], 0.981, kTight);
  Snag2State z{{0.0}};
  expect_near_vec(snag2_step(z, {1.0}, {2.0}, 0.1, 0.0), {0.8}, kTight);
}

TEST(Snag2, MatchesUnifiedDirectionAtLambdaOne) {
  const double beta = 0.9, eta = 0.05;
  MomentumState s(2, beta, 1.0 - beta);
  Snag2State st{{0.0, 0.0}};
  ParamVector x{1.0, -1.0};
  for (int t = 0; t < 10; ++t) {
    const ParamVector g{std::sin(t), std::cos(t)};
    const ParamVector mbar = sum_update(s, g);
    const ParamVector via_sum = x - eta * mbar;
    x = snag2_step(st, x, g, eta, beta);
    expect_near_vec(x, via_sum, 1e-15);
  }
}

TEST(Nme, ByHandAndSpecialCases) {
  NmeState st{{0.0}, {0.0}};
  nme_step(st, {0.0}, {1.0}, 0.1, 0.9);
  EXPECT_NEAR(st.m_bar[0], 0.19, kTight);
  EXPECT_EQ(st.g_prev, (ParamVector{1.0}));

  NmeState b0{{0.5}, {7.0}};
  expect_near_vec(nme_step(b0, {1.0}, {2.0}, 0.1, 0.0), {0.8}, kTight);

  NmeState c{{0.3}, {2.0}};
  nme_step(c, {0.0}, {2.0}, 0.1, 0.5);
  EXPECT_NEAR(c.m_bar[0], 0.5 * 0.3 + 0.5 * 2.0, kTight);
}

TEST(Sum2, ByHandAndSpecialCases) {
  Sum2State st{{0.0}};
  const ParamVector next = sum2_step(st, {1.0}, {1.0}, 0.01, 0.9, 1.0);
  EXPECT_NEAR(st.m[0], -0.01, kTight);
  EXPECT_NEAR(next[0], 0.981, kTight);

  Sum2State sgd{{0.0}};
  expect_near_vec(sum2_step(sgd, {1.0}, {2.0}, 0.1, 0.0, 1.0), {0.8}, kTight);

  Sum2State hb{{0.2}};
  const ParamVector hb_next = sum2_step(hb, {1.0}, {1.0}, 0.1, 0.5, 0.0);
  EXPECT_NEAR(hb.m[0], 0.5 * 0.2 - 0.1, kTight);
  EXPECT_NEAR(hb_next[0], 1.0 + hb.m[0], kTight);
}

class EquivalenceGrid
    : public ::testing::TestWithParam<std::tuple<EquivalencePair, const char*, double, double>> {};

TEST_P(EquivalenceGrid, TrajectoriesCoincide) {
  const auto [pair, name, beta, lambda] = GetParam();
  const std::string pname = name;
  const Problem p = pname == "quadratic" ? make_problem("quadratic", 2, {.diag = {1.0, 10.0}})
                                         : make_problem("rosenbrock", 2);
  EquivalenceParams params;
  params.eta = pname == "quadratic" ? 0.05 : 1e-4;
  params.beta = beta;
  params.lambda = lambda;
  EXPECT_LE(check_equivalence(pair, p, 200, params), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(
    AllPairs, EquivalenceGrid,
    ::testing::Combine(::testing::Values(EquivalencePair::Snag1Snag2, EquivalencePair::NmeSnag2,
                                         EquivalencePair::Sum2Sum1, EquivalencePair::ShbSum1,
                                         EquivalencePair::Snag2Sum1),
                       ::testing::Values("quadratic", "rosenbrock"),
                       ::testing::Values(0.5, 0.9, 0.99), ::testing::Values(0.0, 1.0)));

TEST(Equivalence, ZeroStepsIsZero) {
  const Problem p = make_problem("quadratic", 2);
  EXPECT_EQ(check_equivalence(EquivalencePair::Snag1Snag2, p, 0, {}), 0.0);
}

TEST(Equivalence, IsotropicQuadraticSnag) {
  const Problem p = make_problem("quadratic", 3);
  EquivalenceParams params;
  params.eta = 0.05;
  params.beta = 0.9;
  EXPECT_LE(check_equivalence(EquivalencePair::Snag1Snag2, p, 200, params), 1e-9);
}

TEST(Equivalence, Sum2OnRosenbrockAtLargerStep) {
  const Problem p = make_problem("rosenbrock", 2);
  EquivalenceParams params;
  params.eta = 1e-3;
  params.beta = 0.9;
  params.lambda = 1.0;
  EXPECT_LE(check_equivalence(EquivalencePair::Sum2Sum1, p, 200, params), 1e-9);
}

TEST(Equivalence, InconsistentMappingIsConfigError) {
  const Problem p = make_problem("quadratic", 2);
  EquivalenceParams params;
  params.eta = 0.1;
  params.beta = 0.9;
  params.alpha = 0.5;
  EXPECT_THROW(check_equivalence(EquivalencePair::Snag1Snag2, p, 10, params), ConfigError);
  params.alpha = 0.1 * (1.0 - 0.9);
  EXPECT_NO_THROW(check_equivalence(EquivalencePair::Snag1Snag2, p, 10, params));
  params.mu = 0.5;
  EXPECT_THROW(check_equivalence(EquivalencePair::Sum2Sum1, p, 10, params), ConfigError);
}

}  // namespace
}  // namespace uadam
