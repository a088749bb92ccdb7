#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "uadam/driver.hpp"
#include "uadam/errors.hpp"

namespace uadam {
namespace {

Problem quad_1_10() { return make_problem("quadratic", 2, {.diag = {1.0, 10.0}}); }

TEST(Driver, ByHandFirstStep) {
  const Problem p = make_problem("quadratic", 1);
  UAdamConfig cfg;
  cfg.rule = ConstParams{};
  cfg.eta = 0.1;
  cfg.beta = 0.9;
  cfg.max_steps = 2;
  OptimizerRun run(cfg, p, ParamVector{1.0});
  const TraceRecord& r = run.step(p, {});
  EXPECT_NEAR(run.momentum().m()[0], 0.1, 1e-15);
  EXPECT_NEAR(run.x()[0], 0.99, 1e-15);
  EXPECT_EQ(r.t, 1u);
  EXPECT_DOUBLE_EQ(r.f_val, 0.5);
  EXPECT_DOUBLE_EQ(r.grad_norm_sq, 1.0);
  EXPECT_NEAR(r.delta_t, 0.81, 1e-15);
  EXPECT_EQ(r.eta_min, 0.1);
  EXPECT_EQ(r.eta_max, 0.1);
  EXPECT_NEAR(r.step_norm, 0.01, 1e-15);
}

TEST(Driver, ConstantRuleWithoutMomentumIsGradientDescent) {
  const Problem p = quad_1_10();
  UAdamConfig cfg;
  cfg.rule = ConstParams{};
  cfg.eta = 0.05;
  cfg.beta = 0.0;
  cfg.max_steps = 50;
  OptimizerRun run(cfg, p);
  ParamVector x = p.start;
  for (int t = 0; t < 50; ++t) {
    run.step(p, {});
    x = x - 0.05 * p.grad(x);
    ASSERT_EQ(run.x(), x);
  }
}

TEST(Driver, ZeroStepsGivesEmptyOutcome) {
  UAdamConfig cfg;
  cfg.max_steps = 0;
  const Problem p = quad_1_10();
  const auto out = run_to_completion(cfg, p, {});
  EXPECT_TRUE(out.trace.empty());
  EXPECT_FALSE(out.summary.has_value());
  EXPECT_FALSE(out.error.has_value());
  EXPECT_EQ(out.final_x, p.start);
}

TEST(Driver, NoiselessConstantRuleConverges) {
  UAdamConfig cfg;
  cfg.rule = ConstParams{};
  cfg.eta = 0.05;
  cfg.beta = 0.9;
  cfg.max_steps = 10000;
  const Problem p = quad_1_10();
  const auto out = run_to_completion(cfg, p, {});
  ASSERT_EQ(out.trace.size(), 10000u);
  EXPECT_LE(out.trace.records().back().grad_norm_sq, 1e-12);
}

TEST(Driver, MatchesTextbookAdamAtLambdaZero) {
  const Problem p = make_problem("rosenbrock", 2);
  UAdamConfig cfg;
  cfg.rule = AdamParams{0.999, 1e-8};
  cfg.eta = 1e-3;
  cfg.beta = 0.9;
  cfg.lambda = 0.0;
  cfg.max_steps = 500;
  OptimizerRun run(cfg, p);

  ParamVector x = p.start, m(2, 0.0), v(2, 0.0);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    run.step(p, {});
    const ParamVector g = p.grad(x);
    for (std::size_t i = 0; i < 2; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * g[i];
      v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
      x[i] -= 1e-3 / (std::sqrt(v[i]) + 1e-8) * m[i];
    }
    worst = std::max(worst, max_abs_diff(run.x(), x));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Driver, MatchesNesterovAdanDirectionAtLambdaOne) {
  const Problem p = quad_1_10();
  const double beta = 0.9;
  UAdamConfig cfg;
  cfg.rule = AdanParams{};
  cfg.eta = 0.01;
  cfg.beta = beta;
  cfg.lambda = 1.0;
  cfg.max_steps = 300;
  OptimizerRun run(cfg, p);

  LrRuleState lr(AdanParams{}, 2, beta);
  ParamVector x = p.start, m(2, 0.0);
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    run.step(p, {});
    const ParamVector g = p.grad(x);
    m = beta * m + (1.0 - beta) * g;
    // Lookahead direction: one more EMA step with the current gradient.
    const ParamVector dir = beta * m + (1.0 - beta) * g;
    const ParamVector eta_t = lr_update(lr, g, cfg.eta);
    x = x - mul(eta_t, dir);
    worst = std::max(worst, max_abs_diff(run.x(), x));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Driver, LambdaZeroIsHeavyBallWithAdaptiveRate) {
  const Problem p = quad_1_10();
  UAdamConfig cfg;
  cfg.rule = YogiParams{};
  cfg.eta = 0.01;
  cfg.beta = 0.5;
  cfg.max_steps = 200;
  OptimizerRun run(cfg, p);
  LrRuleState lr(YogiParams{}, 2);
  ParamVector x = p.start, m(2, 0.0);
  for (int t = 0; t < 200; ++t) {
    run.step(p, {});
    const ParamVector g = p.grad(x);
    m = 0.5 * m + 0.5 * g;
    x = x - mul(lr_update(lr, g, cfg.eta), m);
    ASSERT_LE(max_abs_diff(run.x(), x), 1e-12);
  }
}

TEST(Driver, MaxLambdaUsesRawGradient) {
  const Problem p = quad_1_10();
  UAdamConfig cfg;
  cfg.beta = 0.9;
  cfg.lambda = 1.0 / (1.0 - cfg.beta);
  cfg.max_steps = 20;
  OptimizerRun run(cfg, p);
  for (int t = 0; t < 20; ++t) {
    run.step(p, {1.0, 0.5, 0, 0});
    ASSERT_EQ(run.last_direction(), run.last_gradient());
  }
}

TEST(Driver, DeterministicForFixedSeed) {
  UAdamConfig cfg;
  cfg.seed = 17;
  cfg.max_steps = 300;
  const Problem p = make_problem("logistic", 5);
  const NoiseModel noise{0.5, 0.5, 0, 0};
  const auto a = run_to_completion(cfg, p, noise);
  const auto b = run_to_completion(cfg, p, noise);
  EXPECT_EQ(a.final_x, b.final_x);
  cfg.seed = 18;
  const auto c = run_to_completion(cfg, p, noise);
  EXPECT_NE(a.final_x, c.final_x);
}

TEST(Driver, NoiseIsKeyedByConfigSeed) {
  UAdamConfig cfg;
  cfg.seed = 5;
  cfg.max_steps = 50;
  const Problem p = quad_1_10();
  const auto a = run_to_completion(cfg, p, {1.0, 0.0, 1, 0});
  const auto b = run_to_completion(cfg, p, {1.0, 0.0, 999, 0});
  EXPECT_EQ(a.final_x, b.final_x);
}

TEST(Driver, SeparableProblemDecouplesCoordinates) {
  UAdamConfig cfg;
  cfg.rule = AmsGradParams{};
  cfg.eta = 0.02;
  cfg.lambda = 1.0;
  cfg.max_steps = 400;
  const auto both = run_to_completion(cfg, quad_1_10(), {});
  const auto first = run_to_completion(cfg, make_problem("quadratic", 1, {.diag = {1.0}}), {});
  const auto second = run_to_completion(cfg, make_problem("quadratic", 1, {.diag = {10.0}}), {});
  EXPECT_EQ(both.final_x[0], first.final_x[0]);
  EXPECT_EQ(both.final_x[1], second.final_x[0]);
}

TEST(Driver, ConstantRuleScaleConsistency) {
  // Scaling f by c and eta by 1/c leaves the constant-rule trajectory unchanged.
  UAdamConfig cfg;
  cfg.rule = ConstParams{};
  cfg.eta = 0.02;
  cfg.lambda = 1.0;
  cfg.max_steps = 200;
  const auto base = run_to_completion(cfg, quad_1_10(), {});
  cfg.eta = 0.02 / 4.0;
  const auto scaled = run_to_completion(cfg, make_problem("quadratic", 2, {.diag = {4.0, 40.0}}), {});
  EXPECT_LE(max_abs_diff(base.final_x, scaled.final_x), 1e-12);
}

TEST(Driver, DeltaMatchesRecomputation) {
  const Problem p = make_problem("rosenbrock", 2);
  UAdamConfig cfg;
  cfg.seed = 4;
  cfg.max_steps = 100;
  const NoiseModel noise{0.1, 0.1, 0, 0};
  OptimizerRun run(cfg, p);
  for (int t = 0; t < 100; ++t) {
    const ParamVector x = run.x();
    const TraceRecord rec = run.step(p, noise);
    EXPECT_DOUBLE_EQ(rec.delta_t, distance_sq(run.momentum().m(), p.grad(x)));
    EXPECT_DOUBLE_EQ(rec.grad_norm_sq, norm_sq(p.grad(x)));
  }
}

TEST(Driver, DivergenceAbortsWithStepIndex) {
  UAdamConfig cfg;
  cfg.rule = ConstParams{};
  cfg.eta = 1.0;
  cfg.max_steps = 1000;
  const auto out = run_to_completion(cfg, make_problem("rosenbrock", 2), {});
  ASSERT_TRUE(out.error.has_value());
  EXPECT_EQ(out.error->step(), out.trace.size() + 1);
  EXPECT_LT(out.trace.size(), 1000u);
}

TEST(Driver, StepPastMaxIsLogicError) {
  UAdamConfig cfg;
  cfg.max_steps = 1;
  const Problem p = quad_1_10();
  OptimizerRun run(cfg, p);
  run.step(p, {});
  EXPECT_THROW(run.step(p, {}), std::logic_error);
}

TEST(Driver, RejectsBadConfigAndStart) {
  const Problem p = quad_1_10();
  UAdamConfig cfg;
  cfg.beta = 1.0;
  EXPECT_THROW(OptimizerRun(cfg, p), ConfigError);
  EXPECT_THROW(OptimizerRun(UAdamConfig{}, p, ParamVector{1.0}), ConfigError);
}

TEST(Driver, RecordsMeasuredGradientBound) {
  UAdamConfig cfg;
  cfg.max_steps = 10;
  const Problem p = quad_1_10();
  const auto out = run_to_completion(cfg, p, {});
  EXPECT_DOUBLE_EQ(out.max_grad_inf, 10.0);
  EXPECT_EQ(out.grad_bound_violations, 0u);
}

}  // namespace
}  // namespace uadam
