#include "rwt/presets.hpp"
#include "rwt/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rwt;

TEST(Objective, Values) {
  const auto f = ObjectiveSpec::power(4.0, 1.2, 0.2);
  EXPECT_EQ(f_value(f, 0.2), 0.0);
  EXPECT_NEAR(f_value(f1_objective(), 1.0), 1.0916391819710939, 1e-14);
  EXPECT_NEAR(f_value(f1_objective(), 1.0), 3.0 * std::pow(0.8, 1.6) - 1.5744 * 0.64, 1e-14);
  EXPECT_EQ(f_value(ObjectiveSpec::power(1.0, 1.4, 0.05), 0.05), 0.0);
  EXPECT_THROW(f_value(f, 1.5), std::out_of_range);
  EXPECT_THROW(f_value(f, -0.1), std::out_of_range);
}

TEST(Objective, Gradient) {
  const auto f = ObjectiveSpec::power(4.0, 1.2, 0.2);
  EXPECT_NEAR(g_value(f, 0.7), 4.1786427038213959, 1e-13);
  EXPECT_EQ(g_value(f, 0.2), 0.0);
  EXPECT_EQ(g_value(f1_objective(), 0.2), 0.0);
  EXPECT_LT(g_value(f, 0.1), 0.0);
}

TEST(Objective, FiniteDifferenceMatchesGradient) {
  const double h = 1e-8;
  for (const auto& obj : {ObjectiveSpec::power(4.0, 1.2, 0.2), f1_objective(), ObjectiveSpec::power(3.0, 1.6, 0.2),
                          ObjectiveSpec::power(1.0, 1.4, 0.05)}) {
    for (double x : {0.05 + 0.3, 0.5, 0.65, 0.9, 0.11}) {
      if (std::abs(x - obj.xstar()) < 0.05) continue;
      const double fd = (f_value(obj, x + h) - f_value(obj, x - h)) / (2 * h);
      EXPECT_NEAR(fd, g_value(obj, x), 1e-6) << x;
    }
  }
}

TEST(Objective, ClassSelection) {
  EXPECT_TRUE(std::holds_alternative<NonDiffAtOpt>(ObjectiveSpec::power(2.0, 1.0, 0.3).fclass()));
  EXPECT_TRUE(std::holds_alternative<StronglyConvex>(ObjectiveSpec::power(4.0, 1.2, 0.2).fclass()));
  EXPECT_TRUE(std::holds_alternative<Convex>(ObjectiveSpec::power(1.0, 3.0, 0.2).fclass()));
  EXPECT_TRUE(std::holds_alternative<Convex>(f1_objective().fclass()));
  EXPECT_EQ(class_name(Convex{}), "convex");
}

TEST(Objective, Validation) {
  EXPECT_THROW(ObjectiveSpec({{1.0, 0.5}}, 0.2, Convex{}), std::invalid_argument);
  EXPECT_THROW(ObjectiveSpec({{-1.0, 2.0}}, 0.2, Convex{}), std::invalid_argument);
  EXPECT_THROW(ObjectiveSpec({{1.0, 2.0}}, 0.2, StronglyConvex{0.0}), std::invalid_argument);
  EXPECT_THROW(ObjectiveSpec({{1.0, 1.0}}, 0.2, NonDiffAtOpt{2.0}), std::invalid_argument);
  EXPECT_THROW(ObjectiveSpec({{1.0, 2.0}}, 1.2, Convex{}), std::invalid_argument);
}

TEST(Objective, GMax) {
  const auto f = ObjectiveSpec::power(4.0, 1.2, 0.2);
  EXPECT_NEAR(f.g_max(), std::max(std::abs(g_value(f, 0.0)), std::abs(g_value(f, 1.0))), 0.0);
  EXPECT_NEAR(f.g_max(), 4.0 * 1.2 * std::pow(0.8, 0.2), 1e-14);
}

TEST(StrongConvexity, Alpha) {
  EXPECT_NEAR(strong_convexity_alpha(4.0, 1.2, 0.2), 1.1476229997480444, 1e-14);
  EXPECT_NEAR(strong_convexity_alpha(3.0, 1.6, 0.2), 3.1488827729566408, 1e-14);
  EXPECT_EQ(strong_convexity_alpha(2.5, 2.0, 0.1), 5.0);
  EXPECT_EQ(strong_convexity_alpha(2.5, 2.0, 0.7), 5.0);
  EXPECT_THROW(strong_convexity_alpha(1.0, 1.0, 0.2), std::invalid_argument);
}

TEST(Noise, ParetoMoment) {
  const ParetoTailNoise n{1.9, 1.0, 1.5};
  EXPECT_NEAR(pareto_abs_moment(n, 1.5), 1.9, 1e-12);
  EXPECT_NEAR(pareto_abs_moment(n, 1.5), 1.9 / 2.9 * (1.0 / 2.5 + 1.0 / 0.4), 1e-12);
  EXPECT_THROW(pareto_abs_moment(n, 2.0), std::invalid_argument);
  EXPECT_THROW(validate(NoiseModel{ParetoTailNoise{1.9, 1.0, 2.0}}), std::invalid_argument);
  EXPECT_THROW(validate(NoiseModel{GaussianNoise{-1.0}}), std::invalid_argument);
}

TEST(Noise, MomentCertificate) {
  const ParetoTailNoise n{1.9, 1.0, 1.5};
  EXPECT_NEAR(moment_certificate(0.0, n, 1.5), std::sqrt(2.0) * 1.9, 1e-12);
  EXPECT_GT(moment_certificate(2.0, n, 1.5), moment_certificate(1.0, n, 1.5));
  const auto f = ObjectiveSpec::power(4.0, 1.2, 0.2);
  EXPECT_NEAR(moment_certificate(f, n, 1.5), moment_certificate(f.g_max(), n, 1.5), 0.0);
}

TEST(Noise, ParetoEmpiricalMoment) {
  // Monte Carlo check of the closed form at a lower order where the variance is finite
  const ParetoTailNoise n{3.5, 0.5, 1.5};
  GradientOracle o(ObjectiveSpec::power(1.0, 2.0, 0.5), n, 5);
  double acc = 0.0;
  const int draws = 400000;
  for (int i = 0; i < draws; ++i) acc += std::pow(std::abs(o.draw_noise()), 1.5);
  EXPECT_NEAR(acc / draws, pareto_abs_moment(n, 1.5), 0.01);
}

TEST(Oracle, NoiselessAndDeterministic) {
  const auto f = ObjectiveSpec::power(4.0, 1.2, 0.2);
  GradientOracle quiet(f, GaussianNoise{0.0}, 1);
  EXPECT_EQ(quiet.sample(0.7), g_value(f, 0.7));
  GradientOracle a(f, GaussianNoise{1.0}, 42), b(f, GaussianNoise{1.0}, 42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.sample(0.3), b.sample(0.3));
}

TEST(Oracle, UnbiasedWithinClt) {
  const auto f = ObjectiveSpec::power(4.0, 1.2, 0.2);
  GradientOracle o(f, GaussianNoise{1.0}, 9);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += o.sample(0.7);
  EXPECT_NEAR(sum / n, g_value(f, 0.7), 3.0 / std::sqrt(double(n)));
}

TEST(Oracle, HeavyTailVarianceGrows) {
  // tail index below 2: the running second moment keeps drifting upward
  GradientOracle o(ObjectiveSpec::power(1.0, 2.0, 0.5), ParetoTailNoise{1.5, 1.0, 1.2}, 3);
  double sq = 0.0;
  std::vector<double> second;
  for (int i = 1; i <= 1000000; ++i) {
    const double x = o.draw_noise();
    sq += x * x;
    if (i == 1000 || i == 1000000) second.push_back(sq / i);
  }
  EXPECT_GT(second[1], second[0]);
}
