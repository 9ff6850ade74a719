#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mgc/error.hpp"
#include "mgc/model.hpp"
#include "mgc/roots.hpp"

using namespace mgc;

namespace {

const MGParams kChaotic{1.0, 2.0, 9.65};

}  // namespace

// Reference values below were computed with 30-digit arithmetic from the
// closed forms and frozen here.

TEST(Model, CriticalPointAndMaximum) {
  EXPECT_NEAR(critical_point(kChaotic), 0.7996498963, 1e-9);
  EXPECT_NEAR(f_max(kChaotic), 1.4335692441, 1e-9);
  EXPECT_NEAR(f_value(kChaotic, critical_point(kChaotic)), f_max(kChaotic), 1e-14);
  EXPECT_NEAR(f_derivative(kChaotic, critical_point(kChaotic)), 0.0, 1e-12);
}

TEST(Model, DerivativeMinimum) {
  EXPECT_NEAR(f_derivative_min(kChaotic), -3.8768134715, 1e-9);
  const double xs = std::pow((kChaotic.n + 1.0) / (kChaotic.n - 1.0), 1.0 / kChaotic.n);
  EXPECT_NEAR(f_derivative(kChaotic, xs), f_derivative_min(kChaotic), 1e-12);
}

TEST(Model, DerivativeMatchesFiniteDifference) {
  for (double x : {0.1, 0.5, 0.8, 1.0, 1.3, 2.5}) {
    const double h = 1e-6;
    const double fd = (f_value(kChaotic, x + h) - f_value(kChaotic, x - h)) / (2 * h);
    EXPECT_NEAR(f_derivative(kChaotic, x), fd, 1e-7) << x;
  }
}

TEST(Model, HillPower) {
  EXPECT_EQ(hill_power(0.0, 9.65), 0.0);
  EXPECT_NEAR(hill_power(2.0, 3.0), 8.0, 1e-13);
  EXPECT_NEAR(hill_power(0.5, 9.65), std::pow(0.5, 9.65), 1e-15);
}

TEST(Model, NegativeArgumentRejected) {
  EXPECT_THROW((void)f_value(kChaotic, -0.1), DomainError);
  EXPECT_THROW((void)f_derivative(kChaotic, -0.1), DomainError);
}

TEST(Model, ParameterValidation) {
  EXPECT_THROW((MGParams{0.0, 2.0, 9.65}.validate()), ParameterError);
  EXPECT_THROW((MGParams{1.0, -1.0, 9.65}.validate()), ParameterError);
  EXPECT_THROW((MGParams{1.0, 2.0, 2.0}.validate()), ParameterError);
  EXPECT_NO_THROW(kChaotic.validate());
}

TEST(Model, Landmarks) {
  const auto lm = landmarks(kChaotic);
  EXPECT_NEAR(lm.xi0, 0.7996498963, 1e-9);
  ASSERT_TRUE(lm.K);
  EXPECT_NEAR(*lm.K, 1.0, 1e-14);
  EXPECT_NEAR(lm.beta, 1.4335692441, 1e-9);
  EXPECT_NEAR(lm.alpha, 0.0860546, 1e-6);
  ASSERT_TRUE(lm.K_hat);
  EXPECT_LT(*lm.K_hat, lm.xi0);
  EXPECT_NEAR(f_value(kChaotic, *lm.K_hat), f_value(kChaotic, *lm.K), 1e-10);
}

TEST(Model, KHatForSixthPower) {
  const MGParams p{1.0, 2.0, 6.0};
  const auto lm = landmarks(p);
  EXPECT_NEAR(lm.xi0, 0.7647245, 1e-6);
  ASSERT_TRUE(lm.K_hat);
  EXPECT_NEAR(*lm.K_hat, 0.5086604, 1e-6);
}

TEST(Model, Cases) {
  EXPECT_EQ(classify_case({2.0, 1.0, 5.0}), Case::A);
  EXPECT_EQ(classify_case({1.0, 1.0, 5.0}), Case::A);
  EXPECT_EQ(classify_case({1.0, 1.2, 5.0}), Case::B);
  EXPECT_EQ(classify_case({1.0, 1.25, 5.0}), Case::B);
  EXPECT_EQ(classify_case(kChaotic), Case::C);
  EXPECT_FALSE(positive_equilibrium({2.0, 1.0, 5.0}));
}

TEST(Model, CaseMatchesEquilibriumPosition) {
  // K = 0.05^(1/30) = 0.9050 lies past xi0 = 29^(-1/30) = 0.8938.
  const MGParams p{1.0, 1.05, 30.0};
  EXPECT_EQ(classify_case(p), Case::C);
  EXPECT_GT(*positive_equilibrium(p), critical_point(p));
}

TEST(Model, ConditionLFailsForChaoticSet) {
  const auto r = check_L(kChaotic);
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.lhs, 0.0860546, 1e-6);
  EXPECT_NEAR(r.margin, -0.7135953, 1e-6);
}

TEST(Model, ConditionLHolds) {
  const MGParams p{1.782, 2.0, 20.0};
  const auto r = check_L(p);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, 0.8681156, 1e-6);
  EXPECT_NEAR(r.lhs - r.margin, 0.8631024, 1e-6);
}

TEST(Model, ConditionTDependsOnDelay) {
  const MGParams p{0.992, 2.0, 27.9};
  const auto shortd = check_T(p, 0.125);
  EXPECT_TRUE(shortd.holds);
  EXPECT_NEAR(shortd.lhs, 0.9074578, 1e-6);
  const auto longd = check_T(p, 3.0);
  EXPECT_FALSE(longd.holds);
  EXPECT_NEAR(longd.lhs, 0.0510271, 1e-6);
}

TEST(Model, ConditionTFailsForChaoticSetAtDelayTwo) {
  EXPECT_FALSE(check_T(kChaotic, 2.0).holds);
}

TEST(Model, ConditionsOnlyInCaseC) {
  EXPECT_THROW((void)check_L({2.0, 1.0, 5.0}), CaseError);
  EXPECT_THROW((void)check_T({1.0, 1.2, 5.0}, 1.0), CaseError);
  EXPECT_THROW((void)check_T(kChaotic, 0.0), ParameterError);
}

TEST(Roots, BisectFindsRoot) {
  const auto r = roots::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x, std::sqrt(2.0), 1e-12);
}

TEST(Roots, UnbracketedThrows) {
  EXPECT_THROW((void)roots::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0),
               BracketError);
}

TEST(Roots, ScanFindsAllRoots) {
  const auto rs = roots::scan_roots([](double x) { return std::sin(x); }, 0.5, 10.0, 0.01, 1e-12);
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_NEAR(rs[0], std::numbers::pi, 1e-10);
  EXPECT_NEAR(rs[2], 3 * std::numbers::pi, 1e-10);
}
