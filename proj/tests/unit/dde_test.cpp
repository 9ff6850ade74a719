#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mgc/dde.hpp"
#include "mgc/error.hpp"
#include "mgc/model.hpp"
#include "mgc/scenario.hpp"

using namespace mgc;

namespace {

constexpr double kPi = std::numbers::pi;

SystemRHS single(double decay, std::function<double(double)> feedback, double delay) {
  SystemRHS rhs;
  rhs.pieces.push_back({0.0, decay, std::move(feedback), [delay](double) { return delay; }, {}});
  rhs.d_min = rhs.d_max = delay;
  rhs.monitor_feasibility = false;
  return rhs;
}

SystemRHS pure_decay() { return single(1.0, [](double) { return 0.0; }, 1.0); }

// x'(t) = -x(t - pi/2) is solved by sin t.
SystemRHS sine_delay() { return single(0.0, [](double xi) { return -xi; }, kPi / 2); }

SystemRHS mackey_glass(const MGParams& p, double tau) {
  Schedule s;
  s.segments = {{0.0, NoControl{}, tau}};
  return build_system(p, s);
}

}  // namespace

TEST(Integrate, PureDecayIsExact) {
  const auto traj = integrate(pure_decay(), InitialFunction::constant(1.0), 5.0, 0.01);
  double err = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    err = std::max(err, std::abs(traj.states()[i] - std::exp(-traj.times()[i])));
  }
  EXPECT_LE(err, 1e-8);
  EXPECT_DOUBLE_EQ(traj.end_time(), 5.0);
}

TEST(Integrate, DenseOutputBetweenNodes) {
  const auto traj = integrate(pure_decay(), InitialFunction::constant(1.0), 5.0, 0.01);
  EXPECT_NEAR(dense_eval(traj, 0.005), std::exp(-0.005), 1e-10);
  EXPECT_EQ(dense_eval(traj, traj.times()[37]), traj.states()[37]);
  EXPECT_EQ(dense_eval(traj, -0.5), 1.0);
  EXPECT_THROW((void)dense_eval(traj, 5.01), OutOfRange);
}

TEST(Integrate, SineDelayBenchmark) {
  const auto phi = InitialFunction::sinusoid(0.0, 1.0, 1.0);
  const auto traj = integrate(sine_delay(), phi, 2 * kPi, 0.01);
  double err = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 2 * kPi * i / 2000.0;
    err = std::max(err, std::abs(traj.value(t) - std::sin(t)));
  }
  EXPECT_LE(err, 1e-6);
}

TEST(Integrate, ConvergenceOrderPureDecay) {
  const double order = convergence_order(pure_decay(), InitialFunction::constant(1.0), 10.0,
                                         {5.0, 10.0}, 0.05);
  EXPECT_NEAR(order, 4.0, 0.3);
}

TEST(Integrate, ConvergenceOrderSineDelay) {
  const double order = convergence_order(sine_delay(), InitialFunction::sinusoid(0.0, 1.0, 1.0),
                                         12.0, {8.0, 12.0}, 0.1);
  EXPECT_GE(order, 3.5);
}

TEST(Integrate, ConvergenceOrderCaseB) {
  const MGParams p{1.0, 1.2, 5.0};
  const double tau = 2.0;
  const double order = convergence_order(mackey_glass(p, tau), InitialFunction::constant(0.5),
                                         6 * tau, {5 * tau, 6 * tau}, 0.1);
  EXPECT_GE(order, 3.5);
}

TEST(Integrate, StepMustResolveDelay) {
  EXPECT_THROW((void)integrate(pure_decay(), InitialFunction::constant(1.0), 5.0, 0.1),
               StepTooLarge);
  EXPECT_THROW((void)integrate(pure_decay(), InitialFunction::constant(1.0), 5.0, -0.01),
               ParameterError);
  EXPECT_THROW((void)integrate(pure_decay(), InitialFunction::constant(1.0), 0.0, 0.01),
               ParameterError);
}

TEST(Integrate, HistoryMustCoverDelay) {
  const auto phi = InitialFunction::constant(1.0).restricted_to(-0.5);
  EXPECT_THROW((void)integrate(pure_decay(), phi, 5.0, 0.01), HistoryGap);
}

TEST(Integrate, Deterministic) {
  const auto rhs = mackey_glass({1.0, 2.0, 9.65}, 3.0);
  const auto phi = InitialFunction::sinusoid(2.0, 0.02, 1.0);
  const auto a = integrate(rhs, phi, 100.0, 0.03);
  const auto b = integrate(rhs, phi, 100.0, 0.03);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.states()[i], b.states()[i]);
    EXPECT_EQ(a.derivs()[i], b.derivs()[i]);
  }
}

TEST(Integrate, SensitiveDependence) {
  // Twin runs 1e-8 apart stay close through t = 150 and separate by more than
  // 0.5 before t = 300 (an independent fixed-grid integrator puts the 0.5
  // crossing between t = 216 and t = 236).
  const auto rhs = mackey_glass({1.0, 2.0, 9.65}, 3.0);
  const auto a = integrate(rhs, InitialFunction::sinusoid(2.0, 0.02, 1.0), 300.0, 0.03);
  const auto b = integrate(rhs, InitialFunction::sinusoid(2.0 + 1e-8, 0.02, 1.0), 300.0, 0.03);
  double early = 0.0;
  double late = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a.states()[i] - b.states()[i]);
    double& bucket = a.times()[i] <= 150.0 ? early : late;
    bucket = std::max(bucket, d);
  }
  EXPECT_LT(early, 1e-3);
  EXPECT_GT(late, 0.5);
}

TEST(Integrate, FeasibilityLossTruncates) {
  // x' = -1 from x = 1 hits zero at t = 1.
  auto rhs = single(0.0, [](double) { return -1.0; }, 1.0);
  rhs.monitor_feasibility = true;
  const auto traj = integrate(rhs, InitialFunction::constant(1.0), 5.0, 0.03);
  const auto lost = traj.feasibility_loss_time();
  ASSERT_TRUE(lost);
  EXPECT_NEAR(*lost, 1.0, 1e-12);
  EXPECT_LE(traj.end_time(), *lost);
  for (double x : traj.states()) EXPECT_GE(x, 0.0);
  EXPECT_EQ(traj.events().back().kind, EventKind::FeasibilityLoss);
}

TEST(Integrate, SwitchEventsAndHorizon) {
  SystemRHS rhs = pure_decay();
  rhs.pieces.push_back({2.0, 2.0, [](double) { return 0.0; }, [](double) { return 1.0; }, {}});
  const auto traj = integrate(rhs, InitialFunction::constant(1.0), 4.0, 0.03);
  ASSERT_EQ(traj.events().size(), 2u);
  EXPECT_EQ(traj.events()[0].kind, EventKind::ControlSwitch);
  EXPECT_DOUBLE_EQ(traj.events()[0].time, 2.0);
  EXPECT_EQ(traj.events()[1].kind, EventKind::Horizon);
  EXPECT_NEAR(traj.value(4.0), std::exp(-2.0) * std::exp(-4.0), 1e-8);
  // The slope jumps at the switch; each side keeps its own derivative.
  const auto i = traj.step_index(2.0);
  EXPECT_DOUBLE_EQ(traj.times()[i], 2.0);
  EXPECT_NEAR(traj.step(i - 1).d1, -std::exp(-2.0), 1e-8);
  EXPECT_NEAR(traj.step(i).d0, -2.0 * std::exp(-2.0), 1e-8);
}

TEST(Integrate, GridIsUniformWithinEachPiece) {
  SystemRHS rhs = pure_decay();
  rhs.pieces.push_back({1.0, 1.0, [](double) { return 0.0; }, [](double) { return 1.0; }, {}});
  const auto traj = integrate(rhs, InitialFunction::constant(1.0), 2.05, 0.03);
  const auto t = traj.times();
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_GT(t[i], t[i - 1]);
    EXPECT_LE(t[i] - t[i - 1], 0.03 + 1e-12);
  }
  EXPECT_DOUBLE_EQ(t[traj.step_index(1.0)], 1.0);
}

TEST(Integrate, DelaySwitchCrossingsAreNodes) {
  // Relaxation towards 2 crosses the threshold 1.5 once, at t = ln 2.
  SystemRHS rhs;
  RhsPiece piece{0.0, 1.0, [](double) { return 2.0; }, {}, RhsPiece::DelaySwitch{1.5, 0.5, 0.7}};
  rhs.pieces.push_back(piece);
  rhs.d_min = 0.5;
  rhs.d_max = 0.7;
  const auto traj = integrate(rhs, InitialFunction::constant(1.0), 3.0, 0.03);
  const auto t = traj.times();
  const auto nearest = *std::min_element(t.begin(), t.end(), [](double a, double b) {
    return std::abs(a - std::log(2.0)) < std::abs(b - std::log(2.0));
  });
  // Crossings are located on the step interpolant, accurate to O(h^4).
  EXPECT_NEAR(nearest, std::log(2.0), 1e-7);
  EXPECT_NEAR(traj.value(3.0), 2.0 - std::exp(-3.0), 1e-8);
}

TEST(Integrate, DelayOutsideBoundsIsAnError) {
  SystemRHS rhs = single(1.0, [](double) { return 0.0; }, 1.0);
  rhs.pieces[0].delay = [](double) { return 2.0; };
  EXPECT_THROW((void)integrate(rhs, InitialFunction::constant(1.0), 3.0, 0.01), Error);
}
