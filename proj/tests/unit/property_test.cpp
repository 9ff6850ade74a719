#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mgc/config.hpp"
#include "mgc/control.hpp"
#include "mgc/error.hpp"
#include "mgc/model.hpp"
#include "mgc/roots.hpp"
#include "mgc/scenario.hpp"

using namespace mgc;

namespace {

constexpr int kTrials = 25;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }

  MGParams params_in(Case wanted) {
    for (;;) {
      const double mu = uniform(0.5, 2.0);
      const double n = uniform(3.0, 30.0);
      const double ratio = wanted == Case::A ? uniform(0.2, 1.0) : uniform(1.01, 4.0);
      const MGParams p{mu, ratio * mu, n};
      if (classify_case(p) == wanted) return p;
    }
  }

  InitialFunction history() {
    const double a = uniform(0.2, 2.0);
    switch (std::uniform_int_distribution<>(0, 2)(rng_)) {
      case 0: return InitialFunction::constant(a);
      case 1: return InitialFunction::sinusoid(a, uniform(0.0, 0.19), uniform(0.1, 3.0));
      default: return InitialFunction::exponential(a, uniform(0.0, 0.19), uniform(0.0, 2.0));
    }
  }

 private:
  std::mt19937_64 rng_;
};

Trajectory run(const MGParams& p, ControlLaw law, double tau, const InitialFunction& phi,
               double horizon) {
  Schedule s;
  s.segments = {{0.0, std::move(law), tau}};
  return integrate(build_system(p, s), phi, horizon, tau / 100.0);
}

}  // namespace

TEST(Property, UncontrolledSolutionsStayPositive) {
  Sampler s(1);
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(i % 2 ? Case::C : Case::B);
    const double tau = s.uniform(0.5, 4.0);
    const auto traj = run(p, NoControl{}, tau, s.history(), 40.0 * tau);
    EXPECT_FALSE(traj.feasibility_loss_time()) << i;
    EXPECT_GT(*std::ranges::min_element(traj.states()), 0.0) << i;
  }
}

TEST(Property, CaseADecaysToZero) {
  // f(x) <= p x, so x is dominated by the linear equation with rate
  // lambda = -mu + p exp(-lambda tau) < 0.
  Sampler s(2);
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(Case::A);
    if (p.p > 0.95 * p.mu) continue;
    const double tau = s.uniform(0.5, 3.0);
    const double lambda = roots::bisect(
        [&](double l) { return l + p.mu - p.p * std::exp(-l * tau); }, -p.mu, 0.0).x;
    const auto traj = run(p, NoControl{}, tau, s.history(), std::log(1e4) / -lambda);
    EXPECT_LT(traj.states().back(), 1e-2) << p.mu << ' ' << p.p << ' ' << p.n;
  }
}

TEST(Property, CaseBConvergesToEquilibrium) {
  Sampler s(3);
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(Case::B);
    const double K = *positive_equilibrium(p);
    const double tau = s.uniform(0.2, 2.0);
    const auto traj = run(p, NoControl{}, tau, s.history(), 400.0 / p.mu);
    EXPECT_NEAR(traj.states().back(), K, 1e-3) << p.mu << ' ' << p.p << ' ' << p.n;
  }
}

TEST(Property, CaseCTailsEnterInvariantInterval) {
  Sampler s(4);
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(Case::C);
    const auto lm = landmarks(p);
    const double tau = s.uniform(0.5, 3.0);
    const double horizon = 60.0 / p.mu + 40.0 * tau;
    const auto traj = run(p, NoControl{}, tau, s.history(), horizon);
    for (std::size_t j = traj.step_index(horizon / 2); j < traj.size(); ++j) {
      ASSERT_GE(traj.states()[j], lm.alpha - 1e-6) << i;
      ASSERT_LE(traj.states()[j], lm.beta + 1e-6) << i;
    }
  }
}

TEST(Property, ThresholdIdentities) {
  Sampler s(5);
  int proportional = 0;
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(Case::C);
    const auto c = constant_thresholds(p);
    EXPECT_LT(c.k1, c.k2);
    EXPECT_NEAR(D_value(p, c.k2), 0.0, 1e-9);
    EXPECT_NEAR(f_derivative(p, c.xi_mu), p.mu, 1e-8 * std::max(1.0, p.mu));
    EXPECT_NEAR(pyragas_design(p).k_py, -f_derivative_min(p), 1e-12);
    try {
      const auto t = proportional_thresholds(p);
      EXPECT_NEAR(S_value(p, t.w0), 1.0, 1e-9);
      EXPECT_NEAR(S_value(p, t.w_star), 1.0, 1e-9);
      EXPECT_LT(t.w_star, t.w_hat);
      EXPECT_LT(t.w_hat, t.w0);
      ++proportional;
    } catch (const BracketError&) {
      // S(w_hat) <= 1: no lower root to certify.
    }
  }
  EXPECT_GT(proportional, 0);
}

TEST(Property, EquilibriumSolvesFixedPoint) {
  Sampler s(6);
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(i % 2 ? Case::C : Case::B);
    const double K = *positive_equilibrium(p);
    EXPECT_NEAR(f_value(p, K), p.mu * K, 1e-12 * p.mu);
    EXPECT_EQ(classify_case(p) == Case::C, K > critical_point(p));
  }
}

TEST(Property, PyragasPreservesEquilibriumRun) {
  Sampler s(7);
  for (int i = 0; i < 10; ++i) {
    const auto p = s.params_in(Case::C);
    const double K = *positive_equilibrium(p);
    const double k = s.uniform(0.0, 5.0);
    const auto traj = run(p, PyragasControl{k}, 1.0, InitialFunction::constant(K), 20.0);
    EXPECT_NEAR(traj.states().back(), K, 1e-9);
  }
}

TEST(Property, SmoothDelayRespectsBounds) {
  Sampler s(8);
  for (int i = 0; i < kTrials; ++i) {
    const auto p = s.params_in(Case::C);
    const double tau = s.uniform(0.5, 5.0);
    const auto d = sdd_design(p, tau, DelayKind::Smooth);
    double prev = d.delay(0.0);
    const double span = 2.0 * (d.xi0 + d.ramp_width_used);
    for (int j = 1; j <= 2000; ++j) {
      const double x = span * j / 2000.0;
      const double r = d.delay(x);
      ASSERT_GE(r, std::min(d.tau_star, tau) - 1e-12);
      ASSERT_LE(r, tau + 1e-12);
      ASSERT_LE((r - prev) / (span / 2000.0), d.slope_bound + 1e-9);
      prev = r;
    }
  }
}

TEST(Property, RestartFromOwnPastKeepsVerdict) {
  // Restarting one delay in from the run's own past continues the same solution.
  Sampler s(9);
  for (int i = 0; i < 10; ++i) {
    const auto p = s.params_in(Case::B);
    const double tau = 1.0;
    const double h = 1.0 / 64.0;
    Schedule sched;
    sched.segments = {{0.0, NoControl{}, tau}};
    const auto rhs = build_system(p, sched);
    const auto full = integrate(rhs, InitialFunction::constant(0.5), 250.0, h);
    History later{[&full](double t) { return full.value(t); }, -tau};
    const auto rest = integrate_from(rhs, later, full.times()[64], 250.0, h);
    const auto a = classify_tail(full, {150.0, 250.0}, tau);
    const auto b = classify_tail(rest, {150.0, 250.0}, tau);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_NEAR(a.limit, b.limit, 1e-9);
  }
}

TEST(Property, ConfigRoundTrip) {
  Sampler s(10);
  for (int i = 0; i < kTrials; ++i) {
    ScenarioConfig c;
    c.name = "random-" + std::to_string(i);
    c.params = s.params_in(Case::C);
    const double tau = s.uniform(0.5, 4.0);
    c.schedule.segments = {{0.0, NoControl{}, tau},
                           {s.uniform(1.0, 50.0), ConstantControl{s.uniform(-0.3, 0.3)}, tau},
                           {s.uniform(60.0, 90.0), PyragasControl{s.uniform(0.0, 4.0)}, tau}};
    c.phi = s.history();
    c.horizon = s.uniform(100.0, 300.0);
    const auto text = dump_config(c);
    const auto back = parse_config(text);
    EXPECT_EQ(back.phi, c.phi);
    EXPECT_EQ(back.horizon, c.horizon);
    EXPECT_EQ(back.params.n, c.params.n);
    EXPECT_EQ(std::get<PyragasControl>(back.schedule.segments[2].law).k,
              std::get<PyragasControl>(c.schedule.segments[2].law).k);
    EXPECT_EQ(dump_config(back), text);
  }
}

TEST(Property, VerdictStableUnderWindowShift) {
  // Moving the window by one delay does not change the verdict.
  Sampler s(11);
  for (int i = 0; i < 10; ++i) {
    const bool converging = i % 2 == 0;
    const auto p = s.params_in(converging ? Case::B : Case::C);
    const double tau = converging ? s.uniform(0.5, 2.0) : 1.0;
    const ControlLaw law = converging ? ControlLaw{NoControl{}}
                                      : ControlLaw{PyragasControl{pyragas_design(p).k_py + 0.5}};
    const auto traj = run(p, law, tau, s.history(), 300.0 * tau);
    const auto a = classify_tail(traj, {150.0 * tau, 250.0 * tau}, tau);
    const auto b = classify_tail(traj, {151.0 * tau, 251.0 * tau}, tau);
    EXPECT_EQ(a.verdict, b.verdict) << i;
    EXPECT_NEAR(a.limit, b.limit, 1e-4) << i;
  }
  const auto fig = run({1.0, 2.0, 9.65}, ConstantControl{0.39}, 3.0,
                       InitialFunction::sinusoid(2.0, 0.02, 1.0), 400.0);
  const auto a = classify_tail(fig, {200.0, 360.0}, 3.0);
  const auto b = classify_tail(fig, {203.0, 363.0}, 3.0);
  ASSERT_EQ(a.verdict, Verdict::Periodic);
  EXPECT_EQ(b.verdict, Verdict::Periodic);
  EXPECT_EQ(a.peak_count, b.peak_count);
  EXPECT_NEAR(a.period, b.period, 1e-3 * a.period);
}

TEST(Property, PyragasAboveThresholdSettlesAtEquilibrium) {
  Sampler s(12);
  for (int i = 0; i < 10; ++i) {
    const auto p = s.params_in(Case::C);
    const double tau = s.uniform(0.5, 3.0);
    const double k = pyragas_design(p).k_py + s.uniform(0.05, 2.0);
    ScenarioConfig c;
    c.params = p;
    c.schedule.segments = {{0.0, PyragasControl{k}, tau}};
    c.phi = s.history();
    c.horizon = 200.0 * tau;
    const auto v = run_scenario(c).segments.front().verdict;
    EXPECT_EQ(v.verdict, Verdict::Steady) << i;
    EXPECT_NEAR(v.limit, *positive_equilibrium(p), 1e-3) << i;
  }
}
