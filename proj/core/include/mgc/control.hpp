#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mgc/model.hpp"

namespace mgc {

// ---------------------------------------------------------------------------
// Constant perturbation u(t) = k
// ---------------------------------------------------------------------------

/// Sign function of the shifted (L)-analogue: D(k) = f((f(xi0) + k)/mu) - mu xi0 + k.
/// Positive D means every solution of the perturbed system ends up where the
/// shifted feedback is decreasing. Case C only.
[[nodiscard]] double D_value(const MGParams& params, double k);

/// Positive roots of mu x = f(x) + k, ascending.
[[nodiscard]] std::vector<double> shifted_equilibria(const MGParams& params, double k);

struct ConstantThresholds {
  MGParams params;
  double xi_mu = 0.0;  // tangency point, f'(xi_mu) = mu
  double k1 = 0.0;     // below: no equilibria, solutions become unfeasible
  double k2 = 0.0;     // D(k2) = 0
  std::optional<double> k3;
  std::optional<double> k_star;

  [[nodiscard]] std::vector<double> equilibria(double k) const {
    return shifted_equilibria(params, k);
  }
  /// k in (k2, k3): D > 0 right above k2.
  [[nodiscard]] bool in_lower_window(double k) const;
  /// k >= k_star: D > 0 up to mu xi0 (and trivially beyond).
  [[nodiscard]] bool in_upper_window(double k) const;
};

/// k1 = mu xi_mu - f(xi_mu); k2 = mu xi0 - f(xi0); k3 and k_star are the
/// roots of D on (k2, mu xi0], located by a 1e-3 scan and 1e-6 bisection.
[[nodiscard]] ConstantThresholds constant_thresholds(const MGParams& params);

// ---------------------------------------------------------------------------
// Proportional feedback u(t) = k x(t); effective decay w = mu - k
// ---------------------------------------------------------------------------

/// S(w) = g~^2(xi0) / xi0 for the system with decay w, in closed form.
[[nodiscard]] double S_value(const MGParams& params, double w);

struct ProportionalThresholds {
  double w0 = 0.0;      // S(w0) = 1, w0 = f(xi0)/xi0
  double w_hat = 0.0;   // maximiser of S
  double w_star = 0.0;  // S(w_star) = 1, w_star < w_hat
  /// Controls k in (mu - w0, mu - w_star) satisfy (L) for the controlled system.
  std::pair<double, double> k_window{0.0, 0.0};

  [[nodiscard]] bool in_window(double k) const {
    return k > k_window.first && k < k_window.second;
  }
};

[[nodiscard]] ProportionalThresholds proportional_thresholds(const MGParams& params);

/// (L) for the proportionally controlled system, i.e. with decay mu - k.
[[nodiscard]] ConditionReport proportional_L_check(const MGParams& params, double k);

/// (T) for the proportionally controlled system with delay tau.
[[nodiscard]] ConditionReport proportional_T_check(const MGParams& params, double k, double tau);

// ---------------------------------------------------------------------------
// Pyragas control u(t) = k [x(t - tau) - x(t)]
// ---------------------------------------------------------------------------

/// Delayed nonlinearity of the Pyragas-controlled system, F_k(x) = f(x) + k x.
[[nodiscard]] double pyragas_feedback(const MGParams& params, double k, double xi);

struct PyragasDesign {
  /// Above this gain F_k is increasing and every solution converges to K.
  double k_py = 0.0;
};

[[nodiscard]] PyragasDesign pyragas_design(const MGParams& params);

/// Local extrema q1 < q2 of F_k for 0 < k < k_py (roots of f'(x) = -k).
[[nodiscard]] std::pair<double, double> pyragas_extrema(const MGParams& params, double k);

// ---------------------------------------------------------------------------
// State-dependent delay x'(t) = -mu x(t) + f(x(t - r(x(t))))
// ---------------------------------------------------------------------------

enum class DelayKind { Smooth, Step };

struct StepDelay {
  double threshold = 0.0;
  double low = 0.0;   // delay used below the threshold
  double high = 0.0;  // delay used at or above it
};

/// Delay function r(x) plus the numbers it was derived from. Immutable value.
struct DelayDesign {
  DelayKind kind = DelayKind::Smooth;
  double tau = 0.0;
  double tau_star = 0.0;
  double zeta = 0.0;
  double xi0 = 0.0;
  double ramp_width_used = 0.0;
  double slope_bound = 0.0;  // 1 / (f(xi0) - mu xi0)
  std::optional<StepDelay> step;
  /// Only the smooth ramp satisfies the hypotheses of the convergence result.
  bool theorem_compliant = true;

  [[nodiscard]] double delay(double x) const;
  [[nodiscard]] double operator()(double x) const { return delay(x); }
  [[nodiscard]] double min_delay() const;
  [[nodiscard]] double max_delay() const;
  /// Delay reduction k(x) = tau - r(x).
  [[nodiscard]] double control(double x) const { return tau - delay(x); }
};

/// Smooth designs use a quintic smoothstep from tau_star at xi0 to tau at
/// xi0 + 2 zeta. Step designs require `step` with 0 < low <= high.
[[nodiscard]] DelayDesign sdd_design(const MGParams& params, double tau, DelayKind kind,
                                     std::optional<StepDelay> step = std::nullopt);

}  // namespace mgc
