#pragma once

#include <optional>
#include <string_view>

namespace mgc {

/// Decay rate, feedback amplitude and Hill exponent of the Mackey-Glass
/// nonlinearity f(x) = p x / (1 + x^n). The delay is not part of the model
/// parameters; it belongs to the control schedule.
struct MGParams {
  double mu = 1.0;
  double p = 2.0;
  double n = 10.0;

  /// Throws ParameterError unless mu > 0, p > 0 and n > 2.
  void validate() const;

  /// Same parameters with a different decay rate. Proportional control acts
  /// exactly like a change of decay, mu -> mu - k.
  [[nodiscard]] MGParams with_decay(double decay) const { return {decay, p, n}; }
};

/// x^n for x >= 0 through exp(n ln x), with 0^n = 0. n is usually non-integer.
[[nodiscard]] double hill_power(double x, double n);

[[nodiscard]] double f_value(const MGParams& params, double xi);
[[nodiscard]] double f_derivative(const MGParams& params, double xi);

/// Unique critical point of f, (n-1)^(-1/n).
[[nodiscard]] double critical_point(const MGParams& params);

/// Value of f at its maximum, p (n-1)^(1-1/n) / n.
[[nodiscard]] double f_max(const MGParams& params);

/// Global minimum of f', reached where x^n = (n+1)/(n-1): -p (n-1)^2 / (4n).
[[nodiscard]] double f_derivative_min(const MGParams& params);

/// Positive equilibrium (p/mu - 1)^(1/n), absent when mu >= p.
[[nodiscard]] std::optional<double> positive_equilibrium(const MGParams& params);

struct Landmarks {
  double xi0 = 0.0;
  std::optional<double> K;
  double f_max = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  /// Point below xi0 with f(K_hat) = f(K); only in case C.
  std::optional<double> K_hat;
};

[[nodiscard]] Landmarks landmarks(const MGParams& params);

/// A: mu >= p, only the zero equilibrium.
/// B: mu < p <= mu (1 + 1/(n-1)), K on the increasing branch.
/// C: p > mu (1 + 1/(n-1)), K > xi0 on the decreasing branch.
enum class Case { A, B, C };

[[nodiscard]] Case classify_case(const MGParams& params);
[[nodiscard]] std::string_view to_string(Case c);

struct ConditionReport {
  bool holds = false;
  double margin = 0.0;  // lhs - xi0
  double lhs = 0.0;
};

/// Delay-independent certificate g(g(xi0)) > xi0 with g = f / mu.
/// Throws CaseError outside case C.
[[nodiscard]] ConditionReport check_L(const MGParams& params);

/// Delay-dependent certificate h(h(xi0)) > xi0 where
/// h(x) = (1 - e^(-mu tau)) g(x) + e^(-mu tau) K. Throws CaseError outside
/// case C and ParameterError for tau <= 0.
[[nodiscard]] ConditionReport check_T(const MGParams& params, double tau);

}  // namespace mgc
