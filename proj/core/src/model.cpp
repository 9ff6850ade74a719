#include "mgc/model.hpp"

#include <cmath>
#include <string>

#include "mgc/error.hpp"
#include "mgc/roots.hpp"

namespace mgc {

namespace {

void require_nonnegative(double xi) {
  if (!(xi >= 0.0)) {
    throw DomainError("feedback is defined for xi >= 0, got " + std::to_string(xi));
  }
}

void require_case_c(const MGParams& params, const char* what) {
  if (classify_case(params) != Case::C) {
    throw CaseError(std::string(what) + " requires case C (K > xi0)");
  }
}

}  // namespace

void MGParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be > 0");
  if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("p must be > 0");
  if (!(n > 2.0) || !std::isfinite(n)) throw ParameterError("n must be > 2");
}

double hill_power(double x, double n) {
  if (x == 0.0) return 0.0;
  return std::exp(n * std::log(x));
}

double f_value(const MGParams& params, double xi) {
  require_nonnegative(xi);
  if (xi == 0.0) return 0.0;
  return params.p * xi / (1.0 + hill_power(xi, params.n));
}

double f_derivative(const MGParams& params, double xi) {
  require_nonnegative(xi);
  const double u = hill_power(xi, params.n);
  const double denom = 1.0 + u;
  return params.p * (1.0 - (params.n - 1.0) * u) / (denom * denom);
}

double critical_point(const MGParams& params) {
  return std::exp(-std::log(params.n - 1.0) / params.n);
}

double f_max(const MGParams& params) {
  const double n = params.n;
  return params.p * std::exp((1.0 - 1.0 / n) * std::log(n - 1.0)) / n;
}

double f_derivative_min(const MGParams& params) {
  const double n = params.n;
  return -params.p * (n - 1.0) * (n - 1.0) / (4.0 * n);
}

std::optional<double> positive_equilibrium(const MGParams& params) {
  if (params.mu >= params.p) return std::nullopt;
  return std::exp(std::log(params.p / params.mu - 1.0) / params.n);
}

Landmarks landmarks(const MGParams& params) {
  params.validate();
  Landmarks lm;
  lm.xi0 = critical_point(params);
  lm.f_max = f_max(params);
  lm.K = positive_equilibrium(params);
  lm.beta = lm.f_max / params.mu;
  lm.alpha = f_value(params, lm.beta) / params.mu;
  if (classify_case(params) == Case::C) {
    const double target = f_value(params, *lm.K);
    const auto root = roots::bisect(
        [&](double x) { return f_value(params, x) - target; }, 1e-300, lm.xi0, 1e-12, 200);
    lm.K_hat = root.x;
  }
  return lm;
}

Case classify_case(const MGParams& params) {
  params.validate();
  if (params.mu >= params.p) return Case::A;
  if (params.p <= params.mu * (1.0 + 1.0 / (params.n - 1.0))) return Case::B;
  return Case::C;
}

std::string_view to_string(Case c) {
  switch (c) {
    case Case::A: return "A";
    case Case::B: return "B";
    case Case::C: return "C";
  }
  return "?";
}

ConditionReport check_L(const MGParams& params) {
  require_case_c(params, "condition (L)");
  const double xi0 = critical_point(params);
  const double g_xi0 = f_value(params, xi0) / params.mu;
  const double lhs = f_value(params, g_xi0) / params.mu;
  return {lhs > xi0, lhs - xi0, lhs};
}

ConditionReport check_T(const MGParams& params, double tau) {
  require_case_c(params, "condition (T)");
  if (!(tau > 0.0)) throw ParameterError("tau must be > 0");
  const double xi0 = critical_point(params);
  const double K = *positive_equilibrium(params);
  const double memory = std::exp(-params.mu * tau);
  auto h = [&](double x) {
    return (1.0 - memory) * f_value(params, x) / params.mu + memory * K;
  };
  const double lhs = h(h(xi0));
  return {lhs > xi0, lhs - xi0, lhs};
}

}  // namespace mgc
