#include "mgc/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mgc/error.hpp"
#include "mgc/roots.hpp"

namespace mgc {

namespace {

void require_case_c(const MGParams& params, const char* what) {
  if (classify_case(params) != Case::C) {
    throw CaseError(std::string(what) + " requires case C (K > xi0)");
  }
}

// Ascending roots of a u^2 + b u + c = 0, computed without cancellation.
std::pair<double, double> quadratic_roots(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw DomainError("quadratic has no real roots");
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a;
  double r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

constexpr double kScanStep = 1e-3;
constexpr double kRefineTol = 1e-6;

}  // namespace

double D_value(const MGParams& params, double k) {
  require_case_c(params, "D(k)");
  const double xi0 = critical_point(params);
  const double arg = (f_max(params) + k) / params.mu;
  if (arg < 0.0) throw DomainError("D(k) needs f(xi0) + k >= 0");
  return f_value(params, arg) - params.mu * xi0 + k;
}

std::vector<double> shifted_equilibria(const MGParams& params, double k) {
  params.validate();
  auto balance = [&](double x) { return params.mu * x - f_value(params, x) - k; };
  const double upper = (f_max(params) + std::max(k, 0.0)) / params.mu + 1.0;
  const double lower = 1e-9 * upper;
  std::vector<double> found = roots::scan_roots(balance, lower, upper, upper * 1e-4, 1e-14);
  return found;
}

bool ConstantThresholds::in_lower_window(double k) const {
  if (!(k > k2)) return false;
  return !k3 || k < *k3;
}

bool ConstantThresholds::in_upper_window(double k) const {
  return k_star && k >= *k_star;
}

ConstantThresholds constant_thresholds(const MGParams& params) {
  require_case_c(params, "constant-perturbation thresholds");
  const double mu = params.mu;
  const double p = params.p;
  const double n = params.n;

  ConstantThresholds out;
  out.params = params;
  const double u = (-2.0 * mu - p * (n - 1.0) +
                    std::sqrt(4.0 * p * mu * n + p * p * (n - 1.0) * (n - 1.0))) /
                   (2.0 * mu);
  out.xi_mu = std::exp(std::log(u) / n);
  out.k1 = mu * out.xi_mu - f_value(params, out.xi_mu);

  const double xi0 = critical_point(params);
  out.k2 = mu * xi0 - f_max(params);

  const double top = mu * xi0;
  auto D = [&](double k) { return D_value(params, k); };
  const auto zeros = roots::scan_roots(D, out.k2 + kScanStep, top, kScanStep, kRefineTol);
  if (zeros.empty()) {
    out.k_star = out.k2;
  } else {
    out.k3 = zeros.front();
    out.k_star = zeros.back();
  }
  return out;
}

double S_value(const MGParams& params, double w) {
  if (!(w > 0.0)) throw DomainError("S(w) needs w > 0");
  const double p = params.p;
  const double n = params.n;
  // Divide numerator and denominator by n^n w^n to keep everything finite.
  const double lead = p * p * (n - 1.0) / (n * w * w);
  const double log_tail = n * std::log(p / (n * w)) + (n - 1.0) * std::log(n - 1.0);
  return lead / (1.0 + std::exp(log_tail));
}

ProportionalThresholds proportional_thresholds(const MGParams& params) {
  require_case_c(params, "proportional-control thresholds");
  const double n = params.n;
  ProportionalThresholds out;
  out.w0 = params.p * (n - 1.0) / n;
  out.w_hat = out.w0 * std::exp(std::log((n - 2.0) / (2.0 * n - 2.0)) / n);
  auto excess = [&](double w) { return S_value(params, w) - 1.0; };
  if (!(excess(out.w_hat) > 0.0)) {
    throw BracketError("S(w_hat) <= 1: no proportional window");
  }
  out.w_star = roots::bisect(excess, 1e-6 * out.w_hat, out.w_hat, 1e-14, 200).x;
  out.k_window = {params.mu - out.w0, params.mu - out.w_star};
  return out;
}

ConditionReport proportional_L_check(const MGParams& params, double k) {
  const double w = params.mu - k;
  if (!(w > 0.0)) throw DomainError("effective decay mu - k must be > 0");
  return check_L(params.with_decay(w));
}

ConditionReport proportional_T_check(const MGParams& params, double k, double tau) {
  const double w = params.mu - k;
  if (!(w > 0.0)) throw DomainError("effective decay mu - k must be > 0");
  return check_T(params.with_decay(w), tau);
}

double pyragas_feedback(const MGParams& params, double k, double xi) {
  return f_value(params, xi) + k * xi;
}

PyragasDesign pyragas_design(const MGParams& params) {
  require_case_c(params, "Pyragas design");
  return {-f_derivative_min(params)};
}

std::pair<double, double> pyragas_extrema(const MGParams& params, double k) {
  params.validate();
  const double k_py = -f_derivative_min(params);
  if (!(k > 0.0 && k < k_py)) {
    throw DomainError("F_k has interior extrema only for 0 < k < " + std::to_string(k_py));
  }
  const double p = params.p;
  const double n = params.n;
  const auto [u1, u2] = quadratic_roots(k, 2.0 * k - p * (n - 1.0), p + k);
  return {std::exp(std::log(u1) / n), std::exp(std::log(u2) / n)};
}

double DelayDesign::delay(double x) const {
  if (kind == DelayKind::Step) {
    return x < step->threshold ? step->low : step->high;
  }
  if (x <= xi0) return tau_star;
  if (ramp_width_used <= 0.0) return tau;
  const double s = (x - xi0) / ramp_width_used;
  if (s >= 1.0) return tau;
  const double smooth = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  return tau_star + (tau - tau_star) * smooth;
}

double DelayDesign::min_delay() const {
  return kind == DelayKind::Step ? step->low : tau_star;
}

double DelayDesign::max_delay() const {
  return kind == DelayKind::Step ? step->high : tau;
}

DelayDesign sdd_design(const MGParams& params, double tau, DelayKind kind,
                       std::optional<StepDelay> step) {
  require_case_c(params, "state-dependent delay design");
  if (!(tau > 0.0)) throw ParameterError("tau must be > 0");
  const Landmarks lm = landmarks(params);
  const double excess = lm.f_max - params.mu * lm.xi0;

  DelayDesign d;
  d.kind = kind;
  d.tau = tau;
  d.xi0 = lm.xi0;
  d.tau_star = std::min({tau, (*lm.K - lm.xi0) / lm.f_max, (lm.xi0 - *lm.K_hat) / lm.f_max});
  d.zeta = (tau - d.tau_star) * excess;
  d.ramp_width_used = 2.0 * d.zeta;
  d.slope_bound = 1.0 / excess;

  if (kind == DelayKind::Step) {
    if (!step) throw ConfigError("step delay design needs threshold, low and high delays");
    if (!(step->low > 0.0 && step->low <= step->high)) {
      throw ConfigError("step delay design needs 0 < low <= high");
    }
    d.step = step;
    d.theorem_compliant = false;
  }
  return d;
}

}  // namespace mgc
