#pragma once

#include <cmath>
#include <vector>

#include "mgc/error.hpp"

namespace mgc::roots {

struct Result {
  double x;
  int iterations;
  bool converged;
};

// Plain bisection on a sign-changing bracket. Stops when the bracket is
// narrower than `tol` or after `max_iter` halvings.
template <typename F>
Result bisect(F&& fn, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
  double f_lo = fn(lo);
  const double f_hi = fn(hi);
  if (f_lo == 0.0) return {lo, 0, true};
  if (f_hi == 0.0) return {hi, 0, true};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw BracketError("bisect: root not bracketed");
  }
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = fn(mid);
    if (f_mid == 0.0) return {mid, it, true};
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo < tol) return {0.5 * (lo + hi), it, true};
  }
  return {0.5 * (lo + hi), max_iter, false};
}

// Every sign change of `fn` on [lo, hi] located by a uniform scan with spacing
// `step` and refined by bisection. Exact zeros on scan nodes are reported once.
template <typename F>
std::vector<double> scan_roots(F&& fn, double lo, double hi, double step, double tol = 1e-12) {
  std::vector<double> found;
  if (!(hi > lo) || !(step > 0.0)) return found;
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  double a = lo;
  double fa = fn(a);
  for (long i = 1; i <= n; ++i) {
    const double b = (i == n) ? hi : lo + static_cast<double>(i) * step;
    const double fb = fn(b);
    if (fa == 0.0) {
      if (found.empty() || found.back() != a) found.push_back(a);
    } else if (fb != 0.0 && (fa > 0.0) != (fb > 0.0)) {
      found.push_back(bisect(fn, a, b, tol).x);
    }
    a = b;
    fa = fb;
  }
  if (fa == 0.0 && (found.empty() || found.back() != a)) found.push_back(a);
  return found;
}

}  // namespace mgc::roots
