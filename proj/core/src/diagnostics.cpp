#include "mgc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "mgc/error.hpp"

namespace mgc {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Steady: return "Steady";
    case Verdict::Periodic: return "Periodic";
    case Verdict::Irregular: return "Irregular";
    case Verdict::Unfeasible: return "Unfeasible";
  }
  return "Irregular";
}

std::vector<Peak> peak_map(const Trajectory& traj, TimeWindow window) {
  if (traj.size() < 2 || !(window.end > window.start) || window.end <= traj.start_time() ||
      window.start >= traj.end_time()) {
    throw EmptyWindow("window contains no trajectory step");
  }
  const double lo = std::max(window.start, traj.start_time());
  const double hi = std::min(window.end, traj.end_time());
  std::vector<Peak> peaks;
  const std::size_t first = traj.step_index(lo);
  const std::size_t last = traj.step_index(hi);
  for (std::size_t i = first; i <= last; ++i) {
    const auto st = traj.step(i);
    if (!(st.d0 > 0.0 && st.d1 <= 0.0)) continue;
    double a = st.t0;
    double b = st.t1;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (a + b);
      (st.slope(mid) > 0.0 ? a : b) = mid;
    }
    const double t = 0.5 * (a + b);
    if (t < lo || t > hi) continue;
    peaks.push_back({t, st.value(t)});
  }
  return peaks;
}

namespace {

bool close_rel(double a, double b, double eps) {
  return std::abs(a - b) <= eps * std::max(std::abs(a), std::abs(b));
}

// Smallest m such that values and spacings repeat with period m, observed at
// least three full times.
int pattern_period(const std::vector<Peak>& peaks, const ClassifyOptions& opt) {
  const auto count = static_cast<int>(peaks.size());
  for (int m = 1; m <= opt.max_period; ++m) {
    if (count < 3 * m + 1) break;
    bool ok = true;
    for (int j = 0; ok && j + m < count; ++j) {
      ok = close_rel(peaks[j].value, peaks[j + m].value, opt.eps_per);
    }
    for (int j = 0; ok && j + m + 1 < count; ++j) {
      const double gap_a = peaks[j + 1].time - peaks[j].time;
      const double gap_b = peaks[j + m + 1].time - peaks[j + m].time;
      ok = close_rel(gap_a, gap_b, opt.eps_per);
    }
    if (ok) return m;
  }
  return 0;
}

}  // namespace

TailClassification classify_tail(const Trajectory& traj, TimeWindow window, double delay,
                                 ClassifyOptions options) {
  TailClassification out;
  out.window = window;
  out.tolerances = options;

  if (auto lost = traj.feasibility_loss_time(); lost && *lost <= window.end) {
    out.verdict = Verdict::Unfeasible;
    out.stop_time = *lost;
    return out;
  }
  if (window.length() < 10.0 * delay) {
    throw WindowTooShort("classification window must span at least 10 delays");
  }
  if (window.start < traj.start_time() || window.end > traj.end_time()) {
    throw EmptyWindow("classification window exceeds the trajectory");
  }

  const auto times = traj.times();
  const auto states = traj.states();
  double lo = traj.value(window.start);
  double hi = lo;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.start || times[i] > window.end) continue;
    lo = std::min(lo, states[i]);
    hi = std::max(hi, states[i]);
    sum += states[i];
    ++used;
  }
  const auto peaks = peak_map(traj, window);
  for (const auto& pk : peaks) hi = std::max(hi, pk.value);
  out.amplitude = hi - lo;

  if (out.amplitude < options.eps_eq) {
    out.verdict = Verdict::Steady;
    out.limit = used > 0 ? sum / static_cast<double>(used) : lo;
    return out;
  }
  if (const int m = pattern_period(peaks, options); m > 0) {
    out.verdict = Verdict::Periodic;
    out.peak_count = m;
    const auto last = peaks.size() - 1;
    out.period = peaks[last].time - peaks[last - static_cast<std::size_t>(m)].time;
    return out;
  }
  out.verdict = Verdict::Irregular;
  return out;
}

std::optional<double> divergence_exponent(const SystemRHS& rhs, const InitialFunction& phi,
                                          double horizon, DivergenceOptions options) {
  const double h = options.step > 0.0 ? options.step : rhs.d_min / 100.0;
  const double interval = options.renormalize_every > 0.0 ? options.renormalize_every : rhs.d_max;
  const double delta = options.perturbation;

  std::mt19937_64 rng(options.seed);
  const double sign = (rng() & 1U) ? -1.0 : 1.0;
  // Both runs restart on the same grid so their difference carries no
  // interpolation error.
  History ref_hist = History::from(phi);
  History hist{[phi, shift = sign * delta](double s) { return phi.value(s) + shift; },
               phi.lower_bound()};

  double log_sum = 0.0;
  double t = 0.0;
  while (t < horizon - 1e-12) {
    const double t_next = std::min(t + interval, horizon);
    auto ref = std::make_shared<const Trajectory>(integrate_from(rhs, ref_hist, t, t_next, h));
    auto twin = std::make_shared<const Trajectory>(integrate_from(rhs, hist, t, t_next, h));
    if (ref->feasibility_loss_time() || twin->feasibility_loss_time()) return std::nullopt;
    // Sup-norm separation over the last max-delay stretch. State-triggered
    // nodes can differ between the runs; those fall back to dense output.
    const bool common = std::ranges::equal(ref->times(), twin->times());
    double sep = 0.0;
    const auto times = twin->times();
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] < t_next - rhs.d_max) continue;
      const double base = common ? ref->states()[i] : ref->value(times[i]);
      sep = std::max(sep, std::abs(twin->states()[i] - base));
    }
    sep = std::max(sep, 1e-300);
    log_sum += std::log(sep / delta);

    const double scale = delta / sep;
    ref_hist = History{[ref](double s) { return ref->value(s); }, ref->history().lower_bound};
    hist = History{[ref, twin, scale](double s) {
                     const double base = ref->value(s);
                     return base + scale * (twin->value(s) - base);
                   },
                   twin->history().lower_bound};
    t = t_next;
  }
  return log_sum / horizon;
}

std::optional<double> monotone_domain_entry(const Trajectory& traj, double xi0) {
  const auto times = traj.times();
  const auto states = traj.states();
  if (states.empty() || !(states.back() > xi0)) return std::nullopt;
  std::size_t i = states.size() - 1;
  while (i > 0 && states[i - 1] > xi0) --i;
  return times[i];
}

}  // namespace mgc
