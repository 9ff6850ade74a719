#include "mgc/dde.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mgc/error.hpp"

namespace mgc {

std::size_t SystemRHS::piece_index(double t) const {
  if (pieces.empty()) throw ConfigError("system has no pieces");
  auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                             [](double v, const RhsPiece& p) { return v < p.start; });
  if (it == pieces.begin()) return 0;
  return static_cast<std::size_t>(std::distance(pieces.begin(), it) - 1);
}

const RhsPiece& SystemRHS::piece_at(double t) const { return pieces[piece_index(t)]; }

History History::from(const InitialFunction& phi) {
  return {[phi](double t) { return phi.value(t); }, phi.lower_bound()};
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ControlSwitch: return "control-switch";
    case EventKind::FeasibilityLoss: return "feasibility-loss";
    case EventKind::Horizon: return "horizon";
  }
  return "horizon";
}

double Trajectory::Step::value(double t) const {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * x0 + (s3 - 2.0 * s2 + s) * h * d0 +
         (-2.0 * s3 + 3.0 * s2) * x1 + (s3 - s2) * h * d1;
}

double Trajectory::Step::slope(double t) const {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  return ((6.0 * s2 - 6.0 * s) * (x0 - x1)) / h + (3.0 * s2 - 4.0 * s + 1.0) * d0 +
         (3.0 * s2 - 2.0 * s) * d1;
}

std::optional<double> Trajectory::feasibility_loss_time() const {
  for (const auto& e : events_) {
    if (e.kind == EventKind::FeasibilityLoss) return e.time;
  }
  return std::nullopt;
}

Trajectory::Step Trajectory::step(std::size_t i) const {
  double d1 = dx_[i + 1];
  // Switch nodes carry a second (left) derivative; left_dx_ is sorted by index.
  auto it = std::lower_bound(left_dx_.begin(), left_dx_.end(), i + 1,
                             [](const auto& e, std::size_t idx) { return e.first < idx; });
  if (it != left_dx_.end() && it->first == i + 1) d1 = it->second;
  return {t_[i], t_[i + 1], x_[i], x_[i + 1], dx_[i], d1};
}

std::size_t Trajectory::step_index(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  auto idx = static_cast<std::size_t>(std::distance(t_.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, t_.size() - 2);
}

double Trajectory::value(double t) const {
  if (t_.empty()) throw OutOfRange("empty trajectory");
  if (t < t_.front()) {
    if (t < history_.lower_bound) {
      throw OutOfRange("t = " + std::to_string(t) + " precedes the history");
    }
    return history_.value(t);
  }
  if (t > t_.back()) {
    throw OutOfRange("t = " + std::to_string(t) + " is past the end of the trajectory");
  }
  if (t_.size() == 1) return x_.front();
  const std::size_t i = step_index(t);
  if (t == t_[i]) return x_[i];
  if (t == t_[i + 1]) return x_[i + 1];
  return step(i).value(t);
}

double Trajectory::slope(double t) const {
  if (t_.size() < 2 || t < t_.front() || t > t_.back()) {
    throw OutOfRange("slope requested outside the committed span");
  }
  return step(step_index(t)).slope(t);
}

double dense_eval(const Trajectory& traj, double t) { return traj.value(t); }

class Integrator {
 public:
  Integrator(const SystemRHS& rhs, History history, double t0)
      : rhs_(rhs) {
    traj_.history_ = std::move(history);
    traj_.t_.push_back(t0);
    traj_.x_.push_back(traj_.history_.value(t0));
  }

  Trajectory run(double t_end, double h) {
    const double t0 = traj_.t_.front();
    std::vector<double> breaks{t0};
    for (const auto& piece : rhs_.pieces) {
      if (piece.start > t0 && piece.start < t_end) breaks.push_back(piece.start);
    }
    breaks.push_back(t_end);

    const RhsPiece* law = &rhs_.piece_at(t0);
    above_ = initial_side(*law);
    traj_.dx_.push_back(derivative(*law, t0, traj_.x_.back(), above_));

    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
      const double a = breaks[j];
      const double b = breaks[j + 1];
      if (j > 0) {
        law = &rhs_.piece_at(a);
        above_ = initial_side(*law);
        sliding_ = false;
        mark_jump(derivative(*law, a, traj_.x_.back(), above_));
        traj_.events_.push_back({a, EventKind::ControlSwitch});
      }
      const auto steps = static_cast<long>(std::ceil((b - a) / h - 1e-9));
      const double hs = (b - a) / static_cast<double>(steps);
      for (long i = 0; i < steps; ++i) {
        const double t_next = (i + 1 == steps) ? b : a + static_cast<double>(i + 1) * hs;
        if (!advance(*law, t_next)) return finish();
      }
    }
    traj_.events_.push_back({traj_.t_.back(), EventKind::Horizon});
    return finish();
  }

 private:
  struct Trial {
    double x_next;
    double d_next;
  };

  bool initial_side(const RhsPiece& law) const {
    return law.delay_switch && traj_.x_.back() >= law.delay_switch->threshold;
  }

  double delay_for(const RhsPiece& law, double x, bool above) const {
    if (law.delay_switch) return above ? law.delay_switch->above : law.delay_switch->below;
    return law.delay(x);
  }

  double derivative(const RhsPiece& law, double t, double x, bool above) const {
    const double d = delay_for(law, x, above);
    if (!(d >= rhs_.d_min * (1.0 - 1e-12) && d <= rhs_.d_max * (1.0 + 1e-12))) {
      throw Error("delay " + std::to_string(d) + " outside declared bounds");
    }
    // h < d_min keeps t - d inside the committed part of the trajectory.
    return -law.decay * x + law.feedback(traj_.value(t - d));
  }

  Trial rk4(const RhsPiece& law, double t, double t_next, bool above) const {
    const double hs = t_next - t;
    const double x = traj_.x_.back();
    const double k1 = traj_.dx_.back();
    const double k2 = derivative(law, t + 0.5 * hs, x + 0.5 * hs * k1, above);
    const double k3 = derivative(law, t + 0.5 * hs, x + 0.5 * hs * k2, above);
    const double k4 = derivative(law, t_next, x + hs * k3, above);
    const double x_next = x + hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return {x_next, derivative(law, t_next, x_next, above)};
  }

  // Last node gets a new right derivative; the old one stays as left limit.
  void mark_jump(double right_derivative) {
    const std::size_t node = traj_.t_.size() - 1;
    if (traj_.left_dx_.empty() || traj_.left_dx_.back().first != node) {
      traj_.left_dx_.emplace_back(node, traj_.dx_.back());
    }
    traj_.dx_.back() = right_derivative;
  }

  void commit(double t, const Trial& trial) {
    traj_.t_.push_back(t);
    traj_.x_.push_back(trial.x_next);
    traj_.dx_.push_back(trial.d_next);
  }

  // Time in [t, t1] where the trial Hermite cubic meets `level`; t when the
  // cubic starts on the far side already.
  static double crossing(const Trajectory::Step& st, double level) {
    double lo = st.t0;
    double hi = st.t1;
    const bool start_above = st.value(lo) >= level;
    if (start_above == (st.value(hi) >= level)) return lo;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      ((st.value(mid) >= level) == start_above ? lo : hi) = mid;
    }
    return hi;
  }

  // First time the step leaves the `above` side of `level`, counting brief
  // excursions that return before the step ends.
  static std::optional<double> first_crossing(const Trajectory::Step& st, double level,
                                              bool above) {
    const auto outside = [&](double v) { return (v >= level) != above; };
    if (outside(st.x1)) return crossing(st, level);
    const double s0 = st.slope(st.t0);
    const double s1 = st.slope(st.t1);
    if (!((s0 > 0.0 && s1 < 0.0) || (s0 < 0.0 && s1 > 0.0))) return std::nullopt;
    double lo = st.t0;
    double hi = st.t1;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      ((st.slope(mid) > 0.0) == (s0 > 0.0) ? lo : hi) = mid;
    }
    if (!outside(st.value(lo))) return std::nullopt;
    return crossing({st.t0, lo, st.x0, st.value(lo), st.d0, st.slope(lo)}, level);
  }

  // Next pending derivative kink strictly inside (t, t_next), else t_next.
  double target(double t, double t_next) {
    const double tiny = 1e-9 * (t_next - t);
    while (!kinks_.empty() && *kinks_.begin() <= t + tiny) kinks_.erase(kinks_.begin());
    if (!kinks_.empty() && *kinks_.begin() < t_next - tiny) return *kinks_.begin();
    return t_next;
  }

  // A delay switch at t_c kinks x' at t_c and resurfaces one delay later.
  void record_switch(const RhsPiece::DelaySwitch& sw, double t_c) {
    kinks_.insert(t_c + sw.below);
    kinks_.insert(t_c + sw.above);
  }

  // Both one-sided fields point into the threshold: the state slides on it.
  bool slides(const RhsPiece& law, double t) const {
    const double level = law.delay_switch->threshold;
    return derivative(law, t, level, false) > 0.0 && derivative(law, t, level, true) < 0.0;
  }

  // Called right after the side flipped at the last node.
  void after_flip(const RhsPiece& law) {
    const double t = traj_.t_.back();
    record_switch(*law.delay_switch, t);
    if (slides(law, t)) {
      sliding_ = true;
      traj_.x_.back() = law.delay_switch->threshold;
      mark_jump(0.0);
    } else {
      mark_jump(derivative(law, t, traj_.x_.back(), above_));
    }
  }

  void slide(const RhsPiece& law, double t, double t_to) {
    const double level = law.delay_switch->threshold;
    if (slides(law, t_to)) {
      commit(t_to, {level, 0.0});
      return;
    }
    double lo = t;
    double hi = t_to;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (slides(law, mid) ? lo : hi) = mid;
    }
    if (hi - t > 1e-9 * (t_to - t)) commit(hi, {level, 0.0});
    sliding_ = false;
    above_ = derivative(law, hi, level, true) >= 0.0;
    record_switch(*law.delay_switch, traj_.t_.back());
    mark_jump(derivative(law, hi, level, above_));
  }

  bool advance(const RhsPiece& law, double t_next) {
    int stalled_flips = 0;
    while (traj_.t_.back() < t_next) {
      const double t = traj_.t_.back();
      const double x = traj_.x_.back();
      const double t_to = law.delay_switch ? target(t, t_next) : t_next;
      if (sliding_) {
        slide(law, t, t_to);
        continue;
      }
      Trial trial = rk4(law, t, t_to, above_);

      const Trajectory::Step st{t, t_to, x, trial.x_next, traj_.dx_.back(), trial.d_next};
      const std::optional<double> t_hit =
          law.delay_switch && stalled_flips < 2
              ? first_crossing(st, law.delay_switch->threshold, above_)
              : std::nullopt;
      if (t_hit) {
        const double t_cross = *t_hit;
        if (t_cross - t > 1e-6 * (t_to - t) && t_to - t_cross > 1e-9 * (t_to - t)) {
          const Trial part = rk4(law, t, t_cross, above_);
          if (!feasible(t, t_cross, part)) return false;
          commit(t_cross, part);
          stalled_flips = 0;
        } else {
          ++stalled_flips;
        }
        above_ = !above_;
        after_flip(law);
        continue;
      }

      if (!feasible(t, t_to, trial)) return false;
      commit(t_to, trial);
      stalled_flips = 0;
    }
    return true;
  }

  bool feasible(double t, double t_next, const Trial& trial) {
    if (!rhs_.monitor_feasibility) return true;
    if (!(trial.x_next < 0.0 || (trial.x_next == 0.0 && trial.d_next < 0.0))) return true;
    const Trajectory::Step st{t, t_next, traj_.x_.back(), trial.x_next, traj_.dx_.back(),
                              trial.d_next};
    const double lost = trial.x_next == 0.0 ? t_next : crossing(st, 0.0);
    traj_.events_.push_back({lost, EventKind::FeasibilityLoss});
    return false;
  }

  Trajectory finish() { return std::move(traj_); }

  const SystemRHS& rhs_;
  Trajectory traj_;
  bool above_ = false;
  bool sliding_ = false;
  std::set<double> kinks_;
};

Trajectory integrate_from(const SystemRHS& rhs, History history, double t0, double t_end,
                          double h) {
  if (rhs.pieces.empty()) throw ConfigError("system has no pieces");
  if (!(rhs.d_min > 0.0) || rhs.d_max < rhs.d_min) {
    throw ParameterError("delay bounds must satisfy 0 < d_min <= d_max");
  }
  if (!(h > 0.0)) throw ParameterError("step must be > 0");
  if (!(h < rhs.d_min / 10.0)) {
    throw StepTooLarge("step " + std::to_string(h) + " must be < d_min/10 = " +
                       std::to_string(rhs.d_min / 10.0));
  }
  if (!(t_end > t0)) throw ParameterError("horizon must be after the start time");
  if (history.lower_bound > t0 - rhs.d_max) {
    throw HistoryGap("history must cover [t0 - d_max, t0]");
  }
  return Integrator(rhs, std::move(history), t0).run(t_end, h);
}

Trajectory integrate(const SystemRHS& rhs, const InitialFunction& phi, double horizon,
                     double h) {
  Trajectory traj = integrate_from(rhs, History::from(phi), 0.0, horizon, h);
  traj.phi_ = phi;
  return traj;
}

double convergence_order(const SystemRHS& rhs, const InitialFunction& phi, double horizon,
                         TimeWindow window, double h) {
  const Trajectory coarse = integrate(rhs, phi, horizon, h);
  const Trajectory mid = integrate(rhs, phi, horizon, h / 2.0);
  const Trajectory fine = integrate(rhs, phi, horizon, h / 4.0);
  double e1 = 0.0;
  double e2 = 0.0;
  for (double t : coarse.times()) {
    if (t < window.start || t > window.end) continue;
    const double xm = mid.value(t);
    e1 = std::max(e1, std::abs(coarse.value(t) - xm));
    e2 = std::max(e2, std::abs(xm - fine.value(t)));
  }
  if (!(e2 > 0.0)) throw Error("convergence_order: differences vanished on the window");
  return std::log2(e1 / e2);
}

}  // namespace mgc
