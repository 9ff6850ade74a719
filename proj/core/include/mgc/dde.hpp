#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mgc/initial_function.hpp"

namespace mgc {

/// One time interval of x'(t) = -decay x(t) + feedback(x(t - delay(x(t)))).
/// A piece is active from `start` until the next piece begins.
struct RhsPiece {
  double start = 0.0;
  double decay = 0.0;
  std::function<double(double)> feedback;
  /// Delay as a function of the current state; constant delays ignore it.
  std::function<double(double)> delay;

  /// Delay that jumps from `below` to `above` when x crosses `threshold`.
  /// When set it replaces `delay`; crossings are located and steps are split
  /// there so each step sees a single branch.
  struct DelaySwitch {
    double threshold = 0.0;
    double below = 0.0;
    double above = 0.0;
  };
  std::optional<DelaySwitch> delay_switch;
};

/// Scalar delay differential equation with piecewise-in-time laws.
struct SystemRHS {
  std::vector<RhsPiece> pieces;
  double d_min = 0.0;
  double d_max = 0.0;
  /// Stop at the first crossing below zero (feasibility loss).
  bool monitor_feasibility = true;

  [[nodiscard]] const RhsPiece& piece_at(double t) const;
  [[nodiscard]] std::size_t piece_index(double t) const;
};

/// Value of the solution before the integration start.
struct History {
  std::function<double(double)> value;
  double lower_bound = 0.0;

  static History from(const InitialFunction& phi);
};

enum class EventKind { ControlSwitch, FeasibilityLoss, Horizon };

[[nodiscard]] std::string_view to_string(EventKind kind);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Horizon;
  friend bool operator==(const Event&, const Event&) = default;
};

/// Dense numerical solution: nodes, states, node derivatives and event log.
/// Between nodes the solution is the cubic Hermite interpolant; before the
/// start it is the history.
class Trajectory {
 public:
  [[nodiscard]] std::span<const double> times() const { return t_; }
  [[nodiscard]] std::span<const double> states() const { return x_; }
  /// Derivative at each node as seen by the step that starts there (the last
  /// node keeps the derivative of the step that ends there).
  [[nodiscard]] std::span<const double> derivs() const { return dx_; }
  [[nodiscard]] const std::vector<Event>& events() const { return events_; }
  [[nodiscard]] const History& history() const { return history_; }
  [[nodiscard]] const std::optional<InitialFunction>& initial_function() const { return phi_; }

  [[nodiscard]] std::size_t size() const { return t_.size(); }
  [[nodiscard]] double start_time() const { return t_.front(); }
  [[nodiscard]] double end_time() const { return t_.back(); }
  [[nodiscard]] std::optional<double> feasibility_loss_time() const;

  /// Dense output. Throws OutOfRange outside [history lower bound, end_time].
  [[nodiscard]] double value(double t) const;
  /// Derivative of the dense output (t must lie on the committed span).
  [[nodiscard]] double slope(double t) const;

  /// Hermite data of step i (between nodes i and i+1): value and derivative
  /// at both ends, with the derivative of the law active on that step.
  struct Step {
    double t0, t1, x0, x1, d0, d1;
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double slope(double t) const;
  };
  [[nodiscard]] Step step(std::size_t i) const;
  [[nodiscard]] std::size_t step_count() const { return t_.empty() ? 0 : t_.size() - 1; }
  /// Index of the step containing t (t on the committed span).
  [[nodiscard]] std::size_t step_index(double t) const;

 private:
  friend class Integrator;
  friend Trajectory integrate(const SystemRHS&, const InitialFunction&, double, double);

  std::vector<double> t_;
  std::vector<double> x_;
  std::vector<double> dx_;
  // Left derivatives at law switches, where the derivative jumps.
  std::vector<std::pair<std::size_t, double>> left_dx_;
  std::vector<Event> events_;
  History history_;
  std::optional<InitialFunction> phi_;
};

/// Classic RK4 method of steps with Hermite continuous extension.
/// Requires h < d_min / 10 so every delayed stage reads the committed past.
/// Throws StepTooLarge, HistoryGap or ParameterError on bad input.
[[nodiscard]] Trajectory integrate(const SystemRHS& rhs, const InitialFunction& phi,
                                   double horizon, double h);

/// Continue from an arbitrary history at time `t0` up to `t_end`.
[[nodiscard]] Trajectory integrate_from(const SystemRHS& rhs, History history, double t0,
                                        double t_end, double h);

[[nodiscard]] double dense_eval(const Trajectory& traj, double t);

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
  [[nodiscard]] double length() const { return end - start; }
};

/// Empirical order from runs at h, h/2 and h/4 compared in max norm on
/// `window`: log2(|x_h - x_{h/2}| / |x_{h/2} - x_{h/4}|).
[[nodiscard]] double convergence_order(const SystemRHS& rhs, const InitialFunction& phi,
                                       double horizon, TimeWindow window, double h);

}  // namespace mgc
