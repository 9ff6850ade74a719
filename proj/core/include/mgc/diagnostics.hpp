#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mgc/dde.hpp"

namespace mgc {

struct Peak {
  double time = 0.0;
  double value = 0.0;
};

/// Local maxima of the dense output inside `window`, located where the node
/// derivative changes sign from + to - and refined on the Hermite cubic.
/// Throws EmptyWindow when the window holds no step of the trajectory.
[[nodiscard]] std::vector<Peak> peak_map(const Trajectory& traj, TimeWindow window);

enum class Verdict { Steady, Periodic, Irregular, Unfeasible };

[[nodiscard]] std::string_view to_string(Verdict v);

struct ClassifyOptions {
  double eps_eq = 1e-4;   // absolute oscillation bound for Steady
  double eps_per = 1e-3;  // relative bound on peak values and spacings
  int max_period = 8;     // largest peak-pattern length tried
};

struct TailClassification {
  Verdict verdict = Verdict::Irregular;
  double limit = 0.0;      // Steady: mean over the window
  double period = 0.0;     // Periodic: time for one pattern repetition
  int peak_count = 0;      // Periodic: peaks per repetition
  double stop_time = 0.0;  // Unfeasible: time of the feasibility loss
  double amplitude = 0.0;  // max - min over the window
  TimeWindow window;
  ClassifyOptions tolerances;
};

/// Unfeasible when the trajectory lost feasibility before the window ends;
/// Steady when max - min < eps_eq; Periodic(m) when peak values and spacings
/// repeat with period m <= max_period at least three times; else Irregular.
/// Throws WindowTooShort when the window is shorter than 10 delays.
[[nodiscard]] TailClassification classify_tail(const Trajectory& traj, TimeWindow window,
                                               double delay, ClassifyOptions options = {});

struct DivergenceOptions {
  double perturbation = 1e-8;
  double step = 0.0;                // 0: d_min / 100
  double renormalize_every = 0.0;   // 0: d_max
  std::uint64_t seed = 0;           // picks the sign of the perturbation
};

/// Twin-trajectory growth rate of a constant perturbation of phi, rescaled to
/// its initial size after every renormalization interval (Benettin). Returns
/// nullopt when either run loses feasibility.
[[nodiscard]] std::optional<double> divergence_exponent(const SystemRHS& rhs,
                                                        const InitialFunction& phi,
                                                        double horizon,
                                                        DivergenceOptions options = {});

/// First node time T with x(t) > xi0 at every node of [T, end]; nullopt when
/// the last node is not above xi0.
[[nodiscard]] std::optional<double> monotone_domain_entry(const Trajectory& traj, double xi0);

}  // namespace mgc
