#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mgc/control.hpp"
#include "mgc/dde.hpp"
#include "mgc/diagnostics.hpp"
#include "mgc/initial_function.hpp"
#include "mgc/model.hpp"

namespace mgc {

struct NoControl {};
/// u(t) = k
struct ConstantControl {
  double k = 0.0;
};
/// u(t) = k x(t)
struct ProportionalControl {
  double k = 0.0;
};
/// u(t) = k [x(t - tau) - x(t)], k >= 0
struct PyragasControl {
  double k = 0.0;
};
/// Delay replaced by r(x(t)).
struct DelayControl {
  DelayDesign design;
};

using ControlLaw =
    std::variant<NoControl, ConstantControl, ProportionalControl, PyragasControl, DelayControl>;

[[nodiscard]] std::string_view law_name(const ControlLaw& law);
/// Gain k of an additive law; 0 for no control and delay control.
[[nodiscard]] double law_gain(const ControlLaw& law);

struct Segment {
  double t_start = 0.0;
  ControlLaw law;
  double tau = 1.0;
};

struct Schedule {
  std::vector<Segment> segments;

  /// Throws ConfigError: empty, first start != 0, starts not strictly
  /// increasing, tau <= 0, negative Pyragas gain, or a delay design whose
  /// baseline differs from the segment delay.
  void validate() const;
  [[nodiscard]] std::size_t segment_index(double t) const;
  /// Segment i spans [start_i, start_{i+1}), the last one up to `horizon`.
  [[nodiscard]] double segment_end(std::size_t i, double horizon) const;
  [[nodiscard]] double min_delay() const;
  [[nodiscard]] double max_delay() const;
};

[[nodiscard]] SystemRHS build_system(const MGParams& params, const Schedule& schedule);

/// Gain and delay in force at time t for state x; delay control reports the
/// reduction tau - r(x) as its gain and r(x) as its delay.
struct ActiveControl {
  double k = 0.0;
  double tau = 0.0;
};
[[nodiscard]] ActiveControl active_control(const Schedule& schedule, double t, double x);

struct OutputPaths {
  std::string csv;
  std::string svg;
  std::string report;
};

struct ScenarioConfig {
  std::string name;
  MGParams params;
  Schedule schedule;
  InitialFunction phi = InitialFunction::constant(1.0);
  double horizon = 100.0;
  std::optional<double> step;
  OutputPaths output;

  /// Explicit step, or the smallest delay over 100.
  [[nodiscard]] double effective_step() const;
  /// Parameters, schedule, history positivity on [-tau_max, 0], horizon.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

enum class CertificateKind {
  Regularity,   // excludes complicated (chaotic) tails
  DomainEntry,  // forces entry into f' < 0, slowly oscillatory solutions only
  Collapse,     // predicts loss of feasibility
  Growth,       // predicts unbounded growth
};

[[nodiscard]] std::string_view to_string(CertificateKind kind);

struct Certificate {
  std::string name;
  CertificateKind kind = CertificateKind::Regularity;
  bool holds = false;
  std::optional<double> margin;
  std::string detail;
};

/// Every analytic statement that applies to one segment, evaluated.
[[nodiscard]] std::vector<Certificate> segment_certificates(const MGParams& params,
                                                            const Segment& segment);

[[nodiscard]] bool regularity_certified(const std::vector<Certificate>& certs);

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

// A segment is judged on its own law run for at least `min_span_delays`
// delays from its start; shorter segments are continued in a probe run.
struct SegmentWindowPolicy {
  double min_span_delays = 80.0;
  double settle_fraction = 0.5;  // leading part of the span treated as transient
  ClassifyOptions classify;
};

struct SegmentReport {
  std::size_t index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::string law;
  double k = 0.0;
  double tau = 0.0;
  std::vector<Certificate> certificates;
  TailClassification verdict;
  /// The segment was too short for a window; the verdict comes from a probe
  /// run continuing this segment's law.
  bool probed = false;
  /// Delay-control verdicts only speak about slowly oscillatory behaviour.
  bool caveat = false;
};

/// Classification of segment i of a finished run.
[[nodiscard]] TailClassification classify_segment(const ScenarioConfig& config,
                                                  const Trajectory& traj, std::size_t i,
                                                  const SegmentWindowPolicy& policy,
                                                  bool* probed = nullptr);

struct ScenarioResult {
  ScenarioConfig config;
  double step = 0.0;
  Landmarks landmarks;
  Case param_case = Case::A;
  Trajectory trajectory;
  std::vector<SegmentReport> segments;
};

[[nodiscard]] ScenarioResult run_scenario(const ScenarioConfig& config,
                                          const SegmentWindowPolicy& policy = {});

/// Twin-run growth rate for a parameter set, schedule and history.
[[nodiscard]] std::optional<double> divergence_exponent(const MGParams& params,
                                                        const Schedule& schedule,
                                                        const InitialFunction& phi,
                                                        double horizon,
                                                        DivergenceOptions options = {});

}  // namespace mgc
