#include "mgc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mgc/error.hpp"

namespace mgc {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

double segment_max_delay(const Segment& s) {
  if (const auto* dc = std::get_if<DelayControl>(&s.law)) {
    return std::max(s.tau, dc->design.max_delay());
  }
  return s.tau;
}

double segment_min_delay(const Segment& s) {
  if (const auto* dc = std::get_if<DelayControl>(&s.law)) return dc->design.min_delay();
  return s.tau;
}

// Interpolation can overshoot slightly below zero next to a collapse; the
// feedback is only defined on the nonnegative cone.
double feedback_at(const MGParams& params, double xi) {
  return f_value(params, std::max(xi, 0.0));
}

RhsPiece make_piece(const MGParams& params, const Segment& seg) {
  RhsPiece piece;
  piece.start = seg.t_start;
  const double tau = seg.tau;
  piece.delay = [tau](double) { return tau; };
  std::visit(Overloaded{
                 [&](const NoControl&) {
                   piece.decay = params.mu;
                   piece.feedback = [params](double xi) { return feedback_at(params, xi); };
                 },
                 [&](const ConstantControl& c) {
                   piece.decay = params.mu;
                   piece.feedback = [params, k = c.k](double xi) {
                     return feedback_at(params, xi) + k;
                   };
                 },
                 [&](const ProportionalControl& c) {
                   piece.decay = params.mu - c.k;
                   piece.feedback = [params](double xi) { return feedback_at(params, xi); };
                 },
                 [&](const PyragasControl& c) {
                   piece.decay = params.mu + c.k;
                   piece.feedback = [params, k = c.k](double xi) {
                     return feedback_at(params, xi) + k * xi;
                   };
                 },
                 [&](const DelayControl& c) {
                   piece.decay = params.mu;
                   piece.feedback = [params](double xi) { return feedback_at(params, xi); };
                   piece.delay = [design = c.design](double x) { return design.delay(x); };
                   if (c.design.kind == DelayKind::Step) {
                     piece.delay_switch = RhsPiece::DelaySwitch{
                         c.design.step->threshold, c.design.step->low, c.design.step->high};
                   }
                 },
             },
             seg.law);
  return piece;
}

Certificate condition_certificate(std::string name, const ConditionReport& r,
                                  std::string detail) {
  return {std::move(name), CertificateKind::Regularity, r.holds, r.margin, std::move(detail)};
}

void uncontrolled_certificates(const MGParams& params, double tau, const std::string& prefix,
                               std::vector<Certificate>& out) {
  switch (classify_case(params)) {
    case Case::A:
      out.push_back({prefix + "case-A decay", CertificateKind::Regularity, true, std::nullopt,
                     "mu >= p: every solution tends to 0"});
      break;
    case Case::B:
      out.push_back({prefix + "case-B convergence", CertificateKind::Regularity, true,
                     std::nullopt, "K <= xi0: every positive solution tends to K"});
      break;
    case Case::C:
      out.push_back(condition_certificate(prefix + "(L)", check_L(params), "g(g(xi0)) > xi0"));
      out.push_back(
          condition_certificate(prefix + "(T)", check_T(params, tau), "h(h(xi0)) > xi0"));
      break;
  }
}

}  // namespace

std::string_view law_name(const ControlLaw& law) {
  return std::visit(Overloaded{
                        [](const NoControl&) { return std::string_view("none"); },
                        [](const ConstantControl&) { return std::string_view("constant"); },
                        [](const ProportionalControl&) {
                          return std::string_view("proportional");
                        },
                        [](const PyragasControl&) { return std::string_view("pyragas"); },
                        [](const DelayControl&) { return std::string_view("delay"); },
                    },
                    law);
}

double law_gain(const ControlLaw& law) {
  return std::visit(Overloaded{
                        [](const NoControl&) { return 0.0; },
                        [](const ConstantControl& c) { return c.k; },
                        [](const ProportionalControl& c) { return c.k; },
                        [](const PyragasControl& c) { return c.k; },
                        [](const DelayControl&) { return 0.0; },
                    },
                    law);
}

void Schedule::validate() const {
  if (segments.empty()) throw ConfigError("schedule has no segments");
  if (segments.front().t_start != 0.0) throw ConfigError("first segment must start at t = 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.tau > 0.0) || !std::isfinite(s.tau)) {
      throw ConfigError("segment " + std::to_string(i) + ": tau must be > 0");
    }
    if (i > 0 && !(s.t_start > segments[i - 1].t_start)) {
      throw ConfigError("segment start times must be strictly increasing");
    }
    if (const auto* py = std::get_if<PyragasControl>(&s.law); py && py->k < 0.0) {
      throw ConfigError("Pyragas gain must be >= 0 (the nonnegative cone is not invariant)");
    }
    if (const auto* dc = std::get_if<DelayControl>(&s.law)) {
      if (std::abs(dc->design.tau - s.tau) > 1e-12 * s.tau) {
        throw ConfigError("delay design baseline must equal the segment delay");
      }
    }
  }
}

std::size_t Schedule::segment_index(double t) const {
  std::size_t i = 0;
  while (i + 1 < segments.size() && segments[i + 1].t_start <= t) ++i;
  return i;
}

double Schedule::segment_end(std::size_t i, double horizon) const {
  return i + 1 < segments.size() ? segments[i + 1].t_start : horizon;
}

double Schedule::min_delay() const {
  double d = segment_min_delay(segments.front());
  for (const auto& s : segments) d = std::min(d, segment_min_delay(s));
  return d;
}

double Schedule::max_delay() const {
  double d = 0.0;
  for (const auto& s : segments) d = std::max(d, segment_max_delay(s));
  return d;
}

SystemRHS build_system(const MGParams& params, const Schedule& schedule) {
  params.validate();
  schedule.validate();
  SystemRHS rhs;
  for (const auto& seg : schedule.segments) rhs.pieces.push_back(make_piece(params, seg));
  rhs.d_min = schedule.min_delay();
  rhs.d_max = schedule.max_delay();
  rhs.monitor_feasibility = true;
  return rhs;
}

ActiveControl active_control(const Schedule& schedule, double t, double x) {
  const auto& seg = schedule.segments[schedule.segment_index(t)];
  if (const auto* dc = std::get_if<DelayControl>(&seg.law)) {
    return {dc->design.control(x), dc->design.delay(x)};
  }
  return {law_gain(seg.law), seg.tau};
}

double ScenarioConfig::effective_step() const {
  return step ? *step : schedule.min_delay() / 100.0;
}

void ScenarioConfig::validate() const {
  params.validate();
  schedule.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be > 0");
  if (step && !(*step > 0.0)) throw ConfigError("step must be > 0");
  if (!phi.nonnegative_on(schedule.max_delay())) {
    throw ConfigError("initial function is negative on [-tau_max, 0]");
  }
}

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Regularity: return "regularity";
    case CertificateKind::DomainEntry: return "domain-entry";
    case CertificateKind::Collapse: return "collapse";
    case CertificateKind::Growth: return "growth";
  }
  return "regularity";
}

std::vector<Certificate> segment_certificates(const MGParams& params, const Segment& segment) {
  std::vector<Certificate> out;
  const double k = law_gain(segment.law);
  const bool zero_gain = !std::holds_alternative<DelayControl>(segment.law) && k == 0.0;
  if (std::holds_alternative<NoControl>(segment.law) || zero_gain) {
    uncontrolled_certificates(params, segment.tau, "", out);
    return out;
  }

  if (std::holds_alternative<ConstantControl>(segment.law)) {
    if (classify_case(params) != Case::C) return out;
    const auto thr = constant_thresholds(params);
    out.push_back({"constant k < k1", CertificateKind::Collapse, k < thr.k1, thr.k1 - k,
                   "no equilibria; solutions become unfeasible"});
    out.push_back({"constant k1 < k < k2", CertificateKind::Regularity,
                   k > thr.k1 && k < thr.k2, std::nullopt,
                   "solutions from [K1 + k/mu, xi0] converge to K2"});
    std::optional<double> d;
    if (f_max(params) + k >= 0.0) d = D_value(params, k);
    out.push_back({"constant k2 < k < k3", CertificateKind::Regularity, thr.in_lower_window(k),
                   d, "D(k) > 0 next to k2"});
    out.push_back({"constant k >= k*", CertificateKind::Regularity, thr.in_upper_window(k), d,
                   "D > 0 on [k*, mu xi0]"});
    return out;
  }

  if (std::holds_alternative<ProportionalControl>(segment.law)) {
    const double w = params.mu - k;
    if (!(w > 0.0)) {
      out.push_back({"proportional k >= mu", CertificateKind::Growth, true, k - params.mu,
                     "solutions grow without bound"});
      return out;
    }
    uncontrolled_certificates(params.with_decay(w), segment.tau, "proportional ", out);
    return out;
  }

  if (std::holds_alternative<PyragasControl>(segment.law)) {
    const double k_py = -f_derivative_min(params);
    out.push_back({"pyragas k > k_py", CertificateKind::Regularity, k > k_py, k - k_py,
                   "F_k increasing: every solution converges to K"});
    return out;
  }

  const auto& design = std::get<DelayControl>(segment.law).design;
  out.push_back({"state-dependent delay", CertificateKind::DomainEntry, design.theorem_compliant,
                 std::nullopt,
                 design.theorem_compliant
                     ? "smooth ramp: no slowly oscillatory complicated solutions"
                     : "step heuristic: hypotheses not met"});
  return out;
}

bool regularity_certified(const std::vector<Certificate>& certs) {
  return std::any_of(certs.begin(), certs.end(), [](const Certificate& c) {
    return c.kind == CertificateKind::Regularity && c.holds;
  });
}

TailClassification classify_segment(const ScenarioConfig& config, const Trajectory& traj,
                                     std::size_t i, const SegmentWindowPolicy& policy,
                                     bool* probed) {
  const auto& segs = config.schedule.segments;
  const double a = segs[i].t_start;
  const double b = config.schedule.segment_end(i, config.horizon);
  const double delay = segment_max_delay(segs[i]);
  const double span = std::max(b - a, policy.min_span_delays * delay);
  if (probed) *probed = false;

  if (auto lost = traj.feasibility_loss_time(); lost && *lost <= b) {
    TailClassification out;
    out.verdict = Verdict::Unfeasible;
    out.stop_time = *lost;
    out.window = {a, b};
    out.tolerances = policy.classify;
    return out;
  }

  const TimeWindow window{a + policy.settle_fraction * span, a + span};
  if (a + span <= b) return classify_tail(traj, window, delay, policy.classify);

  Schedule prefix;
  prefix.segments.assign(segs.begin(), segs.begin() + static_cast<long>(i) + 1);
  const auto rhs = build_system(config.params, prefix);
  const auto probe = integrate(rhs, config.phi, a + span, config.effective_step());
  if (probed) *probed = true;
  return classify_tail(probe, window, delay, policy.classify);
}

ScenarioResult run_scenario(const ScenarioConfig& config, const SegmentWindowPolicy& policy) {
  config.validate();
  const auto rhs = build_system(config.params, config.schedule);
  const double h = config.effective_step();

  ScenarioResult result{config, h, landmarks(config.params), classify_case(config.params),
                        integrate(rhs, config.phi, config.horizon, h), {}};

  const auto& segs = config.schedule.segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    SegmentReport rep;
    rep.index = i;
    rep.t_start = segs[i].t_start;
    rep.t_end = config.schedule.segment_end(i, config.horizon);
    rep.law = std::string(law_name(segs[i].law));
    rep.k = law_gain(segs[i].law);
    rep.tau = segs[i].tau;
    rep.certificates = segment_certificates(config.params, segs[i]);
    rep.verdict = classify_segment(config, result.trajectory, i, policy, &rep.probed);
    rep.caveat = std::holds_alternative<DelayControl>(segs[i].law);
    result.segments.push_back(std::move(rep));
  }
  return result;
}

std::optional<double> divergence_exponent(const MGParams& params, const Schedule& schedule,
                                          const InitialFunction& phi, double horizon,
                                          DivergenceOptions options) {
  return divergence_exponent(build_system(params, schedule), phi, horizon, options);
}

}  // namespace mgc
