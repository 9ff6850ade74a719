#include "mgc/presets.hpp"

#include <algorithm>

#include "mgc/error.hpp"

namespace mgc {

namespace {

using V = Verdict;

Segment seg(double t, ControlLaw law, double tau) { return {t, std::move(law), tau}; }

Preset fig1_left() {
  Preset p{"fig1-left", "constant perturbation k = 0.39 switched on at t = 80", {}, {}};
  auto& c = p.config;
  c.name = p.id;
  c.params = {1.0, 2.0, 9.65};
  c.schedule.segments = {seg(0, NoControl{}, 3.0), seg(80, ConstantControl{0.39}, 3.0)};
  c.phi = InitialFunction::sinusoid(2.0, 0.02, 1.0);
  c.horizon = 200.0;
  p.expected = {{V::Irregular}, {V::Periodic}};
  return p;
}

Preset fig1_right() {
  Preset p{"fig1-right", "constant perturbation k = -0.48, -0.62, -0.69 from t = 50, 100, 150",
           {}, {}};
  auto& c = p.config;
  c.name = p.id;
  c.params = {1.0, 2.0, 9.65};
  c.schedule.segments = {seg(0, NoControl{}, 3.0), seg(50, ConstantControl{-0.48}, 3.0),
                         seg(100, ConstantControl{-0.62}, 3.0),
                         seg(150, ConstantControl{-0.69}, 3.0)};
  c.phi = InitialFunction::exponential(0.0, 0.1, 1.0, -1.2);
  c.horizon = 200.0;
  p.expected = {{V::Irregular}, {V::Periodic}, {V::Steady}, {V::Unfeasible}};
  return p;
}

Preset fig2_left() {
  Preset p{"fig2-left", "proportional feedback k = -0.507 switched on at t = 80", {}, {}};
  auto& c = p.config;
  c.name = p.id;
  c.params = {1.275, 2.0, 20.0};
  c.schedule.segments = {seg(0, NoControl{}, 3.11), seg(80, ProportionalControl{-0.507}, 3.11)};
  c.phi = InitialFunction::sinusoid(0.5, 0.01, 2.0, 1.5707963267948966);
  c.horizon = 200.0;
  p.expected = {{V::Irregular}, {V::Periodic}};
  return p;
}

Preset fig2_right() {
  Preset p{"fig2-right",
           "proportional feedback k = -0.022 with delay 0.125 on [50, 100), delay 3 after", {},
           {}};
  auto& c = p.config;
  c.name = p.id;
  c.params = {0.97, 2.0, 27.9};
  c.schedule.segments = {seg(0, NoControl{}, 3.0), seg(50, ProportionalControl{-0.022}, 0.125),
                         seg(100, ProportionalControl{-0.022}, 3.0)};
  c.phi = InitialFunction::affine(1.0, 0.1);
  c.horizon = 250.0;
  p.expected = {{V::Irregular}, {V::Steady, V::Periodic}, {V::Irregular}};
  return p;
}

Preset fig3_left() {
  Preset p{"fig3-left", "Pyragas control k = 0.08, 0.95, 3.9 from t = 50, 100, 150", {}, {}};
  auto& c = p.config;
  c.name = p.id;
  c.params = {1.08, 2.0, 9.65};
  c.schedule.segments = {seg(0, NoControl{}, 3.0), seg(50, PyragasControl{0.08}, 3.0),
                         seg(100, PyragasControl{0.95}, 3.0), seg(150, PyragasControl{3.9}, 3.0)};
  c.phi = InitialFunction::exponential(1.0, 0.1, -1.0);
  c.horizon = 250.0;
  p.expected = {{V::Irregular}, {V::Irregular}, {V::Periodic}, {V::Steady}};
  return p;
}

Preset fig3_right() {
  Preset p{"fig3-right", "step state-dependent delay (5 above K, 4 below) from t = 31", {}, {}};
  auto& c = p.config;
  c.name = p.id;
  c.params = {1.0, 2.0, 6.0};
  const double tau = 5.0;
  const double K = *positive_equilibrium(c.params);
  const auto design = sdd_design(c.params, tau, DelayKind::Step, StepDelay{K, 4.0, 5.0});
  c.schedule.segments = {seg(0, NoControl{}, tau), seg(31, DelayControl{design}, tau)};
  c.phi = InitialFunction::constant(2.0);
  c.horizon = 300.0;
  p.expected = {{V::Irregular}, {V::Periodic}};
  return p;
}

}  // namespace

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids{"fig1-left", "fig1-right", "fig2-left",
                                            "fig2-right", "fig3-left", "fig3-right"};
  return ids;
}

Preset preset(std::string_view id) {
  if (id == "fig1-left") return fig1_left();
  if (id == "fig1-right") return fig1_right();
  if (id == "fig2-left") return fig2_left();
  if (id == "fig2-right") return fig2_right();
  if (id == "fig3-left") return fig3_left();
  if (id == "fig3-right") return fig3_right();
  throw ConfigError("unknown figure preset '" + std::string(id) + "'");
}

bool ReproduceOutcome::matches() const {
  return std::all_of(segment_match.begin(), segment_match.end(), [](bool b) { return b; });
}

ReproduceOutcome reproduce(const Preset& preset, const SegmentWindowPolicy& policy) {
  ReproduceOutcome out{preset.id, run_scenario(preset.config, policy), preset.expected, {}};
  for (std::size_t i = 0; i < out.result.segments.size(); ++i) {
    const auto& accepted = preset.expected.at(i);
    const Verdict got = out.result.segments[i].verdict.verdict;
    out.segment_match.push_back(std::find(accepted.begin(), accepted.end(), got) !=
                                accepted.end());
  }
  return out;
}

std::string describe(const std::vector<Verdict>& accepted) {
  std::string s;
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (i) s += "-or-";
    s += to_string(accepted[i]);
  }
  return s;
}

}  // namespace mgc
