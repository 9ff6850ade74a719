#include "mgc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json_detail.hpp"
#include "mgc/control.hpp"
#include "mgc/error.hpp"

namespace mgc {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kCsvHeader = "t,x,k_active,tau_active";

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson condition_json(const ConditionReport& r) {
  return {{"holds", r.holds}, {"lhs", r.lhs}, {"margin", r.margin}};
}

ojson landmarks_json(const Landmarks& lm) {
  return {{"xi0", lm.xi0},   {"K", opt(lm.K)},         {"f_max", lm.f_max},
          {"alpha", lm.alpha}, {"beta", lm.beta}, {"K_hat", opt(lm.K_hat)}};
}

ojson constant_json(const MGParams& params) {
  const auto c = constant_thresholds(params);
  return {{"xi_mu", c.xi_mu}, {"k1", c.k1}, {"k2", c.k2}, {"k3", opt(c.k3)},
          {"k_star", opt(c.k_star)}};
}

ojson proportional_json(const MGParams& params) {
  const auto pt = proportional_thresholds(params);
  return {{"w0", pt.w0},
          {"w_hat", pt.w_hat},
          {"w_star", pt.w_star},
          {"k_window", {pt.k_window.first, pt.k_window.second}}};
}

ojson design_json_value(const DelayDesign& d) {
  ojson j{{"kind", d.kind == DelayKind::Smooth ? "smooth" : "step"},
          {"tau", d.tau},
          {"tau_star", d.tau_star},
          {"zeta", d.zeta},
          {"xi0", d.xi0},
          {"ramp_width", d.ramp_width_used},
          {"slope_bound", d.slope_bound},
          {"theorem_compliant", d.theorem_compliant}};
  if (d.step) {
    j["step"] = {{"threshold", d.step->threshold}, {"low", d.step->low}, {"high", d.step->high}};
  }
  return j;
}

ojson verdict_json(const TailClassification& c) {
  ojson j{{"verdict", std::string(to_string(c.verdict))}};
  switch (c.verdict) {
    case Verdict::Steady: j["limit"] = c.limit; break;
    case Verdict::Periodic:
      j["period"] = c.period;
      j["peaks_per_period"] = c.peak_count;
      break;
    case Verdict::Unfeasible: j["stop_time"] = c.stop_time; break;
    case Verdict::Irregular: break;
  }
  j["amplitude"] = c.amplitude;
  j["window"] = {c.window.start, c.window.end};
  j["tolerances"] = {{"eps_eq", c.tolerances.eps_eq},
                     {"eps_per", c.tolerances.eps_per},
                     {"max_period", c.tolerances.max_period}};
  return j;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string esc(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Trajectory& traj, const Schedule& schedule) {
  out << kCsvHeader << '\n';
  const auto t = traj.times();
  const auto x = traj.states();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto active = active_control(schedule, t[i], x[i]);
    put(out, t[i]);
    out << ',';
    put(out, x[i]);
    out << ',';
    put(out, active.k);
    out << ',';
    put(out, active.tau);
    out << '\n';
  }
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("CSV header must be '" + std::string(kCsvHeader) + "'");
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[4];
    const char* p = line.c_str();
    for (int c = 0; c < 4; ++c) {
      char* end = nullptr;
      v[c] = std::strtod(p, &end);
      const char expected = c < 3 ? ',' : '\0';
      if (end == p || *end != expected) {
        throw ConfigError("malformed CSV row at line " + std::to_string(lineno));
      }
      p = end + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  return rows;
}

std::string render_svg(const Trajectory& traj, std::string_view title) {
  constexpr double W = 960.0, H = 360.0, L = 60.0, R = 20.0, T = 36.0, B = 40.0;
  const auto t = traj.times();
  const auto x = traj.states();
  const double t0 = t.front();
  const double t1 = t.size() > 1 ? t.back() : t0 + 1.0;
  double lo = *std::min_element(x.begin(), x.end());
  double hi = *std::max_element(x.begin(), x.end());
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const auto px = [&](double tv) { return L + (tv - t0) / (t1 - t0) * (W - L - R); };
  const auto py = [&](double xv) { return T + (hi - xv) / (hi - lo) * (H - T - B); };

  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << L << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">"
    << esc(title) << "</text>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
    << H - T - B << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double tv = t0 + (t1 - t0) * i / 4.0;
    const double xv = lo + (hi - lo) * i / 4.0;
    s << "<text x=\"" << px(tv) << "\" y=\"" << H - B + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << tick(tv)
      << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << py(xv) + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << tick(xv)
      << "</text>\n";
  }

  // Per-column min/max keeps the envelope of long runs.
  const auto columns = static_cast<std::size_t>(W - L - R);
  s << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
  if (t.size() <= 4 * columns) {
    for (std::size_t i = 0; i < t.size(); ++i) s << px(t[i]) << ',' << py(x[i]) << ' ';
  } else {
    std::size_t i = 0;
    for (std::size_t col = 0; col < columns && i < t.size(); ++col) {
      const double edge =
          t0 + (t1 - t0) * static_cast<double>(col + 1) / static_cast<double>(columns);
      std::size_t imin = i, imax = i;
      for (; i < t.size() && (t[i] <= edge || col + 1 == columns); ++i) {
        if (x[i] < x[imin]) imin = i;
        if (x[i] > x[imax]) imax = i;
      }
      const auto [a, b] = std::minmax(imin, imax);
      s << px(t[a]) << ',' << py(x[a]) << ' ' << px(t[b]) << ',' << py(x[b]) << ' ';
    }
  }
  s << "\"/>\n";

  for (const auto& e : traj.events()) {
    if (e.kind == EventKind::ControlSwitch) {
      s << "<line class=\"switch\" x1=\"" << px(e.time) << "\" y1=\"" << T << "\" x2=\""
        << px(e.time) << "\" y2=\"" << H - B
        << "\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
    } else if (e.kind == EventKind::FeasibilityLoss) {
      const double cx = px(std::min(e.time, t1));
      const double cy = py(std::clamp(0.0, lo, hi));
      s << "<path class=\"feasibility-loss\" d=\"M" << cx - 5 << ',' << cy - 5 << " L"
        << cx + 5 << ',' << cy + 5 << " M" << cx - 5 << ',' << cy + 5 << " L" << cx + 5 << ','
        << cy - 5 << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string report_json(const ScenarioResult& result, int indent) {
  const auto& params = result.config.params;
  ojson j;
  j["config"] = detail::config_json(result.config);
  j["step"] = result.step;
  j["case"] = std::string(to_string(result.param_case));
  j["landmarks"] = landmarks_json(result.landmarks);
  if (result.param_case == Case::C) {
    j["thresholds"] = {{"constant", constant_json(params)},
                       {"proportional", proportional_json(params)},
                       {"pyragas", {{"k_py", pyragas_design(params).k_py}}}};
  } else {
    j["thresholds"] = nullptr;
  }

  ojson segs = ojson::array();
  for (const auto& rep : result.segments) {
    ojson certs = ojson::array();
    for (const auto& c : rep.certificates) {
      certs.push_back({{"name", c.name},
                       {"kind", std::string(to_string(c.kind))},
                       {"holds", c.holds},
                       {"margin", opt(c.margin)},
                       {"detail", c.detail}});
    }
    ojson s{{"index", rep.index}, {"t_start", rep.t_start}, {"t_end", rep.t_end},
            {"law", rep.law},     {"k", rep.k},             {"tau", rep.tau}};
    const auto& law = result.config.schedule.segments.at(rep.index).law;
    if (const auto* d = std::get_if<DelayControl>(&law)) s["design"] = design_json_value(d->design);
    s["certificates"] = certs;
    s["classification"] = verdict_json(rep.verdict);
    s["probed"] = rep.probed;
    s["caveat"] = rep.caveat;
    segs.push_back(s);
  }
  j["segments"] = segs;

  ojson events = ojson::array();
  for (const auto& e : result.trajectory.events()) {
    events.push_back({{"time", e.time}, {"kind", std::string(to_string(e.kind))}});
  }
  j["events"] = events;
  return j.dump(indent);
}

std::string analysis_json(const MGParams& params, std::optional<double> tau, int indent) {
  params.validate();
  const Case c = classify_case(params);
  ojson j;
  j["params"] = {{"mu", params.mu}, {"p", params.p}, {"n", params.n}};
  j["case"] = std::string(to_string(c));
  j["landmarks"] = landmarks_json(landmarks(params));
  j["f_derivative_min"] = f_derivative_min(params);
  if (c == Case::C) {
    j["L"] = condition_json(check_L(params));
    if (tau) {
      j["tau"] = *tau;
      j["T"] = condition_json(check_T(params, *tau));
    }
  } else {
    j["L"] = nullptr;
    if (tau) {
      j["tau"] = *tau;
      j["T"] = nullptr;
    }
  }
  return j.dump(indent);
}

DesignLaw parse_design_law(std::string_view name) {
  if (name == "constant") return DesignLaw::Constant;
  if (name == "proportional") return DesignLaw::Proportional;
  if (name == "pyragas") return DesignLaw::Pyragas;
  if (name == "sdd") return DesignLaw::Sdd;
  throw ConfigError("unknown control law '" + std::string(name) +
                    "' (constant, proportional, pyragas, sdd)");
}

std::string design_json(const MGParams& params, DesignLaw law, std::optional<double> tau,
                        int indent) {
  params.validate();
  if (classify_case(params) != Case::C) {
    throw CaseError("control design needs case C parameters (K > xi0); got case " +
                    std::string(to_string(classify_case(params))));
  }
  ojson j;
  j["params"] = {{"mu", params.mu}, {"p", params.p}, {"n", params.n}};
  switch (law) {
    case DesignLaw::Constant:
      j["law"] = "constant";
      j["thresholds"] = constant_json(params);
      break;
    case DesignLaw::Proportional:
      j["law"] = "proportional";
      j["thresholds"] = proportional_json(params);
      break;
    case DesignLaw::Pyragas:
      j["law"] = "pyragas";
      j["thresholds"] = {{"k_py", pyragas_design(params).k_py}};
      break;
    case DesignLaw::Sdd:
      if (!tau) throw ConfigError("the sdd design needs a delay tau");
      j["law"] = "sdd";
      j["thresholds"] = design_json_value(sdd_design(params, *tau, DelayKind::Smooth));
      break;
  }
  return j.dump(indent);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace mgc
