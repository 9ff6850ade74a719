#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mgc/config.hpp"
#include "mgc/control.hpp"
#include "mgc/error.hpp"
#include "mgc/io.hpp"
#include "mgc/model.hpp"
#include "mgc/presets.hpp"
#include "mgc/scenario.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kInvalid = 2, kRuntime = 3 };

std::string num(double v, const char* format = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "-"; }

struct ParamOptions {
  double mu = 1.0;
  double p = 2.0;
  double n = 9.65;
  std::optional<double> tau;
  bool json = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mu", mu, "decay rate")->capture_default_str();
    cmd->add_option("--p", p, "feedback amplitude")->capture_default_str();
    cmd->add_option("--n", n, "Hill exponent")->capture_default_str();
    cmd->add_option("--tau", tau, "delay");
    cmd->add_flag("--json", json, "print the machine-readable report");
  }
  mgc::MGParams params() const { return {mu, p, n}; }
};

struct RunOptions {
  std::optional<double> step;
  double step_scale = 1.0;
  std::optional<double> horizon;
  std::uint64_t seed = 0;
  bool no_svg = false;
  bool divergence = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--step", step, "integration step (default: smallest delay / 100)");
    cmd->add_option("--step-scale", step_scale, "multiply the default step")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", horizon, "override the simulated horizon");
    cmd->add_option("--seed", seed, "sign of the perturbation in divergence runs");
    cmd->add_flag("--no-svg", no_svg, "skip the SVG plot");
    cmd->add_flag("--divergence", divergence,
                  "twin-run divergence exponent of every segment law");
  }

  void apply(mgc::ScenarioConfig& c) const {
    if (horizon) c.horizon = *horizon;
    if (step) {
      c.step = *step;
    } else if (step_scale != 1.0) {
      c.step = c.effective_step() * step_scale;
    }
    c.validate();
  }
};

// Exponent of segment i's law run on its own from the scenario history.
std::optional<double> segment_exponent(const mgc::ScenarioConfig& c, std::size_t i,
                                       std::uint64_t seed) {
  const auto& s = c.schedule.segments[i];
  mgc::Schedule alone;
  alone.segments = {{0.0, s.law, s.tau}};
  mgc::DivergenceOptions opts;
  opts.seed = seed;
  if (c.step) opts.step = *c.step;
  const double horizon = mgc::SegmentWindowPolicy{}.min_span_delays * alone.max_delay();
  return mgc::divergence_exponent(c.params, alone, c.phi, horizon, opts);
}

void print_table(std::ostream& out, const mgc::ScenarioResult& r,
                 const std::vector<std::vector<mgc::Verdict>>* expected,
                 const std::vector<std::optional<double>>& exponents) {
  out << r.config.name << "  case " << mgc::to_string(r.param_case) << ", h = " << num(r.step)
      << ", " << r.trajectory.size() << " nodes\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-3s %8s %8s  %-12s %9s %7s  %-26s", "seg", "start", "end",
                "law", "k", "tau", "verdict");
  out << line;
  if (!exponents.empty()) out << " " << "exponent  ";
  if (expected) out << " expected";
  out << '\n';
  for (const auto& s : r.segments) {
    std::string verdict(mgc::to_string(s.verdict.verdict));
    switch (s.verdict.verdict) {
      case mgc::Verdict::Steady: verdict += " " + num(s.verdict.limit); break;
      case mgc::Verdict::Periodic:
        verdict += "(" + std::to_string(s.verdict.peak_count) + ") T=" + num(s.verdict.period);
        break;
      case mgc::Verdict::Unfeasible: verdict += " t=" + num(s.verdict.stop_time); break;
      case mgc::Verdict::Irregular: break;
    }
    if (s.probed) verdict += " *";
    if (s.caveat) verdict += " !";
    std::snprintf(line, sizeof line, "  %-3zu %8.3f %8.3f  %-12s %9.4g %7.4g  %-26s", s.index,
                  s.t_start, s.t_end, s.law.c_str(), s.k, s.tau, verdict.c_str());
    out << line;
    if (!exponents.empty()) {
      std::snprintf(line, sizeof line, " %-10s", num(exponents[s.index]).c_str());
      out << line;
    }
    if (expected) {
      const auto& accepted = expected->at(s.index);
      bool ok = false;
      for (auto v : accepted) ok = ok || v == s.verdict.verdict;
      out << ' ' << mgc::describe(accepted) << (ok ? "" : "  MISMATCH");
    }
    out << '\n';
  }
  for (const auto& s : r.segments) {
    for (const auto& cert : s.certificates) {
      if (!cert.holds) continue;
      out << "  seg " << s.index << " certificate: " << cert.name << " ("
          << mgc::to_string(cert.kind) << ")\n";
    }
  }
}

void write_artifacts(const mgc::ScenarioResult& r, const mgc::OutputPaths& out, bool svg) {
  if (!out.csv.empty()) {
    std::ostringstream csv;
    mgc::write_csv(csv, r.trajectory, r.config.schedule);
    mgc::write_text_file(out.csv, csv.str());
  }
  if (svg && !out.svg.empty()) {
    mgc::write_text_file(out.svg, mgc::render_svg(r.trajectory, r.config.name));
  }
  mgc::write_text_file(out.report, mgc::report_json(r) + "\n");
}

int cmd_analyze(const ParamOptions& o) {
  const auto params = o.params();
  if (o.json) {
    std::cout << mgc::analysis_json(params, o.tau) << '\n';
    return kOk;
  }
  params.validate();
  const auto c = mgc::classify_case(params);
  const auto lm = mgc::landmarks(params);
  std::cout << "mu = " << num(params.mu) << ", p = " << num(params.p) << ", n = " << num(params.n)
            << "\n"
            << "case        " << mgc::to_string(c) << "\n"
            << "xi0         " << num(lm.xi0) << "\n"
            << "K           " << num(lm.K) << "\n"
            << "f(xi0)      " << num(lm.f_max) << "\n"
            << "[alpha, beta] = [" << num(lm.alpha) << ", " << num(lm.beta) << "]\n"
            << "min f'      " << num(mgc::f_derivative_min(params)) << "\n";
  if (c != mgc::Case::C) {
    std::cout << "(L), (T)     not applicable outside case C\n";
    return kOk;
  }
  const auto L = mgc::check_L(params);
  std::cout << "(L)         " << (L.holds ? "holds" : "fails") << "  lhs = " << num(L.lhs)
            << ", margin = " << num(L.margin) << "\n";
  if (o.tau) {
    const auto T = mgc::check_T(params, *o.tau);
    std::cout << "(T) tau=" << num(*o.tau) << "  " << (T.holds ? "holds" : "fails")
              << "  lhs = " << num(T.lhs) << ", margin = " << num(T.margin) << "\n";
  }
  return kOk;
}

int cmd_design(const ParamOptions& o, const std::string& law_name) {
  const auto law = mgc::parse_design_law(law_name);
  const auto params = o.params();
  const std::string report = mgc::design_json(params, law, o.tau);
  if (o.json) {
    std::cout << report << '\n';
    return kOk;
  }
  switch (law) {
    case mgc::DesignLaw::Constant: {
      const auto t = mgc::constant_thresholds(params);
      std::cout << "constant control u = k\n"
                << "  xi_mu = " << num(t.xi_mu) << "\n"
                << "  k1 = " << num(t.k1) << "   (k < k1: unfeasible)\n"
                << "  k2 = " << num(t.k2) << "   (D(k2) = 0)\n"
                << "  k3 = " << num(t.k3) << "   (k2 < k < k3: certified)\n"
                << "  k* = " << num(t.k_star) << "   (k >= k*: certified)\n";
      break;
    }
    case mgc::DesignLaw::Proportional: {
      const auto t = mgc::proportional_thresholds(params);
      std::cout << "proportional control u = k x\n"
                << "  w0 = " << num(t.w0) << ", w_hat = " << num(t.w_hat)
                << ", w* = " << num(t.w_star) << "\n"
                << "  certified k in (" << num(t.k_window.first) << ", "
                << num(t.k_window.second) << ")\n";
      break;
    }
    case mgc::DesignLaw::Pyragas:
      std::cout << "Pyragas control u = k (x(t - tau) - x(t))\n"
                << "  k_py = " << num(mgc::pyragas_design(params).k_py)
                << "   (k > k_py: converges to K)\n";
      break;
    case mgc::DesignLaw::Sdd: {
      const auto d = mgc::sdd_design(params, *o.tau, mgc::DelayKind::Smooth);
      std::cout << "state-dependent delay r(x)\n"
                << "  tau = " << num(d.tau) << ", tau* = " << num(d.tau_star)
                << ", zeta = " << num(d.zeta) << "\n"
                << "  r = tau* for x <= " << num(d.xi0) << ", ramps to tau over "
                << num(d.ramp_width_used) << ", slope bound " << num(d.slope_bound) << "\n";
      break;
    }
  }
  return kOk;
}

int cmd_simulate(const std::string& path, const RunOptions& run, const mgc::OutputPaths& flags,
                 const std::string& out_dir) {
  auto config = mgc::load_config(path);
  run.apply(config);
  const auto stem = fs::path(out_dir) / (config.name.empty() ? "scenario" : config.name);
  mgc::OutputPaths out = config.output;
  if (!flags.csv.empty()) out.csv = flags.csv;
  if (!flags.svg.empty()) out.svg = flags.svg;
  if (!flags.report.empty()) out.report = flags.report;
  if (out.csv.empty()) out.csv = stem.string() + ".csv";
  if (out.svg.empty()) out.svg = stem.string() + ".svg";
  if (out.report.empty()) out.report = stem.string() + ".json";

  const auto result = mgc::run_scenario(config);
  std::vector<std::optional<double>> exps;
  if (run.divergence) {
    for (std::size_t i = 0; i < config.schedule.segments.size(); ++i) {
      exps.push_back(segment_exponent(config, i, run.seed));
    }
  }
  write_artifacts(result, out, !run.no_svg);
  print_table(std::cout, result, nullptr, exps);
  for (const auto& e : result.trajectory.events()) {
    std::cout << "  event " << mgc::to_string(e.kind) << " at t = " << num(e.time) << "\n";
  }
  std::cout << "  wrote " << out.csv << (run.no_svg ? "" : ", " + out.svg) << ", " << out.report
            << "\n";
  return kOk;
}

struct Reproduced {
  std::string text;
  bool ok = false;
};

Reproduced reproduce_one(const std::string& id, const RunOptions& run, const std::string& out_dir) {
  auto p = mgc::preset(id);
  run.apply(p.config);
  const auto outcome = mgc::reproduce(p);
  std::vector<std::optional<double>> exps;
  if (run.divergence) {
    for (std::size_t i = 0; i < p.config.schedule.segments.size(); ++i) {
      exps.push_back(segment_exponent(p.config, i, run.seed));
    }
  }
  const auto stem = fs::path(out_dir) / id;
  write_artifacts(outcome.result,
                  {stem.string() + ".csv", stem.string() + ".svg", stem.string() + ".json"},
                  !run.no_svg);
  std::ostringstream text;
  text << p.description << "\n";
  print_table(text, outcome.result, &outcome.expected, exps);
  text << "  " << (outcome.matches() ? "MATCH" : "MISMATCH") << "\n";
  return {text.str(), outcome.matches()};
}

int cmd_reproduce(const std::string& which, const RunOptions& run, const std::string& out_dir) {
  std::vector<std::string> ids;
  if (which == "all") {
    ids = mgc::preset_ids();
  } else {
    (void)mgc::preset(which);
    ids = {which};
  }
  std::vector<std::future<Reproduced>> jobs;
  for (const auto& id : ids) {
    jobs.push_back(std::async(std::launch::async, reproduce_one, id, run, out_dir));
  }
  bool all_ok = true;
  for (auto& job : jobs) {
    const auto r = job.get();
    std::cout << r.text << "\n";
    all_ok = all_ok && r.ok;
  }
  std::cout << "artifacts in " << out_dir << "  (* probe run, ! slowly oscillatory only)\n";
  return all_ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mackey-Glass chaos control: thresholds, simulation and figure presets", "mgc"};
  app.require_subcommand(1);

  ParamOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "case, landmarks and the (L)/(T) conditions");
  analyze_opts.attach(analyze);

  ParamOptions design_opts;
  std::string law;
  auto* design = app.add_subcommand("design", "thresholds of a control law");
  design->add_option("law", law, "constant | proportional | pyragas | sdd")->required();
  design_opts.attach(design);

  RunOptions sim_run;
  std::string config_path;
  mgc::OutputPaths sim_paths;
  std::string sim_dir = ".";
  auto* simulate = app.add_subcommand("simulate", "run a scenario file");
  simulate->add_option("config", config_path, "JSON scenario file")->required();
  simulate->add_option("--csv", sim_paths.csv, "CSV output path");
  simulate->add_option("--svg", sim_paths.svg, "SVG output path");
  simulate->add_option("--report", sim_paths.report, "JSON report path");
  simulate->add_option("--out-dir", sim_dir, "directory for default output names")
      ->capture_default_str();
  sim_run.attach(simulate);

  RunOptions rep_run;
  std::string which;
  std::string rep_dir = "mgc-out";
  auto* repro = app.add_subcommand("reproduce", "run figure presets and compare verdicts");
  repro->add_option("figure", which, "preset id or 'all'")->required();
  repro->add_option("--out-dir", rep_dir, "artifact directory")->capture_default_str();
  rep_run.attach(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_opts);
    if (*design) return cmd_design(design_opts, law);
    if (*simulate) return cmd_simulate(config_path, sim_run, sim_paths, sim_dir);
    if (*repro) return cmd_reproduce(which, rep_run, rep_dir);
  } catch (const mgc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
