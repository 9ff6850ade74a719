#include "mgc/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json_detail.hpp"
#include "mgc/error.hpp"
#include "mgc/model.hpp"

namespace mgc {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void only_keys(const json& obj, std::string_view where,
               std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw ConfigError("unknown field '" + key + "' in " + std::string(where));
  }
}

const json& need(const json& obj, std::string_view where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing field '" + std::string(key) + "' in " + std::string(where));
  }
  return *it;
}

double number(const json& obj, std::string_view where, const char* key) {
  const json& v = need(obj, where, key);
  if (!v.is_number()) {
    throw ConfigError("field '" + std::string(key) + "' in " + std::string(where) +
                      " must be a number");
  }
  return v.get<double>();
}

double number_or(const json& obj, std::string_view where, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

std::string text(const json& obj, std::string_view where, const char* key) {
  const json& v = need(obj, where, key);
  if (!v.is_string()) {
    throw ConfigError("field '" + std::string(key) + "' in " + std::string(where) +
                      " must be a string");
  }
  return v.get<std::string>();
}

DelayDesign parse_design(const json& j, const MGParams& params, double tau,
                         std::string_view where) {
  const std::string kind = text(j, where, "kind");
  if (kind == "smooth") {
    only_keys(j, where, {"kind"});
    return sdd_design(params, tau, DelayKind::Smooth);
  }
  if (kind == "step") {
    only_keys(j, where, {"kind", "threshold", "low", "high"});
    StepDelay step;
    if (j.contains("threshold")) {
      step.threshold = number(j, where, "threshold");
    } else {
      const auto K = positive_equilibrium(params);
      if (!K) throw ConfigError(std::string(where) + ": no equilibrium to use as threshold");
      step.threshold = *K;
    }
    step.low = number(j, where, "low");
    step.high = number_or(j, where, "high", tau);
    return sdd_design(params, tau, DelayKind::Step, step);
  }
  throw ConfigError("unknown delay design kind '" + kind + "' in " + std::string(where));
}

ControlLaw parse_law(const json& j, const MGParams& params, double tau, std::string_view where) {
  const std::string type = text(j, where, "type");
  if (type == "none") {
    only_keys(j, where, {"type"});
    return NoControl{};
  }
  if (type == "delay") {
    only_keys(j, where, {"type", "design"});
    return DelayControl{parse_design(need(j, where, "design"), params, tau,
                                     std::string(where) + ".design")};
  }
  only_keys(j, where, {"type", "k"});
  const double k = number(j, where, "k");
  if (type == "constant") return ConstantControl{k};
  if (type == "proportional") return ProportionalControl{k};
  if (type == "pyragas") return PyragasControl{k};
  throw ConfigError("unknown law type '" + type + "' in " + std::string(where));
}

ojson law_json(const ControlLaw& law) {
  ojson j;
  j["type"] = std::string(law_name(law));
  if (const auto* d = std::get_if<DelayControl>(&law)) {
    ojson design;
    if (d->design.kind == DelayKind::Smooth) {
      design["kind"] = "smooth";
    } else {
      design["kind"] = "step";
      design["threshold"] = d->design.step->threshold;
      design["low"] = d->design.step->low;
      design["high"] = d->design.step->high;
    }
    j["design"] = design;
  } else if (!std::holds_alternative<NoControl>(law)) {
    j["k"] = law_gain(law);
  }
  return j;
}

}  // namespace

namespace detail {

ojson config_json(const ScenarioConfig& config) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = config.name;
  j["params"] = {{"mu", config.params.mu}, {"p", config.params.p}, {"n", config.params.n}};
  ojson segs = ojson::array();
  for (const auto& s : config.schedule.segments) {
    segs.push_back({{"t_start", s.t_start}, {"tau", s.tau}, {"law", law_json(s.law)}});
  }
  j["segments"] = segs;
  const auto& phi = config.phi;
  ojson p{{"family", std::string(to_string(phi.family()))}, {"a", phi.a()}};
  switch (phi.family()) {
    case InitialFunction::Family::Constant:
      break;
    case InitialFunction::Family::Affine:
      p["b"] = phi.b();
      break;
    case InitialFunction::Family::Sinusoid:
    case InitialFunction::Family::Exponential:
      p["b"] = phi.b();
      p["c"] = phi.c();
      p["d"] = phi.d();
      break;
  }
  j["phi"] = p;
  j["horizon"] = config.horizon;
  if (config.step) j["step"] = *config.step;
  const auto& out = config.output;
  if (!out.csv.empty() || !out.svg.empty() || !out.report.empty()) {
    ojson o = ojson::object();
    if (!out.csv.empty()) o["csv"] = out.csv;
    if (!out.svg.empty()) o["svg"] = out.svg;
    if (!out.report.empty()) o["report"] = out.report;
    j["output"] = o;
  }
  return j;
}

}  // namespace detail

ScenarioConfig parse_config(const std::string& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"schema_version", "name", "params", "segments", "phi", "horizon", "step", "output"});
  const json& version = need(j, "config", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) +
                      ")");
  }

  ScenarioConfig c;
  c.name = j.contains("name") ? text(j, "config", "name") : std::string("scenario");

  const json& params = need(j, "config", "params");
  only_keys(params, "params", {"mu", "p", "n"});
  c.params = {number(params, "params", "mu"), number(params, "params", "p"),
              number(params, "params", "n")};
  c.params.validate();

  const json& segs = need(j, "config", "segments");
  if (!segs.is_array()) throw ConfigError("segments must be an array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string where = "segments[" + std::to_string(i) + "]";
    only_keys(segs[i], where, {"t_start", "tau", "law"});
    Segment s;
    s.t_start = number(segs[i], where, "t_start");
    s.tau = number(segs[i], where, "tau");
    s.law = parse_law(need(segs[i], where, "law"), c.params, s.tau, where + ".law");
    c.schedule.segments.push_back(std::move(s));
  }

  const json& phi = need(j, "config", "phi");
  only_keys(phi, "phi", {"family", "a", "b", "c", "d"});
  const auto family = parse_family(text(phi, "phi", "family"));
  const double a = number(phi, "phi", "a");
  switch (family) {
    case InitialFunction::Family::Constant:
      only_keys(phi, "phi (constant)", {"family", "a"});
      c.phi = InitialFunction::constant(a);
      break;
    case InitialFunction::Family::Affine:
      only_keys(phi, "phi (affine)", {"family", "a", "b"});
      c.phi = InitialFunction::affine(a, number(phi, "phi", "b"));
      break;
    case InitialFunction::Family::Sinusoid:
      c.phi = InitialFunction::sinusoid(a, number(phi, "phi", "b"), number(phi, "phi", "c"),
                                        number_or(phi, "phi", "d", 0.0));
      break;
    case InitialFunction::Family::Exponential:
      c.phi = InitialFunction::exponential(a, number(phi, "phi", "b"), number(phi, "phi", "c"),
                                           number_or(phi, "phi", "d", 0.0));
      break;
  }

  c.horizon = number(j, "config", "horizon");
  if (j.contains("step")) c.step = number(j, "config", "step");
  if (j.contains("output")) {
    const json& out = j["output"];
    only_keys(out, "output", {"csv", "svg", "report"});
    if (out.contains("csv")) c.output.csv = text(out, "output", "csv");
    if (out.contains("svg")) c.output.svg = text(out, "output", "svg");
    if (out.contains("report")) c.output.report = text(out, "output", "report");
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ScenarioConfig& config, int indent) {
  return detail::config_json(config).dump(indent);
}

}  // namespace mgc
