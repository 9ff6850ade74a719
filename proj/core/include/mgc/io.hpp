#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgc/dde.hpp"
#include "mgc/model.hpp"
#include "mgc/scenario.hpp"

namespace mgc {

struct CsvRow {
  double t = 0.0;
  double x = 0.0;
  double k_active = 0.0;
  double tau_active = 0.0;
};

/// Header `t,x,k_active,tau_active`, one row per node, values with 17
/// significant digits, LF line endings.
void write_csv(std::ostream& out, const Trajectory& traj, const Schedule& schedule);
/// Throws ConfigError on a wrong header or a malformed row.
[[nodiscard]] std::vector<CsvRow> read_csv(std::istream& in);

/// Line chart of x(t) with dashed markers at control switches and a cross at
/// a feasibility loss. Long runs are thinned to per-pixel min/max pairs.
[[nodiscard]] std::string render_svg(const Trajectory& traj, std::string_view title);

/// Config, landmarks, thresholds, per-segment certificates and verdicts, and
/// the event log of a finished run.
[[nodiscard]] std::string report_json(const ScenarioResult& result, int indent = 2);

/// Case, landmarks and the (L)/(T) conditions where they apply.
[[nodiscard]] std::string analysis_json(const MGParams& params, std::optional<double> tau,
                                        int indent = 2);

enum class DesignLaw { Constant, Proportional, Pyragas, Sdd };

/// Throws ConfigError on an unknown name.
[[nodiscard]] DesignLaw parse_design_law(std::string_view name);

/// Thresholds of one control law; `tau` is required for Sdd. Throws
/// CaseError outside case C.
[[nodiscard]] std::string design_json(const MGParams& params, DesignLaw law,
                                      std::optional<double> tau, int indent = 2);

/// Creates missing parent directories. Throws Error on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace mgc
