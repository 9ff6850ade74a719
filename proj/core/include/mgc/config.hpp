#pragma once

#include <filesystem>
#include <string>

#include "mgc/scenario.hpp"

namespace mgc {

inline constexpr int kSchemaVersion = 1;

/// JSON scenario document:
///
///   {
///     "schema_version": 1,
///     "name": "fig1-left",
///     "params": {"mu": 1, "p": 2, "n": 9.65},
///     "segments": [
///       {"t_start": 0,  "tau": 3, "law": {"type": "none"}},
///       {"t_start": 80, "tau": 3, "law": {"type": "constant", "k": 0.39}}
///     ],
///     "phi": {"family": "sinusoid", "a": 2, "b": 0.02, "c": 1},
///     "horizon": 200,
///     "step": 0.03,
///     "output": {"csv": "run.csv", "svg": "run.svg", "report": "run.json"}
///   }
///
/// Law types: none, constant, proportional, pyragas (with "k"), and delay
/// with "design": {"kind": "smooth"} or {"kind": "step", "low": 4,
/// "threshold": K, "high": tau}. `step` and `output` are optional. Unknown
/// keys anywhere are rejected. The result is validated before it is returned.
[[nodiscard]] ScenarioConfig parse_config(const std::string& text);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

[[nodiscard]] std::string dump_config(const ScenarioConfig& config, int indent = 2);

}  // namespace mgc
