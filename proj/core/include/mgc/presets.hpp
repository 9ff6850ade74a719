#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mgc/diagnostics.hpp"
#include "mgc/scenario.hpp"

namespace mgc {

/// A published experiment: configuration plus the accepted verdicts for every
/// segment (several verdicts are accepted where only "regular" is claimed).
struct Preset {
  std::string id;
  std::string description;
  ScenarioConfig config;
  std::vector<std::vector<Verdict>> expected;
};

[[nodiscard]] const std::vector<std::string>& preset_ids();
/// Throws ConfigError for an unknown id.
[[nodiscard]] Preset preset(std::string_view id);

struct ReproduceOutcome {
  std::string id;
  ScenarioResult result;
  std::vector<std::vector<Verdict>> expected;
  std::vector<bool> segment_match;
  [[nodiscard]] bool matches() const;
};

[[nodiscard]] ReproduceOutcome reproduce(const Preset& preset,
                                         const SegmentWindowPolicy& policy = {});

[[nodiscard]] std::string describe(const std::vector<Verdict>& accepted);

}  // namespace mgc
