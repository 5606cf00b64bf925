#pragma once

#include <filesystem>
#include <optional>

#include "ontoground/context.hpp"
#include "ontoground/skills.hpp"

namespace ontoground {

/// Engine defaults, overridable by a config file named in ONTOGROUND_CONFIG
/// and then by command-line flags (flags > env config > built-ins).
struct EngineConfig {
  ResolverConfig resolver;
  ScoringWeights weights;
  double judge_threshold = 0.5;
  int entropy_bins = 10;
  double default_governance_threshold = 0.5;
};

EngineConfig load_engine_config_file(const std::filesystem::path& path);

/// Built-ins merged with the ONTOGROUND_CONFIG file when the variable is set.
EngineConfig load_engine_config();

}  // namespace ontoground
