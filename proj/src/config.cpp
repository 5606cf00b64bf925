#include "ontoground/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ontoground/errors.hpp"

namespace ontoground {

using nlohmann::json;

EngineConfig load_engine_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("config file must be a JSON object: " + path.string());
  }
  EngineConfig cfg;
  cfg.resolver.token_budget = doc.value("token_budget", cfg.resolver.token_budget);
  cfg.resolver.cache_ttl_seconds = doc.value("cache_ttl_seconds", cfg.resolver.cache_ttl_seconds);
  if (auto it = doc.find("weights"); it != doc.end()) {
    cfg.weights.semantic = it->value("semantic", cfg.weights.semantic);
    cfg.weights.ontological = it->value("ontological", cfg.weights.ontological);
    cfg.weights.capability = it->value("capability", cfg.weights.capability);
    cfg.weights.role = it->value("role", cfg.weights.role);
  }
  cfg.judge_threshold = doc.value("judge_threshold", cfg.judge_threshold);
  cfg.entropy_bins = doc.value("entropy_bins", cfg.entropy_bins);
  cfg.default_governance_threshold =
      doc.value("default_governance_threshold", cfg.default_governance_threshold);
  if (cfg.resolver.token_budget < 1) throw SchemaError("token_budget must be >= 1");
  if (cfg.weights.semantic + cfg.weights.ontological + cfg.weights.capability +
          cfg.weights.role <=
      0.0) {
    throw SchemaError("scoring weights must sum to a positive value");
  }
  return cfg;
}

EngineConfig load_engine_config() {
  const char* path = std::getenv("ONTOGROUND_CONFIG");
  if (path == nullptr || *path == '\0') return EngineConfig{};
  return load_engine_config_file(path);
}

}  // namespace ontoground
