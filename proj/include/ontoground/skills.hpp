#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ontoground {

/// A registered capability tagged with domain paths, capabilities, roles,
/// and a quality score.
struct SkillRecord {
  std::string id;
  std::string name;
  std::string description;
  std::set<std::string> domain_paths;  // nonempty
  std::set<std::string> capabilities;
  std::set<std::string> roles;
  double quality = 0.0;  // in [0, 1]

  bool operator==(const SkillRecord&) const = default;
};

struct DiscoveryQuery {
  std::string text;
  std::string domain;  // vertical path
  std::set<std::string> capabilities;
  std::string role;  // empty when unspecified
  int limit = 10;    // k >= 1
};

struct ScoringWeights {
  double semantic = 0.4;     // w1
  double ontological = 0.3;  // w2
  double capability = 0.2;   // w3
  double role = 0.1;         // w4
};

/// Minimum quality per vertical subtree; lookup walks up the hierarchy to
/// the longest configured prefix, falling back to default_threshold.
struct GovernancePolicy {
  std::map<std::string, double> thresholds;
  double default_threshold = 0.5;

  double threshold_for(const std::string& domain_path) const;
  /// Strictest threshold across the skill's own domain tags (max rule).
  double strictest_for(const SkillRecord& skill) const;

  /// 0.8 for the fintech and healthcare subtrees, 0.5 otherwise.
  static GovernancePolicy regulated_defaults();
};

/// Hierarchical domain score: 1.0 exact, 0.5 when the skill path is a strict
/// ancestor of the query path, 0.0 otherwise.
double domain_match(const std::string& skill_path, const std::string& query_path);

/// Term-overlap ratio: |query terms ∩ skill name/description terms| /
/// |query terms|, case-folded; 0 for an empty query.
double lexical_rank(const SkillRecord& skill, const std::string& query_text);

std::vector<SkillRecord> filter_eligible(const std::vector<SkillRecord>& skills,
                                         const GovernancePolicy& policy);

double score(const SkillRecord& skill, const DiscoveryQuery& query,
             const ScoringWeights& weights);

struct ScoredSkill {
  SkillRecord skill;
  double score = 0.0;
};

/// Governance filter, weighted scoring, descending sort (ties by ascending
/// skill id), truncated to query.limit.
std::vector<ScoredSkill> discover(const DiscoveryQuery& query,
                                  const std::vector<SkillRecord>& registry,
                                  const GovernancePolicy& policy, const ScoringWeights& weights);

/// Concurrent-read registry: readers take an immutable snapshot, writers
/// serialize and publish a fresh snapshot atomically.
class SkillRegistry {
 public:
  using Snapshot = std::shared_ptr<const std::vector<SkillRecord>>;

  /// Returns false (and leaves the registry unchanged) on a duplicate id.
  bool add(SkillRecord skill);
  Snapshot snapshot() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  Snapshot skills_ = std::make_shared<const std::vector<SkillRecord>>();
};

std::vector<SkillRecord> load_skills_file(const std::filesystem::path& path);
GovernancePolicy load_policy_file(const std::filesystem::path& path);
nlohmann::json skills_to_json(const std::vector<SkillRecord>& skills);

}  // namespace ontoground
