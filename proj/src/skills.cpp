#include "ontoground/skills.hpp"

#include <algorithm>
#include <fstream>

#include "ontoground/errors.hpp"
#include "ontoground/ontology.hpp"
#include "ontoground/text.hpp"

namespace ontoground {

using nlohmann::json;

double GovernancePolicy::threshold_for(const std::string& domain_path) const {
  // Longest configured prefix wins: a threshold on `fintech` covers
  // `fintech.payments.card_networks`.
  std::string path = domain_path;
  while (true) {
    auto it = thresholds.find(path);
    if (it != thresholds.end()) return it->second;
    auto dot = path.rfind('.');
    if (dot == std::string::npos) break;
    path.resize(dot);
  }
  return default_threshold;
}

double GovernancePolicy::strictest_for(const SkillRecord& skill) const {
  double strictest = default_threshold;
  bool first = true;
  for (const auto& path : skill.domain_paths) {
    double t = threshold_for(path);
    strictest = first ? t : std::max(strictest, t);
    first = false;
  }
  return strictest;
}

GovernancePolicy GovernancePolicy::regulated_defaults() {
  GovernancePolicy policy;
  policy.thresholds = {{"fintech", 0.8}, {"healthcare", 0.8}};
  policy.default_threshold = 0.5;
  return policy;
}

double domain_match(const std::string& skill_path, const std::string& query_path) {
  if (skill_path == query_path) return 1.0;
  auto parents = ancestors(query_path);
  if (std::find(parents.begin(), parents.end(), skill_path) != parents.end()) return 0.5;
  return 0.0;
}

double lexical_rank(const SkillRecord& skill, const std::string& query_text) {
  auto query_terms = text::folded_terms(query_text);
  if (query_terms.empty()) return 0.0;
  auto skill_terms = text::folded_terms(skill.name + " " + skill.description);
  int hits = 0;
  for (const auto& term : query_terms) {
    if (std::binary_search(skill_terms.begin(), skill_terms.end(), term)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(query_terms.size());
}

std::vector<SkillRecord> filter_eligible(const std::vector<SkillRecord>& skills,
                                         const GovernancePolicy& policy) {
  std::vector<SkillRecord> eligible;
  for (const auto& s : skills) {
    if (s.quality >= policy.strictest_for(s)) eligible.push_back(s);
  }
  return eligible;
}

double score(const SkillRecord& skill, const DiscoveryQuery& query,
             const ScoringWeights& weights) {
  double semantic = lexical_rank(skill, query.text);

  double ontological = 0.0;
  for (const auto& path : skill.domain_paths) {
    ontological = std::max(ontological, domain_match(path, query.domain));
  }

  double capability = 0.0;
  if (!query.capabilities.empty()) {
    int hits = 0;
    for (const auto& cap : query.capabilities) {
      if (skill.capabilities.count(cap) > 0) ++hits;
    }
    capability = static_cast<double>(hits) / static_cast<double>(query.capabilities.size());
  }

  double role = !query.role.empty() && skill.roles.count(query.role) > 0 ? 1.0 : 0.0;

  return weights.semantic * semantic + weights.ontological * ontological +
         weights.capability * capability + weights.role * role;
}

std::vector<ScoredSkill> discover(const DiscoveryQuery& query,
                                  const std::vector<SkillRecord>& registry,
                                  const GovernancePolicy& policy, const ScoringWeights& weights) {
  std::vector<ScoredSkill> scored;
  for (const auto& skill : filter_eligible(registry, policy)) {
    scored.push_back({skill, score(skill, query, weights)});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredSkill& a, const ScoredSkill& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.skill.id < b.skill.id;
  });
  if (static_cast<int>(scored.size()) > query.limit) scored.resize(query.limit);
  return scored;
}

bool SkillRegistry::add(SkillRecord skill) {
  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& existing : *skills_) {
    if (existing.id == skill.id) return false;
  }
  auto next = std::make_shared<std::vector<SkillRecord>>(*skills_);
  next->push_back(std::move(skill));
  skills_ = std::move(next);
  return true;
}

SkillRegistry::Snapshot SkillRegistry::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return skills_;
}

std::size_t SkillRegistry::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return skills_->size();
}

std::vector<SkillRecord> load_skills_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open skills file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw SchemaError("skills file must be a JSON array of skill records");
  }
  std::vector<SkillRecord> skills;
  std::set<std::string> seen;
  for (const auto& j : doc) {
    SkillRecord s;
    s.id = j.at("id").get<std::string>();
    s.name = j.value("name", std::string{});
    s.description = j.value("description", std::string{});
    for (const auto& p : j.at("domain_paths")) s.domain_paths.insert(p.get<std::string>());
    if (j.contains("capabilities")) {
      for (const auto& c : j["capabilities"]) s.capabilities.insert(c.get<std::string>());
    }
    if (j.contains("roles")) {
      for (const auto& r : j["roles"]) s.roles.insert(r.get<std::string>());
    }
    s.quality = j.at("quality").get<double>();
    if (s.quality < 0.0 || s.quality > 1.0) {
      throw SchemaError("skill '" + s.id + "' quality must lie in [0, 1]");
    }
    if (s.domain_paths.empty()) {
      throw SchemaError("skill '" + s.id + "' must declare at least one domain path");
    }
    if (!seen.insert(s.id).second) {
      throw SchemaError("duplicate skill id '" + s.id + "'");
    }
    skills.push_back(std::move(s));
  }
  return skills;
}

GovernancePolicy load_policy_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open policy file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("policy file must be a JSON object of path -> threshold");
  }
  GovernancePolicy policy;
  for (const auto& [key, value] : doc.items()) {
    double t = value.get<double>();
    if (t < 0.0 || t > 1.0) throw SchemaError("threshold for '" + key + "' must lie in [0, 1]");
    if (key == "default") {
      policy.default_threshold = t;
    } else {
      policy.thresholds[key] = t;
    }
  }
  return policy;
}

json skills_to_json(const std::vector<SkillRecord>& skills) {
  json out = json::array();
  for (const auto& s : skills) {
    out.push_back({{"id", s.id},
                   {"name", s.name},
                   {"description", s.description},
                   {"domain_paths", s.domain_paths},
                   {"capabilities", s.capabilities},
                   {"roles", s.roles},
                   {"quality", s.quality}});
  }
  return out;
}

}  // namespace ontoground
