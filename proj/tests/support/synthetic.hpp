#pragma once

// Deterministic synthetic data for property tests and benchmarks.

#include <random>
#include <string>
#include <vector>

#include "ontoground/context.hpp"
#include "ontoground/ontology.hpp"
#include "ontoground/skills.hpp"
#include "ontoground/stats.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {  // inclusive, portable
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

inline double rand_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) / 9007199254740992.0;
}

inline const std::vector<std::string>& domain_pool() {
  static const std::vector<std::string> pool = {
      "fintech",
      "fintech.payments",
      "fintech.payments.card_networks",
      "fintech.lending",
      "healthcare",
      "healthcare.inpatient",
      "saas",
      "saas.billing",
      "saas.product_analytics",
      "retail",
      "retail.ecommerce",
      "insurance",
      "insurance.life",
      "manufacturing"};
  return pool;
}

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> pool = {
      "payment", "fraud",   "scoring",  "ledger",   "claims",   "triage", "churn",
      "billing", "privacy", "redact",   "forecast", "routing",  "loans",  "audit",
      "alerts",  "summary", "identity", "risk",     "velocity", "export"};
  return pool;
}

inline std::vector<ontoground::SkillRecord> synthetic_registry(int count, uint64_t seed) {
  Rng rng(seed);
  const auto& domains = domain_pool();
  const auto& words = word_pool();
  const std::vector<std::string> caps = {"scoring", "classification", "monitoring",
                                         "drafting", "forecasting",   "redaction"};
  const std::vector<std::string> roles = {"risk_analyst", "compliance_officer",
                                          "product_manager", "actuary"};
  std::vector<ontoground::SkillRecord> skills;
  skills.reserve(count);
  for (int i = 0; i < count; ++i) {
    ontoground::SkillRecord s;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "sk-%04d", i);
    s.id = idbuf;
    int name_words = rand_int(rng, 1, 3);
    for (int w = 0; w < name_words; ++w) {
      if (!s.name.empty()) s.name += ' ';
      s.name += words[rand_int(rng, 0, static_cast<int>(words.size()) - 1)];
    }
    int desc_words = rand_int(rng, 3, 8);
    for (int w = 0; w < desc_words; ++w) {
      if (!s.description.empty()) s.description += ' ';
      s.description += words[rand_int(rng, 0, static_cast<int>(words.size()) - 1)];
    }
    int path_count = rand_int(rng, 1, 3);
    for (int p = 0; p < path_count; ++p) {
      s.domain_paths.insert(domains[rand_int(rng, 0, static_cast<int>(domains.size()) - 1)]);
    }
    int cap_count = rand_int(rng, 0, 3);
    for (int c = 0; c < cap_count; ++c) {
      s.capabilities.insert(caps[rand_int(rng, 0, static_cast<int>(caps.size()) - 1)]);
    }
    if (rand_int(rng, 0, 2) == 0) {
      s.roles.insert(roles[rand_int(rng, 0, static_cast<int>(roles.size()) - 1)]);
    }
    s.quality = rand_unit(rng);
    skills.push_back(std::move(s));
  }
  return skills;
}

inline ontoground::GovernancePolicy synthetic_policy(uint64_t seed) {
  Rng rng(seed);
  ontoground::GovernancePolicy policy;
  policy.default_threshold = rand_unit(rng) * 0.6;
  for (const auto& d : domain_pool()) {
    if (rand_int(rng, 0, 1) == 0) policy.thresholds[d] = rand_unit(rng);
  }
  return policy;
}

inline ontoground::DiscoveryQuery synthetic_query(uint64_t seed) {
  Rng rng(seed);
  const auto& domains = domain_pool();
  const auto& words = word_pool();
  ontoground::DiscoveryQuery q;
  int qwords = rand_int(rng, 1, 4);
  for (int i = 0; i < qwords; ++i) {
    if (!q.text.empty()) q.text += ' ';
    q.text += words[rand_int(rng, 0, static_cast<int>(words.size()) - 1)];
  }
  q.domain = domains[rand_int(rng, 0, static_cast<int>(domains.size()) - 1)];
  if (rand_int(rng, 0, 1) == 0) q.capabilities.insert("scoring");
  if (rand_int(rng, 0, 2) == 0) q.role = "risk_analyst";
  q.limit = rand_int(rng, 1, 20);
  return q;
}

inline ontoground::ScoreMatrix random_matrix(uint64_t seed, int n, int k, bool with_ties) {
  Rng rng(seed);
  ontoground::ScoreMatrix m;
  for (int j = 0; j < k; ++j) m.col_labels.push_back("C" + std::to_string(j + 1));
  for (int i = 0; i < n; ++i) {
    m.row_labels.push_back("row" + std::to_string(i));
    std::vector<double> row;
    for (int j = 0; j < k; ++j) {
      if (with_ties) {
        row.push_back(rand_int(rng, 0, 4) / 4.0);  // coarse grid forces ties
      } else {
        row.push_back(rand_unit(rng));
      }
    }
    m.data.push_back(std::move(row));
  }
  return m;
}

inline std::vector<ontoground::ContextSection> random_sections(uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> vocab = {"alpha",  "beta",  "gamma", "delta", "epsilon",
                                          "zeta",   "eta",   "theta", "iota",  "kappa",
                                          "lambda", "mu",    "nu",    "xi",    "omicron"};
  std::vector<ontoground::ContextSection> sections(3);
  sections[0].layer = ontoground::Layer::Role;
  sections[1].layer = ontoground::Layer::Domain;
  sections[2].layer = ontoground::Layer::Interaction;
  for (int s = 0; s < 3; ++s) {
    int items = s == 0 ? rand_int(rng, 1, 6) : rand_int(rng, 0, 8);
    for (int i = 0; i < items; ++i) {
      std::string line;
      int tokens = s == 0 && i == 0 ? rand_int(rng, 1, 3) : rand_int(rng, 1, 12);
      for (int t = 0; t < tokens; ++t) {
        if (!line.empty()) line += ' ';
        line += vocab[rand_int(rng, 0, static_cast<int>(vocab.size()) - 1)];
      }
      sections[s].items.push_back(
          {"item-" + std::to_string(s) + "-" + std::to_string(i), line});
    }
  }
  return sections;
}

/// Small random valid ontology for round-trip properties.
inline ontoground::Ontology random_ontology(uint64_t seed) {
  Rng rng(seed);
  ontoground::Ontology o;
  o.industry_id = "industry" + std::to_string(rand_int(rng, 0, 99));

  int metric_count = rand_int(rng, 1, 4);
  std::vector<std::string> metric_names;
  for (int i = 0; i < metric_count; ++i) {
    ontoground::MetricDef m;
    m.name = "metric_" + std::to_string(i);
    double lo = rand_unit(rng) * 50.0;
    m.range_lo = lo;
    m.range_hi = lo + rand_unit(rng) * 50.0;
    m.unit = "%";
    m.direction = rand_int(rng, 0, 1) == 0 ? ontoground::MetricDirection::HigherBetter
                                           : ontoground::MetricDirection::LowerBetter;
    m.world_class = m.direction == ontoground::MetricDirection::HigherBetter
                        ? m.range_lo + rand_unit(rng) * 60.0
                        : m.range_hi - rand_unit(rng) * 60.0;
    metric_names.push_back(m.name);
    o.domain.metrics.emplace(m.name, std::move(m));
  }

  int role_count = rand_int(rng, 1, 4);
  std::vector<std::string> role_ids;
  for (int i = 0; i < role_count; ++i) {
    ontoground::RoleDef r;
    r.id = "role_" + std::to_string(i);
    r.decision_patterns.insert(rand_int(rng, 0, 1) == 0 ? "strategic" : "analytical");
    r.metrics_focus.insert(metric_names[rand_int(rng, 0, metric_count - 1)]);
    r.communication_style = rand_int(rng, 0, 1) == 0 ? "executive" : "technical";
    if (rand_int(rng, 0, 1) == 0) r.expertise_domains.insert("area_" + std::to_string(i));
    role_ids.push_back(r.id);
    o.roles.emplace(r.id, std::move(r));
  }

  int depth = rand_int(rng, 1, 3);
  std::string path;
  for (int i = 0; i < depth; ++i) {
    path += (i == 0 ? "" : ".") + std::string("seg") + std::to_string(i);
    o.domain.verticals.insert(path);
  }

  int entity_count = rand_int(rng, 0, 3);
  for (int i = 0; i < entity_count; ++i) {
    ontoground::EntityDef e;
    e.term = "term_" + std::to_string(i);
    e.definition = "definition " + std::to_string(i);
    if (rand_int(rng, 0, 1) == 0) e.synonyms.insert("syn_" + std::to_string(i));
    o.domain.entities.emplace(e.term, std::move(e));
  }

  if (rand_int(rng, 0, 1) == 0) {
    ontoground::GovernanceDef g;
    g.id = "FRAME-" + std::to_string(rand_int(rng, 0, 9));
    g.description = "framework";
    o.domain.governance.emplace(g.id, std::move(g));
  }

  if (role_ids.size() >= 2) {
    ontoground::HandoffPattern h;
    h.from_role = role_ids[0];
    h.to_role = role_ids[1];
    h.trigger = "trigger_a";
    h.artifacts.insert("artifact_a");
    h.approval_required = rand_int(rng, 0, 1) == 0;
    o.interaction.handoffs.push_back(std::move(h));
    o.interaction.approval_chains.push_back({{role_ids[0], role_ids[1]}, 3600});
    o.interaction.escalation_paths[role_ids[0]] = role_ids[1];
  }
  return o;
}

}  // namespace testsupport
