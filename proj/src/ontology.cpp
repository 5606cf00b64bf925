#include "ontoground/ontology.hpp"

#include <algorithm>

#include "ontoground/errors.hpp"
#include "ontoground/text.hpp"

namespace ontoground {

std::string to_string(MetricDirection d) {
  return d == MetricDirection::HigherBetter ? "higher-better" : "lower-better";
}

MetricDirection metric_direction_from_string(const std::string& s) {
  if (s == "higher-better") return MetricDirection::HigherBetter;
  if (s == "lower-better") return MetricDirection::LowerBetter;
  throw SchemaError("unknown metric direction '" + s + "'");
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> segments;
  std::size_t begin = 0;
  while (true) {
    std::size_t dot = path.find('.', begin);
    if (dot == std::string::npos) {
      segments.push_back(path.substr(begin));
      break;
    }
    segments.push_back(path.substr(begin, dot - begin));
    begin = dot + 1;
  }
  return segments;
}

std::vector<std::string> ancestors(const std::string& path) {
  auto segments = split_path(path);
  for (const auto& seg : segments) {
    if (seg.empty()) throw FormatError("empty segment in vertical path '" + path + "'");
  }
  if (static_cast<int>(segments.size()) > kMaxVerticalDepth) {
    throw FormatError("vertical path '" + path + "' exceeds depth " +
                      std::to_string(kMaxVerticalDepth));
  }
  std::vector<std::string> out;
  std::string prefix;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (i > 0) prefix += '.';
    prefix += segments[i];
    out.push_back(prefix);
  }
  return out;
}

namespace {

void add(ValidationReport& r, const char* code, std::string message, std::string where) {
  r.violations.push_back({code, std::move(message), std::move(where)});
}

bool resolvable_metric(const Ontology& o, const std::string& name) {
  return o.domain.metrics.count(name) > 0 || o.external_metrics.count(name) > 0;
}

void validate_roles(const Ontology& o, ValidationReport& r) {
  if (o.roles.empty()) {
    add(r, violation::NO_ROLES, "ontology defines no roles", o.industry_id);
    return;
  }
  for (const auto& [id, role] : o.roles) {
    if (id.empty() || id.find_first_of(" \t\n") != std::string::npos) {
      add(r, violation::BAD_ROLE_ID, "role id must be nonempty without whitespace", id);
    }
    if (role.decision_patterns.empty()) {
      add(r, violation::ROLE_NO_PATTERN, "role has no decision patterns", id);
    }
    if (role.metrics_focus.empty()) {
      add(r, violation::ROLE_NO_METRIC, "role has no metrics focus", id);
    }
    for (const auto& m : role.metrics_focus) {
      if (!resolvable_metric(o, m)) {
        add(r, violation::DANGLING_METRIC,
            "metric '" + m + "' not in domain metrics or external_metrics", id);
      }
    }
  }
}

void validate_metrics(const Ontology& o, ValidationReport& r) {
  for (const auto& [name, m] : o.domain.metrics) {
    if (m.range_lo > m.range_hi) {
      add(r, violation::RANGE_INVERTED, "healthy_range lower bound exceeds upper bound", name);
    }
    bool consistent = m.direction == MetricDirection::HigherBetter
                          ? m.world_class >= m.range_lo
                          : m.world_class <= m.range_hi;
    if (m.range_lo <= m.range_hi && !consistent) {
      add(r, violation::WORLD_CLASS_INCONSISTENT,
          "world_class benchmark contradicts metric direction", name);
    }
  }
}

void validate_verticals(const Ontology& o, ValidationReport& r) {
  for (const auto& v : o.domain.verticals) {
    auto segments = split_path(v);
    bool malformed = false;
    for (const auto& seg : segments) {
      if (seg.empty()) {
        add(r, violation::EMPTY_SEGMENT, "vertical path has an empty segment", v);
        malformed = true;
        break;
      }
    }
    if (malformed) continue;
    if (static_cast<int>(segments.size()) > kMaxVerticalDepth) {
      add(r, violation::VERTICAL_TOO_DEEP,
          "vertical path exceeds depth " + std::to_string(kMaxVerticalDepth), v);
      continue;
    }
    for (const auto& parent : ancestors(v)) {
      if (o.domain.verticals.count(parent) == 0) {
        add(r, violation::HIERARCHY_ORPHAN, "parent vertical '" + parent + "' missing", v);
      }
    }
  }
}

void validate_entities(const Ontology& o, ValidationReport& r) {
  std::map<std::string, std::string> folded_terms;  // folded term -> original
  for (const auto& [term, entity] : o.domain.entities) {
    auto folded = text::fold_case(term);
    auto [it, inserted] = folded_terms.emplace(folded, term);
    if (!inserted && it->second != term) {
      add(r, violation::DUPLICATE_ENTITY,
          "terms '" + it->second + "' and '" + term + "' collide after case folding", term);
    }
  }
  std::map<std::string, std::string> synonym_owner;  // folded synonym -> entity term
  for (const auto& [term, entity] : o.domain.entities) {
    for (const auto& syn : entity.synonyms) {
      auto folded = text::fold_case(syn);
      auto [it, inserted] = synonym_owner.emplace(folded, term);
      if (!inserted && it->second != term) {
        add(r, violation::SYNONYM_OVERLAP,
            "synonym '" + syn + "' claimed by both '" + it->second + "' and '" + term + "'",
            term);
      }
    }
  }
}

void validate_interaction(const Ontology& o, ValidationReport& r) {
  for (const auto& h : o.interaction.handoffs) {
    if (h.from_role == h.to_role) {
      add(r, violation::SELF_HANDOFF, "handoff from a role to itself", h.from_role);
    }
    for (const auto& role : {h.from_role, h.to_role}) {
      if (o.roles.count(role) == 0) {
        add(r, violation::DANGLING_ROLE, "handoff names unknown role '" + role + "'",
            h.from_role + "->" + h.to_role);
      }
    }
  }
  for (const auto& chain : o.interaction.approval_chains) {
    if (chain.roles.empty()) {
      add(r, violation::EMPTY_CHAIN, "approval chain has no roles", "");
      continue;
    }
    for (const auto& role : chain.roles) {
      if (o.roles.count(role) == 0) {
        add(r, violation::DANGLING_ROLE, "approval chain names unknown role '" + role + "'",
            role);
      }
    }
  }
  for (const auto& [from, to] : o.interaction.escalation_paths) {
    for (const auto& role : {from, to}) {
      if (o.roles.count(role) == 0) {
        add(r, violation::DANGLING_ROLE, "escalation path names unknown role '" + role + "'",
            from);
      }
    }
  }
  // Escalation map must be acyclic: follow fallbacks from each role.
  for (const auto& [start, unused] : o.interaction.escalation_paths) {
    std::set<std::string> seen{start};
    std::string cur = start;
    while (true) {
      auto it = o.interaction.escalation_paths.find(cur);
      if (it == o.interaction.escalation_paths.end()) break;
      cur = it->second;
      if (!seen.insert(cur).second) {
        add(r, violation::ESCALATION_CYCLE, "escalation paths form a cycle", start);
        break;
      }
    }
  }
}

}  // namespace

ValidationReport validate_ontology(const Ontology& o) {
  ValidationReport report;
  if (o.industry_id.empty()) {
    add(report, violation::NO_ROLES, "industry_id empty", "");
  }
  validate_roles(o, report);
  validate_metrics(o, report);
  validate_verticals(o, report);
  validate_entities(o, report);
  validate_interaction(o, report);
  return report;
}

namespace {

void throw_for(const ValidationReport& report) {
  if (report.empty()) return;
  const Violation& v = report.violations.front();
  std::string msg = v.code + std::string(": ") + v.message +
                    (v.where.empty() ? "" : " (" + v.where + ")");
  if (v.code == violation::DANGLING_ROLE || v.code == violation::DANGLING_METRIC) {
    throw ReferenceError(msg);
  }
  if (v.code == violation::HIERARCHY_ORPHAN || v.code == violation::VERTICAL_TOO_DEEP ||
      v.code == violation::EMPTY_SEGMENT) {
    throw HierarchyError(msg);
  }
  throw SchemaError(msg);
}

}  // namespace

Ontology merge_overlay(const Ontology& base, const TenantOverlay& overlay) {
  Ontology merged = base;

  for (const auto& [id, ov] : overlay.role_overrides) {
    auto it = merged.roles.find(id);
    if (it == merged.roles.end()) {
      throw ReferenceError("role override targets nonexistent role '" + id + "'");
    }
    RoleDef& role = it->second;
    if (ov.decision_patterns) role.decision_patterns = *ov.decision_patterns;
    if (ov.metrics_focus) role.metrics_focus = *ov.metrics_focus;
    if (ov.communication_style) role.communication_style = *ov.communication_style;
    if (ov.expertise_domains) role.expertise_domains = *ov.expertise_domains;
    if (ov.approval_authority) role.approval_authority = *ov.approval_authority;
  }

  for (const auto& [name, ov] : overlay.metric_overrides) {
    auto it = merged.domain.metrics.find(name);
    if (it == merged.domain.metrics.end()) {
      throw ReferenceError("metric override targets nonexistent metric '" + name + "'");
    }
    MetricDef& m = it->second;
    if (ov.range_lo) m.range_lo = *ov.range_lo;
    if (ov.range_hi) m.range_hi = *ov.range_hi;
    if (ov.unit) m.unit = *ov.unit;
    if (ov.world_class) m.world_class = *ov.world_class;
    if (ov.direction) m.direction = *ov.direction;
  }

  // Additions are insert-or-replace so applying an overlay twice equals
  // applying it once.
  for (const auto& [term, entity] : overlay.added_entities) {
    merged.domain.entities[term] = entity;
  }
  for (const auto& h : overlay.added_handoffs) {
    bool present = std::any_of(merged.interaction.handoffs.begin(),
                               merged.interaction.handoffs.end(),
                               [&](const HandoffPattern& existing) { return existing == h; });
    if (!present) merged.interaction.handoffs.push_back(h);
  }

  throw_for(validate_ontology(merged));
  return merged;
}

}  // namespace ontoground
