#include "ontoground/blueprint.hpp"

#include <fstream>

#include "ontoground/errors.hpp"

namespace ontoground {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const char* ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(std::string("missing required field '") + key + "' in " + ctx);
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, const char* ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string()) {
    throw SchemaError(std::string("field '") + key + "' in " + ctx + " must be a string");
  }
  return v.get<std::string>();
}

std::set<std::string> string_set(const json& v, const char* key, const char* ctx) {
  if (!v.is_array()) {
    throw SchemaError(std::string("field '") + key + "' in " + ctx +
                      " must be an array of strings");
  }
  std::set<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw SchemaError(std::string("field '") + key + "' in " + ctx +
                        " must contain only strings");
    }
    out.insert(item.get<std::string>());
  }
  return out;
}

std::set<std::string> optional_string_set(const json& obj, const char* key, const char* ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  return string_set(*it, key, ctx);
}

RoleDef parse_role(const std::string& id, const json& j) {
  RoleDef role;
  role.id = id;
  const char* ctx = "role";
  role.decision_patterns = string_set(require(j, "decision_patterns", ctx), "decision_patterns", ctx);
  role.metrics_focus = string_set(require(j, "metrics_focus", ctx), "metrics_focus", ctx);
  role.communication_style = require_string(j, "communication_style", ctx);
  role.expertise_domains = optional_string_set(j, "expertise_domains", ctx);
  role.approval_authority = optional_string_set(j, "approval_authority", ctx);
  return role;
}

MetricDef parse_metric(const std::string& name, const json& j) {
  MetricDef m;
  m.name = name;
  const json& range = require(j, "healthy_range", "metric");
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
    throw SchemaError("metric '" + name + "' healthy_range must be [lo, hi]");
  }
  m.range_lo = range[0].get<double>();
  m.range_hi = range[1].get<double>();
  m.unit = j.value("unit", std::string{});
  const json& wc = require(j, "world_class", "metric");
  if (!wc.is_number()) throw SchemaError("metric '" + name + "' world_class must be numeric");
  m.world_class = wc.get<double>();
  m.direction = metric_direction_from_string(require_string(j, "direction", "metric"));
  return m;
}

EntityDef parse_entity(const std::string& term, const json& j) {
  EntityDef e;
  e.term = term;
  if (j.is_string()) {
    e.definition = j.get<std::string>();
    return e;
  }
  e.definition = require_string(j, "definition", "entity");
  e.synonyms = optional_string_set(j, "synonyms", "entity");
  return e;
}

GovernanceDef parse_governance(const std::string& id, const json& j) {
  GovernanceDef g;
  g.id = id;
  if (j.is_string()) {
    g.description = j.get<std::string>();
    return g;
  }
  g.description = require_string(j, "description", "governance");
  g.applies_to = optional_string_set(j, "applies_to", "governance");
  return g;
}

HandoffPattern parse_handoff(const json& j) {
  HandoffPattern h;
  h.from_role = require_string(j, "from_role", "handoff");
  h.to_role = require_string(j, "to_role", "handoff");
  h.trigger = require_string(j, "trigger", "handoff");
  h.artifacts = optional_string_set(j, "artifacts", "handoff");
  h.approval_required = j.value("approval_required", false);
  return h;
}

Lexicons parse_lexicons(const json& j) {
  Lexicons lex;
  if (auto it = j.find("decision_patterns"); it != j.end()) {
    for (const auto& [tag, words] : it->items()) {
      lex.decision_patterns[tag] = string_set(words, tag.c_str(), "lexicons");
    }
  }
  if (auto it = j.find("styles"); it != j.end()) {
    for (const auto& [tag, words] : it->items()) {
      lex.styles[tag] = string_set(words, tag.c_str(), "lexicons");
    }
  }
  return lex;
}

void throw_first(const ValidationReport& report) {
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

Ontology parse_blueprint(const json& document) {
  if (!document.is_object()) throw SchemaError("blueprint document must be an object");
  Ontology o;
  o.industry_id = require_string(document, "industry_id", "blueprint");

  const json& roles = require(document, "roles", "blueprint");
  if (!roles.is_object()) throw SchemaError("'roles' must map role id to definition");
  for (const auto& [id, def] : roles.items()) {
    o.roles.emplace(id, parse_role(id, def));
  }

  const json& domain = require(document, "domain", "blueprint");
  o.domain.verticals = optional_string_set(domain, "verticals", "domain");
  if (auto it = domain.find("entities"); it != domain.end()) {
    for (const auto& [term, def] : it->items()) {
      o.domain.entities.emplace(term, parse_entity(term, def));
    }
  }
  if (auto it = domain.find("metrics"); it != domain.end()) {
    for (const auto& [name, def] : it->items()) {
      o.domain.metrics.emplace(name, parse_metric(name, def));
    }
  }
  if (auto it = domain.find("governance"); it != domain.end()) {
    for (const auto& [id, def] : it->items()) {
      o.domain.governance.emplace(id, parse_governance(id, def));
    }
  }

  if (auto it = document.find("interaction"); it != document.end()) {
    if (auto h = it->find("handoffs"); h != it->end()) {
      for (const auto& entry : *h) o.interaction.handoffs.push_back(parse_handoff(entry));
    }
    if (auto a = it->find("approval_chains"); a != it->end()) {
      for (const auto& entry : *a) {
        ApprovalChain chain;
        const json& roles_j = require(entry, "roles", "approval_chain");
        if (!roles_j.is_array()) throw SchemaError("approval chain 'roles' must be an array");
        for (const auto& r : roles_j) chain.roles.push_back(r.get<std::string>());
        chain.timeout_seconds = entry.value("timeout_seconds", 0L);
        o.interaction.approval_chains.push_back(std::move(chain));
      }
    }
    if (auto p = it->find("escalation_paths"); p != it->end()) {
      for (const auto& [from, to] : p->items()) {
        if (!to.is_string()) throw SchemaError("escalation path target must be a role id");
        o.interaction.escalation_paths[from] = to.get<std::string>();
      }
    }
  }

  if (auto it = document.find("external_metrics"); it != document.end()) {
    o.external_metrics = string_set(*it, "external_metrics", "blueprint");
  }
  if (auto it = document.find("lexicons"); it != document.end()) {
    o.lexicons = parse_lexicons(*it);
  }
  return o;
}

Ontology load_blueprint(const json& document) {
  Ontology o = parse_blueprint(document);
  throw_first(validate_ontology(o));
  return o;
}

Ontology parse_blueprint_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open blueprint file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw SchemaError("blueprint is not valid JSON");
  return parse_blueprint(doc);
}

Ontology load_blueprint_text(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw SchemaError("blueprint is not valid JSON");
  return load_blueprint(doc);
}

Ontology load_blueprint_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open blueprint file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_blueprint_text(text);
}

json serialize_blueprint(const Ontology& o) {
  json doc;
  doc["industry_id"] = o.industry_id;
  json roles = json::object();
  for (const auto& [id, r] : o.roles) {
    roles[id] = {{"decision_patterns", r.decision_patterns},
                 {"metrics_focus", r.metrics_focus},
                 {"communication_style", r.communication_style},
                 {"expertise_domains", r.expertise_domains},
                 {"approval_authority", r.approval_authority}};
  }
  doc["roles"] = std::move(roles);

  json domain;
  domain["verticals"] = o.domain.verticals;
  json entities = json::object();
  for (const auto& [term, e] : o.domain.entities) {
    entities[term] = {{"definition", e.definition}, {"synonyms", e.synonyms}};
  }
  domain["entities"] = std::move(entities);
  json metrics = json::object();
  for (const auto& [name, m] : o.domain.metrics) {
    metrics[name] = {{"healthy_range", {m.range_lo, m.range_hi}},
                     {"unit", m.unit},
                     {"world_class", m.world_class},
                     {"direction", to_string(m.direction)}};
  }
  domain["metrics"] = std::move(metrics);
  json governance = json::object();
  for (const auto& [id, g] : o.domain.governance) {
    governance[id] = {{"description", g.description}, {"applies_to", g.applies_to}};
  }
  domain["governance"] = std::move(governance);
  doc["domain"] = std::move(domain);

  json interaction;
  json handoffs = json::array();
  for (const auto& h : o.interaction.handoffs) {
    handoffs.push_back({{"from_role", h.from_role},
                        {"to_role", h.to_role},
                        {"trigger", h.trigger},
                        {"artifacts", h.artifacts},
                        {"approval_required", h.approval_required}});
  }
  interaction["handoffs"] = std::move(handoffs);
  json chains = json::array();
  for (const auto& c : o.interaction.approval_chains) {
    chains.push_back({{"roles", c.roles}, {"timeout_seconds", c.timeout_seconds}});
  }
  interaction["approval_chains"] = std::move(chains);
  interaction["escalation_paths"] = o.interaction.escalation_paths;
  doc["interaction"] = std::move(interaction);

  doc["external_metrics"] = o.external_metrics;
  json lexicons;
  lexicons["decision_patterns"] = o.lexicons.decision_patterns;
  lexicons["styles"] = o.lexicons.styles;
  doc["lexicons"] = std::move(lexicons);
  return doc;
}

TenantOverlay load_overlay(const json& document) {
  if (!document.is_object()) throw SchemaError("overlay document must be an object");
  TenantOverlay overlay;
  overlay.tenant_id = require_string(document, "tenant_id", "overlay");

  if (auto it = document.find("role_overrides"); it != document.end()) {
    for (const auto& [id, j] : it->items()) {
      RoleOverride ov;
      if (j.contains("decision_patterns"))
        ov.decision_patterns = string_set(j["decision_patterns"], "decision_patterns", "overlay");
      if (j.contains("metrics_focus"))
        ov.metrics_focus = string_set(j["metrics_focus"], "metrics_focus", "overlay");
      if (j.contains("communication_style"))
        ov.communication_style = j["communication_style"].get<std::string>();
      if (j.contains("expertise_domains"))
        ov.expertise_domains = string_set(j["expertise_domains"], "expertise_domains", "overlay");
      if (j.contains("approval_authority"))
        ov.approval_authority = string_set(j["approval_authority"], "approval_authority", "overlay");
      overlay.role_overrides.emplace(id, std::move(ov));
    }
  }
  if (auto it = document.find("metric_overrides"); it != document.end()) {
    for (const auto& [name, j] : it->items()) {
      MetricOverride ov;
      if (j.contains("healthy_range")) {
        const json& range = j["healthy_range"];
        if (!range.is_array() || range.size() != 2) {
          throw SchemaError("overlay healthy_range must be [lo, hi]");
        }
        ov.range_lo = range[0].get<double>();
        ov.range_hi = range[1].get<double>();
      }
      if (j.contains("unit")) ov.unit = j["unit"].get<std::string>();
      if (j.contains("world_class")) ov.world_class = j["world_class"].get<double>();
      if (j.contains("direction"))
        ov.direction = metric_direction_from_string(j["direction"].get<std::string>());
      overlay.metric_overrides.emplace(name, std::move(ov));
    }
  }
  if (auto it = document.find("added_entities"); it != document.end()) {
    for (const auto& [term, def] : it->items()) {
      overlay.added_entities.emplace(term, parse_entity(term, def));
    }
  }
  if (auto it = document.find("added_handoffs"); it != document.end()) {
    for (const auto& entry : *it) overlay.added_handoffs.push_back(parse_handoff(entry));
  }
  return overlay;
}

TenantOverlay load_overlay_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open overlay file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw SchemaError("overlay is not valid JSON");
  return load_overlay(doc);
}

json serialize_overlay(const TenantOverlay& overlay) {
  json doc;
  doc["tenant_id"] = overlay.tenant_id;
  json role_overrides = json::object();
  for (const auto& [id, ov] : overlay.role_overrides) {
    json j = json::object();
    if (ov.decision_patterns) j["decision_patterns"] = *ov.decision_patterns;
    if (ov.metrics_focus) j["metrics_focus"] = *ov.metrics_focus;
    if (ov.communication_style) j["communication_style"] = *ov.communication_style;
    if (ov.expertise_domains) j["expertise_domains"] = *ov.expertise_domains;
    if (ov.approval_authority) j["approval_authority"] = *ov.approval_authority;
    role_overrides[id] = std::move(j);
  }
  doc["role_overrides"] = std::move(role_overrides);
  json metric_overrides = json::object();
  for (const auto& [name, ov] : overlay.metric_overrides) {
    json j = json::object();
    if (ov.range_lo && ov.range_hi) j["healthy_range"] = {*ov.range_lo, *ov.range_hi};
    if (ov.unit) j["unit"] = *ov.unit;
    if (ov.world_class) j["world_class"] = *ov.world_class;
    if (ov.direction) j["direction"] = to_string(*ov.direction);
    metric_overrides[name] = std::move(j);
  }
  doc["metric_overrides"] = std::move(metric_overrides);
  json added_entities = json::object();
  for (const auto& [term, e] : overlay.added_entities) {
    added_entities[term] = {{"definition", e.definition}, {"synonyms", e.synonyms}};
  }
  doc["added_entities"] = std::move(added_entities);
  json added_handoffs = json::array();
  for (const auto& h : overlay.added_handoffs) {
    added_handoffs.push_back({{"from_role", h.from_role},
                              {"to_role", h.to_role},
                              {"trigger", h.trigger},
                              {"artifacts", h.artifacts},
                              {"approval_required", h.approval_required}});
  }
  doc["added_handoffs"] = std::move(added_handoffs);
  return doc;
}

json report_to_json(const ValidationReport& report) {
  json out;
  out["valid"] = report.empty();
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"code", v.code}, {"message", v.message}, {"where", v.where}});
  }
  out["violations"] = std::move(violations);
  return out;
}

}  // namespace ontoground
