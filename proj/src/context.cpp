#include "ontoground/context.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include "ontoground/errors.hpp"
#include "ontoground/text.hpp"

namespace ontoground {

using nlohmann::json;

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::Role: return "ROLE";
    case Layer::Domain: return "DOMAIN";
    case Layer::Interaction: return "INTERACTION";
  }
  return "ROLE";
}

std::string ContextBundle::render() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i > 0) out << '\n';
    out << "## " << to_string(sections[i].layer) << " CONTEXT\n";
    for (const auto& item : sections[i].items) out << item.line << '\n';
  }
  return out.str();
}

json ContextBundle::to_json() const {
  json out;
  json sections_j = json::array();
  for (const auto& section : sections) {
    json items = json::array();
    std::string text;
    for (const auto& item : section.items) {
      items.push_back({{"label", item.label}, {"line", item.line}});
      if (!text.empty()) text += '\n';
      text += item.line;
    }
    sections_j.push_back(
        {{"layer", to_string(section.layer)}, {"text", text}, {"items", std::move(items)}});
  }
  out["sections"] = std::move(sections_j);
  out["token_count"] = token_count;
  json dropped = json::array();
  for (const auto& entry : truncation_report) {
    dropped.push_back({{"layer", to_string(entry.layer)}, {"label", entry.label}});
  }
  out["truncation_report"] = std::move(dropped);
  return out;
}

namespace {

int path_depth(const std::string& path) {
  return static_cast<int>(std::count(path.begin(), path.end(), '.')) + 1;
}

std::string last_segment(const std::string& path) {
  auto dot = path.rfind('.');
  return dot == std::string::npos ? path : path.substr(dot + 1);
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

DomainContext resolve_domain(const DomainOntology& d, const std::string& query) {
  DomainContext ctx;
  const std::string q = text::fold_case(query);

  // Deepest vertical whose final segment occurs in the query; ties broken
  // lexicographically. Falls back to the (smallest) root vertical.
  std::string selected;
  int best_depth = 0;
  for (const auto& v : d.verticals) {
    if (!text::contains_term(q, text::fold_case(last_segment(v)))) continue;
    int depth = path_depth(v);
    if (depth > best_depth || (depth == best_depth && (selected.empty() || v < selected))) {
      best_depth = depth;
      selected = v;
    }
  }
  if (selected.empty()) {
    for (const auto& v : d.verticals) {
      if (path_depth(v) == 1) {
        selected = v;
        break;
      }
    }
  }
  if (!selected.empty()) ctx.verticals.push_back(selected);

  for (const auto& [term, entity] : d.entities) {
    bool hit = text::contains_term(q, text::fold_case(term));
    for (auto it = entity.synonyms.begin(); !hit && it != entity.synonyms.end(); ++it) {
      hit = text::contains_term(q, text::fold_case(*it));
    }
    if (hit) ctx.entities.push_back(entity);
  }
  for (const auto& [name, metric] : d.metrics) {
    if (text::contains_term(q, text::fold_case(name))) ctx.metrics.push_back(metric);
  }

  // Governance entries scoped to the selected vertical or one of its
  // ancestors (child verticals inherit parent constraints); an empty
  // applies_to set means domain-wide.
  std::set<std::string> scope;
  if (!selected.empty()) {
    scope.insert(selected);
    for (const auto& a : ancestors(selected)) scope.insert(a);
  }
  for (const auto& [id, gov] : d.governance) {
    bool applicable = gov.applies_to.empty();
    for (auto it = gov.applies_to.begin(); !applicable && it != gov.applies_to.end(); ++it) {
      applicable = scope.count(*it) > 0;
    }
    if (applicable) ctx.governance.push_back(gov);
  }
  return ctx;
}

std::vector<ContextSection> serialize_sections(const RoleDef& role, const DomainContext& dctx,
                                               const InteractionOntology& interaction) {
  std::vector<ContextSection> sections(3);
  auto& role_sec = sections[0];
  role_sec.layer = Layer::Role;
  // The bare role id leads the section; it is the truncation anchor.
  role_sec.items.push_back({"role", role.id});
  role_sec.items.push_back({"decision_patterns", "decision_patterns: " + join(role.decision_patterns)});
  role_sec.items.push_back({"metrics_focus", "metrics_focus: " + join(role.metrics_focus)});
  role_sec.items.push_back({"communication_style", "communication_style: " + role.communication_style});
  role_sec.items.push_back({"expertise_domains", "expertise_domains: " + join(role.expertise_domains)});
  role_sec.items.push_back({"approval_authority", "approval_authority: " + join(role.approval_authority)});

  auto& domain_sec = sections[1];
  domain_sec.layer = Layer::Domain;
  for (const auto& v : dctx.verticals) {
    domain_sec.items.push_back({"vertical:" + v, "vertical: " + v});
  }
  for (const auto& e : dctx.entities) {
    domain_sec.items.push_back({"entity:" + e.term, "entity: " + e.term + ": " + e.definition});
  }
  for (const auto& m : dctx.metrics) {
    std::ostringstream line;
    line << "metric: " << m.name << ": healthy range [" << m.range_lo << ", " << m.range_hi
         << "]" << (m.unit.empty() ? "" : " " + m.unit) << ", world-class " << m.world_class
         << ", " << to_string(m.direction);
    domain_sec.items.push_back({"metric:" + m.name, line.str()});
  }
  for (const auto& g : dctx.governance) {
    domain_sec.items.push_back({"governance:" + g.id, "governance: " + g.id + ": " + g.description});
  }

  auto& inter_sec = sections[2];
  inter_sec.layer = Layer::Interaction;
  for (const auto& h : interaction.handoffs) {
    if (h.from_role != role.id && h.to_role != role.id) continue;
    std::string line = "handoff: " + h.from_role + " -> " + h.to_role + " on " + h.trigger;
    if (!h.artifacts.empty()) line += "; artifacts: " + join(h.artifacts);
    line += h.approval_required ? "; approval required" : "; no approval required";
    inter_sec.items.push_back({"handoff:" + h.from_role + "->" + h.to_role, line});
  }
  for (const auto& chain : interaction.approval_chains) {
    if (std::find(chain.roles.begin(), chain.roles.end(), role.id) == chain.roles.end()) continue;
    std::string path;
    for (const auto& r : chain.roles) {
      if (!path.empty()) path += " -> ";
      path += r;
    }
    inter_sec.items.push_back({"approval_chain:" + path,
                               "approval_chain: " + path + " (timeout " +
                                   std::to_string(chain.timeout_seconds) + "s)"});
  }
  for (const auto& [from, to] : interaction.escalation_paths) {
    if (from != role.id && to != role.id) continue;
    inter_sec.items.push_back({"escalation:" + from, "escalation: " + from + " -> " + to});
  }
  return sections;
}

ContextBundle optimize(const std::vector<ContextSection>& sections, int t_max) {
  ContextBundle bundle;
  bundle.sections = sections;
  std::stable_sort(bundle.sections.begin(), bundle.sections.end(),
                   [](const ContextSection& a, const ContextSection& b) {
                     return static_cast<int>(a.layer) < static_cast<int>(b.layer);
                   });

  auto total = [&]() {
    int sum = 0;
    for (const auto& s : bundle.sections) {
      for (const auto& item : s.items) sum += text::count_tokens(item.line);
    }
    return sum;
  };

  const ContextSection* role_sec = nullptr;
  for (const auto& s : bundle.sections) {
    if (s.layer == Layer::Role && !s.items.empty()) role_sec = &s;
  }
  if (role_sec != nullptr && text::count_tokens(role_sec->items.front().line) > t_max) {
    throw BudgetInfeasibleError("leading ROLE item alone exceeds the token budget of " +
                                std::to_string(t_max));
  }

  // Lowest-priority section first, last item first; the leading ROLE item
  // stays (checked above).
  for (auto it = bundle.sections.rbegin(); it != bundle.sections.rend(); ++it) {
    ContextSection& section = *it;
    std::size_t keep_min = section.layer == Layer::Role && role_sec != nullptr ? 1 : 0;
    while (total() > t_max && section.items.size() > keep_min) {
      bundle.truncation_report.push_back({section.layer, section.items.back().label});
      section.items.pop_back();
    }
  }
  bundle.token_count = total();
  return bundle;
}

ContextResolver::ContextResolver()
    : ContextResolver([] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
      }) {}

ContextResolver::ContextResolver(Clock clock) : clock_(std::move(clock)) {}

ContextBundle ContextResolver::resolve(const std::string& query, const TenantOverlay* tenant,
                                       const std::string& role, const Ontology& ontology,
                                       const ResolverConfig& cfg) {
  if (cfg.token_budget < 1) {
    throw BudgetInfeasibleError("token_budget must be >= 1");
  }
  std::string key = (tenant != nullptr ? tenant->tenant_id : std::string("-")) + '\x1f' + role +
                    '\x1f' + ontology.industry_id + '\x1f' +
                    std::to_string(std::hash<std::string>{}(
                        query + '\x1f' + std::to_string(cfg.token_budget)));

  int64_t now = clock_();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.expires_ms > now) {
      return it->second.bundle;
    }
  }

  const Ontology* effective = &ontology;
  Ontology merged;
  if (tenant != nullptr) {
    merged = merge_overlay(ontology, *tenant);
    effective = &merged;
  }
  auto role_it = effective->roles.find(role);
  if (role_it == effective->roles.end()) {
    throw UnknownRoleError("role '" + role + "' not defined in ontology '" +
                           effective->industry_id + "'");
  }
  DomainContext dctx = resolve_domain(effective->domain, query);
  auto sections = serialize_sections(role_it->second, dctx, effective->interaction);
  ContextBundle bundle = optimize(sections, cfg.token_budget);

  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++resolutions_;
    cache_[key] = {bundle, now + cfg.cache_ttl_seconds * 1000};
  }
  return bundle;
}

int64_t ContextResolver::resolutions() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return resolutions_;
}

}  // namespace ontoground
