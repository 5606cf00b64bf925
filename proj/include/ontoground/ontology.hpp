#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ontoground {

/// How organizational roles think, decide, and communicate.
struct RoleDef {
  std::string id;
  std::set<std::string> decision_patterns;
  std::set<std::string> metrics_focus;
  std::string communication_style;
  std::set<std::string> expertise_domains;
  std::set<std::string> approval_authority;

  bool operator==(const RoleDef&) const = default;
};

enum class MetricDirection { HigherBetter, LowerBetter };

std::string to_string(MetricDirection d);
MetricDirection metric_direction_from_string(const std::string& s);

/// Quantitative measure with a healthy range and world-class benchmark.
struct MetricDef {
  std::string name;
  double range_lo = 0.0;
  double range_hi = 0.0;  // closed interval [lo, hi]
  std::string unit;
  double world_class = 0.0;
  MetricDirection direction = MetricDirection::HigherBetter;

  bool in_healthy_range(double v) const { return v >= range_lo && v <= range_hi; }
  bool operator==(const MetricDef&) const = default;
};

struct EntityDef {
  std::string term;
  std::string definition;
  std::set<std::string> synonyms;

  bool operator==(const EntityDef&) const = default;
};

/// Regulatory framework scoped to verticals; empty applies_to means the
/// framework applies to every vertical of the domain.
struct GovernanceDef {
  std::string id;
  std::string description;
  std::set<std::string> applies_to;

  bool operator==(const GovernanceDef&) const = default;
};

struct DomainOntology {
  std::set<std::string> verticals;                // dot-separated hierarchy paths
  std::map<std::string, EntityDef> entities;      // keyed by term
  std::map<std::string, MetricDef> metrics;       // keyed by name
  std::map<std::string, GovernanceDef> governance;  // keyed by framework id

  bool operator==(const DomainOntology&) const = default;
};

struct HandoffPattern {
  std::string from_role;
  std::string to_role;
  std::string trigger;
  std::set<std::string> artifacts;
  bool approval_required = false;

  bool operator==(const HandoffPattern&) const = default;
};

struct ApprovalChain {
  std::vector<std::string> roles;  // ordered
  long timeout_seconds = 0;        // stored, not enforced

  bool operator==(const ApprovalChain&) const = default;
};

struct InteractionOntology {
  std::vector<HandoffPattern> handoffs;
  std::vector<ApprovalChain> approval_chains;
  std::map<std::string, std::string> escalation_paths;  // role -> fallback role

  bool operator==(const InteractionOntology&) const = default;
};

/// Keyword groups used by the response scorer. Decision-pattern tags and
/// communication-style tags map to small word lists shipped with each
/// blueprint; tags without an entry fall back to their own words.
struct Lexicons {
  std::map<std::string, std::set<std::string>> decision_patterns;
  std::map<std::string, std::set<std::string>> styles;

  bool operator==(const Lexicons&) const = default;
};

/// Three-layer enterprise ontology: roles, domain, interaction.
struct Ontology {
  std::string industry_id;
  std::map<std::string, RoleDef> roles;
  DomainOntology domain;
  InteractionOntology interaction;
  std::set<std::string> external_metrics;  // allowlist for role KPIs not in domain.metrics
  Lexicons lexicons;

  bool operator==(const Ontology&) const = default;
};

/// Partial role override: only present fields replace the base.
struct RoleOverride {
  std::optional<std::set<std::string>> decision_patterns;
  std::optional<std::set<std::string>> metrics_focus;
  std::optional<std::string> communication_style;
  std::optional<std::set<std::string>> expertise_domains;
  std::optional<std::set<std::string>> approval_authority;

  bool operator==(const RoleOverride&) const = default;
};

struct MetricOverride {
  std::optional<double> range_lo;
  std::optional<double> range_hi;
  std::optional<std::string> unit;
  std::optional<double> world_class;
  std::optional<MetricDirection> direction;

  bool operator==(const MetricOverride&) const = default;
};

/// Tenant customization. Not a valid Ontology on its own.
struct TenantOverlay {
  std::string tenant_id;
  std::map<std::string, RoleOverride> role_overrides;
  std::map<std::string, MetricOverride> metric_overrides;
  std::map<std::string, EntityDef> added_entities;
  std::vector<HandoffPattern> added_handoffs;

  bool operator==(const TenantOverlay&) const = default;
};

struct Violation {
  std::string code;
  std::string message;
  std::string where;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  bool has(const std::string& code) const;
};

// Violation codes emitted by validate_ontology.
namespace violation {
inline constexpr const char* NO_ROLES = "NO_ROLES";
inline constexpr const char* BAD_ROLE_ID = "BAD_ROLE_ID";
inline constexpr const char* ROLE_NO_PATTERN = "ROLE_NO_PATTERN";
inline constexpr const char* ROLE_NO_METRIC = "ROLE_NO_METRIC";
inline constexpr const char* DANGLING_METRIC = "DANGLING_METRIC";
inline constexpr const char* RANGE_INVERTED = "RANGE_INVERTED";
inline constexpr const char* WORLD_CLASS_INCONSISTENT = "WORLD_CLASS_INCONSISTENT";
inline constexpr const char* EMPTY_SEGMENT = "EMPTY_SEGMENT";
inline constexpr const char* HIERARCHY_ORPHAN = "HIERARCHY_ORPHAN";
inline constexpr const char* VERTICAL_TOO_DEEP = "VERTICAL_TOO_DEEP";
inline constexpr const char* DUPLICATE_ENTITY = "DUPLICATE_ENTITY";
inline constexpr const char* SYNONYM_OVERLAP = "SYNONYM_OVERLAP";
inline constexpr const char* SELF_HANDOFF = "SELF_HANDOFF";
inline constexpr const char* DANGLING_ROLE = "DANGLING_ROLE";
inline constexpr const char* EMPTY_CHAIN = "EMPTY_CHAIN";
inline constexpr const char* ESCALATION_CYCLE = "ESCALATION_CYCLE";
}  // namespace violation

/// Maximum vertical path depth accepted by the loader and validator.
inline constexpr int kMaxVerticalDepth = 6;

/// Strict dot-prefixes of `path`, shortest first. Throws FormatError on an
/// empty segment or a path deeper than kMaxVerticalDepth.
std::vector<std::string> ancestors(const std::string& path);

/// Segment split without validation (used by the validator itself).
std::vector<std::string> split_path(const std::string& path);

/// Checks every type invariant by direct inspection; violations are data,
/// not errors.
ValidationReport validate_ontology(const Ontology& o);

/// Overlay fields win over base on conflicts; additions appended; result
/// revalidated. Base is unmodified. Throws ReferenceError when an override
/// targets a nonexistent id, SchemaError/HierarchyError when the merged
/// result fails revalidation.
Ontology merge_overlay(const Ontology& base, const TenantOverlay& overlay);

}  // namespace ontoground
