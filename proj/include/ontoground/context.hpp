#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontoground/ontology.hpp"

namespace ontoground {

enum class Layer { Role, Domain, Interaction };

std::string to_string(Layer layer);

struct ResolverConfig {
  int token_budget = 2000;
  long cache_ttl_seconds = 300;
  // Priority order is fixed: Role > Domain > Interaction.

  bool operator==(const ResolverConfig&) const = default;
};

/// One truncatable unit of rendered context: a single line of text.
struct ContextItem {
  std::string label;  // stable name used in truncation reports
  std::string line;

  bool operator==(const ContextItem&) const = default;
};

struct ContextSection {
  Layer layer = Layer::Role;
  std::vector<ContextItem> items;

  bool operator==(const ContextSection&) const = default;
};

struct TruncationEntry {
  Layer layer;
  std::string label;

  bool operator==(const TruncationEntry&) const = default;
};

/// Budget-truncated grounding context. token_count covers the item lines
/// (the grounding payload); section headers added by render() are display
/// framing and excluded from budget accounting.
struct ContextBundle {
  std::vector<ContextSection> sections;  // always ROLE, DOMAIN, INTERACTION order
  int token_count = 0;
  std::vector<TruncationEntry> truncation_report;

  /// Full text with `## <LAYER> CONTEXT` headers.
  std::string render() const;
  /// Machine-readable sidecar: sections, token_count, truncation_report.
  nlohmann::json to_json() const;

  bool operator==(const ContextBundle&) const = default;
};

/// Domain context matched against a query.
struct DomainContext {
  std::vector<std::string> verticals;  // selected vertical (deepest match or root)
  std::vector<EntityDef> entities;
  std::vector<MetricDef> metrics;
  std::vector<GovernanceDef> governance;
};

/// Lexicon match over the case-folded query: entities and metrics whose term
/// or synonym occurs in q; deepest vertical whose final segment occurs in q
/// (root vertical otherwise); governance scoped to the selected vertical.
DomainContext resolve_domain(const DomainOntology& d, const std::string& query);

/// Serialize role, domain, and interaction context into priority-ordered
/// sections (one line per item).
std::vector<ContextSection> serialize_sections(const RoleDef& role, const DomainContext& dctx,
                                               const InteractionOntology& interaction);

/// Priority truncation: drop whole items from INTERACTION, then DOMAIN, then
/// ROLE (last-to-first within a section) until token_count <= t_max. The
/// leading ROLE item is the anchor and is never dropped; throws
/// BudgetInfeasibleError when it alone exceeds t_max.
ContextBundle optimize(const std::vector<ContextSection>& sections, int t_max);

/// Algorithm: merge overlay, extract role, resolve domain, collect
/// interactions touching the role, serialize, truncate to budget. Caches
/// results per (tenant, role, industry, query+budget) with a TTL.
class ContextResolver {
 public:
  using Clock = std::function<int64_t()>;  // monotonic milliseconds

  ContextResolver();
  explicit ContextResolver(Clock clock);

  ContextBundle resolve(const std::string& query, const TenantOverlay* tenant,
                        const std::string& role, const Ontology& ontology,
                        const ResolverConfig& cfg);

  /// Number of cache-missing resolutions performed.
  int64_t resolutions() const;

 private:
  struct CacheEntry {
    ContextBundle bundle;
    int64_t expires_ms = 0;
  };

  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, CacheEntry> cache_;
  int64_t resolutions_ = 0;
};

}  // namespace ontoground
