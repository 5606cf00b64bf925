#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontoground/ontology.hpp"

namespace ontoground {

struct CitedMetric {
  std::string name;
  double value = 0.0;
  std::string unit;

  bool operator==(const CitedMetric&) const = default;
};

struct AgentResponse {
  std::string text;  // nonempty
  std::optional<std::string> declared_role;
  /// When the producer emits metric citations explicitly they take
  /// precedence over text extraction.
  std::optional<std::vector<CitedMetric>> cited_metrics;
};

struct ComplianceViolation {
  std::size_t begin = 0;  // byte offsets into the response text
  std::size_t end = 0;
  std::string span_text;
  std::string expected;
};

struct ClauseResult {
  char clause = 'A';  // A terminology, B metrics, C interactions, D governance
  bool passed = true;
  bool vacuous = false;  // no extractable candidates
  std::vector<ComplianceViolation> violations;
};

struct ComplianceReport {
  ClauseResult terminology;   // (a)
  ClauseResult metrics;       // (b)
  ClauseResult interactions;  // (c)
  ClauseResult governance;    // (d)
  bool overall = true;        // conjunction of the four clauses

  nlohmann::json to_json() const;
};

// ---- shared extraction (also used by the evaluation metrics) ----

/// Domain-term scan result. Known terms match an entity term, synonym, or
/// metric name after case folding; near-misses are within edit distance 1
/// of a lexicon term without matching any.
struct TermExtraction {
  std::vector<std::string> known;  // unique, folded, sorted
  struct NearMiss {
    std::string term;     // folded candidate
    std::string nearest;  // lexicon term it resembles
    std::size_t begin = 0;
    std::size_t end = 0;
  };
  std::vector<NearMiss> near_misses;
};

TermExtraction extract_terms(const std::string& text, const DomainOntology& domain);

struct MetricRef {
  std::string name;
  double value = 0.0;
  bool known_name = true;  // false when the name is absent from the metric map
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Explicit citations when present, otherwise name/number adjacency within
/// a sentence (each metric mention pairs with the nearest number).
std::vector<MetricRef> extract_metric_refs(const AgentResponse& response,
                                           const std::map<std::string, MetricDef>& metrics);

struct HandoffClaim {
  std::string from_role;
  std::string to_role;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Directed role-pair mentions of the form "<role> ... hands off|escalates
/// to ... <role>" within one sentence.
std::vector<HandoffClaim> extract_handoff_claims(const std::string& text,
                                                 const std::set<std::string>& role_ids);

struct RegulatoryRef {
  std::string id;  // canonical spelling from the matched lexicon
  bool in_governance = false;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Identifiers matching the governance lexicon plus a pattern list of
/// well-known regulatory framework names; unique by folded id.
std::vector<RegulatoryRef> extract_regulatory_refs(
    const std::string& text, const std::map<std::string, GovernanceDef>& governance);

// ---- Definition checks ----

ClauseResult check_terminology(const AgentResponse& a, const DomainOntology& domain);
ClauseResult check_metrics(const AgentResponse& a,
                           const std::map<std::string, MetricDef>& metrics);
ClauseResult check_interactions(const AgentResponse& a,
                                const std::vector<HandoffPattern>& handoffs,
                                const std::set<std::string>& role_ids);
ClauseResult check_governance(const AgentResponse& a,
                              const std::map<std::string, GovernanceDef>& governance);

/// Runs all four checks; overall is their conjunction. Pure and
/// deterministic.
ComplianceReport validate(const AgentResponse& a, const Ontology& o);

}  // namespace ontoground
