#pragma once

#include <string>
#include <vector>

#include "ontoground/compliance.hpp"
#include "ontoground/ontology.hpp"

namespace ontoground {

enum class EvalMetric { TF, MA, RC, RS };

std::string to_string(EvalMetric m);
EvalMetric eval_metric_from_string(const std::string& s);

struct EvidenceItem {
  std::string item;
  std::string verdict;  // OK, NEAR_MISS, OUT_OF_RANGE, UNKNOWN_METRIC, ...
};

/// A single response score in [0, 1]. For the three ratio metrics,
/// value * total_count == compliant_count; a zero denominator yields 1.0
/// with the vacuous flag set. RS carries its three sub-scores and equals
/// their arithmetic mean.
struct MetricScore {
  EvalMetric metric = EvalMetric::TF;
  double value = 1.0;
  bool vacuous = false;
  int compliant_count = 0;
  int total_count = 0;
  std::vector<EvidenceItem> evidence;
  double decision_match = 0.0;  // RS sub-scores
  double kpi_align = 0.0;
  double style_match = 0.0;
};

/// Terminological fidelity: share of extracted domain terms that match the
/// ontology lexicon (near-misses are the non-matching remainder).
MetricScore tf_score(const AgentResponse& a, const DomainOntology& domain);

/// Metric accuracy: share of cited metric values inside their healthy
/// range; references to unknown metric names count as invalid.
MetricScore ma_score(const AgentResponse& a, const DomainOntology& domain);

/// Regulatory compliance: share of cited regulatory frameworks defined in
/// domain governance.
MetricScore rc_score(const AgentResponse& a, const DomainOntology& domain);

/// Role consistency: mean of decision-pattern coverage, KPI alignment, and
/// communication-style match (lexicons shipped with the ontology).
MetricScore rs_score(const AgentResponse& a, const RoleDef& role, const Ontology& o);

struct ScoreSet {
  MetricScore tf, ma, rc, rs;

  double get(EvalMetric m) const;
};

ScoreSet score_response(const AgentResponse& a, const RoleDef& role, const Ontology& o);

}  // namespace ontoground
