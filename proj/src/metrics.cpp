#include "ontoground/metrics.hpp"

#include <algorithm>

#include "ontoground/errors.hpp"
#include "ontoground/text.hpp"

namespace ontoground {

std::string to_string(EvalMetric m) {
  switch (m) {
    case EvalMetric::TF: return "tf";
    case EvalMetric::MA: return "ma";
    case EvalMetric::RC: return "rc";
    case EvalMetric::RS: return "rs";
  }
  return "tf";
}

EvalMetric eval_metric_from_string(const std::string& s) {
  if (s == "tf" || s == "TF") return EvalMetric::TF;
  if (s == "ma" || s == "MA") return EvalMetric::MA;
  if (s == "rc" || s == "RC") return EvalMetric::RC;
  if (s == "rs" || s == "RS") return EvalMetric::RS;
  throw FormatError("unknown metric '" + s + "' (expected tf, ma, rc, or rs)");
}

namespace {

MetricScore ratio_score(EvalMetric metric, int compliant, int total) {
  MetricScore score;
  score.metric = metric;
  score.compliant_count = compliant;
  score.total_count = total;
  if (total == 0) {
    score.value = 1.0;
    score.vacuous = true;
  } else {
    score.value = static_cast<double>(compliant) / static_cast<double>(total);
  }
  return score;
}

/// Keyword group for a tag: the shipped lexicon entry when present, the
/// tag's own words otherwise.
std::set<std::string> tag_group(const std::map<std::string, std::set<std::string>>& lexicon,
                                const std::string& tag) {
  auto it = lexicon.find(tag);
  if (it != lexicon.end() && !it->second.empty()) {
    std::set<std::string> folded;
    for (const auto& w : it->second) folded.insert(text::fold_case(w));
    return folded;
  }
  std::set<std::string> fallback;
  for (const auto& span : text::word_spans(tag)) fallback.insert(text::fold_case(span.token));
  return fallback;
}

bool group_hit(const std::string& folded_text, const std::set<std::string>& group) {
  return std::any_of(group.begin(), group.end(), [&](const std::string& word) {
    return text::contains_term(folded_text, word);
  });
}

int group_hit_count(const std::string& folded_text, const std::set<std::string>& group) {
  int hits = 0;
  for (const auto& word : group) {
    if (text::contains_term(folded_text, word)) ++hits;
  }
  return hits;
}

}  // namespace

MetricScore tf_score(const AgentResponse& a, const DomainOntology& domain) {
  auto extraction = extract_terms(a.text, domain);
  int known = static_cast<int>(extraction.known.size());
  int total = known + static_cast<int>(extraction.near_misses.size());
  MetricScore score = ratio_score(EvalMetric::TF, known, total);
  for (const auto& term : extraction.known) score.evidence.push_back({term, "OK"});
  for (const auto& miss : extraction.near_misses) {
    score.evidence.push_back({miss.term, "NEAR_MISS of '" + miss.nearest + "'"});
  }
  return score;
}

MetricScore ma_score(const AgentResponse& a, const DomainOntology& domain) {
  auto refs = extract_metric_refs(a, domain.metrics);
  int compliant = 0;
  std::vector<EvidenceItem> evidence;
  for (const auto& ref : refs) {
    if (!ref.known_name) {
      evidence.push_back({ref.name, "UNKNOWN_METRIC"});
      continue;
    }
    const MetricDef& def = domain.metrics.at(ref.name);
    if (def.in_healthy_range(ref.value)) {
      ++compliant;
      evidence.push_back({ref.name, "OK"});
    } else {
      evidence.push_back({ref.name, "OUT_OF_RANGE"});
    }
  }
  MetricScore score = ratio_score(EvalMetric::MA, compliant, static_cast<int>(refs.size()));
  score.evidence = std::move(evidence);
  return score;
}

MetricScore rc_score(const AgentResponse& a, const DomainOntology& domain) {
  auto refs = extract_regulatory_refs(a.text, domain.governance);
  int compliant = 0;
  std::vector<EvidenceItem> evidence;
  for (const auto& ref : refs) {
    if (ref.in_governance) {
      ++compliant;
      evidence.push_back({ref.id, "OK"});
    } else {
      evidence.push_back({ref.id, "NOT_IN_GOVERNANCE"});
    }
  }
  MetricScore score = ratio_score(EvalMetric::RC, compliant, static_cast<int>(refs.size()));
  score.evidence = std::move(evidence);
  return score;
}

MetricScore rs_score(const AgentResponse& a, const RoleDef& role, const Ontology& o) {
  MetricScore score;
  score.metric = EvalMetric::RS;
  const std::string folded = text::fold_case(a.text);

  // Decision-pattern coverage: fraction of the role's pattern groups with
  // at least one keyword hit.
  if (role.decision_patterns.empty()) {
    score.decision_match = 0.0;
  } else {
    int hit = 0;
    for (const auto& tag : role.decision_patterns) {
      auto group = tag_group(o.lexicons.decision_patterns, tag);
      if (group_hit(folded, group)) {
        ++hit;
        score.evidence.push_back({"pattern:" + tag, "HIT"});
      } else {
        score.evidence.push_back({"pattern:" + tag, "MISS"});
      }
    }
    score.decision_match =
        static_cast<double>(hit) / static_cast<double>(role.decision_patterns.size());
  }

  // KPI alignment: cited metric names inside the role's focus set. External
  // KPIs in the focus set count as citable names too.
  auto extended = o.domain.metrics;
  for (const auto& name : role.metrics_focus) {
    extended.emplace(name, MetricDef{name, 0.0, 0.0, "", 0.0, MetricDirection::HigherBetter});
  }
  std::set<std::string> cited;
  for (const auto& ref : extract_metric_refs(a, extended)) cited.insert(ref.name);
  if (cited.empty()) {
    score.kpi_align = 1.0;  // vacuous by convention
  } else {
    int aligned = 0;
    for (const auto& name : cited) {
      bool in_focus = role.metrics_focus.count(name) > 0;
      if (in_focus) ++aligned;
      score.evidence.push_back({"kpi:" + name, in_focus ? "IN_FOCUS" : "OFF_FOCUS"});
    }
    score.kpi_align = static_cast<double>(aligned) / static_cast<double>(cited.size());
  }

  // Style: the response's style-lexicon majority must be the role's
  // communication style (must have at least one hit and no style beats it).
  std::map<std::string, int> style_hits;
  std::set<std::string> style_tags;
  for (const auto& [tag, words] : o.lexicons.styles) style_tags.insert(tag);
  style_tags.insert(role.communication_style);
  for (const auto& tag : style_tags) {
    style_hits[tag] = group_hit_count(folded, tag_group(o.lexicons.styles, tag));
  }
  int own = style_hits[role.communication_style];
  int best = 0;
  for (const auto& [tag, hits] : style_hits) best = std::max(best, hits);
  score.style_match = own > 0 && own == best ? 1.0 : 0.0;
  score.evidence.push_back(
      {"style:" + role.communication_style, score.style_match == 1.0 ? "MAJORITY" : "MINORITY"});

  score.value = (score.decision_match + score.kpi_align + score.style_match) / 3.0;
  return score;
}

double ScoreSet::get(EvalMetric m) const {
  switch (m) {
    case EvalMetric::TF: return tf.value;
    case EvalMetric::MA: return ma.value;
    case EvalMetric::RC: return rc.value;
    case EvalMetric::RS: return rs.value;
  }
  return tf.value;
}

ScoreSet score_response(const AgentResponse& a, const RoleDef& role, const Ontology& o) {
  ScoreSet set;
  set.tf = tf_score(a, o.domain);
  set.ma = ma_score(a, o.domain);
  set.rc = rc_score(a, o.domain);
  set.rs = rs_score(a, role, o);
  return set;
}

}  // namespace ontoground
