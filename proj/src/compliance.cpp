#include "ontoground/compliance.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "ontoground/text.hpp"

namespace ontoground {

using nlohmann::json;

namespace {

// Near-miss detection is restricted to reasonably long terms; short tokens
// ("are" vs "arr") would otherwise drown the check in false positives.
constexpr std::size_t kNearMissMinLength = 4;

std::vector<std::string> lexicon_terms(const DomainOntology& domain) {
  std::set<std::string> folded;
  for (const auto& [term, entity] : domain.entities) {
    folded.insert(text::fold_case(term));
    for (const auto& syn : entity.synonyms) folded.insert(text::fold_case(syn));
  }
  for (const auto& [name, metric] : domain.metrics) folded.insert(text::fold_case(name));
  return {folded.begin(), folded.end()};
}

bool is_capitalized(const std::string& token) {
  return !token.empty() && std::isupper(static_cast<unsigned char>(token[0]));
}

struct Candidate {
  std::string folded;
  std::size_t begin;
  std::size_t end;
};

std::vector<Candidate> term_candidates(const std::string& response_text) {
  std::vector<Candidate> candidates;
  auto spans = text::word_spans(response_text);
  for (const auto& s : spans) {
    candidates.push_back({text::fold_case(s.token), s.begin, s.end});
  }
  // Conservative multi-word heuristic: adjacent capitalized tokens separated
  // by a single space form one candidate phrase.
  for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
    if (!is_capitalized(spans[i].token)) continue;
    std::size_t j = i;
    while (j + 1 < spans.size() && is_capitalized(spans[j + 1].token) &&
           spans[j + 1].begin == spans[j].end + 1 &&
           response_text[spans[j].end] == ' ') {
      ++j;
    }
    if (j > i) {
      std::string phrase = response_text.substr(spans[i].begin, spans[j].end - spans[i].begin);
      candidates.push_back({text::fold_case(phrase), spans[i].begin, spans[j].end});
    }
  }
  return candidates;
}

// Well-known regulatory framework names; mentions of these are treated as
// regulatory claims even when the ontology does not define them.
const std::array<const char*, 30> kFrameworkShapes = {
    "HIPAA",    "GDPR",     "SOX",       "PCI-DSS",  "PCI DSS",   "Basel III",
    "Basel IV", "CCPA",     "FERPA",     "GLBA",     "SOC 2",     "ISO 27001",
    "CMS",      "BSA-AML",  "BSA",       "AML",      "KYC",       "MiFID II",
    "EU AI Act", "SBV",     "MoF",       "Solvency II", "FINRA",  "FDIC",
    "OCC",      "NAIC",     "IFRS 17",   "DORA",     "FATCA",     "CFPB"};

std::vector<text::Span> find_occurrences(const std::string& hay_folded,
                                         const std::string& term_folded) {
  std::vector<text::Span> spans;
  if (term_folded.empty()) return spans;
  std::size_t pos = 0;
  while ((pos = hay_folded.find(term_folded, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !text::is_word_char(hay_folded[pos - 1]);
    std::size_t after = pos + term_folded.size();
    bool right_ok = after >= hay_folded.size() || !text::is_word_char(hay_folded[after]);
    if (left_ok && right_ok) spans.push_back({pos, after, term_folded});
    ++pos;
  }
  return spans;
}

}  // namespace

TermExtraction extract_terms(const std::string& response_text, const DomainOntology& domain) {
  TermExtraction out;
  auto lexicon = lexicon_terms(domain);
  std::set<std::string> known;
  std::set<std::string> missed;
  for (const auto& cand : term_candidates(response_text)) {
    if (std::binary_search(lexicon.begin(), lexicon.end(), cand.folded)) {
      known.insert(cand.folded);
      continue;
    }
    if (cand.folded.size() < kNearMissMinLength) continue;
    for (const auto& term : lexicon) {
      if (term.size() < kNearMissMinLength) continue;
      if (text::bounded_edit_distance(cand.folded, term, 1) <= 1) {
        if (missed.insert(cand.folded).second) {
          out.near_misses.push_back({cand.folded, term, cand.begin, cand.end});
        }
        break;
      }
    }
  }
  out.known.assign(known.begin(), known.end());
  std::sort(out.near_misses.begin(), out.near_misses.end(),
            [](const auto& a, const auto& b) { return a.term < b.term; });
  return out;
}

std::vector<MetricRef> extract_metric_refs(const AgentResponse& response,
                                           const std::map<std::string, MetricDef>& metrics) {
  std::vector<MetricRef> refs;
  if (response.cited_metrics.has_value()) {
    for (const auto& cited : *response.cited_metrics) {
      refs.push_back({cited.name, cited.value, metrics.count(cited.name) > 0, 0, 0});
    }
    return refs;
  }

  const std::string folded = text::fold_case(response.text);
  for (const auto& sentence : text::split_sentences(folded)) {
    // Numbers in this sentence (positions global to the response text).
    struct Number {
      std::size_t begin, end;
      double value;
    };
    std::vector<Number> numbers;
    std::size_t i = sentence.begin;
    while (i < sentence.end) {
      double value = 0.0;
      std::size_t end = i;
      bool starts = !text::is_word_char(folded[i]) ? false : true;
      if (starts && (i == 0 || !text::is_word_char(folded[i - 1])) &&
          text::parse_number(folded, i, value, end) && end <= sentence.end) {
        numbers.push_back({i, end, value});
        i = end;
      } else {
        ++i;
      }
    }
    if (numbers.empty()) continue;

    for (const auto& [name, metric] : metrics) {
      auto name_folded = text::fold_case(name);
      for (const auto& occ : find_occurrences(folded, name_folded)) {
        if (occ.begin < sentence.begin || occ.end > sentence.end) continue;
        // Nearest number by character gap; ties prefer the following one.
        const Number* best = nullptr;
        std::size_t best_gap = 0;
        for (const auto& num : numbers) {
          std::size_t gap = num.begin >= occ.end ? num.begin - occ.end
                            : occ.begin >= num.end ? occ.begin - num.end
                                                   : 0;
          bool better = best == nullptr || gap < best_gap ||
                        (gap == best_gap && num.begin >= occ.end && best->begin < occ.begin);
          if (better) {
            best = &num;
            best_gap = gap;
          }
        }
        refs.push_back({name, best->value, true, occ.begin, occ.end});
      }
    }
  }
  std::sort(refs.begin(), refs.end(), [](const MetricRef& a, const MetricRef& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.name < b.name;
  });
  return refs;
}

std::vector<HandoffClaim> extract_handoff_claims(const std::string& response_text,
                                                 const std::set<std::string>& role_ids) {
  static const std::array<const char*, 7> kVerbs = {
      "hands off to", "hand off to", "handoff to",  "handed off to",
      "escalates to", "escalate to", "escalated to"};

  std::vector<HandoffClaim> claims;
  const std::string folded = text::fold_case(response_text);
  for (const auto& sentence : text::split_sentences(folded)) {
    // Role mentions within this sentence.
    struct Mention {
      std::string role;
      std::size_t begin, end;
    };
    std::vector<Mention> mentions;
    for (const auto& role : role_ids) {
      for (const auto& occ : find_occurrences(folded, text::fold_case(role))) {
        if (occ.begin >= sentence.begin && occ.end <= sentence.end) {
          mentions.push_back({role, occ.begin, occ.end});
        }
      }
    }
    if (mentions.size() < 2) continue;
    std::sort(mentions.begin(), mentions.end(),
              [](const Mention& a, const Mention& b) { return a.begin < b.begin; });

    for (const char* verb : kVerbs) {
      for (const auto& occ : find_occurrences(folded, verb)) {
        if (occ.begin < sentence.begin || occ.end > sentence.end) continue;
        const Mention* before = nullptr;
        const Mention* after = nullptr;
        for (const auto& m : mentions) {
          if (m.end <= occ.begin && (before == nullptr || m.begin > before->begin)) before = &m;
          if (m.begin >= occ.end && (after == nullptr || m.begin < after->begin)) after = &m;
        }
        if (before != nullptr && after != nullptr) {
          claims.push_back({before->role, after->role, before->begin, after->end});
        }
      }
    }
  }
  std::sort(claims.begin(), claims.end(), [](const HandoffClaim& a, const HandoffClaim& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.from_role < b.from_role;
  });
  claims.erase(std::unique(claims.begin(), claims.end(),
                           [](const HandoffClaim& a, const HandoffClaim& b) {
                             return a.from_role == b.from_role && a.to_role == b.to_role &&
                                    a.begin == b.begin;
                           }),
               claims.end());
  return claims;
}

std::vector<RegulatoryRef> extract_regulatory_refs(
    const std::string& response_text, const std::map<std::string, GovernanceDef>& governance) {
  const std::string folded = text::fold_case(response_text);

  // Lexicon: ontology governance ids first (canonical), then the built-in
  // framework shapes. Folded id -> canonical spelling.
  std::map<std::string, std::string> lexicon;
  std::set<std::string> in_g;
  for (const auto& [id, gov] : governance) {
    lexicon[text::fold_case(id)] = id;
    in_g.insert(text::fold_case(id));
  }
  for (const char* shape : kFrameworkShapes) {
    lexicon.emplace(text::fold_case(shape), shape);
  }

  struct Hit {
    std::size_t begin, end;
    std::string folded_id;
  };
  std::vector<Hit> hits;
  for (const auto& [folded_id, canonical] : lexicon) {
    for (const auto& occ : find_occurrences(folded, folded_id)) {
      hits.push_back({occ.begin, occ.end, folded_id});
    }
  }
  // Longest-match wins: drop hits fully contained in a strictly longer hit
  // (a "BSA-AML" mention should not also count as "BSA" and "AML").
  std::vector<RegulatoryRef> refs;
  std::set<std::string> seen;
  for (const auto& h : hits) {
    bool shadowed = std::any_of(hits.begin(), hits.end(), [&](const Hit& other) {
      return (other.end - other.begin) > (h.end - h.begin) && other.begin <= h.begin &&
             other.end >= h.end;
    });
    if (shadowed || !seen.insert(h.folded_id).second) continue;
    refs.push_back({lexicon.at(h.folded_id), in_g.count(h.folded_id) > 0, h.begin, h.end});
  }
  std::sort(refs.begin(), refs.end(),
            [](const RegulatoryRef& a, const RegulatoryRef& b) { return a.id < b.id; });
  return refs;
}

ClauseResult check_terminology(const AgentResponse& a, const DomainOntology& domain) {
  ClauseResult result;
  result.clause = 'A';
  auto extraction = extract_terms(a.text, domain);
  result.vacuous = extraction.known.empty() && extraction.near_misses.empty();
  for (const auto& miss : extraction.near_misses) {
    result.violations.push_back({miss.begin, miss.end, miss.term,
                                 "undefined term resembling '" + miss.nearest + "'"});
  }
  result.passed = result.violations.empty();
  return result;
}

ClauseResult check_metrics(const AgentResponse& a,
                           const std::map<std::string, MetricDef>& metrics) {
  ClauseResult result;
  result.clause = 'B';
  auto refs = extract_metric_refs(a, metrics);
  result.vacuous = refs.empty();
  for (const auto& ref : refs) {
    if (!ref.known_name) continue;  // no defined range to check against
    const MetricDef& def = metrics.at(ref.name);
    if (!def.in_healthy_range(ref.value)) {
      std::ostringstream expected;
      expected << ref.name << " healthy range is [" << def.range_lo << ", " << def.range_hi
               << "]" << (def.unit.empty() ? "" : " " + def.unit);
      result.violations.push_back({ref.begin, ref.end,
                                   ref.name + "=" + std::to_string(ref.value), expected.str()});
    }
  }
  result.passed = result.violations.empty();
  return result;
}

ClauseResult check_interactions(const AgentResponse& a,
                                const std::vector<HandoffPattern>& handoffs,
                                const std::set<std::string>& role_ids) {
  ClauseResult result;
  result.clause = 'C';
  auto claims = extract_handoff_claims(a.text, role_ids);
  result.vacuous = claims.empty();
  for (const auto& claim : claims) {
    bool allowed = std::any_of(handoffs.begin(), handoffs.end(), [&](const HandoffPattern& h) {
      return h.from_role == claim.from_role && h.to_role == claim.to_role;
    });
    if (!allowed) {
      result.violations.push_back({claim.begin, claim.end,
                                   claim.from_role + " -> " + claim.to_role,
                                   "no such handoff pattern"});
    }
  }
  result.passed = result.violations.empty();
  return result;
}

ClauseResult check_governance(const AgentResponse& a,
                              const std::map<std::string, GovernanceDef>& governance) {
  ClauseResult result;
  result.clause = 'D';
  auto refs = extract_regulatory_refs(a.text, governance);
  result.vacuous = refs.empty();
  for (const auto& ref : refs) {
    if (!ref.in_governance) {
      result.violations.push_back({ref.begin, ref.end, ref.id,
                                   "framework not defined in domain governance"});
    }
  }
  result.passed = result.violations.empty();
  return result;
}

ComplianceReport validate(const AgentResponse& a, const Ontology& o) {
  ComplianceReport report;
  std::set<std::string> role_ids;
  for (const auto& [id, role] : o.roles) role_ids.insert(id);
  report.terminology = check_terminology(a, o.domain);
  report.metrics = check_metrics(a, o.domain.metrics);
  report.interactions = check_interactions(a, o.interaction.handoffs, role_ids);
  report.governance = check_governance(a, o.domain.governance);
  report.overall = report.terminology.passed && report.metrics.passed &&
                   report.interactions.passed && report.governance.passed;
  return report;
}

json ComplianceReport::to_json() const {
  auto clause_json = [](const ClauseResult& c) {
    json violations = json::array();
    for (const auto& v : c.violations) {
      violations.push_back({{"begin", v.begin},
                            {"end", v.end},
                            {"span", v.span_text},
                            {"expected", v.expected}});
    }
    return json{{"clause", std::string(1, c.clause)},
                {"passed", c.passed},
                {"vacuous", c.vacuous},
                {"violations", std::move(violations)}};
  };
  return json{{"overall", overall},
              {"clauses",
               {clause_json(terminology), clause_json(metrics), clause_json(interactions),
                clause_json(governance)}}};
}

}  // namespace ontoground
