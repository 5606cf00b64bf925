#include "ontoground/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ontoground/errors.hpp"
#include "ontoground/text.hpp"

namespace ontoground {

using nlohmann::json;

std::string to_string(TaskCategory c) {
  switch (c) {
    case TaskCategory::Terminology: return "terminology";
    case TaskCategory::Metric: return "metric";
    case TaskCategory::Regulatory: return "regulatory";
    case TaskCategory::Role: return "role";
    case TaskCategory::CrossCutting: return "cross-cutting";
  }
  return "terminology";
}

TaskCategory task_category_from_string(const std::string& s) {
  if (s == "terminology") return TaskCategory::Terminology;
  if (s == "metric") return TaskCategory::Metric;
  if (s == "regulatory") return TaskCategory::Regulatory;
  if (s == "role") return TaskCategory::Role;
  if (s == "cross-cutting") return TaskCategory::CrossCutting;
  throw FormatError("unknown task category '" + s + "'");
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::C1: return "C1";
    case Condition::C2: return "C2";
    case Condition::C3: return "C3";
    case Condition::C4: return "C4";
  }
  return "C1";
}

Condition condition_from_string(const std::string& s) {
  if (s == "C1") return Condition::C1;
  if (s == "C2") return Condition::C2;
  if (s == "C3") return Condition::C3;
  if (s == "C4") return Condition::C4;
  throw FormatError("unknown condition '" + s + "' (expected C1..C4)");
}

std::string level_tag(Condition c) {
  switch (c) {
    case Condition::C1: return "L0";
    case Condition::C2: return "-";
    case Condition::C3: return "L2";
    case Condition::C4: return "L3";
  }
  return "L0";
}

std::vector<EvalMetric> tested_metrics(TaskCategory category) {
  switch (category) {
    case TaskCategory::Terminology: return {EvalMetric::TF};
    case TaskCategory::Metric: return {EvalMetric::MA};
    case TaskCategory::Regulatory: return {EvalMetric::RC};
    case TaskCategory::Role: return {EvalMetric::RS};
    case TaskCategory::CrossCutting:
      return {EvalMetric::TF, EvalMetric::MA, EvalMetric::RC, EvalMetric::RS};
  }
  return {EvalMetric::TF};
}

double RunRecord::score(EvalMetric m) const {
  switch (m) {
    case EvalMetric::TF: return tf;
    case EvalMetric::MA: return ma;
    case EvalMetric::RC: return rc;
    case EvalMetric::RS: return rs;
  }
  return tf;
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double seeded_unit(uint64_t seed) {
  return static_cast<double>(splitmix64(seed) >> 11) / 9007199254740992.0;  // [0, 1)
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string EchoGenerator::generate(const std::string& prompt, uint64_t seed) const {
  auto spans = text::word_spans(prompt);
  std::string tail;
  std::size_t start = spans.size() > 12 ? spans.size() - 12 : 0;
  for (std::size_t i = start; i < spans.size(); ++i) {
    if (!tail.empty()) tail += ' ';
    tail += spans[i].token;
  }
  return "Acknowledged: " + tail + ". [variant " + std::to_string(splitmix64(seed) % 1000) + "]";
}

namespace {

struct ParsedContext {
  struct MetricLine {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::string unit;
  };
  std::vector<MetricLine> metrics;
  std::vector<std::string> entities;
  std::vector<std::string> governance;
  struct HandoffLine {
    std::string from, to, trigger;
  };
  std::vector<HandoffLine> handoffs;
  std::vector<std::string> decision_tags;
  std::string style;
  std::string task;

  bool structured() const {
    return !metrics.empty() || !entities.empty() || !governance.empty() || !handoffs.empty() ||
           !style.empty();
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin < s.size()) {
    std::size_t comma = s.find(", ", begin);
    if (comma == std::string::npos) {
      out.push_back(s.substr(begin));
      break;
    }
    out.push_back(s.substr(begin, comma - begin));
    begin = comma + 2;
  }
  return out;
}

ParsedContext parse_prompt(const std::string& prompt) {
  ParsedContext ctx;
  std::istringstream in(prompt);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("metric: ", 0) == 0) {
      std::size_t name_end = line.find(": ", 8);
      std::size_t lb = line.find('[');
      std::size_t comma = line.find(',', lb);
      std::size_t rb = line.find(']', lb);
      if (name_end == std::string::npos || lb == std::string::npos ||
          comma == std::string::npos || rb == std::string::npos || comma > rb) {
        continue;
      }
      ParsedContext::MetricLine m;
      m.name = line.substr(8, name_end - 8);
      m.lo = std::stod(line.substr(lb + 1, comma - lb - 1));
      m.hi = std::stod(line.substr(comma + 1, rb - comma - 1));
      std::size_t unit_begin = rb + 1;
      std::size_t unit_end = line.find(',', unit_begin);
      if (unit_end != std::string::npos) {
        std::string unit = line.substr(unit_begin, unit_end - unit_begin);
        while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
        m.unit = unit;
      }
      ctx.metrics.push_back(std::move(m));
    } else if (line.rfind("entity: ", 0) == 0) {
      std::size_t term_end = line.find(": ", 8);
      if (term_end != std::string::npos) ctx.entities.push_back(line.substr(8, term_end - 8));
    } else if (line.rfind("governance: ", 0) == 0) {
      std::size_t id_end = line.find(": ", 12);
      if (id_end != std::string::npos) ctx.governance.push_back(line.substr(12, id_end - 12));
    } else if (line.rfind("handoff: ", 0) == 0) {
      std::size_t arrow = line.find(" -> ", 9);
      std::size_t on = line.find(" on ", arrow);
      if (arrow == std::string::npos || on == std::string::npos) continue;
      std::size_t trigger_end = line.find(';', on);
      if (trigger_end == std::string::npos) trigger_end = line.size();
      ctx.handoffs.push_back({line.substr(9, arrow - 9), line.substr(arrow + 4, on - arrow - 4),
                              line.substr(on + 4, trigger_end - on - 4)});
    } else if (line.rfind("decision_patterns: ", 0) == 0) {
      ctx.decision_tags = split_list(line.substr(19));
    } else if (line.rfind("communication_style: ", 0) == 0) {
      ctx.style = line.substr(21);
    } else if (line.rfind("Task: ", 0) == 0) {
      ctx.task = line.substr(6);
    }
  }
  return ctx;
}

std::string style_opener(const std::string& style) {
  if (style == "executive") {
    return "Executive summary: the recommendation below sets priority guidance for "
           "stakeholders and the board.";
  }
  if (style == "technical") {
    return "Technical assessment: the implementation, architecture, and instrumentation "
           "details are analyzed below.";
  }
  if (style == "compliance-oriented") {
    return "Compliance review: audit controls, regulatory obligations, and policy adherence "
           "were examined.";
  }
  if (style == "clinical") {
    return "Clinical briefing: patient safety, care pathways, and treatment protocols frame "
           "this analysis.";
  }
  return "";
}

}  // namespace

std::string LexiconAwareGenerator::generate(const std::string& prompt, uint64_t seed) const {
  ParsedContext ctx = parse_prompt(prompt);
  std::ostringstream out;

  if (ctx.structured()) {
    std::string opener = style_opener(ctx.style);
    if (!opener.empty()) out << opener << ' ';
    if (!ctx.decision_tags.empty()) {
      out << "This analysis is";
      for (std::size_t i = 0; i < ctx.decision_tags.size(); ++i) {
        out << (i == 0 ? " " : i + 1 == ctx.decision_tags.size() ? " and " : ", ")
            << ctx.decision_tags[i];
      }
      out << ". ";
    }
    for (const auto& m : ctx.metrics) {
      // Value strictly inside the healthy range, seeded per metric name.
      double fraction = 0.25 + 0.5 * seeded_unit(seed ^ fnv1a(m.name));
      double value = m.lo + (m.hi - m.lo) * fraction;
      out << m.name << " is currently " << format_value(value)
          << (m.unit.empty() ? "" : " " + m.unit) << ". ";
    }
    for (const auto& term : ctx.entities) {
      out << "The " << term << " definition anchors this review. ";
    }
    for (const auto& gov : ctx.governance) {
      out << "All work remains aligned with " << gov << ". ";
    }
    for (const auto& h : ctx.handoffs) {
      out << h.from << " hands off to " << h.to << " when " << h.trigger << ". ";
    }
    out << "This closes the requested review.";
    return out.str();
  }

  // Ungrounded fallback: echo the task and guess values for identifier-like
  // tokens seen anywhere in the prompt.
  if (!ctx.task.empty()) {
    auto sentences = text::split_sentences(ctx.task);
    if (!sentences.empty()) out << "Assessment: " << sentences.front().token << ' ';
  }
  std::set<std::string> identifiers;
  for (const auto& span : text::word_spans(prompt)) {
    const std::string& t = span.token;
    bool snake = t.find('_') != std::string::npos;
    bool allcaps = t.size() >= 3 && std::all_of(t.begin(), t.end(), [](unsigned char c) {
                     return std::isupper(c) || std::isdigit(c);
                   });
    if (snake || allcaps) identifiers.insert(t);
  }
  int emitted = 0;
  for (const auto& ident : identifiers) {
    if (emitted >= 6) break;
    int guess = static_cast<int>(seeded_unit(seed ^ fnv1a(ident)) * 150.0);
    out << ident << " is around " << guess << ". ";
    ++emitted;
  }
  out << "Further review is planned.";
  return out.str();
}

std::unique_ptr<Generator> make_generator(const std::string& name) {
  if (name == "echo") return std::make_unique<EchoGenerator>();
  if (name == "lexicon") return std::make_unique<LexiconAwareGenerator>();
  throw FormatError("unknown generator '" + name + "' (expected echo or lexicon)");
}

AssembledPrompt assemble_condition(const TaskDef& task, Condition condition,
                                   const ExperimentEnv& env, ContextResolver& resolver) {
  auto ont_it = env.ontologies.find(task.industry);
  if (ont_it == env.ontologies.end()) {
    throw MissingFixtureError("no ontology loaded for industry '" + task.industry + "'");
  }
  AssembledPrompt out;
  switch (condition) {
    case Condition::C1:
      break;
    case Condition::C2: {
      auto chunk_it = env.chunks.find(task.industry);
      if (chunk_it == env.chunks.end()) {
        throw MissingFixtureError("no flat chunk fixture for industry '" + task.industry + "'");
      }
      out.injected = chunk_it->second;
      break;
    }
    case Condition::C3:
    case Condition::C4: {
      // C4 differs from C3 only by the post-generation judge flag.
      ContextBundle bundle =
          resolver.resolve(task.prompt, nullptr, task.role, ont_it->second, env.resolver_cfg);
      out.injected = bundle.render();
      break;
    }
  }
  out.injected_tokens = text::count_tokens(out.injected);
  out.text = env.base_prompt + "\n\n";
  if (!out.injected.empty()) {
    out.text += out.injected;
    if (out.text.back() != '\n') out.text += '\n';
    out.text += '\n';
  }
  out.text += "Task: " + task.prompt + "\n";
  return out;
}

Scorer default_scorer() {
  return [](const TaskDef& task, const std::string& response, const Ontology& o) {
    AgentResponse a;
    a.text = response;
    a.declared_role = task.role;
    auto role_it = o.roles.find(task.role);
    if (role_it == o.roles.end()) {
      throw UnknownRoleError("task '" + task.id + "' references unknown role '" + task.role +
                             "'");
    }
    return score_response(a, role_it->second, o);
  };
}

std::vector<RunRecord> run_experiment(const std::vector<TaskDef>& tasks,
                                      const std::vector<Condition>& conditions, int reps,
                                      const Generator& generator, const Scorer& scorer,
                                      const ExperimentEnv& env, uint64_t master_seed) {
  std::vector<RunRecord> records;
  records.reserve(tasks.size() * conditions.size() * static_cast<std::size_t>(reps));
  ContextResolver resolver;

  for (const auto& task : tasks) {
    for (const auto& condition : conditions) {
      for (int rep = 1; rep <= reps; ++rep) {
        RunRecord rec;
        rec.task_id = task.id;
        rec.industry = task.industry;
        rec.category = task.category;
        rec.condition = condition;
        rec.level = level_tag(condition);
        rec.repetition = rep;
        rec.generator_id = generator.id();
        try {
          AssembledPrompt prompt = assemble_condition(task, condition, env, resolver);
          rec.prompt_tokens = text::count_tokens(prompt.text);
          rec.injected_tokens = prompt.injected_tokens;
          // Seed is condition-independent so C3 and C4 (identical prompts)
          // yield identical responses.
          uint64_t seed =
              splitmix64(splitmix64(master_seed ^ fnv1a(task.id)) + static_cast<uint64_t>(rep));
          std::string response = generator.generate(prompt.text, seed);
          auto ont_it = env.ontologies.find(task.industry);
          ScoreSet scores = scorer(task, response, ont_it->second);
          rec.tf = scores.tf.value;
          rec.ma = scores.ma.value;
          rec.rc = scores.rc.value;
          rec.rs = scores.rs.value;
          rec.has_scores = true;
          if (condition == Condition::C4) {
            double min_tested = 1.0;
            for (EvalMetric m : tested_metrics(task.category)) {
              min_tested = std::min(min_tested, scores.get(m));
            }
            rec.judge_flag = min_tested < env.judge_threshold;
          }
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

constexpr const char* kCsvHeader =
    "task_id,industry,category,condition,level,repetition,generator,prompt_tokens,"
    "injected_tokens,tf,ma,rc,rs,judge_flag,error";

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_escape(r.task_id) << ',' << csv_escape(r.industry) << ',' << to_string(r.category)
        << ',' << to_string(r.condition) << ',' << r.level << ',' << r.repetition << ','
        << csv_escape(r.generator_id) << ',' << r.prompt_tokens << ',' << r.injected_tokens
        << ',';
    if (r.has_scores) {
      out << format_score(r.tf) << ',' << format_score(r.ma) << ',' << format_score(r.rc) << ','
          << format_score(r.rs);
    } else {
      out << ",,,";
    }
    out << ',';
    if (r.judge_flag.has_value()) out << (*r.judge_flag ? '1' : '0');
    out << ',' << csv_escape(r.error) << '\n';
  }
  return out.str();
}

std::vector<RunRecord> records_from_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("run-record CSV is empty");
  if (line != kCsvHeader) throw FormatError("run-record CSV header mismatch");
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = csv_split(line);
    if (fields.size() != 15) {
      throw FormatError("run-record CSV row has " + std::to_string(fields.size()) +
                        " fields, expected 15");
    }
    RunRecord r;
    r.task_id = fields[0];
    r.industry = fields[1];
    r.category = task_category_from_string(fields[2]);
    r.condition = condition_from_string(fields[3]);
    r.level = fields[4];
    r.repetition = std::stoi(fields[5]);
    r.generator_id = fields[6];
    r.prompt_tokens = std::stoi(fields[7]);
    r.injected_tokens = std::stoi(fields[8]);
    if (!fields[9].empty()) {
      r.tf = std::stod(fields[9]);
      r.ma = std::stod(fields[10]);
      r.rc = std::stod(fields[11]);
      r.rs = std::stod(fields[12]);
      r.has_scores = true;
    }
    if (!fields[13].empty()) r.judge_flag = fields[13] == "1";
    r.error = fields[14];
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open output file: " + path.string());
  out << records_to_csv(records);
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open run-record CSV: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return records_from_csv(content);
}

std::map<std::string, ScoreMatrix> matrices_from_records(const std::vector<RunRecord>& records) {
  // Conditions present, in C1..C4 order.
  std::set<Condition> present;
  for (const auto& r : records) present.insert(r.condition);
  std::vector<Condition> conditions(present.begin(), present.end());

  std::map<std::string, ScoreMatrix> out;
  for (EvalMetric metric :
       {EvalMetric::TF, EvalMetric::MA, EvalMetric::RC, EvalMetric::RS}) {
    ScoreMatrix m;
    for (Condition c : conditions) m.col_labels.push_back(to_string(c));

    std::vector<std::string> task_order;
    std::map<std::string, std::map<Condition, std::pair<double, int>>> sums;
    for (const auto& r : records) {
      auto tested = tested_metrics(r.category);
      if (std::find(tested.begin(), tested.end(), metric) == tested.end()) continue;
      if (!r.error.empty() || !r.has_scores) {
        throw DegenerateInputError("run " + r.task_id + "/" + to_string(r.condition) +
                                   " carries an error; matrix would be incomplete");
      }
      if (sums.find(r.task_id) == sums.end()) task_order.push_back(r.task_id);
      auto& cell = sums[r.task_id][r.condition];
      cell.first += r.score(metric);
      cell.second += 1;
    }
    for (const auto& task_id : task_order) {
      std::vector<double> row;
      for (Condition c : conditions) {
        auto& by_cond = sums[task_id];
        auto it = by_cond.find(c);
        if (it == by_cond.end() || it->second.second == 0) {
          throw DegenerateInputError("task " + task_id + " has no rows under " + to_string(c));
        }
        row.push_back(it->second.first / it->second.second);
      }
      m.row_labels.push_back(task_id);
      m.data.push_back(std::move(row));
    }
    out[to_string(metric)] = std::move(m);
  }
  return out;
}

TaskFile load_tasks_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open tasks file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) throw SchemaError("tasks file must be a JSON object");
  TaskFile file;
  file.base_prompt = doc.value("base_prompt", std::string{});
  if (auto it = doc.find("c3_bands"); it != doc.end()) {
    for (const auto& [industry, band] : it->items()) {
      file.c3_bands[industry] = {band.at(0).get<int>(), band.at(1).get<int>()};
    }
  }
  for (const auto& j : doc.at("tasks")) {
    TaskDef t;
    t.id = j.at("id").get<std::string>();
    t.industry = j.at("industry").get<std::string>();
    t.category = task_category_from_string(j.at("category").get<std::string>());
    t.prompt = j.at("prompt").get<std::string>();
    t.role = j.at("role").get<std::string>();
    file.tasks.push_back(std::move(t));
  }
  return file;
}

}  // namespace ontoground
