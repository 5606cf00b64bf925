#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ontoground/context.hpp"
#include "ontoground/metrics.hpp"
#include "ontoground/ontology.hpp"
#include "ontoground/stats.hpp"

namespace ontoground {

enum class TaskCategory { Terminology, Metric, Regulatory, Role, CrossCutting };
enum class Condition { C1, C2, C3, C4 };

std::string to_string(TaskCategory c);
TaskCategory task_category_from_string(const std::string& s);
std::string to_string(Condition c);
Condition condition_from_string(const std::string& s);

/// Coupling maturity level tag for a condition (C2 carries none).
std::string level_tag(Condition c);

/// Metrics a category is scored on (cross-cutting covers all four).
std::vector<EvalMetric> tested_metrics(TaskCategory category);

struct TaskDef {
  std::string id;
  std::string industry;
  TaskCategory category = TaskCategory::Terminology;
  std::string prompt;
  std::string role;  // ground-truth role reference into the ontology
};

/// One (task, condition, repetition) execution.
struct RunRecord {
  std::string task_id;
  std::string industry;
  TaskCategory category = TaskCategory::Terminology;
  Condition condition = Condition::C1;
  std::string level;
  int repetition = 1;
  std::string generator_id;
  int prompt_tokens = 0;
  int injected_tokens = 0;
  double tf = 0.0, ma = 0.0, rc = 0.0, rs = 0.0;
  bool has_scores = false;
  std::optional<bool> judge_flag;  // C4 only
  std::string error;

  double score(EvalMetric m) const;
};

/// Deterministic response producer: identical (prompt, seed) yields an
/// identical response.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string id() const = 0;
  virtual std::string generate(const std::string& prompt, uint64_t seed) const = 0;
};

/// Template echo of the prompt tail; condition-sensitive only through the
/// prompt text itself.
class EchoGenerator : public Generator {
 public:
  std::string id() const override { return "echo"; }
  std::string generate(const std::string& prompt, uint64_t seed) const override;
};

/// Parses injected context lines and preferentially emits the injected
/// terms, in-range metric values, governance ids, and handoff patterns;
/// falls back to seeded guesses when no structured context is present.
class LexiconAwareGenerator : public Generator {
 public:
  std::string id() const override { return "lexicon"; }
  std::string generate(const std::string& prompt, uint64_t seed) const override;
};

std::unique_ptr<Generator> make_generator(const std::string& name);

struct ExperimentEnv {
  std::map<std::string, Ontology> ontologies;  // by industry id
  std::map<std::string, std::string> chunks;   // flat C2 text by industry id
  std::string base_prompt;
  ResolverConfig resolver_cfg;
  double judge_threshold = 0.5;
};

struct AssembledPrompt {
  std::string text;
  std::string injected;  // ontology block only (empty for C1)
  int injected_tokens = 0;
};

/// C1 base+task, C2 base+flat chunks+task, C3/C4 base+resolved bundle+task.
/// Throws MissingFixtureError for C2 without chunks.
AssembledPrompt assemble_condition(const TaskDef& task, Condition condition,
                                   const ExperimentEnv& env, ContextResolver& resolver);

using Scorer =
    std::function<ScoreSet(const TaskDef&, const std::string& response, const Ontology&)>;

Scorer default_scorer();

/// Full factorial run: |tasks| x |conditions| x reps records in task-major,
/// condition-mid, repetition-minor order. Generator failures become error
/// records; the run continues.
std::vector<RunRecord> run_experiment(const std::vector<TaskDef>& tasks,
                                      const std::vector<Condition>& conditions, int reps,
                                      const Generator& generator, const Scorer& scorer,
                                      const ExperimentEnv& env, uint64_t master_seed);

// ---- run-record CSV ----

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& csv_text);
void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

/// Per-metric score matrices (rows = tasks tested on the metric, columns =
/// conditions, cells = mean over repetitions). Throws on error rows or
/// missing cells.
std::map<std::string, ScoreMatrix> matrices_from_records(const std::vector<RunRecord>& records);

// ---- tasks file ----

struct TaskFile {
  std::string base_prompt;
  std::vector<TaskDef> tasks;
  std::map<std::string, std::pair<int, int>> c3_bands;  // industry -> token band
};

TaskFile load_tasks_file(const std::filesystem::path& path);

}  // namespace ontoground
