// Command-line surface for the grounding engine: ontology validation,
// context resolution, skill discovery, output compliance checking,
// experiment runs, and the statistics pipeline.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ontoground/blueprint.hpp"
#include "ontoground/compliance.hpp"
#include "ontoground/config.hpp"
#include "ontoground/context.hpp"
#include "ontoground/errors.hpp"
#include "ontoground/experiment.hpp"
#include "ontoground/metrics.hpp"
#include "ontoground/skills.hpp"
#include "ontoground/stats.hpp"
#include "ontoground/text.hpp"

namespace {

using nlohmann::json;
using namespace ontoground;

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;  // validation/compliance failures found
constexpr int kExitUsage = 2;     // usage or input error

constexpr int kBudgetUnset = -1;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open output file: " + path);
  out << content;
}

int cmd_validate(const std::string& blueprint_path, const std::string& out_path) {
  Ontology o = parse_blueprint_file(blueprint_path);
  ValidationReport report = validate_ontology(o);
  json rendered = report_to_json(report);
  std::cout << rendered.dump(2) << '\n';
  if (!out_path.empty()) write_text_file(out_path, rendered.dump(2) + "\n");
  return report.empty() ? kExitOk : kExitFindings;
}

int cmd_resolve(const EngineConfig& cfg, const std::string& blueprint_path,
                const std::string& role, const std::string& query, int budget,
                const std::string& overlay_path, const std::string& out_path) {
  Ontology o = load_blueprint_file(blueprint_path);
  TenantOverlay overlay;
  const TenantOverlay* tenant = nullptr;
  if (!overlay_path.empty()) {
    overlay = load_overlay_file(overlay_path);
    tenant = &overlay;
  }
  ResolverConfig resolver_cfg = cfg.resolver;
  if (budget != kBudgetUnset) resolver_cfg.token_budget = budget;

  ContextResolver resolver;
  ContextBundle bundle = resolver.resolve(query, tenant, role, o, resolver_cfg);
  std::cout << bundle.render();
  if (!out_path.empty()) write_text_file(out_path, bundle.to_json().dump(2) + "\n");
  return kExitOk;
}

int cmd_discover(const EngineConfig& cfg, const std::string& skills_path,
                 const std::string& policy_path, const std::string& domain,
                 const std::string& query, const std::vector<std::string>& capabilities,
                 const std::string& role, int k, const std::string& out_path) {
  auto skills = load_skills_file(skills_path);
  GovernancePolicy policy = policy_path.empty() ? GovernancePolicy::regulated_defaults()
                                                : load_policy_file(policy_path);
  if (policy_path.empty()) policy.default_threshold = cfg.default_governance_threshold;

  DiscoveryQuery q;
  q.text = query;
  q.domain = domain;
  q.capabilities.insert(capabilities.begin(), capabilities.end());
  q.role = role;
  q.limit = k;

  auto started = std::chrono::steady_clock::now();
  auto ranked = discover(q, skills, policy, cfg.weights);
  auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           started)
                     .count();

  json out = json::array();
  for (const auto& [skill, skill_score] : ranked) {
    std::printf("%-28s %.4f  %s\n", skill.id.c_str(), skill_score, skill.name.c_str());
    out.push_back({{"id", skill.id}, {"score", skill_score}, {"name", skill.name}});
  }
  // Timing goes to stderr; stdout stays byte-stable for identical inputs.
  std::fprintf(stderr, "discovered %zu of %zu skills in %.3f ms\n", ranked.size(), skills.size(),
               elapsed);
  if (!out_path.empty()) write_text_file(out_path, out.dump(2) + "\n");
  return kExitOk;
}

AgentResponse read_response_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open response file: " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc = json::parse(content, nullptr, /*allow_exceptions=*/false);
  AgentResponse a;
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("text")) {
    a.text = content;  // plain-text response body
    return a;
  }
  a.text = doc.at("text").get<std::string>();
  if (doc.contains("declared_role")) a.declared_role = doc["declared_role"].get<std::string>();
  if (doc.contains("cited_metrics")) {
    std::vector<CitedMetric> cited;
    for (const auto& j : doc["cited_metrics"]) {
      cited.push_back({j.at("name").get<std::string>(), j.at("value").get<double>(),
                       j.value("unit", std::string{})});
    }
    a.cited_metrics = std::move(cited);
  }
  return a;
}

int cmd_check(const std::string& blueprint_path, const std::string& response_path,
              const std::string& out_path) {
  Ontology o = load_blueprint_file(blueprint_path);
  AgentResponse a = read_response_file(response_path);
  if (a.text.empty()) throw FormatError("response text is empty");
  ComplianceReport report = validate(a, o);
  json rendered = report.to_json();
  std::cout << rendered.dump(2) << '\n';
  if (!out_path.empty()) write_text_file(out_path, rendered.dump(2) + "\n");
  return report.overall ? kExitOk : kExitFindings;
}

int cmd_experiment(const EngineConfig& cfg, const std::string& tasks_path,
                   const std::string& blueprint_dir, const std::string& chunks_dir,
                   const std::string& conditions_arg, int reps, uint64_t seed,
                   const std::string& generator_name, const std::string& out_path) {
  TaskFile task_file = load_tasks_file(tasks_path);

  std::vector<Condition> conditions;
  for (const auto& token : CLI::detail::split(conditions_arg, ',')) {
    conditions.push_back(condition_from_string(token));
  }
  if (conditions.empty()) throw FormatError("no conditions requested");

  ExperimentEnv env;
  env.base_prompt = task_file.base_prompt;
  env.resolver_cfg = cfg.resolver;
  env.judge_threshold = cfg.judge_threshold;
  std::set<std::string> industries;
  for (const auto& t : task_file.tasks) industries.insert(t.industry);
  for (const auto& industry : industries) {
    env.ontologies.emplace(industry,
                           load_blueprint_file(blueprint_dir + "/" + industry + ".json"));
    if (!chunks_dir.empty()) {
      std::ifstream chunk(chunks_dir + "/" + industry + ".txt", std::ios::binary);
      if (chunk) {
        env.chunks[industry] = std::string((std::istreambuf_iterator<char>(chunk)),
                                           std::istreambuf_iterator<char>());
      }
    }
  }

  auto generator = make_generator(generator_name);
  auto records =
      run_experiment(task_file.tasks, conditions, reps, *generator, default_scorer(), env, seed);
  std::string csv = records_to_csv(records);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
    std::fprintf(stderr, "%zu records written to %s\n", records.size(), out_path.c_str());
  }
  int errors = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) ++errors;
  }
  if (errors > 0) std::fprintf(stderr, "%d rows recorded errors\n", errors);
  return kExitOk;
}

std::vector<std::pair<int, int>> posthoc_pairs_for(const std::vector<std::string>& cols) {
  auto index_of = [&](const std::string& c) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == c) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"C1", "C3"}, {"C2", "C3"}, {"C3", "C4"}}) {
    int ia = index_of(a), ib = index_of(b);
    if (ia >= 0 && ib >= 0) pairs.emplace_back(ia, ib);
  }
  return pairs;
}

int cmd_stats(const EngineConfig& cfg, const std::string& csv_path, const std::string& metric_arg,
              const std::string& out_path) {
  auto records = read_records_csv(csv_path);
  auto matrices = matrices_from_records(records);

  std::vector<std::string> selected;
  if (metric_arg == "all") {
    selected = {"tf", "ma", "rc", "rs"};
  } else {
    selected = {to_string(eval_metric_from_string(metric_arg))};
  }

  json report;
  std::printf("%-7s %4s %9s %9s %7s", "metric", "n", "chi2", "p", "W");
  bool header_pairs_done = false;
  std::vector<MetricStats> all_stats;
  for (const auto& name : selected) {
    const ScoreMatrix& m = matrices.at(name);
    if (m.rows() == 0) continue;
    auto pairs = posthoc_pairs_for(m.col_labels);
    MetricStats stats = analyze_matrix(name, m, pairs, cfg.entropy_bins);
    if (!header_pairs_done) {
      for (const auto& [pair_name, unused] : stats.posthoc) {
        std::printf(" %14s", (pair_name + " p_corr").c_str());
      }
      std::printf("\n");
      header_pairs_done = true;
    }
    std::printf("%-7s %4d %9.3f %9.4g %7.3f", stats.metric.c_str(), stats.n,
                stats.omnibus.statistic, stats.omnibus.p_value, stats.w);
    for (const auto& [pair_name, result] : stats.posthoc) {
      std::printf(" %14.4g", result.p_corrected);
    }
    std::printf("\n");
    all_stats.push_back(std::move(stats));
  }
  if (!header_pairs_done) std::printf("\n");

  json metrics_json = json::object();
  for (const auto& stats : all_stats) {
    json posthoc = json::object();
    for (const auto& [pair_name, result] : stats.posthoc) {
      posthoc[pair_name] = {{"statistic", result.statistic},
                            {"p", result.p_value},
                            {"p_corrected", result.p_corrected},
                            {"method", result.method}};
    }
    json entropy = json::object();
    for (const auto& [condition, h] : stats.entropy_by_condition) entropy[condition] = h;
    if (stats.entropy_by_condition.count("C1") > 0 &&
        stats.entropy_by_condition.count("C3") > 0) {
      entropy["delta_C1_to_C3"] =
          stats.entropy_by_condition.at("C3") - stats.entropy_by_condition.at("C1");
    }
    metrics_json[stats.metric] = {{"n", stats.n},
                                  {"k", stats.k},
                                  {"chi2", stats.omnibus.statistic},
                                  {"df", stats.omnibus.df},
                                  {"p", stats.omnibus.p_value},
                                  {"W", stats.w},
                                  {"posthoc", std::move(posthoc)},
                                  {"entropy", std::move(entropy)}};
  }
  report["metrics"] = std::move(metrics_json);
  report["entropy_bins"] = cfg.entropy_bins;
  if (!out_path.empty()) write_text_file(out_path, report.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontoground: three-layer ontology grounding engine"};
  app.require_subcommand(1);

  EngineConfig cfg;
  try {
    cfg = load_engine_config();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  // validate
  std::string v_blueprint, v_out;
  auto* validate_cmd = app.add_subcommand("validate", "validate an ontology blueprint");
  validate_cmd->add_option("blueprint", v_blueprint, "blueprint JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  validate_cmd->add_option("--out", v_out, "write the report JSON to a file");

  // resolve
  std::string r_blueprint, r_role, r_query, r_overlay, r_out;
  int r_budget = kBudgetUnset;
  auto* resolve_cmd = app.add_subcommand("resolve", "resolve grounding context for a query");
  resolve_cmd->add_option("blueprint", r_blueprint)->required()->check(CLI::ExistingFile);
  resolve_cmd->add_option("role", r_role, "role id")->required();
  resolve_cmd->add_option("query", r_query, "query text")->required();
  resolve_cmd->add_option("--budget", r_budget, "token budget (default from config)");
  resolve_cmd->add_option("--overlay", r_overlay, "tenant overlay JSON file")
      ->check(CLI::ExistingFile);
  resolve_cmd->add_option("--out", r_out, "write the sidecar JSON to a file");

  // discover
  std::string d_skills, d_policy, d_domain, d_query, d_role, d_out;
  std::vector<std::string> d_caps;
  int d_k = 10;
  auto* discover_cmd = app.add_subcommand("discover", "rank skills for a discovery query");
  discover_cmd->add_option("skills", d_skills, "skills JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  discover_cmd->add_option("--policy", d_policy, "governance policy JSON file")
      ->check(CLI::ExistingFile);
  discover_cmd->add_option("--domain", d_domain, "query vertical path")->required();
  discover_cmd->add_option("--query", d_query, "query text");
  discover_cmd->add_option("--capabilities", d_caps, "required capability tags")->delimiter(',');
  discover_cmd->add_option("--role", d_role, "requesting role id");
  discover_cmd->add_option("--k", d_k, "result count")->check(CLI::PositiveNumber);
  discover_cmd->add_option("--out", d_out, "write the ranking JSON to a file");

  // check
  std::string c_blueprint, c_response, c_out;
  auto* check_cmd = app.add_subcommand("check", "check a response for ontological compliance");
  check_cmd->add_option("blueprint", c_blueprint)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("response", c_response, "response file (JSON or plain text)")
      ->required()
      ->check(CLI::ExistingFile);
  check_cmd->add_option("--out", c_out, "write the report JSON to a file");

  // experiment
  std::string e_tasks, e_blueprints, e_chunks, e_conditions = "C1,C2,C3,C4", e_generator = "lexicon",
              e_out;
  int e_reps = 3;
  uint64_t e_seed = 42;
  auto* experiment_cmd = app.add_subcommand("experiment", "run the grounding-condition harness");
  experiment_cmd->add_option("tasks", e_tasks, "tasks JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  experiment_cmd->add_option("--blueprint-dir", e_blueprints, "directory of <industry>.json")
      ->required()
      ->check(CLI::ExistingDirectory);
  experiment_cmd->add_option("--chunks-dir", e_chunks, "directory of <industry>.txt flat chunks")
      ->check(CLI::ExistingDirectory);
  experiment_cmd->add_option("--conditions", e_conditions, "comma-separated conditions");
  experiment_cmd->add_option("--reps", e_reps, "repetitions per (task, condition)")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", e_seed, "master seed");
  experiment_cmd->add_option("--generator", e_generator, "echo or lexicon");
  experiment_cmd->add_option("--out", e_out, "write run records CSV to a file");

  // stats
  std::string s_csv, s_metric = "all", s_out;
  auto* stats_cmd = app.add_subcommand("stats", "nonparametric statistics over run records");
  stats_cmd->add_option("runs", s_csv, "run-record CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--metric", s_metric, "tf, ma, rc, rs, or all");
  stats_cmd->add_option("--out", s_out, "write the stats report JSON to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(v_blueprint, v_out);
    if (resolve_cmd->parsed()) {
      return cmd_resolve(cfg, r_blueprint, r_role, r_query, r_budget, r_overlay, r_out);
    }
    if (discover_cmd->parsed()) {
      return cmd_discover(cfg, d_skills, d_policy, d_domain, d_query, d_caps, d_role, d_k, d_out);
    }
    if (check_cmd->parsed()) return cmd_check(c_blueprint, c_response, c_out);
    if (experiment_cmd->parsed()) {
      return cmd_experiment(cfg, e_tasks, e_blueprints, e_chunks, e_conditions, e_reps, e_seed,
                            e_generator, e_out);
    }
    if (stats_cmd->parsed()) return cmd_stats(cfg, s_csv, s_metric, s_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
