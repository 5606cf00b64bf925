#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ontoground/blueprint.hpp"
#include "ontoground/context.hpp"
#include "ontoground/errors.hpp"
#include "ontoground/text.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace ontoground;

namespace {

ContextSection section(Layer layer, std::vector<int> token_counts) {
  ContextSection s;
  s.layer = layer;
  int idx = 0;
  for (int tokens : token_counts) {
    std::string line;
    for (int t = 0; t < tokens; ++t) {
      if (!line.empty()) line += ' ';
      line += 'x';
    }
    s.items.push_back({"i" + std::to_string(idx++), line});
  }
  return s;
}

int bundle_tokens(const ContextBundle& b) {
  int sum = 0;
  for (const auto& s : b.sections) {
    for (const auto& item : s.items) sum += text::count_tokens(item.line);
  }
  return sum;
}

}  // namespace

TEST_CASE("rendered SaaS ROLE section matches the hand-counted token golden") {
  auto o = testsupport::load_fixture_ontology("saas");
  DomainContext empty_ctx;
  auto sections = serialize_sections(o.roles.at("product_manager"), empty_ctx, {});
  REQUIRE(sections[0].layer == Layer::Role);
  REQUIRE(sections[0].items.size() == 6);  // role id anchor plus the five fields
  std::string joined;
  for (const auto& item : sections[0].items) joined += item.line + "\n";
  // Hand count under the whitespace-run rule:
  //   product_manager                                              -> 1
  //   decision_patterns: data-driven, strategic, user-centric      -> 4
  //   metrics_focus: ARR, NPS, churn_rate, feature_adoption        -> 5
  //   communication_style: executive                               -> 2
  //   expertise_domains: product_strategy, user_research           -> 3
  //   approval_authority: feature_releases, roadmap_changes        -> 3
  CHECK(text::count_tokens(joined) == 18);
}

TEST_CASE("resolve_domain matches lexicon terms in the folded query") {
  auto o = testsupport::load_fixture_ontology("saas");
  auto ctx = resolve_domain(o.domain, "analyze our churn_rate against ARR");
  auto has_metric = [&](const std::string& name) {
    return std::any_of(ctx.metrics.begin(), ctx.metrics.end(),
                       [&](const MetricDef& m) { return m.name == name; });
  };
  auto has_entity = [&](const std::string& term) {
    return std::any_of(ctx.entities.begin(), ctx.entities.end(),
                       [&](const EntityDef& e) { return e.term == term; });
  };
  CHECK(has_metric("churn_rate"));
  CHECK(has_entity("ARR"));
  CHECK(has_entity("churn_rate"));
  CHECK_FALSE(has_metric("NPS"));

  SUBCASE("synonym matches too") {
    auto ctx2 = resolve_domain(o.domain, "how does annual recurring revenue trend");
    CHECK(std::any_of(ctx2.entities.begin(), ctx2.entities.end(),
                      [](const EntityDef& e) { return e.term == "ARR"; }));
  }
}

TEST_CASE("resolve_domain falls back to the root vertical on no hits") {
  auto o = testsupport::load_fixture_ontology("saas");
  auto ctx = resolve_domain(o.domain, "nothing relevant here");
  REQUIRE(ctx.verticals.size() == 1);
  CHECK(ctx.verticals[0] == "saas");
  CHECK(ctx.entities.empty());
  CHECK(ctx.metrics.empty());
}

TEST_CASE("resolve_domain selects the deepest vertical whose leaf occurs in the query") {
  auto o = testsupport::load_fixture_ontology("fintech");
  std::string q = "card_networks settlement risk";
  auto ctx = resolve_domain(o.domain, q);
  REQUIRE(ctx.verticals.size() == 1);

  // Independent selection: enumerate all verticals, keep those whose final
  // segment occurs in the query, pick the one with the most segments.
  std::string expected;
  std::size_t expected_depth = 0;
  for (const auto& v : o.domain.verticals) {
    auto leaf = v.substr(v.rfind('.') + 1);
    if (!text::contains_term(text::fold_case(q), text::fold_case(leaf))) continue;
    std::size_t depth = std::count(v.begin(), v.end(), '.') + 1;
    if (depth > expected_depth) {
      expected_depth = depth;
      expected = v;
    }
  }
  CHECK(expected == "fintech.payments.card_networks");
  CHECK(ctx.verticals[0] == expected);
}

TEST_CASE("resolve_domain scopes governance to the selected vertical and its ancestors") {
  auto o = testsupport::load_fixture_ontology("fintech");
  auto ctx = resolve_domain(o.domain, "card_networks settlement risk");
  std::set<std::string> gov;
  for (const auto& g : ctx.governance) gov.insert(g.id);
  // PCI-DSS applies to fintech.payments (ancestor of selection); BSA-AML and
  // KYC apply to fintech.
  CHECK(gov == std::set<std::string>{"BSA-AML", "KYC", "PCI-DSS"});

  auto lending = resolve_domain(o.domain, "lending covenant review");
  std::set<std::string> lending_gov;
  for (const auto& g : lending.governance) lending_gov.insert(g.id);
  CHECK(lending_gov == std::set<std::string>{"BSA-AML", "KYC"});
}

TEST_CASE("optimize keeps whole items under the stated priority arithmetic") {
  std::vector<ContextSection> sections;
  sections.push_back(section(Layer::Role, {900}));
  sections.push_back(section(Layer::Domain, {800}));
  sections.push_back(section(Layer::Interaction, {200, 200, 200}));

  auto bundle = optimize(sections, 2000);
  CHECK(bundle.token_count == 1900);
  CHECK(bundle.sections[0].items.size() == 1);
  CHECK(bundle.sections[1].items.size() == 1);
  CHECK(bundle.sections[2].items.size() == 1);
  CHECK(bundle.truncation_report.size() == 2);
  CHECK(bundle.truncation_report[0].layer == Layer::Interaction);
}

TEST_CASE("optimize is the identity when everything fits") {
  std::vector<ContextSection> sections;
  sections.push_back(section(Layer::Role, {10, 5}));
  sections.push_back(section(Layer::Domain, {7}));
  sections.push_back(section(Layer::Interaction, {3, 3}));
  auto bundle = optimize(sections, 100);
  CHECK(bundle.token_count == 28);
  CHECK(bundle.truncation_report.empty());
  CHECK(bundle.sections == sections);
}

TEST_CASE("optimize throws when the leading ROLE item alone exceeds the budget") {
  std::vector<ContextSection> sections;
  sections.push_back(section(Layer::Role, {5, 2}));
  sections.push_back(section(Layer::Domain, {}));
  sections.push_back(section(Layer::Interaction, {}));
  CHECK_THROWS_AS(optimize(sections, 3), BudgetInfeasibleError);
}

TEST_CASE("optimize property: budget, priority monotonicity, oracle equality") {
  for (uint64_t seed = 1; seed <= 500; ++seed) {
    auto sections = testsupport::random_sections(seed);
    testsupport::Rng rng(seed * 77 + 1);
    int total = 0;
    for (const auto& s : sections) {
      for (const auto& item : s.items) total += text::count_tokens(item.line);
    }
    int t_max = 1 + static_cast<int>(rng() % static_cast<uint64_t>(std::max(1, total + 5)));

    auto oracle = testsupport::brute_force_cut(sections, t_max);
    if (!oracle.has_value()) {
      CHECK_THROWS_AS(optimize(sections, t_max), BudgetInfeasibleError);
      continue;
    }
    auto bundle = optimize(sections, t_max);

    // Budget bound.
    CHECK(bundle.token_count <= t_max);
    CHECK(bundle.token_count == bundle_tokens(bundle));

    // Priority monotonicity.
    bool role_dropped = bundle.sections[0].items.size() < sections[0].items.size();
    bool domain_dropped = bundle.sections[1].items.size() < sections[1].items.size();
    bool inter_dropped = bundle.sections[2].items.size() < sections[2].items.size();
    if (domain_dropped) CHECK(bundle.sections[2].items.empty());
    if (role_dropped) {
      CHECK(bundle.sections[1].items.empty());
      CHECK(bundle.sections[2].items.empty());
    }
    (void)inter_dropped;

    // Oracle: kept counts equal the maximal feasible priority-shaped cut.
    CHECK(bundle.sections[0].items.size() == oracle->role);
    CHECK(bundle.sections[1].items.size() == oracle->domain);
    CHECK(bundle.sections[2].items.size() == oracle->interaction);

    // Kept items are prefixes (items never reordered or split).
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < bundle.sections[s].items.size(); ++i) {
        CHECK(bundle.sections[s].items[i] == sections[s].items[i]);
      }
    }
  }
}

TEST_CASE("resolve_context produces role-scoped sections under a large budget") {
  auto o = testsupport::load_fixture_ontology("saas");
  ContextResolver resolver;
  ResolverConfig cfg;
  cfg.token_budget = 100000;
  auto bundle =
      resolver.resolve("How is churn_rate trending against ARR", nullptr, "product_manager", o, cfg);

  REQUIRE(bundle.sections.size() == 3);
  const auto& role_items = bundle.sections[0].items;
  REQUIRE(role_items.size() == 6);
  CHECK(role_items[0].line == "product_manager");
  std::string role_text;
  for (const auto& item : role_items) role_text += item.line + "\n";
  for (const char* field : {"decision_patterns", "metrics_focus", "communication_style",
                            "expertise_domains", "approval_authority"}) {
    CHECK(role_text.find(field) != std::string::npos);
  }

  // INTERACTION lists only handoffs touching the role.
  for (const auto& item : bundle.sections[2].items) {
    if (item.line.rfind("handoff: ", 0) == 0) {
      CHECK(item.line.find("product_manager") != std::string::npos);
    }
  }
  bool has_ux_to_dev = std::any_of(
      bundle.sections[2].items.begin(), bundle.sections[2].items.end(),
      [](const ContextItem& i) { return i.line.find("ux_designer -> senior_developer") !=
                                        std::string::npos; });
  CHECK_FALSE(has_ux_to_dev);

  CHECK(bundle.render().find("## ROLE CONTEXT") == 0);
}

TEST_CASE("resolve_context budget edge cases") {
  auto o = testsupport::load_fixture_ontology("saas");
  ContextResolver resolver;
  ResolverConfig cfg;

  SUBCASE("zero budget is rejected") {
    cfg.token_budget = 0;
    CHECK_THROWS_AS(resolver.resolve("q", nullptr, "product_manager", o, cfg),
                    BudgetInfeasibleError);
  }
  SUBCASE("budget of one keeps only the role anchor") {
    cfg.token_budget = 1;
    auto bundle = resolver.resolve("churn_rate and NPS and ARR review", nullptr,
                                   "product_manager", o, cfg);
    CHECK(bundle.token_count <= 1);
    CHECK(bundle.token_count == 1);
    CHECK(bundle.sections[0].items.size() == 1);
    CHECK(bundle.truncation_report.size() >= 8);  // nearly everything dropped
  }
}

TEST_CASE("resolve_context caches within the TTL") {
  auto o = testsupport::load_fixture_ontology("saas");
  int64_t now_ms = 0;
  ContextResolver resolver([&now_ms] { return now_ms; });
  ResolverConfig cfg;

  auto b1 = resolver.resolve("churn_rate review", nullptr, "product_manager", o, cfg);
  now_ms += 10'000;
  auto b2 = resolver.resolve("churn_rate review", nullptr, "product_manager", o, cfg);
  CHECK(b1 == b2);
  CHECK(resolver.resolutions() == 1);

  SUBCASE("expired entries resolve again") {
    now_ms += 300'000;
    auto b3 = resolver.resolve("churn_rate review", nullptr, "product_manager", o, cfg);
    CHECK(b3 == b1);
    CHECK(resolver.resolutions() == 2);
  }
  SUBCASE("different budget is a different cache key") {
    ResolverConfig other = cfg;
    other.token_budget = 12;
    auto b3 = resolver.resolve("churn_rate review", nullptr, "product_manager", o, other);
    CHECK(resolver.resolutions() == 2);
    CHECK(b3.token_count <= 12);
  }
}

TEST_CASE("token_count equals the tokenizer's count of the concatenated section text") {
  auto o = testsupport::load_fixture_ontology("saas");
  ContextResolver resolver;
  ResolverConfig cfg;
  auto bundle = resolver.resolve("churn_rate NPS ARR", nullptr, "product_manager", o, cfg);
  std::string concatenated;
  for (const auto& s : bundle.sections) {
    for (const auto& item : s.items) concatenated += item.line + "\n";
  }
  CHECK(bundle.token_count == text::count_tokens(concatenated));
}

TEST_CASE("the TTL cache is safe under concurrent lookups and inserts") {
  auto o = testsupport::load_fixture_ontology("saas");
  ContextResolver resolver;
  ResolverConfig cfg;
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  auto reference = resolver.resolve("churn_rate review", nullptr, "product_manager", o, cfg);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        std::string query = i % 2 == 0 ? "churn_rate review" : "NPS check " + std::to_string(t);
        auto bundle = resolver.resolve(query, nullptr, "product_manager", o, cfg);
        if (i % 2 == 0 && !(bundle == reference)) mismatches.fetch_add(1);
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(mismatches.load() == 0);
}

TEST_CASE("resolve_context is deterministic across resolver instances") {
  auto o = testsupport::load_fixture_ontology("fintech");
  ResolverConfig cfg;
  ContextResolver r1, r2;
  auto b1 = r1.resolve("card_networks fraud scoring", nullptr, "risk_analyst", o, cfg);
  auto b2 = r2.resolve("card_networks fraud scoring", nullptr, "risk_analyst", o, cfg);
  CHECK(b1 == b2);
  CHECK(b1.render() == b2.render());
}

TEST_CASE("resolve_context rejects unknown roles and applies overlays") {
  auto o = testsupport::load_fixture_ontology("saas");
  ContextResolver resolver;
  ResolverConfig cfg;
  CHECK_THROWS_AS(resolver.resolve("q", nullptr, "qa_lead", o, cfg), UnknownRoleError);

  auto overlay = load_overlay_file(testsupport::fixtures_dir() / "overlays/acme_saas.json");
  auto bundle = resolver.resolve("churn_rate posture", &overlay, "product_manager", o, cfg);
  std::string rendered = bundle.render();
  CHECK(rendered.find("[0, 5]") != std::string::npos);  // overlay range override visible
}

TEST_CASE("bundle sidecar serialization carries sections and the truncation report") {
  std::vector<ContextSection> sections;
  sections.push_back(section(Layer::Role, {2, 3}));
  sections.push_back(section(Layer::Domain, {4}));
  sections.push_back(section(Layer::Interaction, {5}));
  auto bundle = optimize(sections, 6);
  auto j = bundle.to_json();
  CHECK(j["token_count"].get<int>() == bundle.token_count);
  CHECK(j["sections"].size() == 3);
  CHECK(j["truncation_report"].size() == bundle.truncation_report.size());
}
