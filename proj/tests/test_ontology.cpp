#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "ontoground/blueprint.hpp"
#include "ontoground/errors.hpp"
#include "ontoground/ontology.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace ontoground;

TEST_CASE("ancestors returns strict dot-prefixes, shortest first") {
  CHECK(ancestors("fintech.payments.card_networks") ==
        std::vector<std::string>{"fintech", "fintech.payments"});
  CHECK(ancestors("fintech") == std::vector<std::string>{});
  CHECK(ancestors("a.b") == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(ancestors("a..b"), FormatError);
  CHECK_THROWS_AS(ancestors(""), FormatError);
  CHECK_THROWS_AS(ancestors("a.b.c.d.e.f.g"), FormatError);  // depth cap
}

TEST_CASE("ancestors property: exactly the strict prefixes, never the path itself") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    testsupport::Rng rng(seed);
    int depth = testsupport::rand_int(rng, 1, 6);
    std::string path;
    std::vector<std::string> expected;
    for (int i = 0; i < depth; ++i) {
      if (i > 0) expected.push_back(path);
      path += (i == 0 ? "" : ".") + std::string("s") + std::to_string(rng() % 10);
    }
    auto got = ancestors(path);
    CHECK(got == expected);
    CHECK(static_cast<int>(got.size()) == depth - 1);
    for (const auto& a : got) CHECK(a != path);
  }
}

TEST_CASE("load_blueprint keeps the SaaS product_manager role verbatim") {
  auto o = testsupport::load_fixture_ontology("saas");
  REQUIRE(o.roles.count("product_manager") == 1);
  const RoleDef& pm = o.roles.at("product_manager");
  CHECK(pm.decision_patterns == std::set<std::string>{"strategic", "user-centric", "data-driven"});
  CHECK(pm.metrics_focus ==
        std::set<std::string>{"ARR", "NPS", "feature_adoption", "churn_rate"});
  CHECK(pm.communication_style == "executive");
  CHECK(pm.expertise_domains == std::set<std::string>{"product_strategy", "user_research"});
  CHECK(pm.approval_authority == std::set<std::string>{"feature_releases", "roadmap_changes"});
}

TEST_CASE("load_blueprint rejects a document with zero roles") {
  CHECK_THROWS_AS(load_blueprint_text(R"({
    "industry_id": "empty",
    "roles": {},
    "domain": {"verticals": ["empty"]}
  })"),
                  SchemaError);
}

TEST_CASE("load_blueprint rejects a handoff naming an absent role") {
  CHECK_THROWS_AS(load_blueprint_text(R"({
    "industry_id": "x",
    "roles": {
      "dev": {"decision_patterns": ["analytical"], "metrics_focus": ["m"],
              "communication_style": "technical"}
    },
    "domain": {"verticals": ["x"], "metrics": {"m": {"healthy_range": [0, 1],
               "world_class": 1, "direction": "higher-better"}}},
    "interaction": {"handoffs": [{"from_role": "dev", "to_role": "qa_lead",
                    "trigger": "t"}]}
  })"),
                  ReferenceError);
}

TEST_CASE("load_blueprint rejects an orphan vertical") {
  CHECK_THROWS_AS(load_blueprint_text(R"({
    "industry_id": "x",
    "roles": {
      "dev": {"decision_patterns": ["analytical"], "metrics_focus": ["m"],
              "communication_style": "technical"}
    },
    "domain": {"verticals": ["x.y"], "metrics": {"m": {"healthy_range": [0, 1],
               "world_class": 1, "direction": "higher-better"}}}
  })"),
                  HierarchyError);
}

TEST_CASE("validate_ontology reports violations as data") {
  auto o = testsupport::load_fixture_ontology("saas");
  CHECK(validate_ontology(o).empty());

  SUBCASE("inverted range") {
    o.domain.metrics.at("churn_rate").range_lo = 20.0;  // above hi = 10
    auto report = validate_ontology(o);
    CHECK(report.has(violation::RANGE_INVERTED));
    CHECK(report.violations.size() == 1);
  }
  SUBCASE("orphan vertical") {
    o.domain.verticals.insert("retail.pos");
    auto report = validate_ontology(o);
    CHECK(report.has(violation::HIERARCHY_ORPHAN));
  }
  SUBCASE("dangling role metric") {
    o.roles.at("cto").metrics_focus.insert("unknown_metric");
    CHECK(validate_ontology(o).has(violation::DANGLING_METRIC));
  }
  SUBCASE("escalation cycle") {
    o.interaction.escalation_paths["cto"] = "ux_designer";  // ux -> pm -> cto -> ux
    CHECK(validate_ontology(o).has(violation::ESCALATION_CYCLE));
  }
  SUBCASE("world-class benchmark contradicting direction") {
    o.domain.metrics.at("NPS").world_class = 10.0;  // below lo for higher-better
    CHECK(validate_ontology(o).has(violation::WORLD_CLASS_INCONSISTENT));
  }
  SUBCASE("synonym claimed by two entities") {
    o.domain.entities.at("MRR").synonyms.insert("annual recurring revenue");
    CHECK(validate_ontology(o).has(violation::SYNONYM_OVERLAP));
  }
}

TEST_CASE("merge_overlay") {
  auto base = testsupport::load_fixture_ontology("saas");

  SUBCASE("empty overlay is the identity") {
    TenantOverlay empty;
    empty.tenant_id = "t";
    CHECK(merge_overlay(base, empty) == base);
  }

  SUBCASE("metric override wins and base is unmodified") {
    auto overlay = load_overlay_file(testsupport::fixtures_dir() / "overlays/acme_saas.json");
    Ontology merged = merge_overlay(base, overlay);
    CHECK(merged.domain.metrics.at("churn_rate").range_hi == 5.0);
    CHECK(base.domain.metrics.at("churn_rate").range_hi == 10.0);
    CHECK(merged.domain.entities.count("expansion_revenue") == 1);
    CHECK(merged.interaction.handoffs.size() == base.interaction.handoffs.size() + 1);
    CHECK(merged.roles.at("product_manager").metrics_focus.count("deployment_frequency") == 1);
    // untouched fields survive
    CHECK(merged.roles.at("product_manager").communication_style == "executive");
  }

  SUBCASE("override of a nonexistent id is a reference error") {
    TenantOverlay bad;
    bad.tenant_id = "t";
    bad.metric_overrides["ghost_metric"] = MetricOverride{};
    CHECK_THROWS_AS(merge_overlay(base, bad), ReferenceError);
  }

  SUBCASE("added handoff with an unknown role is a reference error") {
    TenantOverlay bad;
    bad.tenant_id = "t";
    bad.added_handoffs.push_back({"cto", "qa_lead", "t", {}, false});
    CHECK_THROWS_AS(merge_overlay(base, bad), ReferenceError);
  }

  SUBCASE("applying the same overlay twice equals applying it once") {
    auto overlay = load_overlay_file(testsupport::fixtures_dir() / "overlays/acme_saas.json");
    Ontology once = merge_overlay(base, overlay);
    Ontology twice = merge_overlay(once, overlay);
    CHECK(once == twice);
  }
}

TEST_CASE("blueprint round-trip: load(serialize(o)) is structurally equal") {
  for (const char* industry : {"saas", "fintech", "healthcare", "insurance", "banking_vn"}) {
    auto o = testsupport::load_fixture_ontology(industry);
    CHECK(load_blueprint(serialize_blueprint(o)) == o);
  }
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    auto o = testsupport::random_ontology(seed);
    REQUIRE(validate_ontology(o).empty());
    CHECK(load_blueprint(serialize_blueprint(o)) == o);
  }
}

TEST_CASE("all five industry fixtures validate cleanly") {
  for (const char* industry : {"saas", "fintech", "healthcare", "insurance", "banking_vn"}) {
    auto o = testsupport::load_fixture_ontology(industry);
    auto report = validate_ontology(o);
    CHECK_MESSAGE(report.empty(), industry);
  }
}
