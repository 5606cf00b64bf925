#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ontoground/ontology.hpp"

namespace ontoground {

/// Parse and cross-validate a blueprint document. Pure: no global state.
/// Throws SchemaError (missing/ill-typed field), ReferenceError (dangling
/// role or metric id), HierarchyError (orphan or malformed vertical path).
Ontology load_blueprint(const nlohmann::json& document);
Ontology load_blueprint_text(const std::string& text);
Ontology load_blueprint_file(const std::filesystem::path& path);

/// Parse only; the caller runs validate_ontology to collect violations as
/// data instead of errors. Still throws SchemaError on structural problems.
Ontology parse_blueprint(const nlohmann::json& document);
Ontology parse_blueprint_file(const std::filesystem::path& path);

/// Emit the blueprint document for `o`. load_blueprint(serialize_blueprint(o))
/// yields a structurally equal ontology for every valid `o`.
nlohmann::json serialize_blueprint(const Ontology& o);

TenantOverlay load_overlay(const nlohmann::json& document);
TenantOverlay load_overlay_file(const std::filesystem::path& path);
nlohmann::json serialize_overlay(const TenantOverlay& overlay);

nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace ontoground
