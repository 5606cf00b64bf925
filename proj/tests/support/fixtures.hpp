#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ontoground/blueprint.hpp"

namespace testsupport {

inline std::filesystem::path fixtures_dir() { return ONTOGROUND_FIXTURES_DIR; }

inline std::filesystem::path cli_path() { return ONTOGROUND_CLI_PATH; }

inline ontoground::Ontology load_fixture_ontology(const std::string& industry) {
  return ontoground::load_blueprint_file(fixtures_dir() / "blueprints" / (industry + ".json"));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace testsupport
