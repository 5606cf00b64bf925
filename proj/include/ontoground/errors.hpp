#pragma once

#include <stdexcept>
#include <string>

namespace ontoground {

// Blueprint/ontology loading errors.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};
struct ReferenceError : std::runtime_error {
  explicit ReferenceError(const std::string& what) : std::runtime_error(what) {}
};
struct HierarchyError : std::runtime_error {
  explicit HierarchyError(const std::string& what) : std::runtime_error(what) {}
};
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Context resolution errors.
struct UnknownRoleError : std::runtime_error {
  explicit UnknownRoleError(const std::string& what) : std::runtime_error(what) {}
};
struct BudgetInfeasibleError : std::runtime_error {
  explicit BudgetInfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Experiment errors.
struct MissingFixtureError : std::runtime_error {
  explicit MissingFixtureError(const std::string& what) : std::runtime_error(what) {}
};

// Statistics errors.
struct TooFewPairsError : std::runtime_error {
  explicit TooFewPairsError(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateInputError : std::runtime_error {
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyInputError : std::runtime_error {
  explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ontoground
