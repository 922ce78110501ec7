#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace iwasawa::cli {

/// Validator for the JSON Schema (draft-07) keywords the run configuration
/// uses: type, enum, properties, required, additionalProperties, items,
/// minItems, maxItems, minLength, pattern, minimum, maximum, exclusiveMinimum,
/// exclusiveMaximum, oneOf, anyOf and local "#/definitions/..." references.
/// Annotation keywords ($schema, title, description, default) are ignored; any
/// other keyword in the schema throws std::logic_error, so a constraint is
/// never silently skipped.
class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema);

  /// One message per violation, each prefixed by the JSON pointer of the
  /// offending value. Empty when the instance is valid.
  std::vector<std::string> validate(const nlohmann::json& instance) const;

 private:
  void check(const nlohmann::json& schema, const nlohmann::json& value, const std::string& path,
             std::vector<std::string>& errors) const;
  const nlohmann::json& resolve(const std::string& ref) const;

  nlohmann::json root_;
};

/// The run configuration schema shipped as schema/runconfig.json, embedded at
/// build time.
const nlohmann::json& runconfig_schema();

}  // namespace iwasawa::cli
