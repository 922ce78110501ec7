#include "iwasawa/cli/schema.hpp"

#include <cmath>
#include <regex>
#include <set>
#include <stdexcept>

#include "runconfig_schema.inc"

namespace iwasawa::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keywords() {
  static const std::set<std::string> keys{
      "$schema", "title", "description", "default", "definitions", "$ref",
      "type", "enum", "properties", "required", "additionalProperties", "items",
      "minItems", "maxItems", "minLength", "pattern", "minimum", "maximum",
      "exclusiveMinimum", "exclusiveMaximum", "oneOf", "anyOf"};
  return keys;
}

bool has_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  if (type == "number") return value.is_number();
  if (type == "integer") {
    if (value.is_number_integer()) return true;
    if (!value.is_number_float()) return false;
    const double d = value.get<double>();
    return std::isfinite(d) && std::floor(d) == d;
  }
  throw std::logic_error("schema: unknown type '" + type + "'");
}

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

std::string describe(const json& value) {
  std::string text = value.dump();
  if (text.size() > 60) text = text.substr(0, 57) + "...";
  return text;
}

}  // namespace

SchemaValidator::SchemaValidator(json schema) : root_(std::move(schema)) {
  if (!root_.is_object()) throw std::logic_error("schema: root must be an object");
}

const json& SchemaValidator::resolve(const std::string& ref) const {
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0) throw std::logic_error("schema: unsupported $ref " + ref);
  const std::string name = ref.substr(prefix.size());
  if (!root_.contains("definitions") || !root_["definitions"].contains(name)) {
    throw std::logic_error("schema: dangling $ref " + ref);
  }
  return root_["definitions"][name];
}

std::vector<std::string> SchemaValidator::validate(const json& instance) const {
  std::vector<std::string> errors;
  check(root_, instance, "", errors);
  return errors;
}

void SchemaValidator::check(const json& schema, const json& value, const std::string& path,
                            std::vector<std::string>& errors) const {
  const std::string where = path.empty() ? "/" : path;
  for (const auto& [key, _] : schema.items()) {
    if (!known_keywords().count(key)) throw std::logic_error("schema: unsupported keyword " + key);
  }

  if (schema.contains("$ref")) {
    check(resolve(schema["$ref"].get<std::string>()), value, path, errors);
  }

  if (schema.contains("type")) {
    const json& type = schema["type"];
    bool ok = false;
    if (type.is_string()) {
      ok = has_type(value, type.get<std::string>());
    } else {
      for (const auto& t : type) ok = ok || has_type(value, t.get<std::string>());
    }
    if (!ok) {
      errors.push_back(where + ": expected type " + type.dump() + ", got " + describe(value));
      return;
    }
  }

  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& option : schema["enum"]) found = found || option == value;
    if (!found) {
      errors.push_back(where + ": " + describe(value) + " is not one of " + schema["enum"].dump());
    }
  }

  if (value.is_number()) {
    const double x = value.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
      errors.push_back(where + ": " + describe(value) + " is less than minimum " +
                       schema["minimum"].dump());
    }
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) {
      errors.push_back(where + ": " + describe(value) + " is greater than maximum " +
                       schema["maximum"].dump());
    }
    if (schema.contains("exclusiveMinimum") && !(x > schema["exclusiveMinimum"].get<double>())) {
      errors.push_back(where + ": " + describe(value) + " must be greater than " +
                       schema["exclusiveMinimum"].dump());
    }
    if (schema.contains("exclusiveMaximum") && !(x < schema["exclusiveMaximum"].get<double>())) {
      errors.push_back(where + ": " + describe(value) + " must be less than " +
                       schema["exclusiveMaximum"].dump());
    }
  }

  if (value.is_string()) {
    const auto& text = value.get_ref<const std::string&>();
    if (schema.contains("minLength") && text.size() < schema["minLength"].get<std::size_t>()) {
      errors.push_back(where + ": string shorter than " + schema["minLength"].dump());
    }
    if (schema.contains("pattern") &&
        !std::regex_search(text, std::regex(schema["pattern"].get<std::string>()))) {
      errors.push_back(where + ": " + describe(value) + " does not match " +
                       schema["pattern"].dump());
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>()) {
      errors.push_back(where + ": expected at least " + schema["minItems"].dump() + " items, got " +
                       std::to_string(value.size()));
    }
    if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>()) {
      errors.push_back(where + ": expected at most " + schema["maxItems"].dump() + " items, got " +
                       std::to_string(value.size()));
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        check(schema["items"], value[i], child(path, std::to_string(i)), errors);
      }
    }
  }

  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          errors.push_back(where + ": missing required property " + key.dump());
        }
      }
    }
    const json empty = json::object();
    const json& props = schema.contains("properties") ? schema["properties"] : empty;
    for (const auto& [key, item] : value.items()) {
      if (props.contains(key)) {
        check(props[key], item, child(path, key), errors);
      } else if (schema.contains("additionalProperties")) {
        const json& extra = schema["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) errors.push_back(where + ": unknown property \"" + key + "\"");
        } else {
          check(extra, item, child(path, key), errors);
        }
      }
    }
  }

  if (schema.contains("oneOf") || schema.contains("anyOf")) {
    const bool one = schema.contains("oneOf");
    const json& options = one ? schema["oneOf"] : schema["anyOf"];
    std::size_t matches = 0;
    std::vector<std::string> best;
    for (const auto& option : options) {
      std::vector<std::string> sub;
      check(option, value, path, sub);
      if (sub.empty()) {
        ++matches;
      } else if (best.empty() || sub.size() < best.size()) {
        best = std::move(sub);
      }
    }
    if (matches == 0) {
      errors.push_back(where + ": matches none of the allowed forms");
      errors.insert(errors.end(), best.begin(), best.end());
    } else if (one && matches > 1) {
      errors.push_back(where + ": matches more than one of the allowed forms");
    }
  }
}

const json& runconfig_schema() {
  static const json schema = json::parse(kRunconfigSchema);
  return schema;
}

}  // namespace iwasawa::cli
