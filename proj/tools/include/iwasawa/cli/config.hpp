#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iwasawa/cocycle.hpp"
#include "iwasawa/groups.hpp"
#include "iwasawa/quadrature.hpp"

namespace iwasawa::cli {

/// Rejected configuration: unreadable file, schema violation, or values that
/// do not form valid elements. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv };

/// Command-line overrides, applied on top of the config file before validation.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<int> p;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

struct RunConfig {
  /// Effective configuration (file merged with flags and defaults) as echoed
  /// in reports; re-running it reproduces the report.
  nlohmann::json effective;

  int p = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  QuadratureSpec quadrature;
  VerdictThresholds thresholds;
  std::vector<TriangularS> s0;
  std::vector<SkewHermitian> n;
  std::vector<GroupElementP> g;
  std::vector<SkewHermitian> points;
  std::vector<double> q_grid;
  std::vector<double> delta_grid;
  std::string output_path;  ///< empty: standard output
  Format format = Format::Json;
};

/// Per-command defaults for element lists, written into the effective config
/// so the report records what was run.
struct CommandDefaults {
  std::vector<std::string> fill;  ///< fields given "random:<count>:<seed>" when absent
  std::size_t count = 2;
  bool principal_points = false;  ///< random points lie on the principal orbit
  bool default_q_grid = false;
};

/// Reads, merges, validates and parses. Throws ConfigError.
RunConfig load_config(const Overrides& overrides, const CommandDefaults& defaults);

/// Same, starting from an in-memory document instead of a file.
RunConfig parse_config(nlohmann::json document, const Overrides& overrides,
                       const CommandDefaults& defaults);

}  // namespace iwasawa::cli
