#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iwasawa/cli/config.hpp"

namespace iwasawa::cli {

/// Columns of the CSV report of cocycle-norm, verdict and scan.
extern const std::vector<std::string> kNormColumns;

struct CommandResult {
  nlohmann::json results;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> summary;  ///< human-readable lines for stderr
  bool passed = true;
};

/// Group axioms, theta multiplicativity, Jacobian and pairing symmetry over
/// cfg.trials random draws. With inject_fault the first pairing probe is a
/// non-skew matrix, which must surface as an ImaginaryResidue failure.
CommandResult verify_group(const RunConfig& cfg, bool inject_fault);

/// Closed and direct norms of beta for every s0, n and g in the config.
CommandResult cocycle_norm(const RunConfig& cfg);

/// The full dichotomy check; passes when the p-appropriate verdict holds.
CommandResult verdict(const RunConfig& cfg);

/// Convergent/divergent classification of |beta(s0)| over cfg.q_grid.
CommandResult scan(const RunConfig& cfg);

/// Orbit label of every point.
CommandResult orbit_classify(const RunConfig& cfg);

/// Triangular factor of every point; fails for points off the principal orbit.
CommandResult factor(const RunConfig& cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Name of the most derived iwasawa error type, e.g. "ImaginaryResidue".
std::string error_name(const std::exception& e);

}  // namespace iwasawa::cli
