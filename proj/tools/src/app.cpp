#include "iwasawa/cli/app.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "iwasawa/cli/commands.hpp"
#include "iwasawa/cli/config.hpp"
#include "iwasawa/errors.hpp"

#ifndef IWASAWA_VERSION
#define IWASAWA_VERSION "unknown"
#endif

namespace iwasawa::cli {

using nlohmann::json;

namespace {

struct Command {
  std::string description;
  CommandDefaults defaults;
  std::function<CommandResult(const RunConfig&, bool inject_fault)> body;
};

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"verify-group",
       {"Group axioms, theta multiplicativity, Jacobian and pairing suites", {},
        [](const RunConfig& c, bool fault) { return verify_group(c, fault); }}},
      {"cocycle-norm",
       {"Closed-form and direct norms of the cocycle for s0, n and g elements",
        {{"s0", "n"}, 2, false, false},
        [](const RunConfig& c, bool) { return cocycle_norm(c); }}},
      {"verdict",
       {"Special / bounded / unitary verdict for the critical multiplier",
        {{"s0", "n"}, 3, false, false},
        [](const RunConfig& c, bool) { return verdict(c); }}},
      {"scan",
       {"Convergence of the cocycle norm across multiplier exponents",
        {{"s0"}, 1, false, true},
        [](const RunConfig& c, bool) { return scan(c); }}},
      {"orbit-classify",
       {"Orbit sign vector of each point", {{"points"}, 4, false, false},
        [](const RunConfig& c, bool) { return orbit_classify(c); }}},
      {"factor",
       {"Triangular factor s with i s^H s = m for each point", {{"points"}, 4, true, false},
        [](const RunConfig& c, bool) { return factor(c); }}},
  };
  return table;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_csv(std::ostream& os, const CommandResult& r) {
  auto line = [&os](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << "\n";
  };
  line(r.csv_header);
  for (const auto& row : r.csv_rows) line(row);
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw ConfigError("cannot write output file " + cfg.output_path);
  file << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for special representations of the Iwasawa subgroup P = S N"};
  app.name("iwasawa");
  app.set_version_flag("--version", IWASAWA_VERSION);
  app.require_subcommand(1);

  Overrides overrides;
  int p = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string config_path, output, format;
  bool no_timestamp = false;
  bool inject_fault = false;

  for (const auto& [name, cmd] : commands()) {
    CLI::App* sub = app.add_subcommand(name, cmd.description);
    sub->add_option("--config", config_path, "JSON run configuration (schema/runconfig.json)")
        ->check(CLI::ExistingFile);
    sub->add_option("--p", p, "Matrix order p");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--samples", samples, "Sphere samples per Monte Carlo integral");
    sub->add_option("--output", output, "Write the report here instead of standard output");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp for byte-stable reports");
    if (name == "verify-group") {
      sub->add_flag("--inject-fault", inject_fault,
                    "Feed a non-skew-Hermitian n to the pairing suite (self-test)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const Command& cmd = commands().at(name);
  if (sub->count("--config")) overrides.config_path = config_path;
  if (sub->count("--p")) overrides.p = p;
  if (sub->count("--seed")) overrides.seed = seed;
  if (sub->count("--samples")) overrides.samples = samples;
  if (sub->count("--output")) overrides.output = output;
  if (sub->count("--format")) overrides.format = format;

  RunConfig cfg;
  try {
    cfg = load_config(overrides, cmd.defaults);
  } catch (const ConfigError& e) {
    err << "iwasawa " << name << ": configuration error: " << e.what() << "\n";
    return kConfigError;
  }

  json report{{"tool", "iwasawa"}, {"version", IWASAWA_VERSION}, {"command", name},
              {"config", cfg.effective}};
  if (!no_timestamp) report["timestamp"] = utc_timestamp();

  CommandResult result;
  bool errored = false;
  try {
    result = cmd.body(cfg, inject_fault);
    report["status"] = result.passed ? "passed" : "failed";
    report["results"] = result.results;
  } catch (const Error& e) {
    errored = true;
    report["status"] = "error";
    report["error"] = {{"type", error_name(e)}, {"message", e.what()}};
    result.summary.push_back(error_name(e) + ": " + e.what());
    result.csv_header = {"error", "message"};
    result.csv_rows = {{error_name(e), e.what()}};
  }

  std::string text;
  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    write_csv(os, result);
    text = os.str();
  } else {
    text = report.dump(2) + "\n";
  }
  try {
    emit(cfg, text, out);
  } catch (const ConfigError& e) {
    err << "iwasawa " << name << ": " << e.what() << "\n";
    return kConfigError;
  }

  const bool passed = !errored && result.passed;
  err << "iwasawa " << name << " (p = " << cfg.p << "): " << (passed ? "PASSED" : "FAILED") << "\n";
  for (const auto& line : result.summary) err << "  " << line << "\n";
  return passed ? kOk : kCheckFailed;
}

}  // namespace iwasawa::cli
