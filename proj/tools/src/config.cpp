#include "iwasawa/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "iwasawa/cli/schema.hpp"
#include "iwasawa/errors.hpp"
#include "iwasawa/json_io.hpp"
#include "iwasawa/orbit.hpp"
#include "iwasawa/random.hpp"

namespace iwasawa::cli {

using nlohmann::json;

namespace {

struct RandomSpec {
  std::size_t count;
  std::uint64_t seed;
};

std::optional<RandomSpec> parse_random(const json& field) {
  if (!field.is_string()) return std::nullopt;
  const std::string& text = field.get_ref<const std::string&>();
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  return RandomSpec{std::stoull(text.substr(first + 1, second - first - 1)),
                    std::stoull(text.substr(second + 1))};
}

// Each field draws from its own substream so "random:2:7" gives unrelated
// s0, n and g lists.
Stream field_stream(std::uint64_t seed, std::uint64_t tag, std::size_t k) {
  return Stream(seed ^ (tag << 56), k);
}

template <typename T, typename Random, typename Parse>
std::vector<T> read_list(const json& doc, const char* key, std::uint64_t tag, Random random,
                         Parse parse) {
  std::vector<T> out;
  if (!doc.contains(key)) return out;
  const json& field = doc[key];
  if (const auto spec = parse_random(field)) {
    for (std::size_t k = 0; k < spec->count; ++k) {
      Stream rng = field_stream(spec->seed, tag, k);
      out.push_back(random(rng));
    }
    return out;
  }
  for (std::size_t i = 0; i < field.size(); ++i) {
    try {
      out.push_back(parse(field[i]));
    } catch (const Error& e) {
      throw ConfigError(std::string("/") + key + "/" + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

template <typename T>
void require_dim(const std::vector<T>& items, int p, const char* key) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].dim() != p) {
      throw ConfigError(std::string("/") + key + "/" + std::to_string(i) + ": order " +
                        std::to_string(items[i].dim()) + " does not match p = " +
                        std::to_string(p));
    }
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void validate(const json& doc) {
  const auto errors = SchemaValidator(runconfig_schema()).validate(doc);
  if (errors.empty()) return;
  std::string message = "config does not match schema/runconfig.json:";
  for (const auto& e : errors) message += "\n  " + e;
  throw ConfigError(message);
}

}  // namespace

RunConfig load_config(const Overrides& overrides, const CommandDefaults& defaults) {
  json doc = overrides.config_path ? read_file(*overrides.config_path) : json::object();
  return parse_config(std::move(doc), overrides, defaults);
}

RunConfig parse_config(json doc, const Overrides& overrides, const CommandDefaults& defaults) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (overrides.p) doc["p"] = *overrides.p;
  if (overrides.seed) doc["seed"] = *overrides.seed;
  if (overrides.samples) doc["samples"] = *overrides.samples;
  if (overrides.output) doc["output"]["path"] = *overrides.output;
  if (overrides.format) doc["output"]["format"] = *overrides.format;
  validate(doc);

  RunConfig cfg;
  cfg.p = doc["p"].get<int>();
  cfg.seed = doc.value("seed", std::uint64_t{0});
  doc["seed"] = cfg.seed;
  cfg.trials = doc.value("trials", std::size_t{100});
  cfg.quadrature.sphere_samples = doc.value("samples", cfg.quadrature.sphere_samples);
  doc["samples"] = cfg.quadrature.sphere_samples;
  cfg.quadrature.seed = cfg.seed;
  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    cfg.quadrature.radial.abs_tol = q.value("abs_tol", cfg.quadrature.radial.abs_tol);
    cfg.quadrature.radial.rel_tol = q.value("rel_tol", cfg.quadrature.radial.rel_tol);
    cfg.quadrature.radial.max_subdivisions =
        q.value("max_subdivisions", cfg.quadrature.radial.max_subdivisions);
    cfg.quadrature.delta_min = q.value("delta_min", cfg.quadrature.delta_min);
    cfg.quadrature.r_max = q.value("r_max", cfg.quadrature.r_max);
    cfg.quadrature.threads = q.value("threads", cfg.quadrature.threads);
  }
  try {
    cfg.quadrature.validate();
  } catch (const PreconditionViolation& e) {
    throw ConfigError(std::string("/quadrature: ") + e.what());
  }
  if (doc.contains("thresholds")) {
    const json& t = doc["thresholds"];
    auto& th = cfg.thresholds;
    th.identity_residual = t.value("identity_residual", th.identity_residual);
    th.agreement_sigma = t.value("agreement_sigma", th.agreement_sigma);
    th.f0_fit_r2 = t.value("f0_fit_r2", th.f0_fit_r2);
    th.f0_slope_rel_tol = t.value("f0_slope_rel_tol", th.f0_slope_rel_tol);
    th.divergent_fit_r2 = t.value("divergent_fit_r2", th.divergent_fit_r2);
    th.max_relative_error = t.value("max_relative_error", th.max_relative_error);
    th.probes = t.value("probes", th.probes);
  }

  const std::string shorthand =
      "random:" + std::to_string(defaults.count) + ":" + std::to_string(cfg.seed);
  for (const auto& key : defaults.fill) {
    if (!doc.contains(key)) doc[key] = shorthand;
  }
  if (defaults.default_q_grid && !doc.contains("q_grid")) {
    const double crit = 0.5 * cfg.p * cfg.p;
    doc["q_grid"] = json::array({crit - 0.5, crit, crit + 0.5});
  }

  const int p = cfg.p;
  cfg.s0 = read_list<TriangularS>(
      doc, "s0", 1, [p](Stream& r) { return random_triangular(p, r); },
      [](const json& j) { return triangular_from_json(j); });
  cfg.n = read_list<SkewHermitian>(
      doc, "n", 2, [p](Stream& r) { return random_skew(p, r); },
      [](const json& j) { return skew_from_json(j); });
  cfg.g = read_list<GroupElementP>(
      doc, "g", 3, [p](Stream& r) { return random_element(p, r); },
      [](const json& j) { return element_from_json(j); });
  const bool principal = defaults.principal_points;
  cfg.points = read_list<SkewHermitian>(
      doc, "points", 4,
      [p, principal](Stream& r) {
        return principal ? orbit_point(random_triangular(p, r), SignVector::all_positive(p))
                         : random_skew(p, r);
      },
      [](const json& j) { return skew_from_json(j); });
  require_dim(cfg.s0, p, "s0");
  require_dim(cfg.n, p, "n");
  require_dim(cfg.g, p, "g");
  require_dim(cfg.points, p, "points");

  if (doc.contains("q_grid")) cfg.q_grid = doc["q_grid"].get<std::vector<double>>();
  if (doc.contains("delta_grid")) {
    cfg.delta_grid = doc["delta_grid"].get<std::vector<double>>();
    for (std::size_t i = 0; i < cfg.delta_grid.size(); ++i) {
      if (cfg.delta_grid[i] < cfg.quadrature.delta_min ||
          (i > 0 && !(cfg.delta_grid[i] < cfg.delta_grid[i - 1]))) {
        throw ConfigError("/delta_grid: entries must decrease strictly and stay >= delta_min");
      }
    }
  }
  if (doc.contains("output")) {
    cfg.output_path = doc["output"].value("path", std::string());
    cfg.format = doc["output"].value("format", std::string("json")) == "csv" ? Format::Csv
                                                                             : Format::Json;
  }
  // The output location does not change the result, so keep it out of the echo.
  doc.erase("output");
  cfg.effective = std::move(doc);
  return cfg;
}

}  // namespace iwasawa::cli
