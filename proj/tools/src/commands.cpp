#include "iwasawa/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "iwasawa/errors.hpp"
#include "iwasawa/json_io.hpp"
#include "iwasawa/orbit.hpp"
#include "iwasawa/random.hpp"

namespace iwasawa::cli {

using nlohmann::json;

const std::vector<std::string> kNormColumns{"p",         "element_id", "kind",       "q",
                                            "norm_closed", "se_closed", "norm_direct", "se_direct",
                                            "agree",     "unitary",    "opnorm",     "verdict"};

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const InvalidElement*>(&e)) return "InvalidElement";
  if (dynamic_cast<const ImaginaryResidue*>(&e)) return "ImaginaryResidue";
  if (dynamic_cast<const ZeroVector*>(&e)) return "ZeroVector";
  if (dynamic_cast<const NotInPrincipalOrbit*>(&e)) return "NotInPrincipalOrbit";
  if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const NonFiniteSample*>(&e)) return "NonFiniteSample";
  if (dynamic_cast<const PreconditionViolation*>(&e)) return "PreconditionViolation";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "std::exception";
}

namespace {

std::string flag(bool b) { return b ? "true" : "false"; }

double critical_q(int p) { return 0.5 * p * p; }

// Substream tags for the verify-group suites.
enum SuiteTag : std::uint64_t { kAxioms = 11, kTheta = 12, kJacobian = 13, kPairing = 14 };

Stream suite_stream(std::uint64_t seed, SuiteTag tag, std::size_t k) {
  return Stream(seed ^ (static_cast<std::uint64_t>(tag) << 48), k);
}

double scaled_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs_diff(a, b) / std::max(1.0, a.cwiseAbs().maxCoeff());
}

struct Check {
  std::string name;
  double tolerance;
  double max_residual = 0.0;
  std::string error = {};  ///< error type when the suite aborted

  bool passed() const { return error.empty() && max_residual < tolerance; }
};

// Runs body(k) for every trial, tracking the worst residual; an iwasawa error
// ends the suite and is recorded.
void run_suite(Check& check, std::size_t trials, const std::function<double(std::size_t)>& body,
               std::vector<std::string>& notes) {
  try {
    for (std::size_t k = 0; k < trials; ++k) {
      const double r = body(k);
      check.max_residual = std::max(check.max_residual, std::isnan(r) ? INFINITY : r);
    }
  } catch (const Error& e) {
    check.error = error_name(e);
    notes.push_back(check.name + ": " + check.error + ": " + e.what());
  }
}

struct NormRow {
  std::string id;
  std::string kind;
  double q;
  std::optional<Estimate> closed;
  Estimate direct;
  bool agree;
  bool unitary;
  double opnorm;
  std::string verdict;
};

std::vector<std::string> csv_row(int p, const NormRow& r) {
  return {std::to_string(p),
          r.id,
          r.kind,
          format_double(r.q),
          r.closed ? format_double(r.closed->value) : "",
          r.closed ? format_double(r.closed->std_error) : "",
          format_double(r.direct.value),
          std::isfinite(r.direct.value) ? format_double(r.direct.std_error) : "",
          flag(r.agree),
          flag(r.unitary),
          format_double(r.opnorm),
          r.verdict};
}

json row_json(const NormRow& r) {
  json j{{"element_id", r.id}, {"kind", r.kind},         {"q", r.q},
         {"norm_direct", r.direct}, {"agree", r.agree}, {"unitary", r.unitary},
         {"opnorm", r.opnorm},  {"verdict", r.verdict}};
  j["norm_closed"] = r.closed ? json(*r.closed) : json(nullptr);
  return j;
}

std::string indexed(const char* key, std::size_t i) { return std::string(key) + "/" + std::to_string(i); }

}  // namespace

CommandResult verify_group(const RunConfig& cfg, bool inject_fault) {
  const int p = cfg.p;
  const std::size_t trials = cfg.trials;
  std::vector<std::string> notes;

  Check assoc{"associativity", 1e-12};
  Check identity{"identity", 1e-12};
  Check inverse{"inverse", 1e-12};
  Check theta_mult{"theta_multiplicativity", 1e-12};
  Check jacobian{"jacobian", 1e-8};
  Check pairing_sym{"pairing_symmetry", 1e-12};

  const GroupElementP e = GroupElementP::identity(p);
  const ComplexMatrix id = ComplexMatrix::Identity(p, p);
  run_suite(assoc, trials, [&](std::size_t k) {
    Stream rng = suite_stream(cfg.seed, kAxioms, k);
    const GroupElementP a = random_element(p, rng);
    const GroupElementP b = random_element(p, rng);
    const GroupElementP c = random_element(p, rng);
    const GroupElementP l = p_product(p_product(a, b), c);
    const GroupElementP r = p_product(a, p_product(b, c));
    return std::max(scaled_diff(l.s.matrix(), r.s.matrix()), scaled_diff(l.n.matrix(), r.n.matrix()));
  }, notes);
  run_suite(identity, trials, [&](std::size_t k) {
    Stream rng = suite_stream(cfg.seed, kAxioms, k);
    const GroupElementP a = random_element(p, rng);
    double worst = 0.0;
    for (const GroupElementP& x : {p_product(e, a), p_product(a, e)}) {
      worst = std::max({worst, scaled_diff(x.s.matrix(), a.s.matrix()),
                        scaled_diff(x.n.matrix(), a.n.matrix())});
    }
    return worst;
  }, notes);
  run_suite(inverse, trials, [&](std::size_t k) {
    Stream rng = suite_stream(cfg.seed, kAxioms, k);
    const GroupElementP a = random_element(p, rng);
    const double scale = std::max(1.0, a.n.matrix().norm());
    double worst = 0.0;
    for (const GroupElementP& x : {p_product(a, p_inverse(a)), p_product(p_inverse(a), a)}) {
      worst = std::max({worst, max_abs_diff(x.s.matrix(), id),
                        x.n.matrix().cwiseAbs().maxCoeff() / scale});
    }
    return worst;
  }, notes);
  run_suite(theta_mult, trials, [&](std::size_t k) {
    Stream rng = suite_stream(cfg.seed, kTheta, k);
    const TriangularS a = random_triangular(p, rng);
    const TriangularS b = random_triangular(p, rng);
    const double ab = theta(s_multiply(a, b));
    return std::abs(ab - theta(a) * theta(b)) / ab;
  }, notes);
  run_suite(jacobian, trials, [&](std::size_t k) {
    Stream rng = suite_stream(cfg.seed, kJacobian, k);
    const TriangularS s = random_triangular(p, rng);
    const double expected = std::pow(theta(s), 2 * p);
    return std::abs(action_jacobian(s) - expected) / expected;
  }, notes);
  run_suite(pairing_sym, trials, [&](std::size_t k) {
    Stream rng = suite_stream(cfg.seed, kPairing, k);
    SkewHermitian x = random_skew(p, rng);
    const SkewHermitian y = random_skew(p, rng);
    if (inject_fault && k == 0) {
      // Hermitian contamination: x + I is no longer skew-Hermitian.
      x = SkewHermitian::unchecked(x.matrix() + id);
    }
    const double scale = 1.0 + x.matrix().norm() * y.matrix().norm();
    return std::abs(pairing(x, y) - pairing(y, x)) / scale;
  }, notes);

  CommandResult out;
  out.csv_header = {"check", "max_residual", "tolerance", "passed", "error"};
  json checks = json::array();
  for (const Check* c : {&assoc, &identity, &inverse, &theta_mult, &jacobian, &pairing_sym}) {
    checks.push_back({{"check", c->name},
                      {"max_residual", c->max_residual},
                      {"tolerance", c->tolerance},
                      {"passed", c->passed()},
                      {"error", c->error.empty() ? json(nullptr) : json(c->error)}});
    out.csv_rows.push_back({c->name, format_double(c->max_residual), format_double(c->tolerance),
                            flag(c->passed()), c->error});
    out.passed = out.passed && c->passed();
    out.summary.push_back(c->name + ": max residual " + format_double(c->max_residual) + " (" +
                          (c->passed() ? "ok" : "FAILED") + ")");
  }
  for (const auto& n : notes) out.summary.push_back(n);
  out.results = {{"trials", trials}, {"fault_injected", inject_fault}, {"checks", checks}};
  return out;
}

CommandResult cocycle_norm(const RunConfig& cfg) {
  const int p = cfg.p;
  const Multiplier a(critical_q(p));
  const SpecialVector f0(p);
  const QuadratureSpec& spec = cfg.quadrature;

  auto op_stats = [&](const TriangularS& s) {
    return std::make_pair(unitarity_report(s, a, spec).is_unitary, operator_norm_estimate(s, a, spec));
  };
  auto make_row = [&](std::string id, std::string kind, const GroupElementP& g, Estimate closed,
                      std::pair<bool, double> op) {
    NormRow row{std::move(id), std::move(kind), a.q(), closed, {}, false, op.first, op.second, ""};
    row.direct = beta_norm_direct(g, a, f0, spec);
    row.agree = norms_agree(closed, row.direct, cfg.thresholds.agreement_sigma);
    row.verdict = row.agree ? "finite" : "mismatch";
    return row;
  };

  std::vector<std::pair<NormRow, json>> rows;
  for (std::size_t i = 0; i < cfg.s0.size(); ++i) {
    const GroupElementP g(cfg.s0[i], SkewHermitian::zero(p));
    rows.emplace_back(make_row(indexed("s0", i), "s", g, beta_s_norm_closed(g.s, spec), op_stats(g.s)),
                      json(cfg.s0[i]));
  }
  for (std::size_t i = 0; i < cfg.n.size(); ++i) {
    const GroupElementP g(TriangularS::identity(p), cfg.n[i]);
    rows.emplace_back(make_row(indexed("n", i), "n", g, beta_n_norm_closed(g.n, spec), {true, 1.0}),
                      json(cfg.n[i]));
  }
  for (std::size_t i = 0; i < cfg.g.size(); ++i) {
    rows.emplace_back(make_row(indexed("g", i), "g", cfg.g[i], beta_norm_closed(cfg.g[i], spec),
                               op_stats(cfg.g[i].s)),
                      json(cfg.g[i]));
  }

  CommandResult out;
  out.csv_header = kNormColumns;
  json elements = json::array();
  for (const auto& [r, element] : rows) {
    json j = row_json(r);
    j["element"] = element;
    elements.push_back(std::move(j));
    out.csv_rows.push_back(csv_row(p, r));
    out.passed = out.passed && r.agree;
    out.summary.push_back(r.id + ": |beta|^2 closed " + format_double(r.closed->value) + " +- " +
                          format_double(r.closed->std_error) + ", direct " +
                          format_double(r.direct.value) + " +- " +
                          format_double(r.direct.std_error) + (r.agree ? "" : "  MISMATCH"));
  }
  out.results = {{"q", a.q()}, {"elements", elements}};
  return out;
}

CommandResult verdict(const RunConfig& cfg) {
  const int p = cfg.p;
  const TheoremReport report =
      theorem1_verdict(p, cfg.s0, cfg.n, cfg.quadrature, cfg.thresholds, cfg.delta_grid);

  CommandResult out;
  out.csv_header = kNormColumns;
  std::size_t counts[3] = {0, 0, 0};
  for (const CocycleReport& e : report.elements) {
    const int slot = e.kind == "s" ? 0 : e.kind == "n" ? 1 : 2;
    const std::size_t i = counts[slot]++;
    bool unitary = true;
    double opnorm = 1.0;
    if (e.kind != "n") {
      unitary = report.operators[i].unitarity.is_unitary;
      opnorm = report.operators[i].operator_norm;
    }
    const char* key = slot == 0 ? "s0" : slot == 1 ? "n" : "g";
    const NormRow row{indexed(key, i), e.kind, critical_q(p), e.norm_closed, e.norm_direct,
                      e.agree, unitary, opnorm, to_string(e.verdict)};
    out.csv_rows.push_back(csv_row(p, row));
  }
  out.results = report;
  out.passed = report.holds();
  out.summary.push_back("p = " + std::to_string(p) + ": " + report.summary);
  out.summary.push_back("|f0|^2 truncation slope " + format_double(report.f0_fit.slope) +
                        " (sphere mass " + format_double(report.sphere_mass) + ", r^2 " +
                        format_double(report.f0_fit.r_squared) + ")");
  for (const OperatorReport& op : report.operators) {
    out.summary.push_back("operator norm estimate " + format_double(op.operator_norm) +
                          (op.unitarity.is_unitary ? " (unitary)" : " (not unitary)"));
  }
  if (report.inconclusive) {
    out.summary.push_back("inconclusive: widen budget (raise --samples)");
  } else if (!out.passed) {
    out.summary.push_back("verdict does not match the expected dichotomy for p = " +
                          std::to_string(p));
  }
  return out;
}

CommandResult scan(const RunConfig& cfg) {
  const int p = cfg.p;
  const SpecialVector f0(p);
  const QuadratureSpec& spec = cfg.quadrature;
  CommandResult out;
  out.csv_header = kNormColumns;
  json rows = json::array();
  for (double q : cfg.q_grid) {
    const Multiplier a(q);
    const bool critical = std::abs(q - critical_q(p)) <= 1e-12;
    for (std::size_t i = 0; i < cfg.s0.size(); ++i) {
      const TriangularS& s0 = cfg.s0[i];
      const GroupElementP g(s0, SkewHermitian::zero(p));
      const UnitarityReport u = unitarity_report(s0, a, spec);
      NormRow row{indexed("s0", i), "s", q, std::nullopt, {}, false,
                  u.is_unitary, operator_norm_estimate(s0, a, spec), ""};
      json extra;
      if (critical) {
        row.closed = beta_s_norm_closed(s0, spec);
        row.direct = beta_norm_direct(g, a, f0, spec);
        row.agree = norms_agree(*row.closed, row.direct, cfg.thresholds.agreement_sigma);
        row.verdict = std::isfinite(row.direct.value) ? "convergent" : "divergent";
      } else {
        const DivergenceFit fit = corollary2_divergence(s0, q, f0, cfg.delta_grid, spec);
        const Estimate predicted = corollary2_predicted_slope(s0, q, f0, spec);
        const bool divergent = fit.slope > 0.0 && fit.r_squared >= cfg.thresholds.divergent_fit_r2;
        row.direct.value = divergent ? std::numeric_limits<double>::infinity() : fit.grid.back().second;
        row.verdict = divergent ? "divergent" : "convergent";
        extra = {{"fit", fit}, {"predicted_slope", predicted}};
      }
      json j = row_json(row);
      j["s0"] = s0;
      if (!extra.is_null()) j.update(extra);
      rows.push_back(std::move(j));
      out.csv_rows.push_back(csv_row(p, row));
      std::string line = "q = " + format_double(q) + ", " + row.id + ": " + row.verdict;
      if (!critical) line += " (slope " + format_double(extra["fit"]["slope"].get<double>()) + ")";
      out.summary.push_back(line + ", operator norm " + format_double(row.opnorm));
    }
  }
  out.results = {{"rows", rows}};
  return out;
}

CommandResult orbit_classify(const RunConfig& cfg) {
  CommandResult out;
  out.csv_header = {"point_id", "signs", "principal"};
  json rows = json::array();
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    const auto eps = classify_orbit(cfg.points[i]);
    std::string signs;
    if (eps) {
      for (int s : eps->signs()) signs += s > 0 ? '+' : '-';
    }
    rows.push_back({{"point_id", indexed("points", i)},
                    {"point", cfg.points[i]},
                    {"signs", eps ? json(*eps) : json(nullptr)},
                    {"principal", eps && eps->principal()}});
    out.csv_rows.push_back({indexed("points", i), eps ? signs : "degenerate",
                            flag(eps && eps->principal())});
    out.summary.push_back(indexed("points", i) + ": " + (eps ? signs : "lower-dimensional orbit"));
  }
  out.results = {{"rows", rows}};
  return out;
}

CommandResult factor(const RunConfig& cfg) {
  CommandResult out;
  out.csv_header = {"point_id", "residual", "ok", "error"};
  json rows = json::array();
  const Complex i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < cfg.points.size(); ++k) {
    const SkewHermitian& m = cfg.points[k];
    json row{{"point_id", indexed("points", k)}, {"point", m}};
    try {
      const TriangularS s = factor_orbit_point(m);
      const ComplexMatrix rebuilt = i_unit * s.matrix().adjoint() * s.matrix();
      const double residual = max_abs_diff(rebuilt, m.matrix()) / std::max(1.0, frob_norm(m));
      const bool ok = residual < 1e-10;
      row["s"] = s;
      row["residual"] = residual;
      row["ok"] = ok;
      out.passed = out.passed && ok;
      out.csv_rows.push_back({indexed("points", k), format_double(residual), flag(ok), ""});
      out.summary.push_back(indexed("points", k) + ": residual " + format_double(residual));
    } catch (const Error& e) {
      row["ok"] = false;
      row["error"] = {{"type", error_name(e)}, {"message", e.what()}};
      out.passed = false;
      out.csv_rows.push_back({indexed("points", k), "", "false", error_name(e)});
      out.summary.push_back(indexed("points", k) + ": " + error_name(e) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  out.results = {{"rows", rows}};
  return out;
}

}  // namespace iwasawa::cli
