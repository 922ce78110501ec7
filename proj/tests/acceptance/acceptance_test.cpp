// Acceptance suite: one test per criterion, each printing a single
// "criterion N: PASS|FAIL" line with the measured quantities.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "iwasawa/cocycle.hpp"
#include "iwasawa/groups.hpp"
#include "iwasawa/orbit.hpp"
#include "iwasawa/quadrature.hpp"
#include "iwasawa/random.hpp"
#include "iwasawa/representation.hpp"
#include "test_support.hpp"

namespace iwasawa {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, bool passed, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", criterion, passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  EXPECT_TRUE(passed) << "criterion " << criterion << ": " << detail;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

double scaled_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs_diff(a, b) / std::max(1.0, a.cwiseAbs().maxCoeff());
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the installed CLI binary in a child process.
CliRun run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto out = dir / ("iwasawa_acc_out_" + tag);
  const auto err = dir / ("iwasawa_acc_err_" + tag);
  const std::string cmd = env + " \"" + IWASAWA_CLI_PATH + "\" " + args + " > \"" + out.string() +
                          "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliRun r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

TEST(Acceptance, Criterion01_GroupLaw) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int p = 1; p <= 4; ++p) {
    const ComplexMatrix id = ComplexMatrix::Identity(p, p);
    const GroupElementP e = GroupElementP::identity(p);
    for (std::uint64_t k = 0; k < 100; ++k) {
      Stream rng(1000 + p, k);
      const GroupElementP a = random_element(p, rng);
      const GroupElementP b = random_element(p, rng);
      const GroupElementP c = random_element(p, rng);
      const GroupElementP l = p_product(p_product(a, b), c);
      const GroupElementP r = p_product(a, p_product(b, c));
      worst = std::max({worst, scaled_diff(l.s.matrix(), r.s.matrix()),
                        scaled_diff(l.n.matrix(), r.n.matrix())});
      for (const GroupElementP& x : {p_product(e, a), p_product(a, e)}) {
        worst = std::max({worst, scaled_diff(x.s.matrix(), a.s.matrix()),
                          scaled_diff(x.n.matrix(), a.n.matrix())});
      }
      const double scale = std::max(1.0, a.n.matrix().norm());
      for (const GroupElementP& x : {p_product(a, p_inverse(a)), p_product(p_inverse(a), a)}) {
        worst = std::max({worst, max_abs_diff(x.s.matrix(), id),
                          x.n.matrix().cwiseAbs().maxCoeff() / scale});
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(1, worst < 1e-12 && elapsed < 1.0,
         "max residual " + sci(worst) + " (< 1e-12), " + sci(elapsed) + " s (< 1 s)");
}

TEST(Acceptance, Criterion02_Jacobian) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int p = 1; p <= 3; ++p) {
    for (std::uint64_t k = 0; k < 50; ++k) {
      Stream rng(2000 + p, k);
      const TriangularS s = random_triangular(p, rng);
      const double expected = std::pow(theta(s), 2 * p);
      worst = std::max(worst, std::abs(action_jacobian(s) - expected) / expected);
    }
  }
  const double elapsed = seconds_since(start);
  report(2, worst < 1e-8 && elapsed < 5.0,
         "max relative error " + sci(worst) + " (< 1e-8), " + sci(elapsed) + " s (< 5 s)");
}

TEST(Acceptance, Criterion03_OrbitRoundTrip) {
  std::size_t mislabeled = 0;
  std::size_t cases = 0;
  double worst = 0.0;
  for (int p = 1; p <= 4; ++p) {
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
      const SignVector eps = SignVector::from_mask(p, mask);
      for (std::uint64_t k = 0; k < 50; ++k) {
        Stream rng(3000 + 16 * p + mask, k);
        const TriangularS s = random_triangular(p, rng);
        const auto got = classify_orbit(orbit_point(s, eps));
        ++cases;
        if (!got || !(*got == eps)) ++mislabeled;
      }
    }
    const SignVector plus = SignVector::all_positive(p);
    for (std::uint64_t k = 0; k < 50; ++k) {
      Stream rng(3100 + p, k);
      const TriangularS s = random_triangular(p, rng);
      const TriangularS back = factor_orbit_point(orbit_point(s, plus));
      worst = std::max(worst, max_abs_diff(back.matrix(), s.matrix()));
    }
  }
  report(3, mislabeled == 0 && worst < 1e-10,
         std::to_string(cases - mislabeled) + "/" + std::to_string(cases) +
             " labels recovered, factor residual " + sci(worst) + " (< 1e-10)");
}

TEST(Acceptance, Criterion04_Frullani) {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Stream rng(4000, k);
    const double a = rng.uniform(0.1, 10.0);
    const double b = rng.uniform(0.1, 10.0);
    const FrullaniCheck f = frullani_check(a, b, {});
    worst = std::max(worst, std::abs(f.numeric - std::log(b / a)));
  }
  report(4, worst < 1e-8, "max |quadrature - log(b/a)| " + sci(worst) + " (< 1e-8)");
}

TEST(Acceptance, Criterion05_Homomorphism) {
  double worst = 0.0;
  for (int p = 1; p <= 3; ++p) {
    const Multiplier a(0.5 * p * p);
    const OrbitFunction f = SpecialVector(p).function();
    const auto probes = principal_probes(p, 50, 5000 + p);
    for (std::uint64_t k = 0; k < 50; ++k) {
      Stream rng(5100 + p, k);
      const GroupElementP g1 = random_element(p, rng);
      const GroupElementP g2 = random_element(p, rng);
      const OrbitFunction lhs = apply_group(g1, a, apply_group(g2, a, f));
      const OrbitFunction rhs = apply_group(p_product(g1, g2), a, f);
      for (const auto& m : probes) worst = std::max(worst, std::abs(lhs(m) - rhs(m)));
    }
  }
  report(5, worst < 1e-10, "max pointwise residual " + sci(worst) + " (< 1e-10)");
}

TEST(Acceptance, Criterion06_CocycleIdentity) {
  double worst = 0.0;
  for (int p = 1; p <= 3; ++p) {
    const Multiplier a(0.5 * p * p);
    const SpecialVector f0(p);
    const auto probes = principal_probes(p, 50, 6000 + p);
    for (std::uint64_t k = 0; k < 50; ++k) {
      Stream rng(6100 + p, k);
      const GroupElementP g1 = random_element(p, rng);
      const GroupElementP g2 = random_element(p, rng);
      worst = std::max(worst, cocycle_identity_residual(g1, g2, a, f0, probes));
    }
  }
  report(6, worst < 1e-10, "max residual " + sci(worst) + " (< 1e-10)");
}

TEST(Acceptance, Criterion07_ClosedVersusDirect) {
  const auto start = Clock::now();
  QuadratureSpec closed_spec;
  closed_spec.sphere_samples = 100000;
  QuadratureSpec direct_spec = closed_spec;
  std::size_t agreed = 0;
  std::size_t total = 0;
  std::size_t exact_hits = 0;
  std::size_t exact_total = 0;
  double worst_z = 0.0;
  for (int p = 1; p <= 2; ++p) {
    const Multiplier a(0.5 * p * p);
    const SpecialVector f0(p);
    for (std::uint64_t k = 0; k < 40; ++k) {
      Stream rng(7000 + p, k);
      const bool is_n = k < 20;
      const GroupElementP g = is_n ? GroupElementP(TriangularS::identity(p), random_skew(p, rng))
                                   : GroupElementP(random_triangular(p, rng), SkewHermitian::zero(p));
      // Independent direction sets for the two estimates.
      closed_spec.seed = 2 * k;
      direct_spec.seed = 2 * k + 1;
      const Estimate closed =
          is_n ? beta_n_norm_closed(g.n, closed_spec) : beta_s_norm_closed(g.s, closed_spec);
      const Estimate direct = beta_norm_direct(g, a, f0, direct_spec);
      ++total;
      if (norms_agree(closed, direct, 4.0)) ++agreed;
      const double se = std::hypot(closed.std_error, direct.std_error);
      if (se > 0) worst_z = std::max(worst_z, std::abs(closed.value - direct.value) / se);
      if (p == 1) {
        double target;
        if (is_n) {
          const double t = g.n.matrix()(0, 0).imag();
          target = 2.0 * std::log1p(t * t / 4.0);
        } else {
          const double sigma = g.s.matrix()(0, 0).real();
          const double s2 = sigma * sigma;
          target = 2.0 * std::log((1 + s2) * (1 + s2) / (4 * s2));
        }
        ++exact_total;
        if (norms_agree(Estimate{target, 0.0, 1}, direct, 3.0)) ++exact_hits;
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(7, agreed == total && exact_hits == exact_total && elapsed < 120.0,
         std::to_string(agreed) + "/" + std::to_string(total) + " within 4 sigma (worst " +
             sci(worst_z) + " sigma), p=1 exact targets " + std::to_string(exact_hits) + "/" +
             std::to_string(exact_total) + " within 3 sigma, " + sci(elapsed) + " s (< 120 s)");
}

TEST(Acceptance, Criterion08_F0Divergence) {
  QuadratureSpec spec;
  spec.sphere_samples = 1000;
  bool ok = true;
  std::string detail;
  for (int p = 1; p <= 2; ++p) {
    const DivergenceFit fit = f0_divergence(SpecialVector(p), {}, spec);
    const double mass = sphere_mass(p);
    const double rel = std::abs(fit.slope - mass) / mass;
    ok = ok && rel < 0.03 && fit.r_squared > 0.999;
    detail += "p=" + std::to_string(p) + ": slope " + sci(fit.slope) + " vs " + sci(mass) +
              " (rel " + sci(rel) + " < 0.03), r^2 " + sci(fit.r_squared) + "; ";
  }
  report(8, ok, detail);
}

TEST(Acceptance, Criterion09_Corollary2) {
  const TriangularS s0 = testing::diag_s({1, 2});
  QuadratureSpec spec;
  spec.sphere_samples = 4000;
  spec.seed = 9;
  bool ok = true;
  std::string detail;
  for (double q : {1.0, 3.0}) {
    const DivergenceFit fit = corollary2_divergence(s0, q, SpecialVector(2), {}, spec);
    QuadratureSpec wide = spec;
    wide.sphere_samples = 100000;
    const Estimate predicted = corollary2_predicted_slope(s0, q, SpecialVector(2), wide);
    const double rel = std::abs(fit.slope - predicted.value) / predicted.value;
    ok = ok && fit.slope > 0 && fit.r_squared > 0.99 && rel < 0.10;
    detail += "q=" + sci(q) + ": slope " + sci(fit.slope) + ", r^2 " + sci(fit.r_squared) +
              ", predicted " + sci(predicted.value) + " (rel " + sci(rel) + " < 0.1); ";
  }
  report(9, ok, detail);
}

TEST(Acceptance, Criterion10_Dichotomy) {
  const std::pair<int, std::string> expected[] = {
      {1, "SPECIAL, UNITARY"}, {2, "SPECIAL, BOUNDED, NONUNITARY"}, {3, "SPECIAL, BOUNDED, NONUNITARY"}};
  bool ok = true;
  std::string detail;
  for (const auto& [p, summary] : expected) {
    const CliRun r = run_cli("verdict --p " + std::to_string(p) + " --no-timestamp");
    std::string got = "unparseable report";
    bool finite_norms = false;
    try {
      const json report = json::parse(r.out);
      got = report.at("results").at("summary").get<std::string>();
      finite_norms = !report.at("results").at("operators").empty();
      for (const auto& op : report.at("results").at("operators")) {
        finite_norms = finite_norms && op.at("operator_norm").is_number() &&
                       std::isfinite(op.at("operator_norm").get<double>());
      }
      detail += "p=" + std::to_string(p) + ": \"" + got + "\", opnorms";
      for (const auto& op : report.at("results").at("operators")) {
        detail += " " + sci(op.at("operator_norm").get<double>());
      }
      detail += "; ";
    } catch (const std::exception& e) {
      detail += "p=" + std::to_string(p) + ": " + e.what() + " (" + r.err + "); ";
    }
    ok = ok && r.code == 0 && got == summary && finite_norms;
  }
  report(10, ok, detail);
}

TEST(Acceptance, Criterion11_Determinism) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("iwasawa_acc_cfg_" + std::to_string(::getpid()) + ".json");
  std::ofstream(path) << R"({"p": 2, "seed": 11, "samples": 20000, "s0": "random:2:11", "n": "random:2:12", "g": "random:1:13"})";
  const std::string args = "cocycle-norm --config \"" + path.string() + "\" --no-timestamp";
  const CliRun one = run_cli(args, "IWASAWA_THREADS=1");
  const CliRun four = run_cli(args, "IWASAWA_THREADS=4");
  const CliRun csv_one = run_cli(args + " --format csv", "IWASAWA_THREADS=1");
  const CliRun csv_four = run_cli(args + " --format csv", "IWASAWA_THREADS=4");
  std::filesystem::remove(path);
  const bool ok = !one.out.empty() && one.out == four.out && one.code == four.code &&
                  !csv_one.out.empty() && csv_one.out == csv_four.out;
  report(11, ok,
         "JSON " + std::to_string(one.out.size()) + " bytes, CSV " +
             std::to_string(csv_one.out.size()) + " bytes, identical across 1 and 4 threads: " +
             (ok ? "yes" : "no"));
}

}  // namespace
}  // namespace iwasawa
