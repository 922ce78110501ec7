#include "iwasawa/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "iwasawa/errors.hpp"
#include "iwasawa/random.hpp"

namespace iwasawa {
namespace {

constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;  // "probe"

double critical_exponent(int p) { return 0.5 * static_cast<double>(p) * p; }

void require_critical(const Multiplier& a, const SpecialVector& f0, const char* what) {
  const double crit = critical_exponent(f0.dim());
  if (std::abs(a.q() - crit) > 1e-12 || !f0.critical()) {
    throw PreconditionViolation(std::string(what) +
                                ": requires multiplier and f0 exponents equal to p^2/2");
  }
}

bool finite(const Estimate& e) { return std::isfinite(e.value) && std::isfinite(e.std_error); }

}  // namespace

SpecialVector::SpecialVector(int p) : SpecialVector(p, critical_exponent(p)) {}

SpecialVector::SpecialVector(int p, double exponent) : p_(p), exponent_(exponent) {
  if (p < 1 || p > kMaxDim) throw InvalidElement("SpecialVector: p out of range");
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw InvalidElement("SpecialVector: exponent must be positive");
  }
}

bool SpecialVector::critical() const {
  return std::abs(exponent_ - critical_exponent(p_)) <= 1e-12;
}

OrbitFunction SpecialVector::function() const {
  const double e = exponent_;
  return OrbitFunction(
      p_,
      [e](const SkewHermitian& m) {
        const double r = frob_norm(m);
        return Complex(std::exp(-r - e * std::log(r)), 0.0);
      },
      [e](const SphereDirection&) {
        return OrbitFunction::RayFn(
            [e](double r) { return Complex(std::exp(-r - e * std::log(r)), 0.0); });
      },
      "f0");
}

OrbitFunction beta(const GroupElementP& g, const Multiplier& a, const SpecialVector& f0) {
  const OrbitFunction base = f0.function();
  return apply_group(g, a, base) - base;
}

double cocycle_identity_residual(const GroupElementP& g1, const GroupElementP& g2,
                                 const Multiplier& a, const SpecialVector& f0,
                                 std::span<const SkewHermitian> probes) {
  const OrbitFunction lhs = beta(p_product(g1, g2), a, f0);
  const OrbitFunction first = beta(g1, a, f0);
  const OrbitFunction moved = apply_group(g1, a, beta(g2, a, f0));
  double worst = 0.0;
  for (const SkewHermitian& m : probes) {
    worst = std::max(worst, std::abs(lhs(m) - first(m) - moved(m)));
  }
  return worst;
}

std::vector<SkewHermitian> principal_probes(int p, std::size_t count, std::uint64_t seed) {
  std::vector<SkewHermitian> probes;
  probes.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng(seed ^ kProbeStream, k);
    probes.push_back(orbit_point(random_triangular(p, rng), SignVector::all_positive(p)));
  }
  return probes;
}

Estimate beta_n_norm_closed(const SkewHermitian& n, const QuadratureSpec& spec) {
  return sphere_integral(
      [&n](const SphereDirection& omega) {
        const double tau = pairing(n, omega.omega());
        return std::log1p(0.25 * tau * tau);
      },
      n.dim(), spec);
}

Estimate beta_s_norm_closed(const TriangularS& s0, const QuadratureSpec& spec) {
  return sphere_integral(
      [&s0](const SphereDirection& omega) {
        const double rho = frob_norm(conj_action(s0, omega.omega()));
        // (1 + rho)^2 / (4 rho) = 1 + (1 - rho)^2 / (4 rho)
        return std::log1p((1.0 - rho) * (1.0 - rho) / (4.0 * rho));
      },
      s0.dim(), spec);
}

Estimate beta_norm_closed(const GroupElementP& g, const QuadratureSpec& spec) {
  return sphere_integral(
      [&g](const SphereDirection& omega) {
        const SkewHermitian moved = conj_action(g.s, omega.omega());
        const double rho = frob_norm(moved);
        const double tau = pairing(g.n, moved);
        return std::log1p(((1.0 - rho) * (1.0 - rho) + tau * tau) / (4.0 * rho));
      },
      g.dim(), spec);
}

Estimate beta_norm_direct(const GroupElementP& g, const Multiplier& a, const SpecialVector& f0,
                          const QuadratureSpec& spec) {
  require_critical(a, f0, "beta_norm_direct");
  return norm_squared(beta(g, a, f0), spec, 0.0);
}

Estimate beta_norm_truncated(const GroupElementP& g, const Multiplier& a,
                             const SpecialVector& f0, double delta, const QuadratureSpec& spec) {
  if (!(delta >= spec.delta_min)) {
    throw PreconditionViolation("beta_norm_truncated: delta below delta_min");
  }
  return norm_squared(beta(g, a, f0), spec, delta);
}

DivergenceFit f0_divergence(const SpecialVector& f0, std::span<const double> delta_grid,
                            const QuadratureSpec& spec) {
  if (!f0.critical()) throw PreconditionViolation("f0_divergence: f0 exponent must be p^2/2");
  const std::vector<double> fallback = default_delta_grid();
  if (delta_grid.empty()) delta_grid = fallback;
  const OrbitFunction f = f0.function();
  return divergence_slope(
      [&](double delta) {
        if (!(delta >= spec.delta_min)) {
          throw PreconditionViolation("f0_divergence: delta below delta_min");
        }
        return norm_squared(f, spec, delta).value;
      },
      delta_grid);
}

DivergenceFit corollary2_divergence(const TriangularS& s0, double q, const SpecialVector& f0,
                                    std::span<const double> delta_grid,
                                    const QuadratureSpec& spec) {
  if (std::abs(q - f0.exponent()) <= 1e-12) {
    throw PreconditionViolation(
        "corollary2_divergence: q equals the f0 exponent; the cocycle converges, use "
        "beta_norm_direct");
  }
  const std::vector<double> fallback = default_delta_grid();
  if (delta_grid.empty()) delta_grid = fallback;
  const GroupElementP g(s0, SkewHermitian::zero(s0.dim()));
  const Multiplier a(q);
  return divergence_slope(
      [&](double delta) { return beta_norm_truncated(g, a, f0, delta, spec).value; }, delta_grid);
}

Estimate corollary2_predicted_slope(const TriangularS& s0, double q, const SpecialVector& f0,
                                    const QuadratureSpec& spec) {
  const double e = f0.exponent();
  return sphere_integral(
      [&](const SphereDirection& omega) {
        const double rho = frob_norm(conj_action(s0, omega.omega()));
        const double b = std::pow(rho, q - e);
        return (b - 1.0) * (b - 1.0);
      },
      s0.dim(), spec);
}

bool norms_agree(const Estimate& a, const Estimate& b, double sigma) {
  if (!finite(a) || !finite(b)) return false;
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a.value), std::abs(b.value));
  return std::abs(a.value - b.value) <= sigma * std::hypot(a.std_error, b.std_error) + floor;
}

std::string to_string(CocycleVerdict v) {
  switch (v) {
    case CocycleVerdict::SpecialCocycle:
      return "SpecialCocycle";
    case CocycleVerdict::Divergent:
      return "Divergent";
    case CocycleVerdict::CoboundaryLike:
      return "CoboundaryLike";
  }
  return "Unknown";
}

bool TheoremReport::holds() const {
  if (inconclusive) return false;
  if (p == 1) return special && unitary;
  return special && bounded && !unitary;
}

TheoremReport theorem1_verdict(int p, std::span<const TriangularS> s0_samples,
                               std::span<const SkewHermitian> n_samples,
                               const QuadratureSpec& spec, const VerdictThresholds& thresholds,
                               std::span<const double> delta_grid) {
  spec.validate();
  if (p < 1 || p > kMaxDim) throw PreconditionViolation("theorem1_verdict: p out of range");
  const SpecialVector f0(p);
  const Multiplier a(critical_exponent(p));

  TheoremReport report;
  report.p = p;
  report.sphere_mass = sphere_mass(p);

  // |f0(r omega)| does not depend on omega, so a short sample run already
  // integrates the sphere exactly.
  QuadratureSpec radial_spec = spec;
  radial_spec.sphere_samples = std::min<std::size_t>(spec.sphere_samples, 256);
  report.f0_fit = f0_divergence(f0, delta_grid, radial_spec);
  report.f0_divergent =
      report.f0_fit.r_squared > thresholds.f0_fit_r2 &&
      std::abs(report.f0_fit.slope - report.sphere_mass) <=
          thresholds.f0_slope_rel_tol * report.sphere_mass;

  std::vector<std::pair<std::string, GroupElementP>> elements;
  for (const auto& s0 : s0_samples) {
    elements.emplace_back("s", GroupElementP(s0, SkewHermitian::zero(p)));
  }
  for (const auto& n : n_samples) {
    elements.emplace_back("n", GroupElementP(TriangularS::identity(p), n));
  }
  for (std::size_t i = 0; i < std::min(s0_samples.size(), n_samples.size()); ++i) {
    elements.emplace_back("g", GroupElementP(s0_samples[i], n_samples[i]));
  }

  const auto probes = principal_probes(p, thresholds.probes, spec.seed);
  bool all_special = !elements.empty();
  bool all_precise = true;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& [kind, g] = elements[i];
    CocycleReport entry{kind, g, {}, {}, 0.0, false, false, CocycleVerdict::Divergent};
    try {
      entry.norm_closed = kind == "n"   ? beta_n_norm_closed(g.n, spec)
                          : kind == "s" ? beta_s_norm_closed(g.s, spec)
                                        : beta_norm_closed(g, spec);
      entry.norm_direct = beta_norm_direct(g, a, f0, spec);
    } catch (const NoConvergence&) {
      entry.norm_direct.value = std::numeric_limits<double>::infinity();
    }
    const auto& next = elements[(i + 1) % elements.size()].second;
    entry.identity_residual = cocycle_identity_residual(g, next, a, f0, probes);

    const bool finite_norms = finite(entry.norm_closed) && finite(entry.norm_direct);
    entry.agree = norms_agree(entry.norm_closed, entry.norm_direct, thresholds.agreement_sigma);
    auto precise = [&](const Estimate& e) {
      return e.value == 0.0 || e.std_error <= thresholds.max_relative_error * std::abs(e.value);
    };
    entry.precise = finite_norms && precise(entry.norm_closed) && precise(entry.norm_direct);
    const bool ok = finite_norms && entry.agree &&
                    entry.identity_residual < thresholds.identity_residual;
    if (ok) {
      entry.verdict =
          report.f0_divergent ? CocycleVerdict::SpecialCocycle : CocycleVerdict::CoboundaryLike;
    }
    all_special = all_special && entry.verdict == CocycleVerdict::SpecialCocycle;
    all_precise = all_precise && entry.precise;
    report.elements.push_back(std::move(entry));
  }

  bool bounded = true;
  bool unitary = true;
  for (const auto& s0 : s0_samples) {
    OperatorReport op{s0, unitarity_report(s0, a, spec), operator_norm_estimate(s0, a, spec)};
    bounded = bounded && op.unitarity.bounded && std::isfinite(op.operator_norm);
    unitary = unitary && op.unitarity.is_unitary;
    report.operators.push_back(std::move(op));
  }

  report.special = report.f0_divergent && all_special;
  report.bounded = bounded;
  report.unitary = unitary;
  report.inconclusive = !all_precise;
  if (report.inconclusive) {
    report.summary = "INCONCLUSIVE: widen budget";
  } else if (report.special && report.unitary) {
    report.summary = "SPECIAL, UNITARY";
  } else if (report.special && report.bounded) {
    report.summary = "SPECIAL, BOUNDED, NONUNITARY";
  } else if (report.special) {
    report.summary = "SPECIAL, UNBOUNDED";
  } else {
    report.summary = "NOT SPECIAL";
  }
  return report;
}

}  // namespace iwasawa
