#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "iwasawa/orbit.hpp"

namespace iwasawa {

/// Globally adaptive Gauss-Kronrod (7/15) settings for one-dimensional integrals.
struct RadialRule {
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
  int max_subdivisions = 400;
};

/// Everything that determines a stochastic estimate. Two runs with equal specs
/// produce bit-identical results regardless of the worker count.
struct QuadratureSpec {
  std::size_t sphere_samples = 20000;
  RadialRule radial{};
  double delta_min = 1e-7;  ///< smallest radius used by truncated (divergent) integrals
  double r_max = 40.0;      ///< finite/tail split point of radial integrals over [lower, inf)
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0: use IWASAWA_THREADS or the hardware concurrency

  /// Throws PreconditionViolation on out-of-range fields.
  void validate() const;
};

/// Monte Carlo estimate. `std_error` combines the sampling standard error with
/// any deterministic quadrature error carried by the samples.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples_used = 0;
};

struct RadialResult {
  double value = 0.0;
  double error = 0.0;
};

struct DivergenceFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> grid;  ///< (delta, truncated value)
};

/// Adaptive quadrature of f over [lower, upper]. Throws NoConvergence when the
/// subdivision budget runs out before max(abs_tol, rel_tol * |I|) is met.
RadialResult radial_integral(const std::function<double(double)>& f, double lower, double upper,
                             const RadialRule& rule);

/// Integral of f over [lower, inf): adaptive on [lower, r_max] plus the tail
/// (r_max, inf) through r = r_max + t / (1 - t). Both error estimates are summed.
RadialResult radial_integral_to_infinity(const std::function<double(double)>& f, double lower,
                                         double r_max, const RadialRule& rule);

struct FrullaniCheck {
  double numeric = 0.0;
  double closed = 0.0;
};

/// Integral over (0, inf) of (e^{-ar} - e^{-br}) / r next to log(b / a).
FrullaniCheck frullani_check(double a, double b, const RadialRule& rule);

/// Monte Carlo integral of h over the unit sphere of N* against the
/// unnormalized surface measure (total mass sphere_mass(p)).
Estimate sphere_integral(const std::function<double(const SphereDirection&)>& h, int p,
                         const QuadratureSpec& spec);

/// As sphere_integral, for integrands that are themselves quadratures. The
/// per-direction error estimates are averaged and folded into std_error.
Estimate sphere_integral_nested(const std::function<RadialResult(const SphereDirection&)>& h,
                                int p, const QuadratureSpec& spec);

/// Least-squares fit of F(delta) against log(1/delta). The grid must have at
/// least four strictly decreasing positive entries.
DivergenceFit divergence_slope(const std::function<double(double)>& F,
                               std::span<const double> delta_grid);

/// delta = 2^-k for k = 4..20.
std::vector<double> default_delta_grid();

/// Worker count for a spec: spec.threads if positive, else IWASAWA_THREADS, else
/// the hardware concurrency.
int worker_count(const QuadratureSpec& spec);

}  // namespace iwasawa
