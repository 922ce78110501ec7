#pragma once

#include <span>
#include <string>
#include <vector>

#include "iwasawa/groups.hpp"
#include "iwasawa/quadrature.hpp"
#include "iwasawa/representation.hpp"

namespace iwasawa {

/// The vector f0(m) = e^{-|m|} / |m|^exponent. With exponent = p^2 / 2 it is
/// locally square integrable nowhere near 0 (its norm diverges logarithmically)
/// while every T(g) f0 - f0 has finite norm.
class SpecialVector {
 public:
  explicit SpecialVector(int p);
  SpecialVector(int p, double exponent);

  int dim() const { return p_; }
  double exponent() const { return exponent_; }
  /// True when exponent == p^2 / 2.
  bool critical() const;

  OrbitFunction function() const;

 private:
  int p_;
  double exponent_;
};

/// beta(g) = T(g) f0 - f0.
OrbitFunction beta(const GroupElementP& g, const Multiplier& a, const SpecialVector& f0);

/// Largest value over the probes of |beta(g1 g2)(m) - beta(g1)(m) - (T(g1) beta(g2))(m)|.
/// The identity holds exactly, so this measures roundoff only.
double cocycle_identity_residual(const GroupElementP& g1, const GroupElementP& g2,
                                 const Multiplier& a, const SpecialVector& f0,
                                 std::span<const SkewHermitian> probes);

/// Random probes i s^H s on the principal orbit.
std::vector<SkewHermitian> principal_probes(int p, std::size_t count, std::uint64_t seed);

/// |beta(n)|^2 = integral over the sphere of log(1 + Tr(n omega)^2 / 4).
Estimate beta_n_norm_closed(const SkewHermitian& n, const QuadratureSpec& spec);

/// |beta(s0)|^2 = integral over the sphere of log((1 + rho)^2 / (4 rho)),
/// rho = |s0^H omega s0|.
Estimate beta_s_norm_closed(const TriangularS& s0, const QuadratureSpec& spec);

/// Closed form for a general g = (s, n):
///   log(((1 + rho)^2 + tau^2) / (4 rho)), rho = |s^H omega s|, tau = Tr(n s^H omega s).
/// Reduces to the two forms above when n = 0 or s = I.
Estimate beta_norm_closed(const GroupElementP& g, const QuadratureSpec& spec);

/// |beta(g)|^2 by nested quadrature of |beta(g)(r omega)|^2 r^{p^2-1}.
/// Requires a.q() == f0.exponent() == p^2 / 2.
Estimate beta_norm_direct(const GroupElementP& g, const Multiplier& a, const SpecialVector& f0,
                          const QuadratureSpec& spec);

/// Same integrand restricted to r >= delta; no precondition on the exponents.
Estimate beta_norm_truncated(const GroupElementP& g, const Multiplier& a,
                             const SpecialVector& f0, double delta, const QuadratureSpec& spec);

/// Fit of the truncated |f0|^2(delta) against log(1/delta); the slope tends to
/// sphere_mass(p).
DivergenceFit f0_divergence(const SpecialVector& f0, std::span<const double> delta_grid,
                            const QuadratureSpec& spec);

/// Fit of the truncated |beta(s0)|^2(delta) for a multiplier exponent q != p^2 / 2.
DivergenceFit corollary2_divergence(const TriangularS& s0, double q, const SpecialVector& f0,
                                    std::span<const double> delta_grid,
                                    const QuadratureSpec& spec);

/// Independent prediction of the corollary2_divergence slope: the sphere
/// integral of (b(omega) - 1)^2 with b(omega) = rho^(q - exponent).
Estimate corollary2_predicted_slope(const TriangularS& s0, double q, const SpecialVector& f0,
                                    const QuadratureSpec& spec);

struct VerdictThresholds {
  double identity_residual = 1e-9;
  double agreement_sigma = 4.0;
  double f0_fit_r2 = 0.999;
  double f0_slope_rel_tol = 0.03;
  double divergent_fit_r2 = 0.99;
  /// Norm estimates with a larger relative error make the run inconclusive.
  double max_relative_error = 0.1;
  std::size_t probes = 20;
};

/// |a - b| <= sigma * hypot(se_a, se_b), with a floor of 64 ulp of the larger
/// value so exact estimates (std_error 0) can still agree.
bool norms_agree(const Estimate& a, const Estimate& b, double sigma);

enum class CocycleVerdict { SpecialCocycle, Divergent, CoboundaryLike };

std::string to_string(CocycleVerdict v);

struct CocycleReport {
  std::string kind;  ///< "n", "s" or "g"
  GroupElementP group_element;
  Estimate norm_closed;
  Estimate norm_direct;
  double identity_residual = 0.0;
  bool agree = false;
  bool precise = false;  ///< relative errors within max_relative_error
  CocycleVerdict verdict = CocycleVerdict::Divergent;
};

struct OperatorReport {
  TriangularS s0;
  UnitarityReport unitarity;
  double operator_norm = 0.0;
};

struct TheoremReport {
  int p = 0;
  double sphere_mass = 0.0;
  DivergenceFit f0_fit;
  bool f0_divergent = false;
  std::vector<CocycleReport> elements;
  std::vector<OperatorReport> operators;
  bool special = false;
  bool bounded = false;
  bool unitary = false;
  bool inconclusive = false;
  std::string summary;

  /// p = 1: special and unitary. p > 1: special, bounded and not unitary.
  bool holds() const;
};

/// Runs the full check for the distinguished multiplier q = p^2 / 2: divergence
/// of |f0|, closed/direct agreement and cocycle identity for each (s0, 0),
/// (I, n) and (s0_i, n_i), unitarity and operator norms of T_a(s0).
TheoremReport theorem1_verdict(int p, std::span<const TriangularS> s0_samples,
                               std::span<const SkewHermitian> n_samples,
                               const QuadratureSpec& spec,
                               const VerdictThresholds& thresholds = {},
                               std::span<const double> delta_grid = {});

}  // namespace iwasawa
