#pragma once

#include <functional>
#include <memory>
#include <string>

#include "iwasawa/groups.hpp"
#include "iwasawa/orbit.hpp"
#include "iwasawa/quadrature.hpp"

namespace iwasawa {

/// Homogeneous multiplier a(m) = |m|^q.
class Multiplier {
 public:
  explicit Multiplier(double q);

  double q() const { return q_; }
  double operator()(const SkewHermitian& m) const;

  /// a(s0^H m s0) / a(m), evaluated as a ratio of norms so it stays finite for
  /// large q.
  double ratio(const TriangularS& s0, const SkewHermitian& m) const;

 private:
  double q_;
};

/// Complex-valued function on N* \ {0}, closed under T(n) and T_a(s).
///
/// Two evaluation paths are carried side by side:
///  - pointwise, f(m) for a matrix m;
///  - along rays, ray(omega) returns r -> f(r omega) for a fixed unit direction.
///    Both operators map rays to rays (T(n) multiplies by e^{i r Tr(n omega)},
///    T_a(s) rescales to the ray through s^H omega s), so radial quadrature
///    runs on scalars only.
/// Values are immutable; composing never mutates an operand.
class OrbitFunction {
 public:
  using PointFn = std::function<Complex(const SkewHermitian&)>;
  using RayFn = std::function<Complex(double)>;
  using RayFactory = std::function<RayFn(const SphereDirection&)>;

  OrbitFunction(int p, PointFn point, RayFactory ray, std::string provenance);

  static OrbitFunction zero(int p);

  int dim() const { return p_; }
  Complex operator()(const SkewHermitian& m) const;
  RayFn ray(const SphereDirection& omega) const;
  const std::string& provenance() const { return *provenance_; }

  OrbitFunction operator+(const OrbitFunction& other) const;
  OrbitFunction operator-(const OrbitFunction& other) const;

 private:
  int p_;
  std::shared_ptr<const PointFn> point_;
  std::shared_ptr<const RayFactory> ray_;
  std::shared_ptr<const std::string> provenance_;
};

/// T(n) f(m) = exp(i Tr(nm)) f(m).
OrbitFunction apply_t_n(const SkewHermitian& n, const OrbitFunction& f);

/// T_a(s0) f(m) = [a(s0^H m s0) / a(m)] f(s0^H m s0).
OrbitFunction apply_t_s(const TriangularS& s0, const Multiplier& a, const OrbitFunction& f);

/// T((s, n)) = T_a(s) o T(n). This order makes g -> T(g) a homomorphism for the
/// product (s1, n1)(s2, n2) = (s1 s2, s2^-1 n1 s2^-H + n2).
OrbitFunction apply_group(const GroupElementP& g, const Multiplier& a, const OrbitFunction& f);

/// b(m, s0) = [a(s0^H m s0) / a(m)] theta(s0)^-p.
double coefficient_b(const SkewHermitian& m, const TriangularS& s0, const Multiplier& a);

/// c(m, s0) = [a(m) / a(s0^-H m s0^-1)] theta(s0)^-p, so that
/// |T_a(s0) f|^2 = integral of |f(m) c(m, s0)|^2 dm.
double coefficient_c(const SkewHermitian& m, const TriangularS& s0, const Multiplier& a);

struct UnitarityReport {
  bool is_unitary = false;  ///< max |c - 1| < 1e-10 on every sampled direction
  bool bounded = false;     ///< c finite on every sampled direction
  double c_min = 0.0;
  double c_max = 0.0;
  double c_std = 0.0;
};

/// Samples c(omega, s0) over spec.sphere_samples directions (the same
/// directions sphere_integral would use for spec.seed).
UnitarityReport unitarity_report(const TriangularS& s0, const Multiplier& a,
                                 const QuadratureSpec& spec);

/// max over sampled directions of c(omega, s0). A lower bound on the operator
/// norm of T_a(s0) that increases with the sample count.
double operator_norm_estimate(const TriangularS& s0, const Multiplier& a,
                              const QuadratureSpec& spec);

/// Integral over N* of |f(m)|^2 with |m| >= lower, in spherical coordinates
/// (r^{p^2-1} dr d omega).
Estimate norm_squared(const OrbitFunction& f, const QuadratureSpec& spec, double lower = 0.0);

}  // namespace iwasawa
