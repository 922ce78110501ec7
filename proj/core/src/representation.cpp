#include "iwasawa/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iwasawa/errors.hpp"

namespace iwasawa {
namespace {

void require_dim(int a, int b, const char* what) {
  if (a != b) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

std::string format_q(double q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

// Sweep of c(omega, s0) over the sampled directions.
template <typename Visit>
void for_each_direction(int p, const QuadratureSpec& spec, Visit&& visit) {
  spec.validate();
  for (std::size_t k = 0; k < spec.sphere_samples; ++k) {
    Stream rng(spec.seed, k);
    visit(sphere_sample(p, rng));
  }
}

}  // namespace

Multiplier::Multiplier(double q) : q_(q) {
  if (!std::isfinite(q)) throw InvalidElement("Multiplier: exponent must be finite");
}

double Multiplier::operator()(const SkewHermitian& m) const { return std::pow(frob_norm(m), q_); }

double Multiplier::ratio(const TriangularS& s0, const SkewHermitian& m) const {
  return std::pow(frob_norm(conj_action(s0, m)) / frob_norm(m), q_);
}

OrbitFunction::OrbitFunction(int p, PointFn point, RayFactory ray, std::string provenance)
    : p_(p),
      point_(std::make_shared<const PointFn>(std::move(point))),
      ray_(std::make_shared<const RayFactory>(std::move(ray))),
      provenance_(std::make_shared<const std::string>(std::move(provenance))) {
  if (p < 1 || p > kMaxDim) throw InvalidElement("OrbitFunction: p out of range");
}

OrbitFunction OrbitFunction::zero(int p) {
  return OrbitFunction(
      p, [](const SkewHermitian&) { return Complex(0.0, 0.0); },
      [](const SphereDirection&) { return RayFn([](double) { return Complex(0.0, 0.0); }); },
      "0");
}

Complex OrbitFunction::operator()(const SkewHermitian& m) const {
  require_dim(p_, m.dim(), "OrbitFunction");
  return (*point_)(m);
}

OrbitFunction::RayFn OrbitFunction::ray(const SphereDirection& omega) const {
  require_dim(p_, omega.dim(), "OrbitFunction::ray");
  return (*ray_)(omega);
}

OrbitFunction OrbitFunction::operator+(const OrbitFunction& other) const {
  require_dim(p_, other.p_, "OrbitFunction::operator+");
  auto lhs = *this;
  auto rhs = other;
  return OrbitFunction(
      p_, [lhs, rhs](const SkewHermitian& m) { return lhs(m) + rhs(m); },
      [lhs, rhs](const SphereDirection& omega) {
        return RayFn([l = lhs.ray(omega), r = rhs.ray(omega)](double t) { return l(t) + r(t); });
      },
      "(" + provenance() + " + " + other.provenance() + ")");
}

OrbitFunction OrbitFunction::operator-(const OrbitFunction& other) const {
  require_dim(p_, other.p_, "OrbitFunction::operator-");
  auto lhs = *this;
  auto rhs = other;
  return OrbitFunction(
      p_, [lhs, rhs](const SkewHermitian& m) { return lhs(m) - rhs(m); },
      [lhs, rhs](const SphereDirection& omega) {
        return RayFn([l = lhs.ray(omega), r = rhs.ray(omega)](double t) { return l(t) - r(t); });
      },
      "(" + provenance() + " - " + other.provenance() + ")");
}

OrbitFunction apply_t_n(const SkewHermitian& n, const OrbitFunction& f) {
  require_dim(n.dim(), f.dim(), "apply_t_n");
  return OrbitFunction(
      f.dim(),
      [n, f](const SkewHermitian& m) { return std::polar(1.0, pairing(n, m)) * f(m); },
      [n, f](const SphereDirection& omega) {
        const double tau = pairing(n, omega.omega());
        return OrbitFunction::RayFn(
            [tau, inner = f.ray(omega)](double r) { return std::polar(1.0, r * tau) * inner(r); });
      },
      "T(n)" + f.provenance());
}

OrbitFunction apply_t_s(const TriangularS& s0, const Multiplier& a, const OrbitFunction& f) {
  require_dim(s0.dim(), f.dim(), "apply_t_s");
  return OrbitFunction(
      f.dim(),
      [s0, a, f](const SkewHermitian& m) {
        const SkewHermitian moved = conj_action(s0, m);
        return std::pow(frob_norm(moved) / frob_norm(m), a.q()) * f(moved);
      },
      [s0, a, f](const SphereDirection& omega) {
        // s0^H (r omega) s0 = (r rho) omega' with omega' a unit direction.
        const SkewHermitian moved = conj_action(s0, omega.omega());
        const double rho = frob_norm(moved);
        const SphereDirection target(moved * (1.0 / rho));
        const double ratio = std::pow(rho, a.q());
        return OrbitFunction::RayFn(
            [ratio, rho, inner = f.ray(target)](double r) { return ratio * inner(r * rho); });
      },
      "T_" + format_q(a.q()) + "(s)" + f.provenance());
}

OrbitFunction apply_group(const GroupElementP& g, const Multiplier& a, const OrbitFunction& f) {
  return apply_t_s(g.s, a, apply_t_n(g.n, f));
}

double coefficient_b(const SkewHermitian& m, const TriangularS& s0, const Multiplier& a) {
  require_dim(m.dim(), s0.dim(), "coefficient_b");
  return a.ratio(s0, m) * std::pow(theta(s0), -static_cast<double>(s0.dim()));
}

double coefficient_c(const SkewHermitian& m, const TriangularS& s0, const Multiplier& a) {
  require_dim(m.dim(), s0.dim(), "coefficient_c");
  const SkewHermitian pulled = conj_action(s0.inverse(), m);
  return std::pow(frob_norm(m) / frob_norm(pulled), a.q()) *
         std::pow(theta(s0), -static_cast<double>(s0.dim()));
}

UnitarityReport unitarity_report(const TriangularS& s0, const Multiplier& a,
                                 const QuadratureSpec& spec) {
  UnitarityReport report;
  report.c_min = std::numeric_limits<double>::infinity();
  report.c_max = -std::numeric_limits<double>::infinity();
  double max_dev = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  bool finite = true;
  for_each_direction(s0.dim(), spec, [&](const SphereDirection& omega) {
    const double c = coefficient_c(omega.omega(), s0, a);
    finite = finite && std::isfinite(c);
    report.c_min = std::min(report.c_min, c);
    report.c_max = std::max(report.c_max, c);
    max_dev = std::max(max_dev, std::abs(c - 1.0));
    ++count;
    const double delta = c - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (c - mean);
  });
  report.c_std = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0;
  report.bounded = finite;
  report.is_unitary = finite && max_dev < 1e-10;
  return report;
}

double operator_norm_estimate(const TriangularS& s0, const Multiplier& a,
                              const QuadratureSpec& spec) {
  double best = 0.0;
  for_each_direction(s0.dim(), spec, [&](const SphereDirection& omega) {
    best = std::max(best, coefficient_c(omega.omega(), s0, a));
  });
  return best;
}

Estimate norm_squared(const OrbitFunction& f, const QuadratureSpec& spec, double lower) {
  const double power = static_cast<double>(f.dim()) * f.dim() - 1.0;
  return sphere_integral_nested(
      [&](const SphereDirection& omega) {
        const auto along = f.ray(omega);
        return radial_integral_to_infinity(
            [&along, power](double r) { return std::norm(along(r)) * std::pow(r, power); }, lower,
            spec.r_max, spec.radial);
      },
      f.dim(), spec);
}

}  // namespace iwasawa
