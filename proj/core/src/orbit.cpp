#include "iwasawa/orbit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "iwasawa/errors.hpp"

namespace iwasawa {
namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

SphereDirection::SphereDirection(SkewHermitian omega) : omega_(std::move(omega)) {
  const double norm = frob_norm(omega_);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InvalidElement("SphereDirection: norm " + std::to_string(norm) + " is not 1");
  }
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw InvalidElement("SignVector: empty");
  for (int v : signs_) {
    if (v != 1 && v != -1) throw InvalidElement("SignVector: entries must be +1 or -1");
  }
}

SignVector SignVector::all_positive(int p) { return SignVector(std::vector<int>(p, 1)); }

SignVector SignVector::from_mask(int p, unsigned mask) {
  std::vector<int> v(p, 1);
  for (int k = 0; k < p; ++k) {
    if (mask & (1u << k)) v[k] = -1;
  }
  return SignVector(std::move(v));
}

bool SignVector::principal() const {
  for (int v : signs_) {
    if (v != 1) return false;
  }
  return true;
}

double real_inner(const SkewHermitian& x, const SkewHermitian& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("real_inner: dimensions differ");
  // Re Tr(x y^H) = Re sum_ij x_ij conj(y_ij)
  return (x.matrix().array() * y.matrix().array().conjugate()).real().sum();
}

SkewBasis::SkewBasis(int p) : p_(p) {
  if (p < 1 || p > kMaxDim) {
    throw InvalidElement("SkewBasis: p must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
  elements_.reserve(static_cast<std::size_t>(p * p));
  for (int k = 0; k < p; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(p, p);
    e(k, k) = kI;
    elements_.push_back(SkewHermitian(e));
  }
  const double h = std::numbers::sqrt2 / 2.0;
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      ComplexMatrix a = ComplexMatrix::Zero(p, p);
      a(j, k) = h;
      a(k, j) = -h;
      elements_.push_back(SkewHermitian(a));
      ComplexMatrix b = ComplexMatrix::Zero(p, p);
      b(j, k) = kI * h;
      b(k, j) = kI * h;
      elements_.push_back(SkewHermitian(b));
    }
  }
}

Eigen::VectorXd SkewBasis::coordinates(const SkewHermitian& m) const {
  if (m.dim() != p_) throw DimensionMismatch("SkewBasis::coordinates: dimension mismatch");
  Eigen::VectorXd c(size());
  for (int i = 0; i < size(); ++i) c(i) = real_inner(m, elements_[i]);
  return c;
}

SkewHermitian SkewBasis::reconstruct(const Eigen::VectorXd& coords) const {
  if (coords.size() != size()) {
    throw DimensionMismatch("SkewBasis::reconstruct: expected " + std::to_string(size()) +
                            " coordinates");
  }
  SkewHermitian m = SkewHermitian::zero(p_);
  for (int i = 0; i < size(); ++i) m = m + elements_[i] * coords(i);
  return m;
}

Eigen::MatrixXd SkewBasis::gram() const {
  Eigen::MatrixXd g(size(), size());
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) g(i, j) = real_inner(elements_[i], elements_[j]);
  }
  return g;
}

Polar polar_decompose(const SkewHermitian& m) {
  const double r = frob_norm(m);
  if (r == 0.0) throw ZeroVector("polar_decompose: m = 0 has no direction");
  return Polar{r, SphereDirection(m * (1.0 / r))};
}

SphereDirection sphere_sample(int p, Stream& rng) {
  // Same draw as sum_k g_k B_k over SkewBasis(p), written entrywise.
  const double h = std::numbers::sqrt2 / 2.0;
  for (;;) {
    ComplexMatrix m = ComplexMatrix::Zero(p, p);
    for (int k = 0; k < p; ++k) m(k, k) = kI * rng.gaussian();
    for (int j = 0; j < p; ++j) {
      for (int k = j + 1; k < p; ++k) {
        const double a = rng.gaussian();
        const double b = rng.gaussian();
        m(j, k) = Complex(a * h, b * h);
        m(k, j) = Complex(-a * h, b * h);
      }
    }
    const double norm = m.norm();
    if (norm > 0.0) return SphereDirection(SkewHermitian::unchecked(m / norm));
  }
}

double sphere_mass(int p) {
  // Exact values for the two cases that tests compare bit for bit.
  if (p == 1) return 2.0;
  if (p == 2) return 2.0 * std::numbers::pi * std::numbers::pi;
  const double d = static_cast<double>(p) * p;
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

SkewHermitian orbit_point(const TriangularS& s, const SignVector& eps) {
  if (s.dim() != eps.dim()) throw DimensionMismatch("orbit_point: dimensions differ");
  ComplexMatrix d = ComplexMatrix::Zero(s.dim(), s.dim());
  for (int k = 0; k < s.dim(); ++k) d(k, k) = kI * static_cast<double>(eps.signs()[k]);
  return project_skew(s.matrix().adjoint() * d * s.matrix());
}

std::optional<SignVector> classify_orbit(const SkewHermitian& m, double tol) {
  const int p = m.dim();
  const ComplexMatrix h = -kI * m.matrix();
  const double scale = h.norm();
  if (scale == 0.0) return std::nullopt;

  std::vector<int> eps(p, 1);
  double prev = 1.0;
  for (int k = 1; k <= p; ++k) {
    const double minor = h.bottomRightCorner(k, k).determinant().real();
    if (!(std::abs(minor) >= tol * std::pow(scale, k))) return std::nullopt;
    eps[p - k] = (minor / prev) > 0.0 ? 1 : -1;
    prev = minor;
  }
  return SignVector(std::move(eps));
}

TriangularS factor_orbit_point(const SkewHermitian& m) {
  const ComplexMatrix h = -kI * m.matrix();
  // J H J with J the index reversal; its Cholesky factor R (upper) maps back to
  // the lower-triangular J R J.
  const ComplexMatrix flipped = h.reverse();
  Eigen::LLT<ComplexMatrix> llt(flipped);
  if (llt.info() != Eigen::Success) {
    throw NotInPrincipalOrbit("factor_orbit_point: -i*m is not positive definite");
  }
  const ComplexMatrix r = llt.matrixU();
  const ComplexMatrix s = r.reverse();
  for (int i = 0; i < s.rows(); ++i) {
    if (!(s(i, i).real() > 0.0)) {
      throw NotInPrincipalOrbit("factor_orbit_point: Cholesky pivot is not positive");
    }
  }
  return TriangularS(s, 1e-10);
}

Eigen::MatrixXd action_matrix(const TriangularS& s) {
  const SkewBasis basis(s.dim());
  const int d = basis.size();
  Eigen::MatrixXd a(d, d);
  for (int j = 0; j < d; ++j) a.col(j) = basis.coordinates(conj_action(s, basis.elements()[j]));
  return a;
}

double action_jacobian(const TriangularS& s) {
  return std::abs(action_matrix(s).partialPivLu().determinant());
}

}  // namespace iwasawa
