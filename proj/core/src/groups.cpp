#include "iwasawa/groups.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "iwasawa/errors.hpp"

namespace iwasawa {
namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidElement(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

}  // namespace

TriangularS::TriangularS(const ComplexMatrix& mat, double tol) {
  require_square(mat, "TriangularS");
  const int p = static_cast<int>(mat.rows());
  const double scale = std::max(1.0, mat.norm());
  mat_ = ComplexMatrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const Complex v = mat(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InvalidElement("TriangularS: non-finite entry");
      }
      if (j > i) {
        if (std::abs(v) > tol * scale) {
          throw InvalidElement("TriangularS: nonzero entry above the diagonal at (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
        }
      } else if (j == i) {
        if (std::abs(v.imag()) > tol * scale || !(v.real() > 0.0)) {
          throw InvalidElement("TriangularS: diagonal entry " + std::to_string(i) +
                               " is not real and positive");
        }
        mat_(i, i) = Complex(v.real(), 0.0);
      } else {
        mat_(i, j) = v;
      }
    }
  }
}

TriangularS TriangularS::identity(int p) {
  if (p < 1) throw InvalidElement("TriangularS::identity: p must be >= 1");
  return TriangularS(Trusted{}, ComplexMatrix::Identity(p, p));
}

TriangularS TriangularS::inverse() const {
  const int p = dim();
  ComplexMatrix inv = mat_.triangularView<Eigen::Lower>().solve(ComplexMatrix::Identity(p, p));
  // Back substitution keeps the exact structure up to the signs of zeros; pin it.
  for (int i = 0; i < p; ++i) {
    inv(i, i) = Complex(1.0 / mat_(i, i).real(), 0.0);
    for (int j = i + 1; j < p; ++j) inv(i, j) = Complex(0.0, 0.0);
  }
  return TriangularS(Trusted{}, std::move(inv));
}

SkewHermitian::SkewHermitian(const ComplexMatrix& mat, double tol) {
  require_square(mat, "SkewHermitian");
  if (!mat.allFinite()) throw InvalidElement("SkewHermitian: non-finite entry");
  const double residual = (mat + mat.adjoint()).norm();
  if (residual > tol * std::max(1.0, mat.norm())) {
    throw InvalidElement("SkewHermitian: |m + m^H| = " + std::to_string(residual) +
                         " exceeds tolerance");
  }
  mat_ = (mat - mat.adjoint()) * 0.5;
}

SkewHermitian SkewHermitian::zero(int p) {
  if (p < 1) throw InvalidElement("SkewHermitian::zero: p must be >= 1");
  return SkewHermitian(Trusted{}, ComplexMatrix::Zero(p, p));
}

SkewHermitian SkewHermitian::unchecked(const ComplexMatrix& mat) {
  require_square(mat, "SkewHermitian::unchecked");
  return SkewHermitian(Trusted{}, mat);
}

SkewHermitian SkewHermitian::operator+(const SkewHermitian& other) const {
  require_same_dim(dim(), other.dim(), "SkewHermitian::operator+");
  return SkewHermitian(Trusted{}, mat_ + other.mat_);
}

SkewHermitian SkewHermitian::operator-(const SkewHermitian& other) const {
  require_same_dim(dim(), other.dim(), "SkewHermitian::operator-");
  return SkewHermitian(Trusted{}, mat_ - other.mat_);
}

SkewHermitian SkewHermitian::operator-() const { return SkewHermitian(Trusted{}, -mat_); }

SkewHermitian SkewHermitian::operator*(double scale) const {
  return SkewHermitian(Trusted{}, mat_ * scale);
}

SkewHermitian project_skew(const ComplexMatrix& m) {
  require_square(m, "project_skew");
  return SkewHermitian(SkewHermitian::Trusted{}, (m - m.adjoint()) * 0.5);
}

GroupElementP::GroupElementP(TriangularS s_, SkewHermitian n_) : s(std::move(s_)), n(std::move(n_)) {
  require_same_dim(s.dim(), n.dim(), "GroupElementP");
}

GroupElementP GroupElementP::identity(int p) {
  return GroupElementP(TriangularS::identity(p), SkewHermitian::zero(p));
}

TriangularS s_multiply(const TriangularS& s1, const TriangularS& s2) {
  require_same_dim(s1.dim(), s2.dim(), "s_multiply");
  // Lower-triangular times lower-triangular stays lower-triangular, and the
  // diagonal is the (real) product of the diagonals, so no projection is needed.
  ComplexMatrix prod = (s1.matrix() * s2.matrix()).eval();
  for (int i = 0; i < prod.rows(); ++i) {
    prod(i, i) = Complex(s1.matrix()(i, i).real() * s2.matrix()(i, i).real(), 0.0);
  }
  return TriangularS(TriangularS::Trusted{}, std::move(prod));
}

GroupElementP p_product(const GroupElementP& g1, const GroupElementP& g2) {
  require_same_dim(g1.dim(), g2.dim(), "p_product");
  const ComplexMatrix s2_inv = g2.s.inverse().matrix();
  const ComplexMatrix moved = s2_inv * g1.n.matrix() * s2_inv.adjoint();
  return GroupElementP(s_multiply(g1.s, g2.s), project_skew(moved) + g2.n);
}

GroupElementP p_inverse(const GroupElementP& g) {
  const ComplexMatrix& s = g.s.matrix();
  const ComplexMatrix moved = s * g.n.matrix() * s.adjoint();
  return GroupElementP(g.s.inverse(), -project_skew(moved));
}

double theta(const TriangularS& s) {
  double prod = 1.0;
  for (int i = 0; i < s.dim(); ++i) prod *= s.matrix()(i, i).real();
  return prod;
}

double pairing(const SkewHermitian& n, const SkewHermitian& m) {
  require_same_dim(n.dim(), m.dim(), "pairing");
  const Complex tr = (n.matrix() * m.matrix()).trace();
  const double tol = 1e-13 * (1.0 + n.matrix().norm() * m.matrix().norm());
  if (!(std::abs(tr.imag()) <= tol)) {
    throw ImaginaryResidue("pairing: Tr(nm) has imaginary part " + std::to_string(tr.imag()) +
                           "; inputs are not skew-Hermitian");
  }
  return tr.real();
}

double frob_norm(const SkewHermitian& m) { return m.matrix().norm(); }

SkewHermitian conj_action(const TriangularS& s, const SkewHermitian& m) {
  require_same_dim(s.dim(), m.dim(), "conj_action");
  const ComplexMatrix moved = s.matrix().adjoint() * m.matrix() * s.matrix();
  return project_skew(moved);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(static_cast<int>(a.rows()), static_cast<int>(b.rows()), "max_abs_diff");
  require_same_dim(static_cast<int>(a.cols()), static_cast<int>(b.cols()), "max_abs_diff");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace iwasawa
