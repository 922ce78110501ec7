#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace iwasawa {

/// Largest supported matrix order. Matrices live on the stack up to this size.
inline constexpr int kMaxDim = 8;

/// Default absolute tolerance (scaled by max(1, |m|)) for structural invariant checks.
inline constexpr double kDefaultStructureTol = 1e-12;

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Lower-triangular p x p complex matrix with a strictly positive real diagonal.
///
/// Construction validates the shape against `tol` and then projects the input
/// onto the exact structure (upper part zeroed, imaginary diagonal dropped), so
/// every held value satisfies the invariants exactly.
class TriangularS {
 public:
  explicit TriangularS(const ComplexMatrix& mat, double tol = kDefaultStructureTol);

  static TriangularS identity(int p);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& matrix() const { return mat_; }

  TriangularS inverse() const;

 private:
  struct Trusted {};
  TriangularS(Trusted, ComplexMatrix mat) : mat_(std::move(mat)) {}

  friend TriangularS s_multiply(const TriangularS&, const TriangularS&);

  ComplexMatrix mat_;
};

/// Skew-Hermitian p x p matrix, m^H = -m. Elements of N and of the character group N*.
class SkewHermitian {
 public:
  /// Validates |m + m^H| <= tol * max(1, |m|), then stores the projection (m - m^H) / 2.
  explicit SkewHermitian(const ComplexMatrix& mat, double tol = kDefaultStructureTol);

  static SkewHermitian zero(int p);

  /// Wraps `mat` without validation or projection. Exists so that diagnostics can
  /// feed deliberately corrupted data through the checked operations.
  static SkewHermitian unchecked(const ComplexMatrix& mat);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& matrix() const { return mat_; }

  SkewHermitian operator+(const SkewHermitian& other) const;
  SkewHermitian operator-(const SkewHermitian& other) const;
  SkewHermitian operator-() const;
  SkewHermitian operator*(double scale) const;

 private:
  struct Trusted {};
  SkewHermitian(Trusted, ComplexMatrix mat) : mat_(std::move(mat)) {}

  friend SkewHermitian project_skew(const ComplexMatrix&);

  ComplexMatrix mat_;
};

inline SkewHermitian operator*(double scale, const SkewHermitian& m) { return m * scale; }

/// Element (s, n) of the Iwasawa group P = S x| N.
struct GroupElementP {
  GroupElementP(TriangularS s_, SkewHermitian n_);

  static GroupElementP identity(int p);

  int dim() const { return s.dim(); }

  TriangularS s;
  SkewHermitian n;
};

/// Skew-Hermitian part (m - m^H) / 2 of an arbitrary square matrix.
SkewHermitian project_skew(const ComplexMatrix& m);

TriangularS s_multiply(const TriangularS& s1, const TriangularS& s2);

/// (s1, n1) . (s2, n2) = (s1 s2, s2^-1 n1 s2^-H + n2).
GroupElementP p_product(const GroupElementP& g1, const GroupElementP& g2);

/// (s, n)^-1 = (s^-1, -s n s^H).
GroupElementP p_inverse(const GroupElementP& g);

/// Product of the diagonal entries of s.
double theta(const TriangularS& s);

/// Real pairing <n, m> = Tr(nm). Throws ImaginaryResidue when the trace has an
/// imaginary part above 1e-13 * (1 + |n||m|).
double pairing(const SkewHermitian& n, const SkewHermitian& m);

/// |m| = sqrt(Tr(m m^H)).
double frob_norm(const SkewHermitian& m);

/// The S-action m -> s^H m s on N*.
SkewHermitian conj_action(const TriangularS& s, const SkewHermitian& m);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace iwasawa
