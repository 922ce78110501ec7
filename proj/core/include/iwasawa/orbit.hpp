#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "iwasawa/groups.hpp"
#include "iwasawa/random.hpp"

namespace iwasawa {

/// Unit vector of N* in the Frobenius norm.
class SphereDirection {
 public:
  /// Throws InvalidElement unless |omega| = 1 within 1e-12.
  explicit SphereDirection(SkewHermitian omega);

  int dim() const { return omega_.dim(); }
  const SkewHermitian& omega() const { return omega_; }

 private:
  SkewHermitian omega_;
};

/// Label epsilon in {+1, -1}^p of the maximal S-orbit {i s^H diag(epsilon) s}.
class SignVector {
 public:
  explicit SignVector(std::vector<int> signs);

  static SignVector all_positive(int p);
  /// Bit k of `mask` set means entry k is -1.
  static SignVector from_mask(int p, unsigned mask);

  int dim() const { return static_cast<int>(signs_.size()); }
  const std::vector<int>& signs() const { return signs_; }
  bool principal() const;

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<int> signs_;
};

/// Real orthonormal basis of the p^2-dimensional space of skew-Hermitian matrices
/// under <x, y> = Re Tr(x y^H): {i E_kk} then, for each j < k,
/// (E_jk - E_kj)/sqrt(2) and i (E_jk + E_kj)/sqrt(2).
class SkewBasis {
 public:
  explicit SkewBasis(int p);

  int dim() const { return p_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<SkewHermitian>& elements() const { return elements_; }

  Eigen::VectorXd coordinates(const SkewHermitian& m) const;
  SkewHermitian reconstruct(const Eigen::VectorXd& coords) const;
  Eigen::MatrixXd gram() const;

 private:
  int p_;
  std::vector<SkewHermitian> elements_;
};

inline SkewBasis skew_basis(int p) { return SkewBasis(p); }

/// Real inner product Re Tr(x y^H).
double real_inner(const SkewHermitian& x, const SkewHermitian& y);

struct Polar {
  double r;
  SphereDirection omega;
};

/// m = r * omega with r = |m|. Throws ZeroVector for m = 0.
Polar polar_decompose(const SkewHermitian& m);

/// Direction uniformly distributed on the unit sphere of N*, drawn as
/// normalized standard Gaussian coordinates in the skew basis.
SphereDirection sphere_sample(int p, Stream& rng);

/// Total surface measure 2 pi^(d/2) / Gamma(d/2) of the unit sphere in R^d, d = p^2.
double sphere_mass(int p);

/// i * s^H * diag(eps) * s.
SkewHermitian orbit_point(const TriangularS& s, const SignVector& eps);

inline constexpr double kDefaultDegeneracyTol = 1e-10;

/// Orbit label of m, read off the trailing principal minors of H = -i m:
/// eps_{p-k+1} = sign(D_k / D_{k-1}). Returns nullopt when a minor is below
/// tol * |H|^k (m lies on a lower-dimensional orbit, or too close to one).
std::optional<SignVector> classify_orbit(const SkewHermitian& m,
                                         double tol = kDefaultDegeneracyTol);

/// The unique s in S with i s^H s = m. Throws NotInPrincipalOrbit when -i m is
/// not positive definite.
TriangularS factor_orbit_point(const SkewHermitian& m);

/// Matrix of the real-linear map m -> s^H m s in skew-basis coordinates.
Eigen::MatrixXd action_matrix(const TriangularS& s);

/// |det| of action_matrix(s); equals theta(s)^(2p).
double action_jacobian(const TriangularS& s);

}  // namespace iwasawa
