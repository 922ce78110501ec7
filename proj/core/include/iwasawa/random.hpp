#pragma once

#include <cstdint>
#include <random>

#include "iwasawa/groups.hpp"

namespace iwasawa {

/// SplitMix64: output k is mix64(key + k * golden_gamma). Cheap to key, so one
/// generator per Monte Carlo sample is affordable.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

/// Counter-based random substream: the draws depend only on (seed, index), so
/// sample k of a Monte Carlo run is the same no matter which thread produces it
/// or how many samples are requested in total.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index);

  double uniform(double lo = 0.0, double hi = 1.0);
  double gaussian();
  /// Real and imaginary parts independent standard normals.
  Complex complex_gaussian();

 private:
  SplitMix64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Diagonal exp(U[-1, 1]), strictly lower entries complex Gaussian.
TriangularS random_triangular(int p, Stream& rng);

/// i * H with H a Hermitian Gaussian matrix.
SkewHermitian random_skew(int p, Stream& rng);

GroupElementP random_element(int p, Stream& rng);

}  // namespace iwasawa
