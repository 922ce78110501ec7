#include "iwasawa/random.hpp"

#include <cmath>

namespace iwasawa {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t index)
    : engine_(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL))) {}

double Stream::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

double Stream::gaussian() { return normal_(engine_); }

Complex Stream::complex_gaussian() {
  const double re = gaussian();
  return {re, gaussian()};
}

TriangularS random_triangular(int p, Stream& rng) {
  ComplexMatrix m = ComplexMatrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    m(i, i) = std::exp(rng.uniform(-1.0, 1.0));
    for (int j = 0; j < i; ++j) m(i, j) = rng.complex_gaussian();
  }
  return TriangularS(m);
}

SkewHermitian random_skew(int p, Stream& rng) {
  ComplexMatrix h = ComplexMatrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    h(i, i) = rng.gaussian();
    for (int j = i + 1; j < p; ++j) {
      h(i, j) = rng.complex_gaussian();
      h(j, i) = std::conj(h(i, j));
    }
  }
  return SkewHermitian(Complex(0.0, 1.0) * h);
}

GroupElementP random_element(int p, Stream& rng) {
  TriangularS s = random_triangular(p, rng);
  return GroupElementP(std::move(s), random_skew(p, rng));
}

}  // namespace iwasawa
