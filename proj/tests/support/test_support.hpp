#pragma once

#include <cstdint>
#include <vector>

#include "iwasawa/groups.hpp"
#include "iwasawa/random.hpp"

namespace iwasawa::testing {

inline Complex cx(double re, double im = 0.0) { return {re, im}; }

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto p = static_cast<int>(rows.size());
  ComplexMatrix m(p, p);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline TriangularS scalar_s(double v) { return TriangularS(mat({{cx(v)}})); }
inline SkewHermitian scalar_n(double imag) { return SkewHermitian(mat({{cx(0.0, imag)}})); }

inline TriangularS diag_s(std::initializer_list<double> d) {
  const auto p = static_cast<int>(d.size());
  ComplexMatrix m = ComplexMatrix::Zero(p, p);
  int i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return TriangularS(m);
}

}  // namespace iwasawa::testing
