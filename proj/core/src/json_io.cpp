#include "iwasawa/json_io.hpp"

#include <string>

#include "iwasawa/errors.hpp"

namespace iwasawa {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidElement("matrix: expected a non-empty array of rows");
  const auto p = static_cast<int>(j.size());
  if (p > kMaxDim) {
    throw InvalidElement("matrix: order " + std::to_string(p) + " exceeds " +
                         std::to_string(kMaxDim));
  }
  ComplexMatrix m(p, p);
  for (int i = 0; i < p; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != p) {
      throw InvalidElement("matrix: row " + std::to_string(i) + " does not have " +
                           std::to_string(p) + " entries");
    }
    for (int k = 0; k < p; ++k) {
      const json& z = row[static_cast<std::size_t>(k)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw InvalidElement("matrix: entry (" + std::to_string(i) + "," + std::to_string(k) +
                             ") is not a [re, im] pair");
      }
      m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

void to_json(json& j, const TriangularS& s) { j = matrix_to_json(s.matrix()); }
void to_json(json& j, const SkewHermitian& m) { j = matrix_to_json(m.matrix()); }
void to_json(json& j, const GroupElementP& g) { j = json{{"s", g.s}, {"n", g.n}}; }
void to_json(json& j, const SignVector& eps) { j = eps.signs(); }

void to_json(json& j, const Estimate& e) {
  j = json{{"value", e.value}, {"std_error", e.std_error}, {"samples_used", e.samples_used}};
}

void to_json(json& j, const DivergenceFit& fit) {
  json grid = json::array();
  for (const auto& [delta, value] : fit.grid) grid.push_back(json::array({delta, value}));
  j = json{{"slope", fit.slope},
           {"intercept", fit.intercept},
           {"r_squared", fit.r_squared},
           {"grid", std::move(grid)}};
}

void to_json(json& j, const UnitarityReport& u) {
  j = json{{"is_unitary", u.is_unitary},
           {"bounded", u.bounded},
           {"c_min", u.c_min},
           {"c_max", u.c_max},
           {"c_std", u.c_std}};
}

void to_json(json& j, const CocycleReport& r) {
  j = json{{"kind", r.kind},
           {"group_element", r.group_element},
           {"norm_closed", r.norm_closed},
           {"norm_direct", r.norm_direct},
           {"identity_residual", r.identity_residual},
           {"agree", r.agree},
           {"precise", r.precise},
           {"verdict", to_string(r.verdict)}};
}

void to_json(json& j, const OperatorReport& r) {
  j = json{{"s0", r.s0}, {"unitarity", r.unitarity}, {"operator_norm", r.operator_norm}};
}

void to_json(json& j, const TheoremReport& r) {
  j = json{{"p", r.p},
           {"sphere_mass", r.sphere_mass},
           {"f0_fit", r.f0_fit},
           {"f0_divergent", r.f0_divergent},
           {"elements", r.elements},
           {"operators", r.operators},
           {"special", r.special},
           {"bounded", r.bounded},
           {"unitary", r.unitary},
           {"inconclusive", r.inconclusive},
           {"holds", r.holds()},
           {"summary", r.summary}};
}

TriangularS triangular_from_json(const json& j) { return TriangularS(matrix_from_json(j)); }

SkewHermitian skew_from_json(const json& j) { return SkewHermitian(matrix_from_json(j)); }

GroupElementP element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("s") || !j.contains("n")) {
    throw InvalidElement("group element: expected {\"s\": ..., \"n\": ...}");
  }
  return GroupElementP(triangular_from_json(j.at("s")), skew_from_json(j.at("n")));
}

}  // namespace iwasawa
