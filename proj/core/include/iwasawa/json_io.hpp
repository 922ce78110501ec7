#pragma once

#include <nlohmann/json.hpp>

#include "iwasawa/cocycle.hpp"
#include "iwasawa/groups.hpp"
#include "iwasawa/quadrature.hpp"
#include "iwasawa/representation.hpp"

// JSON wire format shared by every report and config:
//   complex scalar  [re, im]
//   matrix          row-major nested arrays of complex scalars
//   group element   {"s": matrix, "n": matrix}
// Doubles are written with round-trip precision.

namespace iwasawa {

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Throws InvalidElement on anything that is not a square, non-empty matrix of
/// [re, im] pairs no larger than kMaxDim.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const TriangularS& s);
void to_json(nlohmann::json& j, const SkewHermitian& m);
void to_json(nlohmann::json& j, const GroupElementP& g);
void to_json(nlohmann::json& j, const SignVector& eps);
void to_json(nlohmann::json& j, const Estimate& e);
void to_json(nlohmann::json& j, const DivergenceFit& fit);
void to_json(nlohmann::json& j, const UnitarityReport& u);
void to_json(nlohmann::json& j, const CocycleReport& r);
void to_json(nlohmann::json& j, const OperatorReport& r);
void to_json(nlohmann::json& j, const TheoremReport& r);

TriangularS triangular_from_json(const nlohmann::json& j);
SkewHermitian skew_from_json(const nlohmann::json& j);
GroupElementP element_from_json(const nlohmann::json& j);

}  // namespace iwasawa
