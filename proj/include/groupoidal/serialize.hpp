#pragma once

#include <string>

#include <json.hpp>

#include "groupoidal/matalg.hpp"

namespace groupoidal {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs; doubles are written with round-trip
// precision so parsing an emitted document restores every bit.
Json to_json(const MultiMatrixAlgebra& alg);
Json to_json(const Element& x);  // blocks only, parent is implied
Json to_json(const LinearMap& m);
Json to_json(const TensorElement& t);  // coefficient matrix only
Json matrix_to_json(const CMat& m);

// `where` is the JSON path used in error messages.
AlgPtr algebra_from_json(const Json& j, const std::string& where = "$");
Element element_from_json(const Json& j, const AlgPtr& parent,
                          const std::string& where = "$");
LinearMap linear_map_from_json(const Json& j, const std::string& where = "$");
TensorElement tensor_from_json(const Json& j, const AlgPtr& left,
                               const AlgPtr& right,
                               const std::string& where = "$");
CMat matrix_from_json(const Json& j, const std::string& where = "$");

}  // namespace groupoidal
