#include <cmath>

#include "groupoidal/serialize.hpp"

namespace groupoidal {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw SchemaError(where + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "non-finite number");
  return v;
}

cplx complex_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

}  // namespace

Json matrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  const auto nr = static_cast<int>(j.size());
  const int nc = nr ? static_cast<int>(j[0].is_array() ? j[0].size() : 0) : 0;
  CMat m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    const std::string wr = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != nc)
      fail(wr, "ragged matrix row");
    for (int c = 0; c < nc; ++c)
      m(r, c) = complex_from(j[r][c], wr + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json to_json(const MultiMatrixAlgebra& alg) {
  return Json{{"block_dims", alg.block_dims()},
              {"trace_weights", alg.trace_weights()}};
}

AlgPtr algebra_from_json(const Json& j, const std::string& where) {
  const Json& d = field(j, "block_dims", where);
  const Json& w = field(j, "trace_weights", where);
  if (!d.is_array() || !w.is_array()) fail(where, "block_dims/trace_weights must be arrays");
  std::vector<int> dims;
  std::vector<double> weights;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d[i].is_number_integer())
      fail(where + ".block_dims[" + std::to_string(i) + "]", "expected an integer");
    dims.push_back(d[i].get<int>());
  }
  for (std::size_t i = 0; i < w.size(); ++i)
    weights.push_back(number(w[i], where + ".trace_weights[" + std::to_string(i) + "]"));
  try {
    return MultiMatrixAlgebra::make(dims, weights);
  } catch (const AlgebraError& e) {
    fail(where, e.what());
  }
}

Json to_json(const Element& x) {
  Json blocks = Json::array();
  for (const auto& b : x.blocks()) blocks.push_back(matrix_to_json(b));
  return Json{{"blocks", blocks}};
}

Element element_from_json(const Json& j, const AlgPtr& parent,
                          const std::string& where) {
  const Json& bl = field(j, "blocks", where);
  if (!bl.is_array() || static_cast<int>(bl.size()) != parent->num_blocks())
    fail(where + ".blocks", "block count does not match the algebra");
  std::vector<CMat> blocks;
  for (int b = 0; b < parent->num_blocks(); ++b) {
    const std::string wb = where + ".blocks[" + std::to_string(b) + "]";
    CMat m = matrix_from_json(bl[b], wb);
    if (m.rows() != parent->block_dim(b) || m.cols() != parent->block_dim(b))
      fail(wb, "block shape does not match the algebra");
    blocks.push_back(std::move(m));
  }
  return Element::from_blocks(parent, std::move(blocks));
}

Json to_json(const LinearMap& m) {
  return Json{{"rows", m.codomain_dim()},
              {"cols", m.domain_dim()},
              {"matrix", matrix_to_json(m.matrix)}};
}

LinearMap linear_map_from_json(const Json& j, const std::string& where) {
  const Json& r = field(j, "rows", where);
  const Json& c = field(j, "cols", where);
  if (!r.is_number_integer() || !c.is_number_integer())
    fail(where, "rows/cols must be integers");
  CMat m = matrix_from_json(field(j, "matrix", where), where + ".matrix");
  const int rows = r.get<int>(), cols = c.get<int>();
  // An empty row list still has to agree with the declared shape.
  if (m.rows() != rows || (rows > 0 && m.cols() != cols))
    fail(where + ".matrix", "shape does not match rows/cols");
  if (rows == 0) m.resize(0, cols);
  return LinearMap(std::move(m));
}

Json to_json(const TensorElement& t) {
  return Json{{"coeff", matrix_to_json(t.coeff)}};
}

TensorElement tensor_from_json(const Json& j, const AlgPtr& left,
                               const AlgPtr& right, const std::string& where) {
  CMat c = matrix_from_json(field(j, "coeff", where), where + ".coeff");
  if (c.rows() != left->dim() || c.cols() != right->dim())
    fail(where + ".coeff", "shape does not match the factor algebras");
  return TensorElement(left, right, std::move(c));
}

}  // namespace groupoidal
