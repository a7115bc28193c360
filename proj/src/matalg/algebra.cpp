#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "groupoidal/matalg.hpp"

namespace groupoidal {

double default_tolerance() {
  if (const char* env = std::getenv("GROUPOIDAL_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && std::isfinite(v) && v > 0.0) return v;
  }
  return kDefaultTolerance;
}

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> block_dims,
                                       std::vector<double> trace_weights)
    : dims_(std::move(block_dims)), weights_(std::move(trace_weights)) {
  if (dims_.empty()) throw AlgebraError("algebra needs at least one block");
  if (weights_.size() != dims_.size())
    throw AlgebraError("trace weight count does not match block count");
  int off = 0;
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    if (dims_[b] <= 0) throw AlgebraError("block dimensions must be positive");
    if (!(weights_[b] > 0.0) || !std::isfinite(weights_[b]))
      throw AlgebraError("trace weights must be positive and finite");
    offsets_.push_back(off);
    for (int r = 0; r < dims_[b]; ++r)
      for (int c = 0; c < dims_[b]; ++c)
        units_.push_back({static_cast<int>(b), r, c});
    off += dims_[b] * dims_[b];
  }
  dim_ = off;
  coord_weights_.resize(dim_);
  for (int k = 0; k < dim_; ++k) coord_weights_(k) = weights_[units_[k].block];
}

std::shared_ptr<const MultiMatrixAlgebra> MultiMatrixAlgebra::make(
    std::vector<int> block_dims, std::vector<double> trace_weights) {
  return std::make_shared<const MultiMatrixAlgebra>(std::move(block_dims),
                                                    std::move(trace_weights));
}

std::shared_ptr<const MultiMatrixAlgebra> MultiMatrixAlgebra::uniform(
    std::vector<int> block_dims) {
  const int n = std::accumulate(block_dims.begin(), block_dims.end(), 0);
  std::vector<double> w(block_dims.size(), 1.0 / n);
  return make(std::move(block_dims), std::move(w));
}

double MultiMatrixAlgebra::total_trace() const {
  double t = 0.0;
  for (std::size_t b = 0; b < dims_.size(); ++b) t += dims_[b] * weights_[b];
  return t;
}

bool MultiMatrixAlgebra::same_shape(const MultiMatrixAlgebra& o) const {
  return dims_ == o.dims_;
}

bool MultiMatrixAlgebra::operator==(const MultiMatrixAlgebra& o) const {
  if (dims_ != o.dims_) return false;
  for (std::size_t b = 0; b < weights_.size(); ++b)
    if (std::abs(weights_[b] - o.weights_[b]) >
        1e-12 * std::max(1.0, std::abs(weights_[b])))
      return false;
  return true;
}

namespace {

void check_parent(const Element& x, const Element& y) {
  if (!x.parent() || !y.parent())
    throw AlgebraError("operation on an element without parent algebra");
  if (x.parent() != y.parent() && !(*x.parent() == *y.parent()))
    throw AlgebraError("parent algebra mismatch");
}

}  // namespace

Element::Element(AlgPtr parent) : parent_(std::move(parent)) {
  if (!parent_) throw AlgebraError("element needs a parent algebra");
  blocks_.reserve(parent_->num_blocks());
  for (int d : parent_->block_dims()) blocks_.push_back(CMat::Zero(d, d));
}

Element Element::identity(AlgPtr parent) {
  Element e(std::move(parent));
  for (auto& b : e.blocks_) b.setIdentity();
  return e;
}

Element Element::unit(AlgPtr parent, int k) {
  Element e(std::move(parent));
  if (k < 0 || k >= e.parent_->dim()) throw AlgebraError("unit index out of range");
  const auto u = e.parent_->unit(k);
  e.blocks_[u.block](u.row, u.col) = 1.0;
  return e;
}

Element Element::from_vector(AlgPtr parent, const CVec& coords) {
  Element e(std::move(parent));
  if (coords.size() != e.parent_->dim())
    throw AlgebraError("coordinate vector has the wrong length");
  for (int b = 0; b < e.parent_->num_blocks(); ++b) {
    const int d = e.parent_->block_dim(b);
    const int off = e.parent_->offset(b);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) e.blocks_[b](r, c) = coords(off + r * d + c);
  }
  return e;
}

Element Element::from_blocks(AlgPtr parent, std::vector<CMat> blocks) {
  Element e(std::move(parent));
  if (blocks.size() != e.blocks_.size())
    throw AlgebraError("block count mismatch");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].rows() != e.blocks_[b].rows() ||
        blocks[b].cols() != e.blocks_[b].cols())
      throw AlgebraError("block shape mismatch");
  }
  e.blocks_ = std::move(blocks);
  return e;
}

CVec Element::to_vector() const {
  CVec v(parent_->dim());
  for (int b = 0; b < parent_->num_blocks(); ++b) {
    const int d = parent_->block_dim(b);
    const int off = parent_->offset(b);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) v(off + r * d + c) = blocks_[b](r, c);
  }
  return v;
}

cplx Element::trace() const {
  cplx t = 0.0;
  for (int b = 0; b < parent_->num_blocks(); ++b)
    t += parent_->weight(b) * blocks_[b].trace();
  return t;
}

Element Element::adjoint() const {
  Element e(parent_);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    e.blocks_[b] = blocks_[b].adjoint();
  return e;
}

double Element::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_)
    if (b.size()) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

double Element::trace_norm() const {
  double t = 0.0;
  for (int b = 0; b < parent_->num_blocks(); ++b)
    t += parent_->weight(b) * blocks_[b].squaredNorm();
  return std::sqrt(t);
}

Element& Element::operator+=(const Element& o) {
  check_parent(*this, o);
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] += o.blocks_[b];
  return *this;
}

Element& Element::operator-=(const Element& o) {
  check_parent(*this, o);
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] -= o.blocks_[b];
  return *this;
}

Element& Element::operator*=(cplx s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

Element operator+(const Element& x, const Element& y) {
  Element r = x;
  r += y;
  return r;
}

Element operator-(const Element& x, const Element& y) {
  Element r = x;
  r -= y;
  return r;
}

Element operator-(const Element& x) {
  Element r = x;
  r *= -1.0;
  return r;
}

Element operator*(const Element& x, const Element& y) {
  check_parent(x, y);
  Element r(x.parent());
  for (int b = 0; b < x.parent()->num_blocks(); ++b)
    r.block(b).noalias() = x.block(b) * y.block(b);
  return r;
}

Element operator*(cplx s, const Element& x) {
  Element r = x;
  r *= s;
  return r;
}

Element operator*(const Element& x, cplx s) { return s * x; }
Element operator*(double s, const Element& x) { return cplx(s) * x; }

Element arith(const Element& x, const Element& y, ArithOp op, cplx s) {
  switch (op) {
    case ArithOp::Add:
      return x + y;
    case ArithOp::Mul:
      return x * y;
    case ArithOp::Adjoint:
      return x.adjoint();
    case ArithOp::Scale:
      return s * x;
  }
  throw AlgebraError("unknown arithmetic operation");
}

std::vector<Element> mma_basis(const AlgPtr& alg) {
  std::vector<Element> out;
  out.reserve(alg->dim());
  for (int k = 0; k < alg->dim(); ++k) out.push_back(Element::unit(alg, k));
  return out;
}

int unit_product(const MultiMatrixAlgebra& alg, int a, int b) {
  const auto ua = alg.unit(a), ub = alg.unit(b);
  if (ua.block != ub.block || ua.col != ub.row) return -1;
  return alg.basis_index(ua.block, ua.row, ub.col);
}

CMat left_mult_matrix(const MultiMatrixAlgebra& alg, const CVec& x) {
  const int n = alg.dim();
  CMat m = CMat::Zero(n, n);
  for (int bl = 0; bl < alg.num_blocks(); ++bl) {
    const int d = alg.block_dim(bl);
    // (x u_{kc})_{rc} = x_{rk}
    for (int r = 0; r < d; ++r)
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < d; ++c)
          m(alg.basis_index(bl, r, c), alg.basis_index(bl, k, c)) +=
              x(alg.basis_index(bl, r, k));
  }
  return m;
}

CMat right_mult_matrix(const MultiMatrixAlgebra& alg, const CVec& x) {
  const int n = alg.dim();
  CMat m = CMat::Zero(n, n);
  for (int bl = 0; bl < alg.num_blocks(); ++bl) {
    const int d = alg.block_dim(bl);
    // (u_{rk} x)_{rc} = x_{kc}
    for (int r = 0; r < d; ++r)
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < d; ++c)
          m(alg.basis_index(bl, r, c), alg.basis_index(bl, r, k)) +=
              x(alg.basis_index(bl, k, c));
  }
  return m;
}

cplx trace(const Element& x) { return x.trace(); }

cplx inner(const Element& x, const Element& y) {
  check_parent(x, y);
  cplx t = 0.0;
  for (int b = 0; b < x.parent()->num_blocks(); ++b)
    t += x.parent()->weight(b) *
         (x.block(b).adjoint() * y.block(b)).trace();
  return t;
}

double distance(const Element& x, const Element& y) { return (x - y).max_abs(); }

Element LinearMap::apply(const Element& x, const AlgPtr& codomain) const {
  if (x.parent()->dim() != domain_dim())
    throw AlgebraError("linear map domain mismatch");
  return Element::from_vector(codomain, matrix * x.to_vector());
}

bool is_self_adjoint(const Element& x, double tol) {
  return (x - x.adjoint()).max_abs() <= tol;
}

Element positive_sqrt(const Element& x, double tol) {
  const double scale = std::max(1.0, x.max_abs());
  if (!is_self_adjoint(x, tol * scale))
    throw AlgebraError("positive_sqrt: element is not self-adjoint");
  for (int b = 0; b < x.parent()->num_blocks(); ++b) {
    Eigen::SelfAdjointEigenSolver<CMat> es(
        0.5 * (x.block(b) + x.block(b).adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().size() && es.eigenvalues().minCoeff() < -tol * scale)
      throw AlgebraError("positive_sqrt: element is not positive");
  }
  return hermitian_apply(x, [](double v) { return cplx(std::sqrt(std::max(v, 0.0))); });
}

Element invert(const Element& x, double tol) {
  Element r(x.parent());
  for (int b = 0; b < x.parent()->num_blocks(); ++b) {
    Eigen::JacobiSVD<CMat> svd(x.block(b));
    const RVec& sv = svd.singularValues();
    if (sv.size() && sv.minCoeff() <= tol)
      throw AlgebraError("invert: element is singular");
    r.block(b) = x.block(b).partialPivLu().inverse();
  }
  return r;
}

CMat nullspace(const CMat& m, double rel_tol) {
  const int n = static_cast<int>(m.cols());
  if (n == 0) return CMat(0, 0);
  if (m.rows() == 0) return CMat::Identity(n, n);
  // SVD of m itself; forming m^H m would square the roundoff floor.
  Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double thr = rel_tol * std::max(1.0, smax);
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (i >= sv.size() || sv(i) < thr) keep.push_back(i);
  CMat out(n, static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    out.col(j) = svd.matrixV().col(keep[j]);
  return out;
}

void RowStack::add(const CMat& rows) {
  if (rows.cols() != cols_) throw AlgebraError("row stack width mismatch");
  CMat stacked(r_.rows() + rows.rows(), cols_);
  stacked << r_, rows;
  if (stacked.rows() <= cols_) {
    r_ = std::move(stacked);
    return;
  }
  Eigen::HouseholderQR<CMat> qr(stacked);
  r_ = qr.matrixQR().topRows(cols_).triangularView<Eigen::Upper>();
}

std::vector<Element> orthonormalize(const std::vector<Element>& elems,
                                    double rel_tol) {
  std::vector<Element> basis;
  if (elems.empty()) return basis;
  const AlgPtr alg = elems.front().parent();
  const RVec sw = alg->coordinate_weights().cwiseSqrt();
  std::vector<CVec> q;
  // Roundoff-sized inputs next to O(1) ones are noise, not directions.
  double largest = 0.0;
  for (const auto& e : elems)
    largest = std::max(largest, sw.cwiseProduct(e.to_vector()).norm());
  for (const auto& e : elems) {
    CVec v = sw.cwiseProduct(e.to_vector());
    const double n0 = v.norm();
    if (n0 <= 1e-13 * largest) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) v -= u * u.dot(v);
    const double n1 = v.norm();
    if (n1 <= rel_tol * n0 || n1 <= 1e-12 * largest) continue;
    q.push_back(v / n1);
  }
  for (const auto& v : q)
    basis.push_back(Element::from_vector(alg, v.cwiseQuotient(sw.cast<cplx>())));
  return basis;
}

}  // namespace groupoidal
