#include "groupoidal/matalg.hpp"

namespace groupoidal {

TensorElement::TensorElement(AlgPtr l, AlgPtr r)
    : left(std::move(l)), right(std::move(r)) {
  coeff = CMat::Zero(left->dim(), right->dim());
}

TensorElement::TensorElement(AlgPtr l, AlgPtr r, CMat c)
    : left(std::move(l)), right(std::move(r)), coeff(std::move(c)) {
  if (coeff.rows() != left->dim() || coeff.cols() != right->dim())
    throw AlgebraError("tensor coefficient shape mismatch");
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  coeff += o.coeff;
  return *this;
}

TensorElement tensor_elem(const Element& x, const Element& y) {
  return TensorElement(x.parent(), y.parent(),
                       x.to_vector() * y.to_vector().transpose());
}

TensorElement operator+(const TensorElement& a, const TensorElement& b) {
  return TensorElement(a.left, a.right, a.coeff + b.coeff);
}

TensorElement operator-(const TensorElement& a, const TensorElement& b) {
  return TensorElement(a.left, a.right, a.coeff - b.coeff);
}

TensorElement operator*(cplx s, const TensorElement& a) {
  return TensorElement(a.left, a.right, s * a.coeff);
}

AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b) {
  std::vector<int> dims;
  std::vector<double> w;
  for (int i = 0; i < a->num_blocks(); ++i)
    for (int j = 0; j < b->num_blocks(); ++j) {
      dims.push_back(a->block_dim(i) * b->block_dim(j));
      w.push_back(a->weight(i) * b->weight(j));
    }
  return MultiMatrixAlgebra::make(std::move(dims), std::move(w));
}

std::vector<int> tensor_permutation(const MultiMatrixAlgebra& a,
                                    const MultiMatrixAlgebra& b) {
  const int nb = b.num_blocks();
  std::vector<int> offs;
  int off = 0;
  for (int i = 0; i < a.num_blocks(); ++i)
    for (int j = 0; j < nb; ++j) {
      offs.push_back(off);
      const int d = a.block_dim(i) * b.block_dim(j);
      off += d * d;
    }
  std::vector<int> perm(static_cast<std::size_t>(a.dim()) * b.dim());
  for (int s = 0; s < a.dim(); ++s) {
    const auto us = a.unit(s);
    for (int t = 0; t < b.dim(); ++t) {
      const auto ut = b.unit(t);
      const int nu = b.block_dim(ut.block);
      const int d = a.block_dim(us.block) * nu;
      const int row = us.row * nu + ut.row;
      const int col = us.col * nu + ut.col;
      perm[static_cast<std::size_t>(s) * b.dim() + t] =
          offs[us.block * nb + ut.block] + row * d + col;
    }
  }
  return perm;
}

Element to_tensor_algebra(const TensorElement& t, const AlgPtr& ab) {
  const auto perm = tensor_permutation(*t.left, *t.right);
  CVec v = CVec::Zero(ab->dim());
  const int nr = t.right->dim();
  for (int s = 0; s < t.left->dim(); ++s)
    for (int u = 0; u < nr; ++u)
      v(perm[static_cast<std::size_t>(s) * nr + u]) = t.coeff(s, u);
  return Element::from_vector(ab, v);
}

TensorElement from_tensor_algebra(const Element& x, const AlgPtr& a,
                                  const AlgPtr& b) {
  const auto perm = tensor_permutation(*a, *b);
  const CVec v = x.to_vector();
  TensorElement t(a, b);
  const int nr = b->dim();
  for (int s = 0; s < a->dim(); ++s)
    for (int u = 0; u < nr; ++u)
      t.coeff(s, u) = v(perm[static_cast<std::size_t>(s) * nr + u]);
  return t;
}

TensorElement operator*(const TensorElement& a, const TensorElement& b) {
  const AlgPtr ab = tensor_algebra(a.left, a.right);
  const Element p = to_tensor_algebra(a, ab) * to_tensor_algebra(b, ab);
  return from_tensor_algebra(p, a.left, a.right);
}

TensorElement adjoint(const TensorElement& a) {
  const AlgPtr ab = tensor_algebra(a.left, a.right);
  return from_tensor_algebra(to_tensor_algebra(a, ab).adjoint(), a.left,
                             a.right);
}

}  // namespace groupoidal
