#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "groupoidal/config.hpp"

namespace groupoidal {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Finite direct sum of full matrix blocks with a faithful trace. The trace
/// of a minimal projector of block i is trace_weights[i]. Basis order for
/// coordinates: block index, then row-major matrix units.
class MultiMatrixAlgebra {
 public:
  MultiMatrixAlgebra(std::vector<int> block_dims,
                     std::vector<double> trace_weights);

  static std::shared_ptr<const MultiMatrixAlgebra> make(
      std::vector<int> block_dims, std::vector<double> trace_weights);
  // Weights chosen so that every minimal projector has the same trace and
  // tr(1) = 1.
  static std::shared_ptr<const MultiMatrixAlgebra> uniform(
      std::vector<int> block_dims);

  const std::vector<int>& block_dims() const { return dims_; }
  const std::vector<double>& trace_weights() const { return weights_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int b) const { return dims_[b]; }
  double weight(int b) const { return weights_[b]; }
  // Total number of basis elements, sum of squared block dims.
  int dim() const { return dim_; }
  // Index of the first basis element of block b.
  int offset(int b) const { return offsets_[b]; }
  int basis_index(int b, int r, int c) const {
    return offsets_[b] + r * dims_[b] + c;
  }
  struct UnitPos {
    int block, row, col;
  };
  UnitPos unit(int k) const { return units_[k]; }
  // tr(1), equal to 1 for normalized weights.
  double total_trace() const;
  // Trace weight attached to each basis index (the weight of its block).
  const RVec& coordinate_weights() const { return coord_weights_; }

  bool same_shape(const MultiMatrixAlgebra& o) const;
  bool operator==(const MultiMatrixAlgebra& o) const;

 private:
  std::vector<int> dims_;
  std::vector<double> weights_;
  std::vector<int> offsets_;
  std::vector<UnitPos> units_;
  RVec coord_weights_;
  int dim_ = 0;
};

using AlgPtr = std::shared_ptr<const MultiMatrixAlgebra>;

/// Block-diagonal element of a MultiMatrixAlgebra.
class Element {
 public:
  Element() = default;
  explicit Element(AlgPtr parent);  // zero element

  static Element zero(AlgPtr parent) { return Element(std::move(parent)); }
  static Element identity(AlgPtr parent);
  static Element unit(AlgPtr parent, int k);  // k-th matrix unit
  static Element from_vector(AlgPtr parent, const CVec& coords);
  static Element from_blocks(AlgPtr parent, std::vector<CMat> blocks);

  const AlgPtr& parent() const { return parent_; }
  const std::vector<CMat>& blocks() const { return blocks_; }
  std::vector<CMat>& blocks() { return blocks_; }
  const CMat& block(int b) const { return blocks_[b]; }
  CMat& block(int b) { return blocks_[b]; }

  CVec to_vector() const;
  cplx trace() const;
  Element adjoint() const;
  // Largest absolute entry.
  double max_abs() const;
  // Trace-weighted norm sqrt(tr(x* x)).
  double trace_norm() const;

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(cplx s);

 private:
  AlgPtr parent_;
  std::vector<CMat> blocks_;
};

Element operator+(const Element& x, const Element& y);
Element operator-(const Element& x, const Element& y);
Element operator-(const Element& x);
Element operator*(const Element& x, const Element& y);
Element operator*(cplx s, const Element& x);
Element operator*(const Element& x, cplx s);
Element operator*(double s, const Element& x);

enum class ArithOp { Add, Mul, Adjoint, Scale };
/// Dispatching form of the blockwise operations; y is ignored for Adjoint and
/// Scale, s is used only by Scale.
Element arith(const Element& x, const Element& y, ArithOp op,
              cplx s = cplx(1.0));

/// Canonical matrix-unit basis, block index then row-major.
std::vector<Element> mma_basis(const AlgPtr& alg);

/// u_a u_b as a unit index, or -1 when the product vanishes.
int unit_product(const MultiMatrixAlgebra& alg, int a, int b);
// Matrices of y -> x y and y -> y x in unit coordinates.
CMat left_mult_matrix(const MultiMatrixAlgebra& alg, const CVec& x);
CMat right_mult_matrix(const MultiMatrixAlgebra& alg, const CVec& x);

cplx trace(const Element& x);
// tr(x* y)
cplx inner(const Element& x, const Element& y);
double distance(const Element& x, const Element& y);  // max abs entry of x-y

/// Linear map between coordinate spaces in fixed bases.
struct LinearMap {
  CMat matrix;  // codomain_dim x domain_dim
  LinearMap() = default;
  explicit LinearMap(CMat m) : matrix(std::move(m)) {}
  int domain_dim() const { return static_cast<int>(matrix.cols()); }
  int codomain_dim() const { return static_cast<int>(matrix.rows()); }
  CVec apply(const CVec& v) const { return matrix * v; }
  Element apply(const Element& x, const AlgPtr& codomain) const;
};

/// Element of A (x) B as the coefficient matrix over pairs of basis elements.
struct TensorElement {
  AlgPtr left, right;
  CMat coeff;  // dim(left) x dim(right)
  TensorElement() = default;
  TensorElement(AlgPtr l, AlgPtr r);
  TensorElement(AlgPtr l, AlgPtr r, CMat c);
  TensorElement& operator+=(const TensorElement& o);
  double max_abs() const { return coeff.size() ? coeff.cwiseAbs().maxCoeff() : 0.0; }
};

TensorElement tensor_elem(const Element& x, const Element& y);
TensorElement operator+(const TensorElement& a, const TensorElement& b);
TensorElement operator-(const TensorElement& a, const TensorElement& b);
TensorElement operator*(cplx s, const TensorElement& a);
// Product in the tensor square algebra.
TensorElement operator*(const TensorElement& a, const TensorElement& b);
TensorElement adjoint(const TensorElement& a);

/// Tensor product algebra: block (i,j) at position i*nb+j has dimension
/// mu_i*nu_j and trace weight s_i*t_j.
AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b);
// Position of the basis product (s,t) inside tensor_algebra(a,b).
std::vector<int> tensor_permutation(const MultiMatrixAlgebra& a,
                                    const MultiMatrixAlgebra& b);
Element to_tensor_algebra(const TensorElement& t, const AlgPtr& ab);
TensorElement from_tensor_algebra(const Element& x, const AlgPtr& a,
                                  const AlgPtr& b);

/// Unital *-subalgebra given by the images of its matrix units.
struct SubAlgebraEmbedding {
  AlgPtr sub;
  AlgPtr ambient;
  CMat inject;  // ambient.dim x sub.dim, column k = image of k-th unit

  SubAlgebraEmbedding() = default;
  SubAlgebraEmbedding(AlgPtr s, AlgPtr a, CMat inj);

  Element apply(const Element& x) const;
  Element image_of_unit(int k) const;
  // Sub coordinates of the trace-preserving conditional expectation of x.
  CVec expectation_coords(const Element& x) const;
  Element expectation_in_sub(const Element& x) const;
  // Distance from x to the image (max abs entry of x - E(x)).
  double distance_to_image(const Element& x) const;
  // Residuals of the unital *-homomorphism property on all unit pairs.
  double homomorphism_residual() const;

 private:
  Eigen::LDLT<CMat> gram_;  // Gram matrix under tr(x* y), kept factored
  void factor();
  friend SubAlgebraEmbedding compose(const SubAlgebraEmbedding&,
                                     const SubAlgebraEmbedding&);
};

// Embedding of inner.sub into outer.ambient through inner.ambient=outer.sub.
SubAlgebraEmbedding compose(const SubAlgebraEmbedding& inner,
                            const SubAlgebraEmbedding& outer);
SubAlgebraEmbedding identity_embedding(const AlgPtr& a);

/// Trace-preserving conditional expectation onto the embedded subalgebra,
/// returned as an element of the ambient algebra.
Element conditional_expectation(const SubAlgebraEmbedding& emb,
                                const Element& x);

/// Orthonormal (trace inner product) basis of the commutant of gens inside
/// the ambient algebra.
std::vector<Element> commutant(const AlgPtr& ambient,
                               const std::vector<Element>& gens);
std::vector<Element> commutant(const SubAlgebraEmbedding& emb);
/// Commutant of gens inside a subalgebra, computed in its coordinates.
std::vector<Element> relative_commutant(const SubAlgebraEmbedding& within,
                                        const std::vector<Element>& gens);

Element positive_sqrt(const Element& x, double tol = kDefaultTolerance);
Element invert(const Element& x, double tol = kDefaultTolerance);
// Hermitian functional calculus: f applied to the eigenvalues per block.
template <class F>
Element hermitian_apply(const Element& x, F f);
bool is_self_adjoint(const Element& x, double tol);

/// Unital *-subalgebra generated by seed, with its block decomposition
/// recovered from the minimal central projections.
SubAlgebraEmbedding span_closure(const std::vector<Element>& seed,
                                 const AlgPtr& ambient,
                                 std::uint64_t rng_seed = 7);
/// Block decomposition of a *-closed subspace given by spanning elements.
SubAlgebraEmbedding decompose_subalgebra(const std::vector<Element>& span,
                                         const AlgPtr& ambient,
                                         std::uint64_t rng_seed = 7);

/// Orthonormal basis (trace inner product) of span(elems), modified
/// Gram-Schmidt with one re-orthogonalization pass.
std::vector<Element> orthonormalize(const std::vector<Element>& elems,
                                    double rel_tol = 1e-10);

// Nullspace of a matrix: columns spanning {v : M v = 0} with singular values
// below rel_tol * max(1, largest singular value).
CMat nullspace(const CMat& m, double rel_tol);

/// Linear map fixed by generator images and extended over breadth-first
/// words from the unit: x g -> y h, or x g -> h y when anti is set. Throws
/// ConstructionError when the words miss part of the domain or the images
/// are inconsistent on linearly dependent words. The unit goes to
/// unit_image when given (a non-unital homomorphism such as a coproduct).
struct WordExtension {
  CMat map;               // codomain.dim x domain.dim
  double residual = 0.0;  // worst mismatch seen on dependent words
};
WordExtension extend_over_words(const AlgPtr& domain, const AlgPtr& codomain,
                                const std::vector<Element>& gens,
                                const std::vector<Element>& images, bool anti,
                                double threshold = kExtensionThreshold,
                                const Element* unit_image = nullptr);

/// Tall linear system accumulated block by block and compressed with QR, so
/// its singular values (and nullspace) match the full stack without storing
/// it.
class RowStack {
 public:
  explicit RowStack(int cols) : cols_(cols), r_(0, cols) {}
  void add(const CMat& rows);
  const CMat& reduced() const { return r_; }
  CMat nullspace(double rel_tol) const { return groupoidal::nullspace(r_, rel_tol); }

 private:
  int cols_;
  CMat r_;
};

template <class F>
Element hermitian_apply(const Element& x, F f) {
  Element out(x.parent());
  for (int b = 0; b < x.parent()->num_blocks(); ++b) {
    const CMat h = 0.5 * (x.block(b) + x.block(b).adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    RVec ev = es.eigenvalues();
    CVec fv(ev.size());
    for (int i = 0; i < ev.size(); ++i) fv(i) = f(ev(i));
    out.block(b) = es.eigenvectors() * fv.asDiagonal() *
                   es.eigenvectors().adjoint();
  }
  return out;
}

}  // namespace groupoidal
