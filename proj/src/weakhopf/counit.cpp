#include <algorithm>
#include <cmath>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

namespace {

double max_abs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// E[s][j] = eps(u_s u_j)
CMat counit_products(const WeakHopfData& w) {
  const int n = w.dim();
  CMat e = CMat::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j) {
      const int c = unit_product(*w.algebra, s, j);
      if (c >= 0) e(s, j) = w.eps(c);
    }
  return e;
}

SubAlgebraEmbedding from_columns(const AlgPtr& a, const CMat& cols) {
  std::vector<Element> span;
  span.push_back(Element::identity(a));
  for (int c = 0; c < cols.cols(); ++c)
    span.push_back(Element::from_vector(a, cols.col(c)));
  return decompose_subalgebra(orthonormalize(span, 1e-9), a);
}

// Dimension of span(cols) ∩ span(other) through the nullspace of [cols, -other].
int intersection_dim(const CMat& a, const CMat& b) {
  CMat m(a.rows(), a.cols() + b.cols());
  m << a, -b;
  return static_cast<int>(nullspace(m, 1e-8).cols());
}

CMat embedding_columns(const SubAlgebraEmbedding& e) { return e.inject; }

CMat center_columns(const AlgPtr& a) {
  CMat z(a->dim(), a->num_blocks());
  for (int b = 0; b < a->num_blocks(); ++b) {
    Element one_b(a);
    one_b.block(b).setIdentity();
    z.col(b) = one_b.to_vector();
  }
  return z;
}

}  // namespace

CounitMaps counit_maps(const WeakHopfData& w) {
  const CVec one = Element::identity(w.algebra).to_vector();
  const CMat c1 = w.coproduct_coeff(one);
  const CMat e = counit_products(w);
  return CounitMaps{c1.transpose() * e, c1 * e.transpose()};
}

CounitalSubalgebras counital_subalgebras(const WeakHopfData& w) {
  const AlgPtr& a = w.algebra;
  const CVec one = Element::identity(a).to_vector();
  const CMat c1 = w.coproduct_coeff(one);
  CounitalSubalgebras out{from_columns(a, c1.transpose()), from_columns(a, c1), 0.0, 0.0};
  double rc = 0.0;
  for (int i = 0; i < out.target.sub->dim(); ++i)
    for (int j = 0; j < out.source.sub->dim(); ++j) {
      const Element x = out.target.image_of_unit(i), y = out.source.image_of_unit(j);
      rc = std::max(rc, distance(x * y, y * x));
    }
  out.commutation_residual = rc;
  const CounitMaps cm = counit_maps(w);
  double ri = 0.0;
  for (int k = 0; k < w.dim(); ++k) {
    ri = std::max(ri, out.target.distance_to_image(Element::from_vector(a, cm.target.col(k))));
    ri = std::max(ri, out.source.distance_to_image(Element::from_vector(a, cm.source.col(k))));
  }
  out.image_residual = ri;
  return out;
}

HaarProjection haar_projection(const WeakHopfData& w) {
  const AlgPtr& A = w.algebra;
  const int n = w.dim();
  const CounitMaps cm = counit_maps(w);
  const CVec one = Element::identity(A).to_vector();
  // Complex-linear rows: (L(eps_t(u_j)) - L(u_j)) p = 0, eps_t(p) = 1, S p = p.
  CMat rows(n * n + 2 * n, n);
  CVec rhs = CVec::Zero(n * n + 2 * n);
  for (int j = 0; j < n; ++j)
    rows.middleRows(j * n, n) = left_mult_matrix(*A, cm.target.col(j)) -
                                left_mult_matrix(*A, CVec(CVec::Unit(n, j)));
  rows.middleRows(n * n, n) = cm.target;
  rhs.segment(n * n, n) = one;
  rows.middleRows(n * n + n, n) = w.antipode - CMat::Identity(n, n);
  // Real form with p = x + iy; the star condition is only real-linear.
  const int m = static_cast<int>(rows.rows());
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * m + 2 * n, 2 * n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * m + 2 * n);
  big.topLeftCorner(m, n) = rows.real();
  big.block(0, n, m, n) = -rows.imag();
  big.block(m, 0, m, n) = rows.imag();
  big.block(m, n, m, n) = rows.real();
  b.head(m) = rhs.real();
  b.segment(m, m) = rhs.imag();
  // coords(p*) = P conj(coords(p)): P x - x = 0 and -P y - y = 0.
  const auto tr = transpose_index(*A);
  for (int k = 0; k < n; ++k) {
    big(2 * m + tr[k], k) += 1.0;
    big(2 * m + k, k) -= 1.0;
    big(2 * m + n + tr[k], n + k) -= 1.0;
    big(2 * m + n + k, n + k) -= 1.0;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(big, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int nullity = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < 1e-8 * std::max(1.0, smax)) ++nullity;
  nullity += std::max(0, 2 * n - static_cast<int>(sv.size()));
  svd.setThreshold(1e-8);
  const Eigen::VectorXd sol = svd.solve(b);
  const double ls = (big * sol - b).cwiseAbs().maxCoeff();

  HaarProjection out;
  out.solution_dim = nullity + 1;
  out.ls_residual = ls;
  if (ls > 1e-6)
    throw ConstructionError("Haar projection system is inconsistent (residual " +
                            std::to_string(ls) + ")");
  if (nullity > 0)
    throw ConstructionError("Haar projection is not unique (solution space dimension " +
                            std::to_string(nullity + 1) + ")");
  CVec p(n);
  for (int k = 0; k < n; ++k) p(k) = cplx(sol(k), sol(n + k));
  const Element raw = Element::from_vector(A, p);
  double shift = 0.0;
  bool off = false;
  out.p = hermitian_apply(raw, [&](double ev) {
    const double target = ev < 0.5 ? 0.0 : 1.0;
    const double d = std::abs(ev - target);
    shift = std::max(shift, d);
    if (d > kSnapThreshold) off = true;
    return cplx(d <= kSnapThreshold ? target : ev);
  });
  out.snap_shift = shift;
  if (off)
    throw ConstructionError("Haar solution is not a projection (eigenvalue off by " +
                            std::to_string(shift) + ")");
  return out;
}

double haar_projection_residual(const WeakHopfData& w, const Element& p) {
  const AlgPtr& A = w.algebra;
  const CounitMaps cm = counit_maps(w);
  const Element one = Element::identity(A);
  double r = 0.0;
  for (int j = 0; j < w.dim(); ++j) {
    const Element g = Element::unit(A, j);
    r = std::max(r, distance(Element::from_vector(A, cm.target.col(j)) * p, g * p));
    r = std::max(r, distance(p * Element::from_vector(A, cm.source.col(j)), p * g));
  }
  const CVec pv = p.to_vector();
  r = std::max(r, distance(Element::from_vector(A, cm.target * pv), one));
  r = std::max(r, distance(Element::from_vector(A, cm.source * pv), one));
  r = std::max({r, distance(w.S(p), p), distance(p * p, p), distance(p.adjoint(), p)});
  return r;
}

CVec haar_measure(const Pairing& pr, const Element& partner_projection,
                  bool measure_on_left) {
  if (pr.degenerate()) throw ConstructionError("degenerate pairing");
  const CVec p = partner_projection.to_vector();
  if (measure_on_left) return pr.gram * p;
  return pr.gram.transpose() * p;
}

double haar_measure_residual(const WeakHopfData& w, const CVec& phi) {
  const CounitMaps cm = counit_maps(w);
  double r = 0.0;
  for (int k = 0; k < w.dim(); ++k) {
    const CMat ck = w.coproduct_coeff(k);
    const CVec right = ck * phi;              // (id (x) phi)Delta(u_k)
    const CVec left = ck.transpose() * phi;   // (phi (x) id)Delta(u_k)
    r = std::max(r, max_abs(CVec(right - cm.target * right)));
    r = std::max(r, max_abs(CVec(left - cm.source * left)));
  }
  r = std::max(r, max_abs(CVec(cm.target.transpose() * phi - w.eps)));
  r = std::max(r, max_abs(CVec(cm.source.transpose() * phi - w.eps)));
  return r;
}

std::pair<int, int> center_intersections(const WeakHopfData& w) {
  const CounitalSubalgebras cs = counital_subalgebras(w);
  const CMat z = center_columns(w.algebra);
  return {intersection_dim(embedding_columns(cs.source), z),
          intersection_dim(embedding_columns(cs.target), z)};
}

bool is_connected(const WeakHopfData& w) { return center_intersections(w).first == 1; }

double regularity_residual(const WeakHopfData& w) {
  const CounitalSubalgebras cs = counital_subalgebras(w);
  double r = 0.0;
  for (const auto* e : {&cs.target, &cs.source})
    for (int k = 0; k < e->sub->dim(); ++k) {
      const Element x = e->image_of_unit(k);
      r = std::max(r, distance(w.S(w.S(x)), x));
    }
  return r;
}

bool is_regular(const WeakHopfData& w, double tol) { return regularity_residual(w) <= tol; }

Element average_target(const WeakHopfData& w, const CVec& phi, const Element& a) {
  return Element::from_vector(w.algebra, apply_right_functional(w, a.to_vector(), phi));
}

Element average_source(const WeakHopfData& w, const CVec& phi, const Element& a) {
  return Element::from_vector(w.algebra, apply_left_functional(w, a.to_vector(), phi));
}

ModularData gs_gt(const WeakHopfData& w, HaarData& haar) {
  const AlgPtr& A = w.algebra;
  auto phi = [&](const Element& x) -> cplx { return haar.phi.transpose() * x.to_vector(); };
  ModularData g;
  Element fs = average_source(w, haar.phi, haar.p);
  Element ft = average_target(w, haar.phi, haar.p);
  Element gs_inv, gt_inv;
  try {
    g.g_s = positive_sqrt(0.5 * (fs + fs.adjoint()));
    g.g_t = positive_sqrt(0.5 * (ft + ft.adjoint()));
    gs_inv = invert(g.g_s);
    gt_inv = invert(g.g_t);
  } catch (const AlgebraError& e) {
    throw ConstructionError(std::string("averaged Haar projection is not invertible: ") +
                            e.what());
  }
  haar.d = phi(Element::identity(A));
  haar.gamma = phi(gs_inv);
  g.antipode_residual = distance(w.S(g.g_t), g.g_s);
  g.haar_residual = std::max(distance(g.g_s * haar.p, g.g_t * haar.p),
                             distance(haar.p * g.g_s, haar.p * g.g_t));
  g.gamma_residual = std::abs(phi(gs_inv) - phi(gt_inv));
  return g;
}

CVec trace_functional(const WeakHopfData& w, const HaarData& haar, const ModularData& g) {
  const Element x = invert(g.g_s) * invert(g.g_t);
  const CVec f = left_mult_matrix(*w.algebra, x.to_vector()).transpose() * haar.phi;
  return (haar.d / (haar.gamma * haar.gamma)) * f;
}

}  // namespace groupoidal
