#include <algorithm>
#include <cmath>
#include <random>

#include "groupoidal/crossprod.hpp"

namespace groupoidal {

namespace {

CheckResult make_check(const std::string& name, double r, double tol) {
  return {name, r, std::isfinite(r) && r <= tol};
}

const CheckResult* find_in(const std::vector<CheckResult>& v, const std::string& name) {
  for (const auto& c : v)
    if (c.name == name) return &c;
  return nullptr;
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

int numeric_rank(const CMat& m, double rel_tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<CMat> qr(m);
  qr.setThreshold(rel_tol);
  return static_cast<int>(qr.rank());
}

// Images of the units of G_t inside G.
std::vector<CVec> target_units(const WeakHopfData& G) {
  const SubAlgebraEmbedding t = counital_subalgebras(G).target;
  std::vector<CVec> out;
  for (int i = 0; i < t.sub->dim(); ++i) out.push_back(t.inject.col(i));
  return out;
}

// Stack of the operators (R_{z |> 1} (x) 1 - 1 (x) L_z) whose ranges span the
// identification subspace.
std::vector<CMat> identification_operators(const AlgPtr& M, const WeakHopfData& G,
                                           const ModuleAction& action) {
  const int ng = G.dim();
  const CMat one_m = Element::identity(M).to_vector();
  std::vector<CMat> ops;
  for (const CVec& z : target_units(G)) {
    const CVec z1 = action.apply(z, one_m).col(0);
    const CMat r = right_mult_matrix(*M, z1);
    const CMat l = left_mult_matrix(*G.algebra, z);
    ops.push_back(kron(r, CMat::Identity(ng, ng)) - kron(CMat::Identity(M->dim(), M->dim()), l));
  }
  return ops;
}

// Orthonormal bases of the complement (first) and of the subspace (second).
std::pair<CMat, CMat> quotient_split(const AlgPtr& M, const WeakHopfData& G,
                                     const ModuleAction& action, double rel_tol) {
  const int t = M->dim() * G.dim();
  RowStack stack(t);
  for (const CMat& op : identification_operators(M, G, action)) stack.add(op.adjoint());
  const CMat& r = stack.reduced();
  Eigen::JacobiSVD<CMat> svd(r, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  const CMat& v = svd.matrixV();
  return {v.rightCols(t - rank), v.leftCols(rank)};
}

// Probe-based check that emb is a unital *-homomorphism; the full unit-pair
// version is used for small subalgebras.
double homomorphism_probe(const SubAlgebraEmbedding& emb, std::mt19937_64& rng) {
  if (emb.sub->dim() <= 40) return emb.homomorphism_residual();
  double r = (emb.apply(Element::identity(emb.sub)) - Element::identity(emb.ambient)).max_abs();
  for (int i = 0; i < 4; ++i) {
    const Element x = Element::from_vector(emb.sub, random_matrix(emb.sub->dim(), 1, rng).col(0));
    const Element y = Element::from_vector(emb.sub, random_matrix(emb.sub->dim(), 1, rng).col(0));
    const double scale = std::max(1.0, x.max_abs() * y.max_abs());
    r = std::max(r, distance(emb.apply(x * y), emb.apply(x) * emb.apply(y)) / scale);
    r = std::max(r, distance(emb.apply(x.adjoint()), emb.apply(x).adjoint()) / std::max(1.0, x.max_abs()));
  }
  return r;
}

// Pure-tensor product (u_m (x) u_g)(u_m' (x) u_g') in M (x) G coordinates.
CVec pure_product(const CrossedProductAlgebra& X, int m, int g, int m2, int g2) {
  const int ng = X.G.dim(), nm = X.M->dim();
  const AlgPtr& M = X.M;
  const AlgPtr& GA = X.G.algebra;
  const CMat c = X.G.coproduct_coeff(g);
  CVec out = CVec::Zero(nm * ng);
  const Element um = Element::unit(M, m);
  const Element ug2 = Element::unit(GA, g2);
  for (int s = 0; s < ng; ++s) {
    bool any = false;
    for (int t = 0; t < ng; ++t) any = any || c(s, t) != cplx(0.0);
    if (!any) continue;
    const Element left =
        um * Element::from_vector(M, X.action.apply_unit(s, CMat(CVec::Unit(nm, m2))).col(0));
    const CVec lv = left.to_vector();
    for (int t = 0; t < ng; ++t) {
      if (c(s, t) == cplx(0.0)) continue;
      const CVec rv = (Element::unit(GA, t) * ug2).to_vector();
      for (int a = 0; a < nm; ++a) {
        if (lv(a) == cplx(0.0)) continue;
        out.segment(a * ng, ng) += c(s, t) * lv(a) * rv;
      }
    }
  }
  return out;
}

}  // namespace

Element CrossedProductAlgebra::bracket(const Element& m, const Element& g) const {
  return i_M.apply(m) * i_G.apply(g);
}

bool CrossedProductAlgebra::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CrossedProductAlgebra::find(const std::string& name) const {
  return find_in(checks, name);
}

CMat quotient_basis(const AlgPtr& M, const WeakHopfData& G, const ModuleAction& action,
                    double rel_tol) {
  return quotient_split(M, G, action, rel_tol).first;
}

int quotient_rank_by_blocks(const AlgPtr& M, const WeakHopfData& G, const ModuleAction& action) {
  const SubAlgebraEmbedding t = counital_subalgebras(G).target;
  const CMat one_m = Element::identity(M).to_vector();
  int total = 0;
  for (int b = 0; b < t.sub->num_blocks(); ++b) {
    const CVec e = t.inject.col(t.sub->basis_index(b, 0, 0));
    const CVec e1 = action.apply(e, one_m).col(0);
    total += numeric_rank(right_mult_matrix(*M, e1)) * numeric_rank(left_mult_matrix(*G.algebra, e));
  }
  return total;
}

CrossedProductAlgebra smash(const AlgPtr& M, const WeakHopfData& G, const ModuleAction& action,
                            const SmashOptions& opt) {
  CrossedProductAlgebra X;
  X.M = M;
  X.G = G;
  X.action = action;
  const int nm = M->dim(), ng = G.dim(), T = nm * ng;
  std::mt19937_64 rng(opt.rng_seed);

  const auto [Q, K] = quotient_split(M, G, action, 1e-10);
  const int N = static_cast<int>(Q.cols());
  X.quotient_rank = N;
  X.quotient_from_subspace = true;
  if (N == 0) throw ConstructionError("crossed product quotient is zero");

  // Left multiplication by u_m (x) u_g on M (x) G is (L_m (x) 1) T_g with
  // T_g = sum_{s,t} Delta(u_g)_{st} act_s (x) L_t.
  std::vector<CMat> act(ng), lg(ng), tg(ng), lm(nm);
  for (int s = 0; s < ng; ++s) {
    act[s] = action.apply_unit(s, CMat::Identity(nm, nm));
    lg[s] = left_mult_matrix(*G.algebra, CVec::Unit(ng, s));
  }
  for (int g = 0; g < ng; ++g) {
    const CMat c = G.coproduct_coeff(g);
    tg[g] = CMat::Zero(T, T);
    for (int s = 0; s < ng; ++s)
      for (int t = 0; t < ng; ++t)
        if (c(s, t) != cplx(0.0)) tg[g] += c(s, t) * kron(act[s], lg[t]);
  }
  for (int m = 0; m < nm; ++m)
    lm[m] = kron(left_mult_matrix(*M, CVec::Unit(nm, m)), CMat::Identity(ng, ng));
  // (x) y for tensors x, y.
  auto left_apply = [&](const CVec& x, const CVec& y) {
    CVec out = CVec::Zero(T);
    for (int m = 0; m < nm; ++m) {
      CVec inner = CVec::Zero(T);
      for (int g = 0; g < ng; ++g) {
        const cplx v = x(m * ng + g);
        if (v != cplx(0.0)) inner += v * (tg[g] * y);
      }
      out += lm[m] * inner;
    }
    return out;
  };
  // Structure constants on the quotient coordinates Q^H x.
  std::vector<CMat> ql(nm), w(ng);
  for (int m = 0; m < nm; ++m) ql[m] = Q.adjoint() * lm[m];
  for (int g = 0; g < ng; ++g) w[g] = tg[g] * Q;
  AbstractStarAlgebra abs;
  abs.left_mult.assign(N, CMat::Zero(N, N));
  for (int m = 0; m < nm; ++m)
    for (int g = 0; g < ng; ++g) {
      const CMat p = ql[m] * w[g];
      for (int i = 0; i < N; ++i) {
        const cplx v = Q(m * ng + g, i);
        if (v != cplx(0.0)) abs.left_mult[i] += v * p;
      }
    }
  const CVec one_m = Element::identity(M).to_vector();
  const CVec one_g = Element::identity(G.algebra).to_vector();
  CVec one_t(T);
  for (int m = 0; m < nm; ++m) one_t.segment(m * ng, ng) = one_m(m) * one_g;
  abs.unit = Q.adjoint() * one_t;

  // [x (x) g]^* = [(g1^* |> x^*) (x) g2^*] on pure tensors (antilinear).
  const auto tm = transpose_index(*M);
  const auto tgi = transpose_index(*G.algebra);
  CMat star_t = CMat::Zero(T, T);
  for (int m = 0; m < nm; ++m)
    for (int g = 0; g < ng; ++g) {
      const CMat c = G.coproduct_coeff(g);
      for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t) {
          if (c(s, t) == cplx(0.0)) continue;
          const CVec x = act[tgi[s]].col(tm[m]);
          for (int a = 0; a < nm; ++a) star_t(a * ng + tgi[t], m * ng + g) += std::conj(c(s, t)) * x(a);
        }
    }
  abs.star = Q.adjoint() * star_t * Q.conjugate();

  // Well-definedness on random representatives.
  double wd = 0.0, ws = 0.0;
  if (K.cols() > 0) {
    const CMat kr = K * random_matrix(static_cast<int>(K.cols()), 4, rng);
    const CMat xr = random_matrix(T, 4, rng);
    for (int i = 0; i < 4; ++i) {
      wd = std::max(wd, max_abs(Q.adjoint() * left_apply(xr.col(i), kr.col(i))));
      wd = std::max(wd, max_abs(Q.adjoint() * left_apply(kr.col(i), xr.col(i))));
      ws = std::max(ws, max_abs(Q.adjoint() * star_t * kr.col(i).conjugate()));
    }
  }
  X.checks.push_back(make_check("well_defined_product", wd, opt.tol));
  X.checks.push_back(make_check("well_defined_star", ws, opt.tol));

  auto [alg, tmat] = realize(abs, opt.rng_seed);
  X.algebra = alg;
  const Eigen::PartialPivLU<CMat> lu(tmat);
  X.cls = lu.solve(CMat(Q.adjoint()));
  X.lift = Q * tmat;

  CMat inj_m(N, nm), inj_g(N, ng);
  for (int m = 0; m < nm; ++m) inj_m.col(m) = X.cls * CVec(kron(CMat(CVec::Unit(nm, m)), CMat(one_g)));
  for (int g = 0; g < ng; ++g) inj_g.col(g) = X.cls * CVec(kron(CMat(one_m), CMat(CVec::Unit(ng, g))));
  X.i_M = SubAlgebraEmbedding(M, alg, inj_m);
  X.i_G = SubAlgebraEmbedding(G.algebra, alg, inj_g);

  // Product and involution laws against the realized algebra.
  double rp = 0.0, ri = 0.0;
  std::vector<int> xs;
  if (T <= opt.full_check_limit) {
    for (int x = 0; x < T; ++x) xs.push_back(x);
  } else {
    std::uniform_int_distribution<int> pick(0, T - 1);
    for (int i = 0; i < 24; ++i) xs.push_back(pick(rng));
  }
  for (int x : xs) {
    const int m = x / ng, g = x % ng;
    const CMat lhs = X.cls * lm[m] * tg[g];  // [e_x][e_y] for every y
    const CMat rhs = left_mult_matrix(*alg, X.cls.col(x)) * X.cls;
    rp = std::max(rp, max_abs(lhs - rhs));
    const CVec st = X.cls * star_t.col(x);
    ri = std::max(ri, max_abs(st - star_coords(*alg, X.cls.col(x))));
  }
  X.checks.push_back(make_check("product_law", rp, opt.tol));
  X.checks.push_back(make_check("involution_law", ri, opt.tol));
  X.checks.push_back(make_check(
      "unit", max_abs(X.cls * one_t - Element::identity(alg).to_vector()), opt.tol));
  X.checks.push_back(make_check("i_M_homomorphism", homomorphism_probe(X.i_M, rng), opt.tol));
  X.checks.push_back(make_check("i_G_homomorphism", homomorphism_probe(X.i_G, rng), opt.tol));
  X.checks.push_back(make_check("i_M_injective", nm - numeric_rank(inj_m), 0.5));
  X.checks.push_back(make_check("i_G_injective", ng - numeric_rank(inj_g), 0.5));
  X.checks.push_back(make_check("spanned_by_products", N - numeric_rank(X.cls), 0.5));
  X.checks.push_back(make_check("quotient_rank_blocks",
                                std::abs(N - quotient_rank_by_blocks(M, G, action)), 0.5));
  return X;
}

CrossedProductAlgebra jones_extension(const SubAlgebraEmbedding& N_in_M, const WeakHopfData& G,
                                      const ModuleAction& action, const JonesOptions& opt) {
  const AlgPtr& M = N_in_M.ambient;
  const AlgPtr& Nsub = N_in_M.sub;
  const int nm = M->dim(), ng = G.dim(), T = nm * ng;
  std::mt19937_64 rng(opt.rng_seed);
  CrossedProductAlgebra X;
  X.M = M;
  X.G = G;
  X.action = action;

  // Density c: tr(x^* (h^* |> y) c) = tr((h |> x)^* y c) for all units h,
  // imposed on random x, y.
  const auto tg = transpose_index(*G.algebra);
  const RVec& wts = M->coordinate_weights();
  const auto tm = transpose_index(*M);
  const int pairs = std::max(4, (3 * nm) / ng + 2);
  const CMat xs = random_matrix(nm, pairs, rng), ys = random_matrix(nm, pairs, rng);
  RowStack stack(nm);
  for (int h = 0; h < ng; ++h) {
    const CMat hx = action.apply_unit(h, xs);
    const CMat hy = action.apply_unit(tg[h], ys);
    CMat rows(pairs, nm);
    for (int p = 0; p < pairs; ++p) {
      const Element x = Element::from_vector(M, xs.col(p));
      const Element e = x.adjoint() * Element::from_vector(M, hy.col(p)) -
                        Element::from_vector(M, hx.col(p)).adjoint() *
                            Element::from_vector(M, ys.col(p));
      const CVec ev = e.to_vector();
      // tr(e u_k) = weight * e(col, row): coefficient of c_k.
      for (int k = 0; k < nm; ++k) rows(p, k) = wts(k) * ev(tm[k]);
    }
    stack.add(rows);
  }
  const CMat ns = stack.nullspace(1e-8);
  if (ns.cols() == 0) throw ConstructionError("action admits no invariant density");
  const CVec one = Element::identity(M).to_vector();
  CVec cv = ns * (ns.adjoint() * one);  // solution closest to the unit
  if (cv.norm() < 1e-8) cv = ns.col(0);
  Element c = Element::from_vector(M, cv);
  c = 0.5 * (c + c.adjoint());
  if (c.trace().real() < 0) c = -1.0 * c;
  c = (1.0 / c.trace().real()) * c;
  double lo = 1e300, hi = 0.0;
  for (int b = 0; b < M->num_blocks(); ++b) {
    Eigen::SelfAdjointEigenSolver<CMat> es(c.block(b), Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  if (!(lo > 1e-10 * hi)) throw ConstructionError("invariant density is not positive");
  const double rden = (stack.reduced() * c.to_vector()).norm() /
                      std::max(1.0, stack.reduced().norm() * c.to_vector().norm());
  X.checks.push_back(make_check("density_equation", rden, opt.tol));
  X.density_solutions = static_cast<int>(ns.cols());

  const Element w = positive_sqrt(c), winv = invert(w);
  const CMat rw = right_mult_matrix(*M, w.to_vector());
  const CMat rwinv = right_mult_matrix(*M, winv.to_vector());
  auto pi = [&](int h, const CMat& v) -> CMat { return rw * action.apply_unit(h, rwinv * v); };

  // Orthonormal bases of L^2(M) q_c for the minimal projectors q_c of N.
  const int nb = Nsub->num_blocks();
  std::vector<CMat> V(nb);
  std::vector<int> dims(nb);
  for (int cb = 0; cb < nb; ++cb) {
    const Element q = N_in_M.image_of_unit(Nsub->basis_index(cb, 0, 0));
    std::vector<CVec> cols;
    for (int b = 0; b < M->num_blocks(); ++b) {
      const int n = M->block_dim(b);
      Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (q.block(b) + q.block(b).adjoint()));
      const double s = 1.0 / std::sqrt(M->weight(b));
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) {
          if (es.eigenvalues()(k) < 0.5) continue;
          CVec v = CVec::Zero(nm);
          for (int col = 0; col < n; ++col)
            v(M->basis_index(b, r, col)) = s * std::conj(es.eigenvectors()(col, k));
          cols.push_back(v);
        }
    }
    dims[cb] = static_cast<int>(cols.size());
    V[cb] = CMat(nm, dims[cb]);
    for (int j = 0; j < dims[cb]; ++j) V[cb].col(j) = cols[j];
  }
  const CVec dw = wts.cast<cplx>();
  auto compress = [&](const std::vector<CMat>& applied) {
    std::vector<CMat> blocks(nb);
    for (int cb = 0; cb < nb; ++cb) blocks[cb] = V[cb].adjoint() * dw.asDiagonal() * applied[cb];
    return blocks;
  };

  // Left multiplication by the unit e^b_{ij} only moves row j of block b to row i.
  std::vector<std::vector<CMat>> lm_blocks(nm);
  for (int k = 0; k < nm; ++k) {
    const auto u = M->unit(k);
    std::vector<CMat> applied(nb);
    for (int cb = 0; cb < nb; ++cb) {
      applied[cb] = CMat::Zero(nm, dims[cb]);
      for (int col = 0; col < M->block_dim(u.block); ++col)
        applied[cb].row(M->basis_index(u.block, u.row, col)) =
            V[cb].row(M->basis_index(u.block, u.col, col));
    }
    lm_blocks[k] = compress(applied);
  }

  // Trace weights from tr_X(i(x)) = tr_M(x) on the units of M.
  CMat eq(nm, nb);
  CVec rhs(nm);
  for (int k = 0; k < nm; ++k) {
    for (int cb = 0; cb < nb; ++cb) eq(k, cb) = lm_blocks[k][cb].trace();
    const auto u = M->unit(k);
    rhs(k) = u.row == u.col ? cplx(M->weight(u.block)) : cplx(0.0);
  }
  const CVec omega = eq.colPivHouseholderQr().solve(rhs);
  X.checks.push_back(make_check("trace_restriction", max_abs(eq * omega - rhs), opt.tol));
  std::vector<double> weights(nb);
  for (int cb = 0; cb < nb; ++cb) weights[cb] = omega(cb).real();
  X.algebra = MultiMatrixAlgebra::make(dims, weights);
  const AlgPtr& alg = X.algebra;
  const int N = alg->dim();

  auto to_coords = [&](const std::vector<CMat>& blocks) {
    return Element::from_blocks(alg, blocks).to_vector();
  };
  CMat inj_m(N, nm), inj_g(N, ng);
  for (int k = 0; k < nm; ++k) inj_m.col(k) = to_coords(lm_blocks[k]);
  for (int h = 0; h < ng; ++h) {
    std::vector<CMat> applied(nb);
    for (int cb = 0; cb < nb; ++cb) applied[cb] = pi(h, V[cb]);
    inj_g.col(h) = to_coords(compress(applied));
  }
  X.i_M = SubAlgebraEmbedding(M, alg, inj_m);
  X.i_G = SubAlgebraEmbedding(G.algebra, alg, inj_g);
  {
    CMat e_n(nm, nm);
    for (int k = 0; k < nm; ++k)
      e_n.col(k) = N_in_M.inject * N_in_M.expectation_coords(Element::unit(M, k));
    std::vector<CMat> applied(nb);
    for (int cb = 0; cb < nb; ++cb) applied[cb] = e_n * V[cb];
    X.base_projection = Element::from_blocks(alg, compress(applied));
  }

  // The twisted action must commute with right multiplication by N.
  double rcomm = 0.0;
  {
    const CMat probes = random_matrix(nm, 3, rng);
    const Element z = N_in_M.apply(Element::from_vector(Nsub, random_matrix(Nsub->dim(), 1, rng).col(0)));
    const CMat rz = right_mult_matrix(*M, z.to_vector());
    for (int h = 0; h < ng; ++h)
      rcomm = std::max(rcomm, max_abs(pi(h, rz * probes) - rz * pi(h, probes)) /
                                  std::max(1.0, max_abs(rz)));
  }
  X.checks.push_back(make_check("commutes_with_right_base", rcomm, opt.tol));

  // i_G(h) i_M(x) = sum Delta(h)_{st} i_M(u_s |> x) i_G(u_t).
  std::vector<CVec> xs2;
  if (nm <= 40) {
    for (int k = 0; k < nm; ++k) xs2.push_back(CVec::Unit(nm, k));
  } else {
    const CMat r = random_matrix(nm, 4, rng);
    for (int i = 0; i < 4; ++i) xs2.push_back(r.col(i) / r.col(i).norm());
  }
  std::vector<Element> ig(ng);
  for (int h = 0; h < ng; ++h) ig[h] = X.i_G.image_of_unit(h);
  double rsm = 0.0;
  for (const CVec& x : xs2) {
    const Element ix = X.i_M.apply(Element::from_vector(M, x));
    std::vector<Element> acted(ng);
    for (int s = 0; s < ng; ++s)
      acted[s] = X.i_M.apply(Element::from_vector(M, action.apply_unit(s, CMat(x)).col(0)));
    for (int h = 0; h < ng; ++h) {
      const CMat cc = G.coproduct_coeff(h);
      Element rhs2(alg);
      for (int s = 0; s < ng; ++s)
        for (int t = 0; t < ng; ++t)
          if (cc(s, t) != cplx(0.0)) rhs2 += cc(s, t) * (acted[s] * ig[t]);
      rsm = std::max(rsm, distance(ig[h] * ix, rhs2));
    }
  }
  X.checks.push_back(make_check("smash_relation", rsm, opt.tol));
  double rst = 0.0;
  for (int h = 0; h < ng; ++h) rst = std::max(rst, distance(ig[tg[h]], ig[h].adjoint()));
  X.checks.push_back(make_check("involution_law", rst, opt.tol));
  X.checks.push_back(make_check("i_M_homomorphism", homomorphism_probe(X.i_M, rng), opt.tol));
  X.checks.push_back(make_check("i_G_homomorphism", homomorphism_probe(X.i_G, rng), opt.tol));

  // Dimension of the quotient against the realized extension.
  constexpr int kExplicitQuotientLimit = 1500;
  if (T <= kExplicitQuotientLimit) {
    X.quotient_rank = static_cast<int>(quotient_basis(M, G, action).cols());
    X.quotient_from_subspace = true;
    X.checks.push_back(make_check("quotient_rank_blocks",
                                  std::abs(X.quotient_rank - quotient_rank_by_blocks(M, G, action)),
                                  0.5));
  } else {
    X.quotient_rank = quotient_rank_by_blocks(M, G, action);
  }
  X.checks.push_back(make_check("rank_matches_extension", std::abs(X.quotient_rank - N), 0.5));

  if (opt.keep_class_map) {
    X.cls = CMat(N, T);
    std::vector<Element> im(nm);
    for (int m = 0; m < nm; ++m) im[m] = X.i_M.image_of_unit(m);
    for (int m = 0; m < nm; ++m)
      for (int g = 0; g < ng; ++g) X.cls.col(m * ng + g) = (im[m] * ig[g]).to_vector();
    Eigen::ColPivHouseholderQR<CMat> qr(X.cls);
    qr.setThreshold(1e-9);
    const int rank = static_cast<int>(qr.rank());
    X.checks.push_back(make_check("spanned_by_products", N - rank, 0.5));
    if (rank == N) {
      // Right inverse supported on N independent pure tensors.
      std::vector<int> cols(N);
      CMat sub(N, N);
      for (int j = 0; j < N; ++j) {
        cols[j] = qr.colsPermutation().indices()(j);
        sub.col(j) = X.cls.col(cols[j]);
      }
      const CMat inv = sub.partialPivLu().inverse();
      X.lift = CMat::Zero(T, N);
      for (int j = 0; j < N; ++j) X.lift.row(cols[j]) = inv.row(j);
    }
    // Product law on random pairs of pure tensors.
    std::uniform_int_distribution<int> pick(0, T - 1);
    double rp = 0.0;
    for (int i = 0; i < 12; ++i) {
      const int x = pick(rng), y = pick(rng);
      const CVec lhs = X.cls * pure_product(X, x / ng, x % ng, y / ng, y % ng);
      const Element rhs3 = Element::from_vector(alg, X.cls.col(x)) * Element::from_vector(alg, X.cls.col(y));
      rp = std::max(rp, max_abs(lhs - rhs3.to_vector()));
    }
    X.checks.push_back(make_check("product_law", rp, opt.tol));
  }
  return X;
}

ModuleAction dual_action_on(const CrossedProductAlgebra& X, const ModuleAction& on_G,
                            double* residual) {
  if (X.cls.size() == 0 || X.lift.size() == 0)
    throw ConstructionError("crossed product was built without its class map");
  ModuleAction out;
  out.module = X.algebra;
  out.right = false;
  out.outer = X.cls;
  out.lift = X.lift;
  const int ng = X.G.dim();
  for (int h = 0; h < on_G.count(); ++h)
    out.inner.push_back(on_G.apply_unit(h, CMat::Identity(ng, ng)));
  if (residual) {
    // h |> must vanish on the kernel of the class map.
    std::mt19937_64 rng(11);
    const CMat y = random_matrix(X.tensor_dim(), 3, rng);
    const CMat k = y - X.lift * (X.cls * y);
    ModuleAction raw = out;
    raw.lift = CMat::Identity(X.tensor_dim(), X.tensor_dim());
    double r = 0.0;
    for (int h = 0; h < raw.count(); ++h) r = std::max(r, max_abs(raw.apply_unit(h, k)));
    *residual = r;
  }
  return out;
}

}  // namespace groupoidal
