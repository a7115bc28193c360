#include <algorithm>
#include <cmath>
#include <random>

#include "groupoidal/crossprod.hpp"

namespace groupoidal {

namespace {

CheckResult make_check(const std::string& name, double r, double tol) {
  return {name, r, std::isfinite(r) && r <= tol};
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double worst(const std::vector<CheckResult>& v) {
  double r = 0.0;
  for (const auto& c : v) r = std::max(r, c.passed ? c.residual : std::max(c.residual, 1.0));
  return r;
}

CMat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

// Full unit basis for small algebras, random elements otherwise.
constexpr int kFullBasisLimit = 120;
std::vector<Element> test_elements(const AlgPtr& a, std::mt19937_64& rng, int probes = 6) {
  std::vector<Element> out;
  if (a->dim() <= kFullBasisLimit) {
    for (int k = 0; k < a->dim(); ++k) out.push_back(Element::unit(a, k));
  } else {
    const CMat r = random_matrix(a->dim(), probes, rng);
    for (int i = 0; i < probes; ++i) out.push_back(Element::from_vector(a, r.col(i)));
  }
  return out;
}

// The same structure on an algebra whose weights are the trace tr.
WeakHopfData with_trace_weights(const WeakHopfData& w, const CVec& tr) {
  const MultiMatrixAlgebra& a = *w.algebra;
  std::vector<double> weights;
  bool same = true;
  for (int b = 0; b < a.num_blocks(); ++b) {
    const double t = tr(a.basis_index(b, 0, 0)).real();
    if (!(t > 0.0)) throw ConstructionError("trace is not faithful");
    weights.push_back(t);
    same = same && std::abs(t - a.weight(b)) <= 1e-13 * std::max(1.0, t);
  }
  if (same) return w;
  WeakHopfData out = w;
  out.algebra = MultiMatrixAlgebra::make(a.block_dims(), weights);
  return out;
}

// Subalgebra with the weights the ambient trace induces on it.
SubAlgebraEmbedding with_induced_weights(const SubAlgebraEmbedding& e) {
  std::vector<double> weights;
  for (int b = 0; b < e.sub->num_blocks(); ++b)
    weights.push_back(e.image_of_unit(e.sub->basis_index(b, 0, 0)).trace().real());
  return SubAlgebraEmbedding(MultiMatrixAlgebra::make(e.sub->block_dims(), weights), e.ambient,
                             e.inject);
}

// Embedding of the class of tensors into a target algebra, given the images
// of pure tensors as columns; uses the lift supported on pivot tensors.
CMat embed_through_lift(const CrossedProductAlgebra& X, const CMat& images) {
  std::vector<int> rows;
  for (int t = 0; t < X.lift.rows(); ++t)
    if (X.lift.row(t).cwiseAbs().maxCoeff() > 0.0) rows.push_back(t);
  CMat img(images.rows(), static_cast<int>(rows.size()));
  CMat lift(static_cast<int>(rows.size()), X.lift.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    img.col(i) = images.col(rows[i]);
    lift.row(i) = X.lift.row(rows[i]);
  }
  return img * lift;
}

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

// Images [f(m) g(g)] of pure tensors m (x) g.
CMat pure_images(const CrossedProductAlgebra& X, const SubAlgebraEmbedding& on_m,
                 const SubAlgebraEmbedding& on_g) {
  const int nm = X.M->dim(), ng = X.G.dim();
  CMat out(on_m.ambient->dim(), nm * ng);
  std::vector<Element> gs(ng);
  for (int g = 0; g < ng; ++g) gs[g] = on_g.image_of_unit(g);
  for (int m = 0; m < nm; ++m) {
    const Element em = on_m.image_of_unit(m);
    for (int g = 0; g < ng; ++g) out.col(m * ng + g) = (em * gs[g]).to_vector();
  }
  return out;
}

double trace_consistency(const SubAlgebraEmbedding& e) {
  double r = 0.0;
  for (int b = 0; b < e.sub->num_blocks(); ++b) {
    const int k = e.sub->basis_index(b, 0, 0);
    r = std::max(r, std::abs(e.image_of_unit(k).trace() - Element::unit(e.sub, k).trace()));
  }
  return r;
}

// Block sizes of the basic construction of n < m given the inclusion matrix
// (blocks of n by blocks of m).
std::vector<int> basic_construction_sizes(const Eigen::MatrixXi& lam, const std::vector<int>& m) {
  std::vector<int> out(lam.rows(), 0);
  for (int j = 0; j < lam.rows(); ++j)
    for (int k = 0; k < lam.cols(); ++k) out[j] += lam(j, k) * m[k];
  return out;
}

Eigen::MatrixXi inclusion_matrix(const SubAlgebraEmbedding& e) {
  Eigen::MatrixXi lam(e.sub->num_blocks(), e.ambient->num_blocks());
  for (int j = 0; j < e.sub->num_blocks(); ++j) {
    const Element p = e.image_of_unit(e.sub->basis_index(j, 0, 0));
    for (int k = 0; k < e.ambient->num_blocks(); ++k)
      lam(j, k) = static_cast<int>(std::lround(p.block(k).trace().real()));
  }
  return lam;
}

// Block sizes of the floors of one row: start < first are floors -1 and 0.
std::vector<std::vector<int>> row_sizes(const SubAlgebraEmbedding& start, int floors) {
  std::vector<std::vector<int>> out{start.ambient->block_dims()};
  Eigen::MatrixXi lam = inclusion_matrix(start);
  for (int n = 1; n < floors; ++n) {
    out.push_back(basic_construction_sizes(lam, out.back()));
    lam = Eigen::MatrixXi(lam.transpose());
  }
  return out;
}

int dim_of(const std::vector<int>& sizes) {
  int d = 0;
  for (int s : sizes) d += s * s;
  return d;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Relative commutant of gens inside within; for large subalgebras the
// generators are replaced by two random self-adjoint elements of the algebra
// they generate, and the result is confirmed against all of them.
std::vector<Element> commutant_in(const SubAlgebraEmbedding& within,
                                  const SubAlgebraEmbedding& of, std::mt19937_64& rng,
                                  double* residual) {
  std::vector<Element> gens;
  if (within.sub->dim() > kFullBasisLimit) {
    for (int i = 0; i < 2; ++i) {
      const Element x = Element::from_vector(of.sub, random_matrix(of.sub->dim(), 1, rng).col(0));
      gens.push_back(of.apply(x + x.adjoint()));
    }
  } else {
    for (int k = 0; k < of.sub->dim(); ++k) gens.push_back(of.image_of_unit(k));
  }
  std::vector<Element> rc = relative_commutant(within, gens);
  double r = 0.0;
  for (const auto& z : rc)
    for (int k = 0; k < of.sub->dim(); ++k) {
      const Element g = of.image_of_unit(k);
      r = std::max(r, distance(z * g, g * z));
    }
  *residual = r;
  return rc;
}

}  // namespace

bool LadderGrid::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* LadderGrid::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::pair<std::vector<int>, std::vector<int>> ladder_dimensions(const WeakHopfData& wa,
                                                                const WeakHopfData& wb,
                                                                const Pairing&, int depth) {
  const auto ra = row_sizes(counital_subalgebras(wa).target, depth + 1);
  const SubAlgebraEmbedding bt = counital_subalgebras(wb).target;
  auto rb = row_sizes(bt, depth);
  rb.insert(rb.begin(), bt.sub->block_dims());
  std::pair<std::vector<int>, std::vector<int>> out;
  for (const auto& s : ra) out.first.push_back(dim_of(s));
  for (int n = 0; n <= depth; ++n) out.second.push_back(dim_of(rb[n]));
  return out;
}

LadderGrid ladder(const WeakHopfData& wa_in, const WeakHopfData& wb_in, const Pairing& pr_in,
                  const LadderOptions& opt) {
  if (opt.depth < 1) throw ConstructionError("ladder depth must be at least 1");
  if (!is_connected(wa_in) || !is_connected(wb_in))
    throw ConstructionError("ladder needs connected structures");
  const auto dims = ladder_dimensions(wa_in, wb_in, pr_in, opt.depth);
  long long total = 0;
  for (int d : dims.first) total += d;
  for (int d : dims.second) total += d;
  if (total > opt.dimension_cap)
    throw ConstructionError("ladder floors exceed the dimension cap (" + std::to_string(total) +
                            " > " + std::to_string(opt.dimension_cap) + ")");

  LadderGrid g;
  auto add = [&](const std::string& name, double r) {
    g.checks.push_back(make_check(name, r, opt.tol));
  };
  std::mt19937_64 rng(opt.rng_seed);

  // Work with algebras weighted by the Markov traces.
  const PairMeasures m0 = pair_measures(wa_in, wb_in, pr_in, opt.tol);
  const WeakHopfData wa = with_trace_weights(wa_in, m0.tr_a);
  const WeakHopfData wb = with_trace_weights(wb_in, m0.tr_b);
  const Pairing pr{wa.algebra, wb.algebra, pr_in.gram};
  const PairMeasures m = pair_measures(wa, wb, pr, opt.tol);
  add("measures", worst(m.checks));
  g.tau = m.tau();
  const DualActions da = dual_actions(wa, wb, pr, opt.tol);
  add("dual_actions", worst(da.checks));
  const double d = m.d, gamma = m.gamma;
  const Element f_b = (d / gamma) * (invert(positive_sqrt(m.g_b.g_t)) * m.haar_b.p *
                                     invert(positive_sqrt(m.g_b.g_t)));
  const Element f_a = (d / gamma) * (invert(positive_sqrt(m.g_a.g_s)) * m.haar_a.p *
                                     invert(positive_sqrt(m.g_a.g_s)));

  const CounitalSubalgebras ca = counital_subalgebras(wa);
  const SubAlgebraEmbedding At = with_induced_weights(ca.target);
  const SubAlgebraEmbedding Bt = with_induced_weights(counital_subalgebras(wb).target);

  // Floors. ax[n] realizes A_{n+1} = A_n x| G_n and bx[n] realizes
  // B_{n+2} = B_{n+1} x| G_{n+1}, with G_n = B for even n and A for odd n;
  // each new factor acts on the last factor of the floor below.
  auto factor = [&](int n) -> const WeakHopfData& { return n % 2 == 0 ? wb : wa; };
  auto on_factor = [&](int n) -> const ModuleAction& {
    return n % 2 == 0 ? da.b_on_a_left : da.a_on_b_left;
  };
  auto projector = [&](int n) -> const Element& { return n % 2 == 0 ? f_b : f_a; };
  constexpr int kClassMapLimit = 2000;  // tensor dimension above which cls is dropped
  std::vector<CrossedProductAlgebra> ax, bx;
  JonesOptions jo;
  jo.tol = opt.tol;
  jo.rng_seed = opt.rng_seed;
  auto floor_checks = [&](const std::string& tag, const CrossedProductAlgebra& X) {
    for (const auto& c : X.checks) g.checks.push_back({tag + "_" + c.name, c.residual, c.passed});
  };
  auto extend = [&](const std::string& tag, const SubAlgebraEmbedding& base,
                    const CrossedProductAlgebra* below, int n, bool top) {
    const ModuleAction* act = &on_factor(n);
    ModuleAction lifted;
    if (below) {
      double wd = 0.0;
      lifted = dual_action_on(*below, on_factor(n), &wd);
      add(tag + "_dual_action_well_defined", wd);
      for (const auto& c : module_algebra_checks(factor(n), lifted, tag + "_dual_action_", opt.tol))
        g.checks.push_back(c);
      act = &lifted;
    }
    jo.keep_class_map = !(top && base.ambient->dim() * factor(n).dim() > kClassMapLimit);
    CrossedProductAlgebra X = jones_extension(base, factor(n), *act, jo);
    floor_checks(tag, X);
    return X;
  };

  g.a_row.push_back(wa.algebra);
  g.b_row.push_back(Bt.sub);
  g.b_row.push_back(wb.algebra);
  g.b_step.push_back(Bt);
  for (int n = 0; n < opt.depth; ++n) {
    const bool top = n == opt.depth - 1;
    const SubAlgebraEmbedding& base = n == 0 ? At : g.a_step[n - 1];
    ax.push_back(extend("a" + std::to_string(n + 1), base, n == 0 ? nullptr : &ax[n - 1], n, top));
    g.a_row.push_back(ax.back().algebra);
    g.a_step.push_back(ax.back().i_M);
    if (n + 1 < opt.depth) {
      const SubAlgebraEmbedding& bbase = n == 0 ? Bt : g.b_step[n];
      bx.push_back(extend("b" + std::to_string(n + 2), bbase, n == 0 ? nullptr : &bx[n - 1], n + 1,
                          false));
      g.b_row.push_back(bx.back().algebra);
      g.b_step.push_back(bx.back().i_M);
    }
  }

  // Vertical embeddings B_n -> A_n.
  {
    CMat inj(wa.dim(), Bt.sub->dim());
    const Element one_a = Element::identity(wa.algebra);
    for (int k = 0; k < Bt.sub->dim(); ++k)
      inj.col(k) = da.b_on_a_left.apply(CVec(Bt.inject.col(k)), one_a).to_vector();
    g.vertical.push_back(SubAlgebraEmbedding(Bt.sub, wa.algebra, inj));
  }
  g.vertical.push_back(ax[0].i_G);
  for (int n = 2; n <= opt.depth; ++n) {
    const CrossedProductAlgebra& Y = bx[n - 2];
    const CrossedProductAlgebra& X = ax[n - 1];
    const CMat images = pure_images(Y, compose(g.vertical[n - 1], X.i_M), X.i_G);
    g.vertical.push_back(SubAlgebraEmbedding(Y.algebra, X.algebra, embed_through_lift(Y, images)));
  }
  double rv = 0.0;
  for (const auto& v : g.vertical) rv = std::max(rv, homomorphism_probe(v, rng));
  add("vertical_homomorphisms", rv);

  // Floors have the block structure of iterated basic constructions.
  {
    const auto ra = row_sizes(At, opt.depth + 1);
    auto rb = row_sizes(Bt, opt.depth);
    rb.insert(rb.begin(), Bt.sub->block_dims());
    double r = 0.0;
    for (int n = 0; n <= opt.depth; ++n) {
      if (sorted(g.a_row[n]->block_dims()) != sorted(ra[n])) r = 1.0;
      if (sorted(g.b_row[n]->block_dims()) != sorted(rb[n])) r = 1.0;
    }
    add("floor_block_structure", r);
  }

  // Traces restrict along every inclusion.
  double rt = 0.0;
  for (const auto& e : g.a_step) rt = std::max(rt, trace_consistency(e));
  for (const auto& e : g.b_step) rt = std::max(rt, trace_consistency(e));
  for (const auto& e : g.vertical) rt = std::max(rt, trace_consistency(e));
  add("trace_consistent", rt);

  // Commuting squares.
  double rinc = 0.0, rsq = 0.0, rcorner = 0.0;
  for (int n = 0; n < opt.depth; ++n) {
    const SubAlgebraEmbedding& ea = g.a_step[n];
    const SubAlgebraEmbedding& eb = g.vertical[n + 1];
    const SubAlgebraEmbedding ebn = compose(g.vertical[n], ea);
    rinc = std::max(rinc, max_abs(eb.inject * g.b_step[n].inject - ea.inject * g.vertical[n].inject));
    LadderSquare sq;
    sq.floor = n;
    auto proj = [](const SubAlgebraEmbedding& e, const Element& x) {
      return Element::from_vector(e.ambient, e.inject * e.expectation_coords(x));
    };
    for (const Element& x : test_elements(ea.ambient, rng)) {
      const Element ab = proj(ea, proj(eb, x));
      const Element ba = proj(eb, proj(ea, x));
      sq.commutation_residual = std::max(sq.commutation_residual, distance(ab, ba));
      sq.corner_residual = std::max(sq.corner_residual, distance(ab, proj(ebn, x)));
    }
    rsq = std::max(rsq, sq.commutation_residual);
    rcorner = std::max(rcorner, sq.corner_residual);
    g.squares.push_back(sq);
  }
  add("square_inclusions_commute", rinc);
  add("squares_commute", rsq);
  add("squares_corner", rcorner);

  // Rows are basic constructions: e x e = E(x) e with the Markov factor.
  auto jones = [&](const std::string& tag, const CrossedProductAlgebra& X, const Element& f,
                   const SubAlgebraEmbedding& lower, const SubAlgebraEmbedding& step) {
    const Element e = X.i_G.apply(f);
    double rj = 0.0;
    for (const Element& x : test_elements(step.sub, rng)) {
      const Element ex = Element::from_vector(step.sub, lower.inject * lower.expectation_coords(x));
      rj = std::max(rj, distance(e * step.apply(x) * e, step.apply(ex) * e));
    }
    add(tag + "_jones_relation", rj);
    const CVec ee = step.expectation_coords(e);
    add(tag + "_markov_factor",
        max_abs(ee - g.tau * Element::identity(step.sub).to_vector()));
    add(tag + "_generates_basic_construction", distance(e, X.base_projection));
    return e;
  };
  for (int n = 0; n < opt.depth; ++n) {
    const SubAlgebraEmbedding& lower = n == 0 ? At : g.a_step[n - 1];
    g.a_jones.push_back(jones("a" + std::to_string(n + 1), ax[n], projector(n), lower, g.a_step[n]));
  }
  g.b_jones.push_back(Element());
  for (int n = 1; n < opt.depth; ++n) {
    g.b_jones.push_back(
        jones("b" + std::to_string(n + 1), bx[n - 1], projector(n), g.b_step[n - 1], g.b_step[n]));
  }
  double rm = 0.0;
  for (int n = 1; n < opt.depth; ++n)
    rm = std::max(rm, distance(g.vertical[n + 1].apply(g.b_jones[n]), g.a_jones[n]));
  add("row_projectors_agree", rm);

  // Relative commutants of the grid against the algebras they should equal.
  auto commutant_case = [&](const std::string& name, const SubAlgebraEmbedding& within,
                            const SubAlgebraEmbedding& of, const SubAlgebraEmbedding& expected) {
    double rc_res = 0.0;
    const std::vector<Element> rc = commutant_in(within, of, rng, &rc_res);
    g.commutant_dims.push_back({name, static_cast<int>(rc.size())});
    double r = rc_res;
    for (const auto& z : rc) r = std::max(r, expected.distance_to_image(z));
    for (int k = 0; k < expected.sub->dim(); ++k) {
      const Element z = expected.image_of_unit(k);
      r = std::max(r, within.distance_to_image(z));
      for (int j = 0; j < of.sub->dim(); ++j) {
        const Element y = of.image_of_unit(j);
        r = std::max(r, distance(z * y, y * z));
      }
    }
    add("commutant_dim:" + name, std::abs(static_cast<int>(rc.size()) - expected.sub->dim()));
    add("commutant_equals:" + name, r);
  };
  const SubAlgebraEmbedding Bs = counital_subalgebras(wb).source;
  commutant_case("B1' cap A0 in A1", g.a_step[0], g.vertical[1], compose(At, g.a_step[0]));
  commutant_case("A0' cap B1 in A1", g.vertical[1], g.a_step[0], compose(Bs, g.vertical[1]));
  if (opt.depth >= 2) {
    commutant_case("B1' cap A in B2", bx[0].i_G, g.b_step[1], compose(ca.source, bx[0].i_G));
    commutant_case("A0' cap B2 in A2", g.vertical[2], compose(g.a_step[0], g.a_step[1]), ax[1].i_G);
  }
  if (opt.depth >= 3) {
    const CMat ab_in_b3 =
        embed_through_lift(ax[0], pure_images(ax[0], compose(bx[0].i_G, bx[1].i_M), bx[1].i_G));
    const SubAlgebraEmbedding AB_B3(ax[0].algebra, bx[1].algebra, ab_in_b3);
    commutant_case("B1' cap AB in B3", AB_B3, compose(g.b_step[1], g.b_step[2]), bx[1].i_G);
    const CMat ab_in_a3 =
        embed_through_lift(ax[0], pure_images(ax[0], compose(ax[1].i_G, ax[2].i_M), ax[2].i_G));
    const SubAlgebraEmbedding AB_A3(ax[0].algebra, ax[2].algebra, ab_in_a3);
    commutant_case("A0' cap B3 in A3", g.vertical[3],
                   compose(g.a_step[0], compose(g.a_step[1], g.a_step[2])), AB_A3);
  }
  return g;
}

Json ladder_to_json(const LadderGrid& g) {
  Json j;
  j["markov_factor"] = g.tau;
  Json a = Json::array(), b = Json::array();
  for (const auto& x : g.a_row) a.push_back(x->block_dims());
  for (const auto& x : g.b_row) b.push_back(x->block_dims());
  j["a_row_blocks"] = a;
  j["b_row_blocks"] = b;
  Json sq = Json::array();
  for (const auto& s : g.squares)
    sq.push_back({{"floor", s.floor},
                  {"commutation_residual", s.commutation_residual},
                  {"corner_residual", s.corner_residual}});
  j["squares"] = sq;
  Json mf = Json::array();
  for (const auto& e : g.a_jones) mf.push_back(e.trace().real());
  j["jones_traces"] = mf;
  Json rc = Json::object();
  for (const auto& [name, dim] : g.commutant_dims) rc[name] = dim;
  j["relative_commutant_dims"] = rc;
  Json cs = Json::array();
  for (const auto& c : g.checks)
    cs.push_back({{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}});
  j["checks"] = cs;
  j["passed"] = g.passed();
  return j;
}

}  // namespace groupoidal
