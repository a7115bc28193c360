#include "groupoidal/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "groupoidal/crossprod.hpp"
#include "groupoidal/deform.hpp"
#include "groupoidal/tlgroupoid.hpp"

namespace groupoidal {

namespace {

constexpr const char* kStructureSchema = "whd-pair-v1";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double tol = 0.0;
  std::uint64_t seed = 42;
  std::string format = "text";
  std::string in, out, report;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--tol", c.tol, "Residual tolerance (default: GROUPOIDAL_TOL or 1e-9)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Seed for randomized checks");
  sub->add_option("--format", c.format, "Output on stdout")
      ->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--report", c.report, "Also write the JSON report to this file");
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << j.dump(2) << '\n';
  if (!f) throw IoError("cannot write " + path);
}

Json checks_json(const std::vector<CheckResult>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back({{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}});
  return a;
}

bool all_passed(const std::vector<CheckResult>& cs) {
  for (const auto& c : cs)
    if (!c.passed) return false;
  return true;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void print_table(std::ostream& out, const std::string& title, const std::vector<CheckResult>& cs) {
  out << title << '\n';
  std::size_t w = 0;
  for (const auto& c : cs) w = std::max(w, c.name.size());
  for (const auto& c : cs)
    out << "  " << (c.passed ? "ok   " : "FAIL ") << std::left << std::setw(static_cast<int>(w))
        << c.name << "  " << fmt(c.residual) << '\n';
}

Json header(const std::string& command, const Common& c) {
  return Json{{"command", command},
              {"version", kLibraryVersion},
              {"tolerance", c.tol},
              {"seed", c.seed}};
}

VerifyOptions verify_options(const Common& c) {
  VerifyOptions v;
  v.tolerance = c.tol;
  v.seed = c.seed;
  return v;
}

int finish(std::ostream& out, const Common& c, Json report, bool passed) {
  report["passed"] = passed;
  if (!c.report.empty()) write_json(c.report, report);
  if (c.format == "json") out << report.dump(2) << '\n';
  else out << (passed ? "PASS" : "FAIL") << '\n';
  return passed ? kExitPass : kExitCheckFailure;
}

int cmd_build(std::ostream& out, const Common& c, int l, int m) {
  const InclusionData d = build_inclusion(l, m);
  const TLStructure s = build_structure(d, c.tol);
  const AxiomReport ra = verify_axioms(s.A, verify_options(c));
  const AxiomReport rb = verify_axioms(s.B, verify_options(c));
  StructureFile f{s.A, s.B, s.pairing, l, m};
  if (!c.out.empty()) write_json(c.out, structure_file_to_json(f));
  Json r = header("build tl", c);
  r["inclusion"] = inclusion_to_json(d);
  r["gram_min_singular_value"] = s.gram_min_sv;
  r["gram_condition"] = s.gram_condition;
  r["construction_checks"] = checks_json(s.checks);
  r["axioms_A"] = checks_json(ra.checks);
  r["axioms_B"] = checks_json(rb.checks);
  r["connected"] = {is_connected(s.A), is_connected(s.B)};
  r["regular"] = {is_regular(s.A, c.tol), is_regular(s.B, c.tol)};
  if (c.format == "text") {
    out << "l=" << l << " m=" << m << "  dim A=" << s.A.dim() << " dim B=" << s.B.dim() << '\n';
    print_table(out, "axioms of A", ra.checks);
    print_table(out, "axioms of B", rb.checks);
  }
  return finish(out, c, r, ra.passed() && rb.passed());
}

int cmd_verify(std::ostream& out, const Common& c) {
  const Json j = read_json(c.in);
  std::vector<std::pair<std::string, WeakHopfData>> ws;
  if (j.is_object() && j.value("schema", "") == kStructureSchema) {
    ws.emplace_back("A", weak_hopf_from_json(j.at("A"), "$.A"));
    ws.emplace_back("B", weak_hopf_from_json(j.at("B"), "$.B"));
  } else {
    ws.emplace_back("structure", weak_hopf_from_json(j));
  }
  Json r = header("verify", c);
  r["input"] = c.in;
  bool passed = true;
  for (const auto& [name, w] : ws) {
    const AxiomReport rep = verify_axioms(w, verify_options(c));
    r["axioms_" + name] = checks_json(rep.checks);
    r["max_residual_" + name] = rep.max_residual();
    passed = passed && rep.passed();
    if (c.format == "text") print_table(out, "axioms of " + name, rep.checks);
  }
  return finish(out, c, r, passed);
}

int cmd_d13(std::ostream& out, const Common& c) {
  const InclusionData d = build_inclusion(4, 2);
  const TLStructure s = build_structure(d, c.tol);
  const D13Fixture fx = d13_units(d, c.tol);
  const std::vector<CheckResult> cs = d13_tables_check(fx, s.A, c.tol);
  Json r = header("d13", c);
  r["unit_relation_residual"] = fx.relation_residual;
  r["tables"] = checks_json(cs);
  if (c.format == "text") print_table(out, "published tables", cs);
  return finish(out, c, r, all_passed(cs));
}

int cmd_dual(std::ostream& out, const Common& c) {
  const Json j = read_json(c.in);
  const bool pair = j.is_object() && j.value("schema", "") == kStructureSchema;
  const StructureFile f = structure_file_from_json(j);
  std::vector<CheckResult> cs;
  auto add = [&](const std::string& n, double v) { cs.push_back({n, v, v <= c.tol}); };
  WeakHopfData D;
  if (pair) {
    DualReport rep;
    D = dual(f.A, f.pairing, &rep);
    add("product_transport", rep.product_residual);
    add("unit_transport", rep.unit_residual);
    add("star_transport", rep.star_residual);
    const int n = f.B.dim();
    add("matches_partner", intertwiner_residual(D, f.B, CMat::Identity(n, n)));
  } else {
    D = f.B;  // canonical dual of the single input
  }
  const AxiomReport ax = verify_axioms(D, verify_options(c));
  for (const auto& x : ax.checks) cs.push_back({"dual_" + x.name, x.residual, x.passed});
  if (!c.out.empty()) write_json(c.out, to_json(D));
  Json r = header("dual", c);
  r["input"] = c.in;
  r["dual_dim"] = D.dim();
  r["checks"] = checks_json(cs);
  if (c.format == "text") print_table(out, "dual structure", cs);
  return finish(out, c, r, all_passed(cs));
}

int cmd_deform(std::ostream& out, const Common& c) {
  const StructureFile f = structure_file_from_json(read_json(c.in));
  const DeformationData d = deform(f.A, f.pairing, &f.B, verify_options(c));
  if (!c.out.empty()) write_json(c.out, to_json(d.deformed));
  Json r = header("deform", c);
  r["input"] = c.in;
  r["deformation"] = deformation_to_json(d);
  r["diff"] = structure_diff(d.source, d.deformed);
  if (c.format == "text") {
    print_table(out, "k clauses", d.k_report.clauses);
    print_table(out, "deformation", d.checks);
    out << "deformed structure " << (d.axioms.passed() ? "passes" : "fails") << " the axioms, "
        << (d.regular ? "regular" : "not regular") << '\n';
    for (const char* key : {"coproduct", "counit", "antipode"}) {
      const Json& e = r["diff"][key];
      const double by = e["max_abs_change"].get<double>();
      out << "  " << key;
      if (e["changed"] == false) out << " unchanged\n";
      else out << " changed by " << fmt(by) << (by <= c.tol ? " (within tolerance)\n" : "\n");
    }
  }
  return finish(out, c, r, d.passed());
}

int cmd_cross(std::ostream& out, const Common& c, int depth) {
  const StructureFile f = structure_file_from_json(read_json(c.in));
  const DotAlgebra dot = dot_algebra(f.A, f.B, f.pairing, c.tol);
  const PairingRecovery rec = pairing_recovery(f.A, f.B, f.pairing, c.tol);
  LadderOptions lo;
  lo.depth = depth;
  lo.tol = c.tol;
  lo.rng_seed = c.seed;
  const LadderGrid g = ladder(f.A, f.B, f.pairing, lo);
  Json r = header("cross", c);
  r["input"] = c.in;
  r["depth"] = depth;
  r["dot_algebra"] = dot_algebra_to_json(dot);
  r["pairing_recovery"] = {{"applicable", rec.applicable},
                           {"residual", rec.residual},
                           {"unit_identity_residual", rec.unit_identity_residual},
                           {"unit_specialization_residual", rec.unit_specialization_residual}};
  r["ladder"] = ladder_to_json(g);
  const bool rec_ok = !rec.applicable || (rec.residual <= c.tol && rec.unit_identity_residual <= c.tol);
  if (c.format == "text") {
    out << "markov factor d^2 gamma^-2 = " << std::setprecision(12) << g.tau << '\n';
    for (const auto& sq : g.squares)
      out << "  square " << sq.floor << ": commutation " << fmt(sq.commutation_residual)
          << "  corner " << fmt(sq.corner_residual) << '\n';
    for (std::size_t n = 0; n < g.a_jones.size(); ++n)
      out << "  jones projector in floor " << n + 1 << ": trace "
          << std::setprecision(12) << g.a_jones[n].trace().real() << '\n';
    for (const auto& [name, dim] : g.commutant_dims) out << "  " << name << ": " << dim << '\n';
    if (rec.applicable) out << "  pairing recovery residual " << fmt(rec.residual) << '\n';
    std::vector<CheckResult> failed;
    for (const auto& x : dot.checks)
      if (!x.passed) failed.push_back(x);
    for (const auto& x : g.checks)
      if (!x.passed) failed.push_back(x);
    if (!failed.empty()) print_table(out, "failed checks", failed);
  }
  return finish(out, c, r, dot.passed() && g.passed() && rec_ok);
}

}  // namespace

Json structure_file_to_json(const StructureFile& s) {
  Json j{{"schema", kStructureSchema},
         {"A", to_json(s.A)},
         {"B", to_json(s.B)},
         {"pairing", matrix_to_json(s.pairing.gram)}};
  if (s.l > 0) {
    j["l"] = s.l;
    j["m"] = s.m;
  }
  return j;
}

StructureFile structure_file_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("$: expected an object");
  const std::string schema = j.value("schema", "");
  StructureFile s;
  if (schema == "whd-v1") {
    s.A = weak_hopf_from_json(j);
    auto [b, pr] = canonical_dual(s.A);
    s.B = std::move(b);
    s.pairing = std::move(pr);
    return s;
  }
  if (schema != kStructureSchema)
    throw SchemaError("$.schema: expected \"whd-v1\" or \"" + std::string(kStructureSchema) + "\"");
  for (const char* key : {"A", "B", "pairing"})
    if (!j.contains(key)) throw SchemaError(std::string("$: missing field '") + key + "'");
  s.A = weak_hopf_from_json(j["A"], "$.A");
  s.B = weak_hopf_from_json(j["B"], "$.B");
  const CMat gram = matrix_from_json(j["pairing"], "$.pairing");
  if (gram.rows() != s.A.dim() || gram.cols() != s.B.dim())
    throw SchemaError("$.pairing: expected a dim A x dim B matrix");
  s.pairing = Pairing{s.A.algebra, s.B.algebra, gram};
  s.l = j.value("l", 0);
  s.m = j.value("m", 0);
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite quantum groupoids from Temperley-Lieb towers"};
  app.name("groupoidal");
  app.require_subcommand(1);
  app.set_version_flag("--version", kLibraryVersion);

  Common c;
  int l = 0, m = 0, depth = LadderOptions{}.depth;

  auto* build = app.add_subcommand("build", "Build the structures of a tower");
  build->require_subcommand(1);
  auto* tl = build->add_subcommand("tl", "Depth-2 inclusion P_0 < P_m of the A_l tower");
  tl->add_option("--l", l, "Coxeter parameter l >= 3")->required();
  tl->add_option("--m", m, "Inclusion step m >= 1")->required();
  tl->add_option("--out", c.out, "Write both structures and the pairing here");
  add_common(tl, c);

  auto* verify = app.add_subcommand("verify", "Check the axioms of a serialized structure");
  verify->add_option("--in", c.in, "whd-v1 or structure pair document")->required();
  add_common(verify, c);

  auto* d13 = app.add_subcommand("d13", "Compare the dimension-13 example with its tables");
  add_common(d13, c);
  auto* check = app.add_subcommand("check", "Golden comparisons");
  check->require_subcommand(1);
  auto* check_d13 = check->add_subcommand("d13", "Same as the top-level d13 command");
  add_common(check_d13, c);

  auto* dualc = app.add_subcommand("dual", "Dual structure through the pairing");
  dualc->add_option("--in", c.in, "Input document")->required();
  dualc->add_option("--out", c.out, "Write the dual structure here");
  add_common(dualc, c);

  auto* deformc = app.add_subcommand("deform", "Regular deformation");
  deformc->add_option("--in", c.in, "Input document")->required();
  deformc->add_option("--out", c.out, "Write the deformed structure here");
  add_common(deformc, c);

  auto* cross = app.add_subcommand("cross", "Crossed product and finite ladder");
  cross->add_option("--in", c.in, "Input document")->required();
  cross->add_option("--depth", depth, "Ladder depth")->check(CLI::Range(1, 8));
  add_common(cross, c);

  std::vector<std::string> argv_store{"groupoidal"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitIo;
  }
  if (!(c.tol > 0.0)) c.tol = default_tolerance();

  try {
    if (*tl) return cmd_build(out, c, l, m);
    if (*verify) return cmd_verify(out, c);
    if (*d13 || *check_d13) return cmd_d13(out, c);
    if (*dualc) return cmd_dual(out, c);
    if (*deformc) return cmd_deform(out, c);
    if (*cross) return cmd_cross(out, c, depth);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Json::exception& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConstructionError& e) {
    err << "construction failed: " << e.what() << '\n';
    return kExitConstruction;
  } catch (const AlgebraError& e) {
    err << "construction failed: " << e.what() << '\n';
    return kExitConstruction;
  }
  return kExitIo;
}

}  // namespace groupoidal
