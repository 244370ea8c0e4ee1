// qlevy: command-line laboratory for quantum stochastic convolution cocycles
// on finite-dimensional *-bialgebras.
//
// Commands mirror the library operations one-to-one:
//   validate, haar, expstar, reconstruct, evaluate, check-multiplicative,
//   perturb, dilate, stinespring, opposite-check.
// Exit status: 0 all verdicts pass, 1 verdict failure, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qlevy/dilation.hpp"
#include "qlevy/io.hpp"

namespace {

using namespace qlevy;

double env_tol(double fallback) {
  if (const char* s = std::getenv("QLEVY_TOL")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s && v > 0) return v;
  }
  return fallback;
}

StarBialgebra load_bialgebra(const std::string& path, bool allow_invalid,
                             double tol) {
  ParseOptions opts;
  opts.allow_invalid = allow_invalid;
  opts.tol = tol;
  SpecValue v = parse_spec(path, opts);
  if (auto* a = std::get_if<StarBialgebra>(&v)) return *a;
  throw std::invalid_argument(path + " does not describe a bialgebra");
}

MatrixValuedMap load_map(const std::string& path) {
  SpecValue v = parse_spec(path);
  if (auto* m = std::get_if<MatrixValuedMap>(&v)) return *m;
  throw std::invalid_argument(path + " does not describe a functional or map");
}

StepFunction load_step(const std::string& path) {
  SpecValue v = parse_spec(path);
  if (auto* f = std::get_if<StepFunction>(&v)) return *f;
  throw std::invalid_argument(path + " does not describe a step function");
}

SchurmannTriple load_triple(const std::string& path) {
  SpecValue v = parse_spec(path);
  if (auto* t = std::get_if<SchurmannTriple>(&v)) return *t;
  throw std::invalid_argument(path + " does not describe a Schurmann triple");
}

CpcTuple load_tuple(const std::string& path) {
  SpecValue v = parse_spec(path);
  if (auto* t = std::get_if<CpcTuple>(&v)) return *t;
  throw std::invalid_argument(path + " does not describe a CPC tuple");
}

EuclideanElement load_euclid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j = Json::parse(in);
  EuclideanElement e;
  e.mu = j.value("mu", 0.0);
  e.v = vec_from_json(j.at("v"));
  e.big_v = mat_from_json(j.at("V"));
  return e;
}

void emit(const std::optional<std::string>& out, const std::string& content) {
  if (out)
    write_text_file(*out, content);
  else
    std::cout << content;
}

int report_exit(const Report& rep) { return rep.pass() ? 0 : 1; }

int cmd_validate(const std::string& in, const std::optional<std::string>& out,
                 double tol) {
  StarBialgebra a = load_bialgebra(in, /*allow_invalid=*/true, tol);
  Report rep = validate(a, tol);
  emit(out, dump_json(to_json(rep)));
  for (const auto& e : rep.entries())
    if (!e.pass)
      std::cerr << "axiom failed: " << e.name << " residual " << e.residual
                << "\n";
  return report_exit(rep);
}

int cmd_haar(const std::string& in, const std::optional<std::string>& out,
             double tol, bool allow_invalid) {
  StarBialgebra a = load_bialgebra(in, allow_invalid, tol);
  std::optional<HaarResult> h = haar_state(a, tol);
  Json j;
  j["found"] = h.has_value();
  if (h) {
    j["state"] = to_json(h->state);
    j["invariance_residual"] = h->invariance_residual;
    j["gram_min_eigenvalue"] = h->gram_min_eigenvalue;
  }
  emit(out, dump_json(j));
  return h ? 0 : 1;
}

int cmd_expstar(const std::string& in, const std::string& gamma_path, double t,
                const std::string& method, double tol,
                const std::optional<std::string>& out, bool allow_invalid) {
  StarBialgebra a = load_bialgebra(in, allow_invalid, tol);
  RowVec gamma = load_map(gamma_path).functional();
  CsvTable table;
  table.columns = {"basis_label", "t", "re", "im", "method", "tail_bound"};
  bool pass = true;
  auto add_rows = [&](const RowVec& f, const std::string& m, double bound) {
    for (int i = 0; i < a.dim; ++i)
      table.rows.push_back({a.basis_labels[i], format_csv_field(t),
                            format_csv_field(f(i).real()),
                            format_csv_field(f(i).imag()), m,
                            format_csv_field(bound)});
  };
  RowVec series, semigroup;
  if (method == "series" || method == "both") {
    ExpStarResult r = exp_star(a, gamma, t, ExpStarMethod::kSeries);
    series = r.functional;
    add_rows(series, "series", r.achieved_bound);
  }
  if (method == "semigroup" || method == "both") {
    semigroup = exp_star(a, gamma, t, ExpStarMethod::kSemigroup).functional;
    add_rows(semigroup, "semigroup", 0.0);
  }
  if (method == "both")
    pass = (series - semigroup).cwiseAbs().maxCoeff() <= 1e-9;
  emit(out, render_csv(table));
  return pass ? 0 : 1;
}

int cmd_reconstruct(const std::string& in, const std::string& gamma_path,
                    const std::optional<std::string>& out, double tol,
                    bool allow_invalid) {
  StarBialgebra a = load_bialgebra(in, allow_invalid, tol);
  RowVec gamma = load_map(gamma_path).functional();
  SchurmannTriple t = gns_reconstruct(a, gamma);
  Report rep = check_triple(a, t, 1e-9);
  Json j = to_json(t);
  j["report"] = to_json(rep);
  emit(out, dump_json(j));
  return report_exit(rep);
}

int cmd_evaluate(const std::string& in, const std::string& phi_path,
                 const std::string& f_path, const std::string& g_path,
                 double t, const std::string& method, int nmax,
                 const std::optional<std::string>& out, double tol,
                 bool allow_invalid) {
  StarBialgebra a = load_bialgebra(in, allow_invalid, tol);
  CocycleSpec spec = CocycleSpec::from_generator(a, load_map(phi_path));
  StepFunction f = load_step(f_path);
  StepFunction g = load_step(g_path);
  CsvTable table;
  table.columns = {"basis_label", "t", "re", "im", "method", "tail_bound"};
  bool pass = true;
  for (int i = 0; i < a.dim; ++i) {
    Element x = Element::Unit(a.dim, i);
    std::optional<Cx> semi;
    std::optional<GuichardetValue> gui;
    if (method == "semigroup" || method == "both")
      semi = evaluate_semigroup_decomposition(spec, x, f, g, t);
    if (method == "guichardet" || method == "both") {
      MatrixSumKernel k = kernel_from_generator(spec, x, nmax);
      gui = evaluate_guichardet(k, f, g, t, nmax);
    }
    if (semi)
      table.rows.push_back({a.basis_labels[i], format_csv_field(t),
                            format_csv_field(semi->real()),
                            format_csv_field(semi->imag()), "semigroup",
                            format_csv_field(0.0)});
    if (gui)
      table.rows.push_back({a.basis_labels[i], format_csv_field(t),
                            format_csv_field(gui->value.real()),
                            format_csv_field(gui->value.imag()), "guichardet",
                            format_csv_field(gui->tail_bound)});
    if (semi && gui)
      pass = pass &&
             std::abs(*semi - gui->value) <= gui->tail_bound + 1e-8;
  }
  emit(out, render_csv(table));
  return pass ? 0 : 1;
}

int cmd_check_multiplicative(const std::string& in, const std::string& phi_path,
                             int nmax, double tol,
                             const std::optional<std::string>& out) {
  StarBialgebra a = load_bialgebra(in, false, kTolExact);
  CocycleSpec spec = CocycleSpec::from_generator(a, load_map(phi_path));
  Report rep = check_multiplicative(spec, nmax, tol);
  emit(out, dump_json(to_json(rep)));
  return report_exit(rep);
}

int cmd_perturb(const std::string& in, const std::string& triple_path,
                const std::string& euclid_path,
                const std::optional<std::string>& out, double tol) {
  StarBialgebra a = load_bialgebra(in, false, tol);
  SchurmannTriple t = load_triple(triple_path);
  EuclideanElement e = load_euclid(euclid_path);
  SchurmannTriple moved = euclidean_action(a, t, e);
  Report rep = check_triple(a, moved, 1e-9);
  Json j = to_json(moved);
  j["report"] = to_json(rep);
  emit(out, dump_json(j));
  return report_exit(rep);
}

int cmd_dilate(const std::string& in, const std::string& tuple_path,
               const std::optional<std::string>& out, double tol) {
  StarBialgebra a = load_bialgebra(in, false, kTolExact);
  CpcTuple tup = load_tuple(tuple_path);
  DilationResult r = dilate_cpc(a, tup, tol);
  Json j;
  j["enlarged_noise_dim"] = r.enlarged_noise_dim;
  j["psi"] = to_json(r.psi);
  for (const auto& e : r.report.entries())
    if (e.name.rfind("homprecise", 0) == 0) j[e.name] = e.residual;
  j["report"] = to_json(r.report);
  emit(out, dump_json(j));
  return report_exit(r.report);
}

int cmd_stinespring(const std::string& in, const std::string& tuple_path,
                    const std::optional<std::string>& b_path,
                    const std::optional<std::string>& out, double tol) {
  StarBialgebra a = load_bialgebra(in, false, kTolExact);
  CpcTuple tup = load_tuple(tuple_path);
  Mat b = Mat::Zero(tup.noise_dim, tup.k_dim);
  if (b_path) {
    std::ifstream bin(*b_path);
    if (!bin) throw std::runtime_error("cannot open " + *b_path);
    b = mat_from_json(Json::parse(bin));
  }
  StinespringResult r = stinespring_generators(a, tup, b, tol);
  Json j;
  j["theta"] = to_json(r.theta);
  j["tau"] = to_json(r.tau);
  j["report"] = to_json(r.report);
  emit(out, dump_json(j));
  return report_exit(r.report);
}

int cmd_opposite_check(const std::string& in, const std::string& phi_path,
                       const std::string& f_path, const std::string& g_path,
                       double t, const std::optional<std::string>& out,
                       double tol) {
  StarBialgebra a = load_bialgebra(in, false, kTolExact);
  MatrixValuedMap phi = load_map(phi_path);
  CocycleSpec spec = CocycleSpec::from_generator(a, phi);
  StarBialgebra aop = opposite(a);
  MatrixValuedMap phi_op = phi;
  phi_op.algebra = aop.name;
  CocycleSpec spec_op = CocycleSpec::from_generator(aop, phi_op);
  StepFunction f = load_step(f_path);
  StepFunction g = load_step(g_path);
  Report rep;
  double r1 = 0.0, r2 = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    Element x = Element::Unit(a.dim, i);
    Cx opp = evaluate_opposite(spec, x, f, g, t);
    Cx via_opposite_algebra = evaluate_semigroup_decomposition(spec_op, x, f, g, t);
    Cx via_reversal = evaluate_semigroup_decomposition(
        spec, x, time_reverse(f, t), time_reverse(g, t), t);
    r1 = std::max(r1, std::abs(opp - via_opposite_algebra));
    r2 = std::max(r2, std::abs(opp - via_reversal));
  }
  rep.add("opposite_vs_opposite_coalgebra", r1, tol);
  rep.add("opposite_vs_time_reversal", r2, tol);
  emit(out, dump_json(to_json(rep)));
  return report_exit(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for QS convolution cocycles"};
  app.require_subcommand(1);
  double tol = env_tol(kTolExact);

  std::string in, gamma_path, phi_path, f_path, g_path, triple_path,
      tuple_path, euclid_path;
  std::optional<std::string> out, b_path;
  double t = 1.0;
  int nmax = 4;
  std::string method = "both";
  bool allow_invalid = false;

  auto* validate_cmd = app.add_subcommand("validate", "check every axiom");
  validate_cmd->add_option("--in", in, "bialgebra document")->required();
  validate_cmd->add_option("--out", out, "report path (stdout if absent)");

  auto* haar_cmd = app.add_subcommand("haar", "solve for the Haar state");
  haar_cmd->add_option("--in", in, "bialgebra document")->required();
  haar_cmd->add_option("--out", out, "result path (stdout if absent)");
  haar_cmd->add_flag("--allow-invalid", allow_invalid);

  auto* expstar_cmd =
      app.add_subcommand("expstar", "star-exponential of a functional");
  expstar_cmd->add_option("--in", in, "bialgebra document")->required();
  expstar_cmd->add_option("--gamma", gamma_path, "generator functional")->required();
  expstar_cmd->add_option("--t", t, "time parameter")->required();
  expstar_cmd->add_option("--method", method, "evaluation route")
      ->check(CLI::IsMember({"series", "semigroup", "both"}));
  expstar_cmd->add_option("--out", out, "CSV path (stdout if absent)");
  expstar_cmd->add_flag("--allow-invalid", allow_invalid);

  auto* reconstruct_cmd =
      app.add_subcommand("reconstruct", "GNS Schurmann triple from gamma");
  reconstruct_cmd->add_option("--in", in, "bialgebra document")->required();
  reconstruct_cmd->add_option("--gamma", gamma_path, "conditionally positive functional")->required();
  reconstruct_cmd->add_option("--out", out, "triple path (stdout if absent)");
  reconstruct_cmd->add_flag("--allow-invalid", allow_invalid);

  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "cocycle matrix elements");
  evaluate_cmd->add_option("--in", in, "bialgebra document")->required();
  evaluate_cmd->add_option("--phi", phi_path, "generator (structure map)")->required();
  evaluate_cmd->add_option("--f", f_path, "left step function")->required();
  evaluate_cmd->add_option("--g", g_path, "right step function")->required();
  evaluate_cmd->add_option("--t", t, "evaluation time")->required();
  evaluate_cmd->add_option("--method", method, "evaluation route")
      ->check(CLI::IsMember({"semigroup", "guichardet", "both"}));
  evaluate_cmd->add_option("--nmax", nmax, "kernel truncation level");
  evaluate_cmd->add_option("--out", out, "CSV path (stdout if absent)");
  evaluate_cmd->add_flag("--allow-invalid", allow_invalid);

  auto* multiplicative_cmd = app.add_subcommand(
      "check-multiplicative", "kernel product multiplicativity");
  multiplicative_cmd->add_option("--in", in, "bialgebra document")->required();
  multiplicative_cmd->add_option("--phi", phi_path, "generator (structure map)")->required();
  multiplicative_cmd->add_option("--nmax", nmax, "kernel truncation level");
  multiplicative_cmd->add_option("--tol", tol, "pass tolerance");
  multiplicative_cmd->add_option("--out", out, "report path (stdout if absent)");

  auto* perturb_cmd =
      app.add_subcommand("perturb", "Euclidean action on a triple");
  perturb_cmd->add_option("--in", in, "bialgebra document")->required();
  perturb_cmd->add_option("--triple", triple_path, "Schurmann triple")->required();
  perturb_cmd->add_option("--euclid", euclid_path, "{mu, v, V} document")->required();
  perturb_cmd->add_option("--out", out, "triple path (stdout if absent)");

  auto* dilate_cmd = app.add_subcommand("dilate", "homomorphic dilation");
  dilate_cmd->add_option("--in", in, "bialgebra document")->required();
  dilate_cmd->add_option("--tuple", tuple_path, "CPC tuple")->required();
  dilate_cmd->add_option("--out", out, "report path (stdout if absent)");

  auto* stinespring_cmd =
      app.add_subcommand("stinespring", "Stinespring generators");
  stinespring_cmd->add_option("--in", in, "bialgebra document")->required();
  stinespring_cmd->add_option("--tuple", tuple_path, "CPC tuple")->required();
  stinespring_cmd->add_option("--B", b_path, "contraction block (JSON matrix)");
  stinespring_cmd->add_option("--out", out, "report path (stdout if absent)");

  auto* opposite_cmd =
      app.add_subcommand("opposite-check", "opposite cocycle identities");
  opposite_cmd->add_option("--in", in, "bialgebra document")->required();
  opposite_cmd->add_option("--phi", phi_path, "generator (structure map)")->required();
  opposite_cmd->add_option("--f", f_path, "left step function")->required();
  opposite_cmd->add_option("--g", g_path, "right step function")->required();
  opposite_cmd->add_option("--t", t, "evaluation time")->required();
  opposite_cmd->add_option("--out", out, "report path (stdout if absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(in, out, tol);
    if (haar_cmd->parsed()) return cmd_haar(in, out, tol, allow_invalid);
    if (expstar_cmd->parsed())
      return cmd_expstar(in, gamma_path, t, method, tol, out, allow_invalid);
    if (reconstruct_cmd->parsed())
      return cmd_reconstruct(in, gamma_path, out, tol, allow_invalid);
    if (evaluate_cmd->parsed())
      return cmd_evaluate(in, phi_path, f_path, g_path, t, method, nmax, out,
                          tol, allow_invalid);
    if (multiplicative_cmd->parsed())
      return cmd_check_multiplicative(in, phi_path, nmax, tol, out);
    if (perturb_cmd->parsed())
      return cmd_perturb(in, triple_path, euclid_path, out, tol);
    if (dilate_cmd->parsed()) return cmd_dilate(in, tuple_path, out, tol);
    if (stinespring_cmd->parsed())
      return cmd_stinespring(in, tuple_path, b_path, out, tol);
    if (opposite_cmd->parsed())
      return cmd_opposite_check(in, phi_path, f_path, g_path, t, out, tol);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
