#include "qlevy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qlevy {
namespace {

Json mats_to_json(const std::vector<Mat>& mats) {
  Json arr = Json::array();
  for (const Mat& m : mats) arr.push_back(to_json(m));
  return arr;
}

std::vector<Mat> mats_from_json(const Json& j) {
  std::vector<Mat> out;
  for (const auto& m : j) out.push_back(mat_from_json(m));
  return out;
}

[[noreturn]] void schema_error(const std::string& field,
                               const std::string& why) {
  throw std::invalid_argument("schema violation at \"" + field + "\": " + why);
}

std::vector<std::vector<int>> table_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    schema_error("table", "expected a non-empty array");
  std::vector<std::vector<int>> t;
  if (j[0].is_array()) {
    for (const auto& row : j) t.push_back(row.get<std::vector<int>>());
    return t;
  }
  // flat row-major form
  std::vector<int> flat = j.get<std::vector<int>>();
  int n = static_cast<int>(std::lround(std::sqrt(double(flat.size()))));
  if (n * n != static_cast<int>(flat.size()))
    schema_error("table", "flat table length is not a perfect square");
  for (int r = 0; r < n; ++r)
    t.emplace_back(flat.begin() + r * n, flat.begin() + (r + 1) * n);
  return t;
}

}  // namespace

Json to_json(const Cx& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Vec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_json(v(i)));
  return arr;
}

Json to_json(const RowVec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_json(v(i)));
  return arr;
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const StarBialgebra& a) {
  Json j;
  j["kind"] = "bialgebra";
  j["name"] = a.name;
  j["dim"] = a.dim;
  j["labels"] = a.basis_labels;
  j["mult"] = mats_to_json(a.mult);
  j["unit"] = to_json(a.unit);
  j["coproduct"] = mats_to_json(a.cop);
  j["counit"] = to_json(a.counit);
  j["involution"] = to_json(a.involution);
  if (a.antipode) j["antipode"] = to_json(*a.antipode);
  j["flags"] = {{"coproduct_is_homomorphic", a.flags.coproduct_is_homomorphic},
                {"is_hopf", a.flags.is_hopf},
                {"is_hyper", a.flags.is_hyper}};
  if (!a.canonical_rep.empty()) j["canonical_rep"] = mats_to_json(a.canonical_rep);
  return j;
}

Json to_json(const MatrixValuedMap& m) {
  Json j;
  j["kind"] = m.target_dim == 1 ? "functional" : "matrix_map";
  j["algebra"] = m.algebra;
  j["target_dim"] = m.target_dim;
  if (m.target_dim == 1) {
    j["values"] = to_json(m.functional());
  } else {
    j["mats"] = mats_to_json(m.mats);
  }
  return j;
}

Json to_json(const StepFunction& f) {
  Json j;
  j["kind"] = "step_function";
  j["noise_dim"] = f.n_k;
  j["breakpoints"] = f.breakpoints;
  Json vals = Json::array();
  for (const Vec& v : f.values) vals.push_back(to_json(v));
  j["values"] = vals;
  return j;
}

Json to_json(const SchurmannTriple& t) {
  Json j;
  j["kind"] = "schurmann_triple";
  j["algebra"] = t.algebra;
  j["noise_dim"] = t.r;
  j["gamma"] = to_json(t.gamma);
  j["delta"] = to_json(t.delta);
  j["rho"] = mats_to_json(t.rho);
  return j;
}

Json to_json(const CpcTuple& t) {
  Json j;
  j["kind"] = "cpc_tuple";
  j["algebra"] = t.algebra;
  j["K_dim"] = t.k_dim;
  j["noise_dim"] = t.noise_dim;
  j["rho"] = mats_to_json(t.rho);
  j["D"] = to_json(t.d_op);
  j["xi"] = to_json(t.xi);
  j["d"] = to_json(t.d_vec);
  j["e"] = to_json(t.e_vec);
  j["t"] = t.t;
  j["e_nullspace_dim"] = t.e_nullspace_dim;
  return j;
}

Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& e : r.entries()) {
    Json c;
    c["name"] = e.name;
    c["residual"] = e.residual;
    c["tol"] = e.tol;
    c["pass"] = e.pass;
    if (e.informational) c["informational"] = true;
    checks.push_back(c);
  }
  Json j;
  j["checks"] = checks;
  j["pass"] = r.pass();
  j["max_residual"] = r.max_residual();
  return j;
}

Cx cx_from_json(const Json& j) {
  if (j.is_number()) return Cx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2)
    schema_error("complex", "expected [re, im]");
  return Cx(j[0].get<double>(), j[1].get<double>());
}

Vec vec_from_json(const Json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = cx_from_json(j[i]);
  return v;
}

RowVec rowvec_from_json(const Json& j) {
  RowVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = cx_from_json(j[i]);
  return v;
}

Mat mat_from_json(const Json& j) {
  const std::size_t rows = j.size();
  if (rows == 0) return Mat(0, 0);
  const std::size_t cols = j[0].size();
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) schema_error("matrix", "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = cx_from_json(j[i][c]);
  }
  return m;
}

StarBialgebra bialgebra_from_json(const Json& j) {
  StarBialgebra a;
  a.name = j.value("name", "bialgebra");
  if (!j.contains("dim")) schema_error("dim", "missing");
  a.dim = j["dim"].get<int>();
  if (j.contains("labels"))
    a.basis_labels = j["labels"].get<std::vector<std::string>>();
  else
    for (int i = 0; i < a.dim; ++i)
      a.basis_labels.push_back("e" + std::to_string(i));
  if (!j.contains("mult")) schema_error("mult", "missing");
  a.mult = mats_from_json(j["mult"]);
  if (static_cast<int>(a.mult.size()) != a.dim)
    schema_error("mult", "expected dim tensors");
  a.unit = vec_from_json(j.at("unit"));
  a.cop = mats_from_json(j.at("coproduct"));
  if (static_cast<int>(a.cop.size()) != a.dim)
    schema_error("coproduct", "expected dim tensors");
  a.counit = rowvec_from_json(j.at("counit"));
  a.involution = j.contains("involution") ? mat_from_json(j["involution"])
                                          : Mat(Mat::Identity(a.dim, a.dim));
  if (j.contains("antipode")) a.antipode = mat_from_json(j["antipode"]);
  if (j.contains("flags")) {
    const Json& f = j["flags"];
    a.flags.coproduct_is_homomorphic =
        f.value("coproduct_is_homomorphic", true);
    a.flags.is_hopf = f.value("is_hopf", a.antipode.has_value());
    a.flags.is_hyper = f.value("is_hyper", false);
  } else {
    a.flags.is_hopf = a.antipode.has_value();
  }
  if (j.contains("canonical_rep"))
    a.canonical_rep = mats_from_json(j["canonical_rep"]);
  return a;
}

MatrixValuedMap matrix_map_from_json(const Json& j) {
  MatrixValuedMap m;
  m.algebra = j.value("algebra", "");
  if (j.contains("values")) {
    m.target_dim = 1;
    RowVec f = rowvec_from_json(j["values"]);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      Mat s(1, 1);
      s(0, 0) = f(i);
      m.mats.push_back(s);
    }
    return m;
  }
  m.target_dim = j.at("target_dim").get<int>();
  m.mats = mats_from_json(j.at("mats"));
  for (const Mat& mm : m.mats)
    if (mm.rows() != m.target_dim || mm.cols() != m.target_dim)
      schema_error("mats", "matrix size does not match target_dim");
  return m;
}

StepFunction step_function_from_json(const Json& j) {
  StepFunction f;
  f.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  for (const auto& v : j.at("values")) f.values.push_back(vec_from_json(v));
  f.n_k = j.contains("noise_dim")
              ? j["noise_dim"].get<int>()
              : (f.values.empty() ? 0 : static_cast<int>(f.values[0].size()));
  for (std::size_t i = 1; i < f.breakpoints.size(); ++i)
    if (!(f.breakpoints[i] > f.breakpoints[i - 1]))
      schema_error("breakpoints", "breakpoints not strictly increasing");
  f.validate();
  return f;
}

SchurmannTriple triple_from_json(const Json& j) {
  SchurmannTriple t;
  t.algebra = j.value("algebra", "");
  t.r = j.at("noise_dim").get<int>();
  t.gamma = rowvec_from_json(j.at("gamma"));
  t.delta = mat_from_json(j.at("delta"));
  t.rho = mats_from_json(j.at("rho"));
  return t;
}

CpcTuple cpc_tuple_from_json(const Json& j) {
  CpcTuple t;
  t.algebra = j.value("algebra", "");
  t.k_dim = j.at("K_dim").get<int>();
  t.noise_dim = j.at("noise_dim").get<int>();
  t.rho = mats_from_json(j.at("rho"));
  t.d_op = mat_from_json(j.at("D"));
  t.xi = vec_from_json(j.at("xi"));
  t.d_vec = vec_from_json(j.at("d"));
  t.e_vec = vec_from_json(j.at("e"));
  t.t = j.at("t").get<double>();
  t.e_nullspace_dim = j.value("e_nullspace_dim", 0);
  return t;
}

SpecValue parse_spec(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw std::invalid_argument("parse error in " + path + ": " + ex.what());
  }
  if (!j.contains("kind")) schema_error("kind", "missing discriminator");
  const std::string kind = j["kind"].get<std::string>();

  auto gate = [&](StarBialgebra a) -> StarBialgebra {
    Report rep = validate(a, opts.tol);
    if (!rep.pass() && !opts.allow_invalid) {
      std::string bad;
      for (const auto& e : rep.entries())
        if (!e.pass) bad += (bad.empty() ? "" : ", ") + e.name;
      throw std::invalid_argument("bialgebra axiom failure: " + bad);
    }
    return a;
  };

  if (kind == "bialgebra") return gate(bialgebra_from_json(j));
  if (kind == "group_bialgebra")
    return gate(build_group_bialgebra(table_from_json(j.at("table"))));
  if (kind == "function_bialgebra")
    return gate(build_function_bialgebra(table_from_json(j.at("table"))));
  if (kind == "functional" || kind == "matrix_map" || kind == "structure_map")
    return matrix_map_from_json(j);
  if (kind == "step_function") return step_function_from_json(j);
  if (kind == "schurmann_triple") return triple_from_json(j);
  if (kind == "cpc_tuple") return cpc_tuple_from_json(j);
  schema_error("kind", "unknown kind \"" + kind + "\"");
}

std::string format_double(double x) {
  // shortest decimal that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    double back = std::strtod(buf, nullptr);
    if (back == x) return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_csv_field(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string render_csv(const CsvTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failure on " + path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qlevy
