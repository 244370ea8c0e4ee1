// JSON serialisation of every domain value (complex numbers as [re, im]
// pairs), the "kind"-discriminated specification documents, and the
// deterministic CSV/JSON report writers.
#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "qlevy/cocycle.hpp"
#include "qlevy/schurmann.hpp"

namespace qlevy {

// Sorted-key JSON (nlohmann object maps are ordered maps).
using Json = nlohmann::json;

Json to_json(const Cx& z);
Json to_json(const Vec& v);
Json to_json(const RowVec& v);
Json to_json(const Mat& m);
Json to_json(const StarBialgebra& a);
Json to_json(const MatrixValuedMap& m);
Json to_json(const StepFunction& f);
Json to_json(const SchurmannTriple& t);
Json to_json(const CpcTuple& t);
Json to_json(const Report& r);

Cx cx_from_json(const Json& j);
Vec vec_from_json(const Json& j);
RowVec rowvec_from_json(const Json& j);
Mat mat_from_json(const Json& j);
StarBialgebra bialgebra_from_json(const Json& j);
MatrixValuedMap matrix_map_from_json(const Json& j);
StepFunction step_function_from_json(const Json& j);
SchurmannTriple triple_from_json(const Json& j);
CpcTuple cpc_tuple_from_json(const Json& j);

using SpecValue = std::variant<StarBialgebra, MatrixValuedMap, StepFunction,
                               SchurmannTriple, CpcTuple>;

struct ParseOptions {
  bool allow_invalid = false;  // skip the axiom gate on bialgebras
  double tol = kTolExact;
};

// Reads a UTF-8 JSON document with a top-level "kind" discriminator:
// bialgebra | group_bialgebra | function_bialgebra | functional |
// matrix_map | structure_map | step_function | schurmann_triple | cpc_tuple.
// Bialgebras are run through validate() with failures fatal unless
// opts.allow_invalid.
SpecValue parse_spec(const std::string& path, const ParseOptions& opts = {});

// Shortest round-trip decimal for doubles; 17 significant digits in CSV.
std::string format_double(double x);
std::string format_csv_field(double x);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Deterministic rendering (fixed column order, fixed float format).
std::string render_csv(const CsvTable& table);

void write_text_file(const std::string& path, const std::string& content);
std::string dump_json(const Json& j);  // sorted keys, 2-space indent, newline

}  // namespace qlevy
