#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/detmap.hpp"
#include "loctrans/polytope.hpp"
#include "loctrans/stochmap.hpp"

namespace loctrans {

using Json = nlohmann::ordered_json;

// malformed input; the message carries the file, line/column or field path
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

// `where` is the field path used in diagnostics
Rational rational_from_json(const Json& j, const std::string& where);
RatVector vector_from_json(const Json& j, const std::string& where);
RatMatrix matrix_from_json(const Json& j, const std::string& where, std::size_t cols = 0);
Json to_json(const Rational& q);
Json to_json(const RatVector& v);
Json to_json(const RatMatrix& m);

PartyCard card_from_json(const Json& j, const std::string& where);
Json to_json(const PartyCard& c);

Scenario scenario_from_json(const Json& j, const std::string& where = "scenario");
Json to_json(const Scenario& s);

Behavior behavior_from_json(const Json& j, const std::string& where = "");
Json to_json(const Behavior& p);
BellExpression expression_from_json(const Json& j, const std::string& where = "");
Json to_json(const BellExpression& e);

// label_base 0 or 1 applies to xi and alpha entries
DetMap detmap_from_json(const Json& j, int label_base = 1, const std::string& where = "");
Json to_json(const DetMap& m, int label_base = 1);

LocalTransformation transformation_from_json(const Json& j, const std::string& where = "");
Json to_json(const LocalTransformation& t);

HRep hrep_from_json(const Json& j, const std::string& where = "");
Json to_json(const HRep& h);
VRep vrep_from_json(const Json& j, const std::string& where = "");
Json to_json(const VRep& v);

// {"format":"cg","scenario":..,"coeffs":[..]}
Json to_cg_json(const Behavior& p);
Behavior behavior_from_cg_json(const Json& j, const std::string& where = "");

std::vector<Integer> counts_from_json(const Json& j, const std::string& where);

// cdd-style text tables: rows "b -A" (b - A x >= 0), equalities flagged by a linearity line;
// V-rows "1 v"
std::string to_ine(const HRep& h);
HRep hrep_from_ine(const std::string& text, const std::string& source = "<input>");
std::string to_ext(const VRep& v);
VRep vrep_from_ext(const std::string& text, const std::string& source = "<input>");

// comma separated positive integers, e.g. "3,3,3"
PartyCard parse_card(const std::string& s);

}  // namespace loctrans
