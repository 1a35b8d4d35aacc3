#include "loctrans/io.hpp"

#include <fstream>
#include <sstream>

#include "loctrans/subspaces.hpp"

namespace loctrans {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError((where.empty() ? std::string("input") : where) + ": " + what);
}

std::string key_path(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }
std::string idx(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(key_path(where, key), "missing field");
  return *it;
}

const Json& array_of(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::vector<int> ints_from_json(const Json& j, const std::string& where) {
  std::vector<int> out;
  for (std::size_t i = 0; i < array_of(j, where).size(); ++i) out.push_back(int_from_json(j[i], idx(where, i)));
  return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

Rational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rational string such as \"1/2\" or an integer");
}

RatVector vector_from_json(const Json& j, const std::string& where) {
  RatVector v;
  for (std::size_t i = 0; i < array_of(j, where).size(); ++i) v.push_back(rational_from_json(j[i], idx(where, i)));
  return v;
}

RatMatrix matrix_from_json(const Json& j, const std::string& where, std::size_t cols) {
  std::vector<RatVector> rows;
  for (std::size_t i = 0; i < array_of(j, where).size(); ++i) {
    rows.push_back(vector_from_json(j[i], idx(where, i)));
    if (i == 0 && cols == 0) cols = rows[0].size();
    if (rows.back().size() != cols)
      fail(idx(where, i), "row has " + std::to_string(rows.back().size()) + " entries, expected " + std::to_string(cols));
  }
  return RatMatrix::from_rows(rows, cols);
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

Json to_json(const RatMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

PartyCard card_from_json(const Json& j, const std::string& where) {
  auto outs = ints_from_json(j, where);
  try {
    return PartyCard(outs);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

Json to_json(const PartyCard& c) { return Json(c.outputs()); }

Scenario scenario_from_json(const Json& j, const std::string& where) {
  const Json& pj = array_of(field(j, "parties", where), key_path(where, "parties"));
  std::vector<PartyCard> parties;
  for (std::size_t i = 0; i < pj.size(); ++i) parties.push_back(card_from_json(pj[i], idx(key_path(where, "parties"), i)));
  std::vector<Scenario::Edge> edges;
  if (j.contains("signaling")) {
    std::string w = key_path(where, "signaling");
    const Json& sj = array_of(j["signaling"], w);
    for (std::size_t i = 0; i < sj.size(); ++i) {
      auto e = ints_from_json(sj[i], idx(w, i));
      if (e.size() != 2) fail(idx(w, i), "expected a pair [from, to]");
      for (int v : e)
        if (v < 0 || static_cast<std::size_t>(v) >= parties.size())
          fail(idx(w, i), "party index " + std::to_string(v) + " out of range (zero-based)");
      edges.emplace_back(e[0], e[1]);
    }
  }
  try {
    return Scenario(std::move(parties), edges);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

Json to_json(const Scenario& s) {
  Json j;
  Json p = Json::array();
  for (const auto& c : s.parties()) p.push_back(to_json(c));
  j["parties"] = p;
  Json e = Json::array();
  for (const auto& [a, b] : s.signaling()) e.push_back({a, b});
  j["signaling"] = e;
  return j;
}

Behavior behavior_from_json(const Json& j, const std::string& where) {
  Scenario s = scenario_from_json(field(j, "scenario", where), key_path(where, "scenario"));
  RatVector v = vector_from_json(field(j, "coeffs", where), key_path(where, "coeffs"));
  if (v.size() != s.dim())
    fail(key_path(where, "coeffs"), "has " + std::to_string(v.size()) + " entries, the scenario needs " + std::to_string(s.dim()));
  return Behavior(std::move(s), std::move(v));
}

Json to_json(const Behavior& p) {
  Json j;
  j["scenario"] = to_json(p.scenario());
  j["coeffs"] = to_json(p.coeffs());
  return j;
}

BellExpression expression_from_json(const Json& j, const std::string& where) {
  Scenario s = scenario_from_json(field(j, "scenario", where), key_path(where, "scenario"));
  RatVector v = vector_from_json(field(j, "coeffs", where), key_path(where, "coeffs"));
  if (v.size() != s.dim())
    fail(key_path(where, "coeffs"), "has " + std::to_string(v.size()) + " entries, the scenario needs " + std::to_string(s.dim()));
  std::optional<Rational> bound;
  if (j.contains("bound") && !j["bound"].is_null()) bound = rational_from_json(j["bound"], key_path(where, "bound"));
  return BellExpression(std::move(s), std::move(v), bound);
}

Json to_json(const BellExpression& e) {
  Json j;
  j["scenario"] = to_json(e.scenario());
  j["coeffs"] = to_json(e.coeffs());
  if (e.bound()) j["bound"] = to_string(*e.bound());
  return j;
}

DetMap detmap_from_json(const Json& j, int label_base, const std::string& where) {
  if (label_base != 0 && label_base != 1) fail(where, "label base must be 0 or 1");
  PartyCard src = card_from_json(field(j, "source", where), key_path(where, "source"));
  PartyCard tgt = card_from_json(field(j, "target", where), key_path(where, "target"));
  auto xi = ints_from_json(field(j, "xi", where), key_path(where, "xi"));
  const Json& aj = array_of(field(j, "alphas", where), key_path(where, "alphas"));
  std::vector<std::vector<int>> alphas;
  for (std::size_t i = 0; i < aj.size(); ++i) alphas.push_back(ints_from_json(aj[i], idx(key_path(where, "alphas"), i)));
  int shift = 1 - label_base;
  for (auto& v : xi) v += shift;
  for (auto& a : alphas)
    for (auto& v : a) v += shift;
  try {
    return DetMap(src, tgt, xi, alphas);
  } catch (const std::exception& e) {
    fail(where.empty() ? "map" : where, e.what());
  }
}

Json to_json(const DetMap& m, int label_base) {
  int shift = label_base - 1;
  Json j;
  j["source"] = to_json(m.source());
  j["target"] = to_json(m.target());
  Json xi = Json::array();
  for (int v : m.xi()) xi.push_back(v + shift);
  j["xi"] = xi;
  Json al = Json::array();
  for (const auto& a : m.alphas()) {
    Json r = Json::array();
    for (int v : a) r.push_back(v + shift);
    al.push_back(r);
  }
  j["alphas"] = al;
  return j;
}

LocalTransformation transformation_from_json(const Json& j, const std::string& where) {
  PartyCard src = card_from_json(field(j, "source", where), key_path(where, "source"));
  PartyCard tgt = card_from_json(field(j, "target", where), key_path(where, "target"));
  RatMatrix m = matrix_from_json(field(j, "matrix", where), key_path(where, "matrix"), src.dim());
  if (m.rows() != tgt.dim() || m.cols() != src.dim())
    fail(key_path(where, "matrix"), "shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                   std::to_string(tgt.dim()) + "x" + std::to_string(src.dim()));
  return LocalTransformation(src, tgt, m);
}

Json to_json(const LocalTransformation& t) {
  Json j;
  j["source"] = to_json(t.source());
  j["target"] = to_json(t.target());
  j["matrix"] = to_json(t.matrix());
  return j;
}

HRep hrep_from_json(const Json& j, const std::string& where) {
  HRep h;
  bool have_dim = j.is_object() && j.contains("dim");
  if (have_dim) {
    int d = int_from_json(j["dim"], key_path(where, "dim"));
    if (d < 0) fail(key_path(where, "dim"), "negative dimension");
    h.dim = static_cast<std::size_t>(d);
  }
  auto part = [&](const char* name, const char* rhs, RatMatrix& A, RatVector& b) {
    std::string w = key_path(where, name);
    if (!j.contains(name)) {
      A = RatMatrix(0, h.dim);
      return;
    }
    const Json& pj = j[name];
    const Json& aj = field(pj, "A", w);
    if (!have_dim && !aj.empty() && aj[0].is_array()) {
      h.dim = aj[0].size();
      have_dim = true;
    }
    A = matrix_from_json(aj, key_path(w, "A"), h.dim);
    b = vector_from_json(field(pj, rhs, w), key_path(w, rhs));
    if (b.size() != A.rows()) fail(key_path(w, rhs), "length does not match the number of rows of A");
  };
  if (!j.is_object()) fail(where, "expected an object");
  part("equalities", "b", h.eq_A, h.eq_b);
  part("inequalities", "c", h.ineq_A, h.ineq_c);
  if (h.eq_A.cols() != h.dim) h.eq_A = RatMatrix(0, h.dim);
  return h;
}

Json to_json(const HRep& h) {
  Json j;
  j["dim"] = h.dim;
  j["equalities"] = {{"A", to_json(h.eq_A)}, {"b", to_json(h.eq_b)}};
  j["inequalities"] = {{"A", to_json(h.ineq_A)}, {"c", to_json(h.ineq_c)}};
  return j;
}

VRep vrep_from_json(const Json& j, const std::string& where) {
  VRep v;
  const Json& vj = array_of(field(j, "vertices", where), key_path(where, "vertices"));
  if (j.contains("dim")) v.dim = static_cast<std::size_t>(int_from_json(j["dim"], key_path(where, "dim")));
  else if (!vj.empty()) v.dim = vj[0].size();
  for (std::size_t i = 0; i < vj.size(); ++i) {
    v.vertices.push_back(vector_from_json(vj[i], idx(key_path(where, "vertices"), i)));
    if (v.vertices.back().size() != v.dim) fail(idx(key_path(where, "vertices"), i), "wrong length");
  }
  return v;
}

Json to_json(const VRep& v) {
  Json j;
  j["dim"] = v.dim;
  Json a = Json::array();
  for (const auto& x : v.vertices) a.push_back(to_json(x));
  j["vertices"] = a;
  return j;
}

Json to_cg_json(const Behavior& p) {
  Json j;
  j["format"] = "cg";
  j["scenario"] = to_json(p.scenario());
  j["coeffs"] = to_json(to_cg(p));
  return j;
}

Behavior behavior_from_cg_json(const Json& j, const std::string& where) {
  Scenario s = scenario_from_json(field(j, "scenario", where), key_path(where, "scenario"));
  RatVector v = vector_from_json(field(j, "coeffs", where), key_path(where, "coeffs"));
  try {
    return from_cg(s, v);
  } catch (const std::invalid_argument& e) {
    fail(key_path(where, "coeffs"), e.what());
  }
}

std::vector<Integer> counts_from_json(const Json& j, const std::string& where) {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < array_of(j, where).size(); ++i) {
    const Json& e = j[i];
    std::string w = idx(where, i);
    if (e.is_number_integer()) {
      out.emplace_back(e.get<long>());
    } else if (e.is_string()) {
      Integer z;
      if (z.set_str(e.get<std::string>(), 10) != 0) fail(w, "not an integer");
      out.push_back(z);
    } else {
      fail(w, "expected an integer count");
    }
  }
  return out;
}

namespace {

void write_row(std::ostringstream& os, const Rational& lead, const RatVector& rest, bool negate) {
  os << ' ' << to_string(lead);
  for (const auto& q : rest) os << ' ' << to_string(negate ? Rational(-q) : q);
  os << '\n';
}

struct Table {
  std::vector<RatVector> rows;
  std::vector<std::size_t> linearity;  // 1-based
  std::size_t cols = 0;
};

Table read_table(const std::string& text, const std::string& source, const char* kind) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  Table t;
  bool began = false, ended = false, header = false, saw_kind = false;
  std::size_t m = 0;
  auto err = [&](const std::string& what) -> InputError {
    return InputError(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find_first_of("*"); c == 0) continue;
    std::istringstream ls(line);
    std::string w;
    if (!(ls >> w)) continue;
    if (ended) continue;
    if (!began) {
      if (w == kind) saw_kind = true;
      else if (w == "linearity") {
        std::size_t k;
        if (!(ls >> k)) throw err("linearity count expected");
        for (std::size_t i = 0; i < k; ++i) {
          std::size_t r;
          if (!(ls >> r) || r == 0) throw err("bad linearity index");
          t.linearity.push_back(r);
        }
      } else if (w == "begin") {
        began = true;
      }
      continue;
    }
    if (!header) {
      std::string num;
      try {
        m = std::stoul(w);
      } catch (...) {
        throw err("expected \"rows cols rational|integer\"");
      }
      if (!(ls >> t.cols >> num) || (num != "rational" && num != "integer")) throw err("expected \"rows cols rational\"");
      header = true;
      continue;
    }
    if (w == "end") {
      ended = true;
      continue;
    }
    RatVector row;
    std::string tok = w;
    do {
      try {
        row.push_back(parse_rational(tok));
      } catch (const std::invalid_argument&) {
        throw err("bad number \"" + tok + "\"");
      }
    } while (ls >> tok);
    if (row.size() != t.cols) throw err("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(t.cols));
    t.rows.push_back(std::move(row));
  }
  if (!saw_kind) throw InputError(source + ": missing \"" + std::string(kind) + "\" line");
  if (!began || !header) throw InputError(source + ": missing begin/header");
  if (!ended) throw InputError(source + ": missing end");
  if (t.rows.size() != m) throw InputError(source + ": header announces " + std::to_string(m) + " rows, found " + std::to_string(t.rows.size()));
  if (t.cols == 0) throw InputError(source + ": zero columns");
  for (auto r : t.linearity)
    if (r > m) throw InputError(source + ": linearity index " + std::to_string(r) + " out of range");
  return t;
}

}  // namespace

std::string to_ine(const HRep& h) {
  std::ostringstream os;
  os << "H-representation\n";
  std::size_t ne = h.eq_A.rows(), ni = h.ineq_A.rows();
  if (ne > 0) {
    os << "linearity " << ne;
    for (std::size_t i = 1; i <= ne; ++i) os << ' ' << i;
    os << '\n';
  }
  os << "begin\n " << ne + ni << ' ' << h.dim + 1 << " rational\n";
  for (std::size_t i = 0; i < ne; ++i) write_row(os, h.eq_b[i], h.eq_A.row(i), true);
  for (std::size_t i = 0; i < ni; ++i) write_row(os, h.ineq_c[i], h.ineq_A.row(i), true);
  os << "end\n";
  return os.str();
}

HRep hrep_from_ine(const std::string& text, const std::string& source) {
  Table t = read_table(text, source, "H-representation");
  std::vector<bool> lin(t.rows.size(), false);
  for (auto r : t.linearity) lin[r - 1] = true;
  HRep h;
  h.dim = t.cols - 1;
  std::vector<RatVector> eq, in;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    RatVector a(r.begin() + 1, r.end());
    for (auto& q : a) q = -q;
    if (lin[i]) {
      eq.push_back(std::move(a));
      h.eq_b.push_back(r[0]);
    } else {
      in.push_back(std::move(a));
      h.ineq_c.push_back(r[0]);
    }
  }
  h.eq_A = RatMatrix::from_rows(eq, h.dim);
  h.ineq_A = RatMatrix::from_rows(in, h.dim);
  return h;
}

std::string to_ext(const VRep& v) {
  std::ostringstream os;
  os << "V-representation\nbegin\n " << v.vertices.size() << ' ' << v.dim + 1 << " rational\n";
  for (const auto& x : v.vertices) write_row(os, Rational(1), x, false);
  os << "end\n";
  return os.str();
}

VRep vrep_from_ext(const std::string& text, const std::string& source) {
  Table t = read_table(text, source, "V-representation");
  if (!t.linearity.empty()) throw InputError(source + ": lineality rows are not supported (bounded polytopes only)");
  VRep v;
  v.dim = t.cols - 1;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i][0] != 1) throw InputError(source + ": row " + std::to_string(i + 1) + " is a ray (leading entry must be 1)");
    v.vertices.emplace_back(t.rows[i].begin() + 1, t.rows[i].end());
  }
  return v;
}

PartyCard parse_card(const std::string& s) {
  std::vector<int> outs;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("trailing characters");
      outs.push_back(v);
    } catch (const std::exception&) {
      throw InputError("cardinality list \"" + s + "\": bad entry \"" + tok + "\"");
    }
  }
  try {
    return PartyCard(outs);
  } catch (const std::exception& e) {
    throw InputError("cardinality list \"" + s + "\": " + e.what());
  }
}

}  // namespace loctrans
