#include "loctrans/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "loctrans/ineq.hpp"
#include "loctrans/io.hpp"
#include "loctrans/lifting.hpp"
#include "loctrans/polytope.hpp"
#include "loctrans/subspaces.hpp"

namespace loctrans::cli {

namespace {

struct Options {
  std::string behavior, scenario, map, transform, hrep, vrep, counts, target, source, filter;
  std::vector<std::string> exprs, causal;
  std::string mode, scale = "primitive", in, out, from, to;
  std::size_t party = 0;
  unsigned threads = 1;
  std::size_t cap = 10000000;
  int label_base = 1;
  bool pretty = false, list = true, dump = false, extremal = false, classify = false;
};

// the command ran but the checked property is false
struct Failed {
  Json result;
};

std::string ext_of(const std::string& path) {
  auto dot = path.rfind('.');
  return dot == std::string::npos ? "" : path.substr(dot + 1);
}

void need(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required flag ") + flag);
}

Behavior load_behavior(const std::string& path) {
  need(path, "--behavior");
  Json j = read_json_file(path);
  if (j.is_object() && j.value("format", "") == "cg") return behavior_from_cg_json(j, path);
  return behavior_from_json(j, path);
}

BellExpression load_expr(const std::string& path) { return expression_from_json(read_json_file(path), path); }

HRep load_hrep(const std::string& path) {
  if (ext_of(path) == "ine") return hrep_from_ine(read_text_file(path), path);
  return hrep_from_json(read_json_file(path), path);
}

VRep load_vrep(const std::string& path) {
  if (ext_of(path) == "ext") return vrep_from_ext(read_text_file(path), path);
  return vrep_from_json(read_json_file(path), path);
}

Json label_json(const SubspaceLabel& l) {
  Json a = Json::array();
  for (auto s : l) a.push_back(std::string(1, to_char(s)));
  return a;
}

Json violation_json(const NsViolation& v) {
  return Json{{"sources", v.sources},
              {"targets", v.targets},
              {"target_outputs", v.target_outputs},
              {"inputs", v.inputs},
              {"reference_inputs", v.reference_inputs},
              {"value", to_string(v.value)},
              {"reference_value", to_string(v.reference_value)}};
}

NsMode ns_mode(const std::string& m) {
  if (m.empty() || m == "auto") return NsMode::Auto;
  if (m == "reduced") return NsMode::Reduced;
  if (m == "exhaustive") return NsMode::Exhaustive;
  throw InputError("--mode for check must be auto, reduced or exhaustive, got \"" + m + "\"");
}

Json cmd_check(const Options& o) {
  if (!o.transform.empty()) {
    Json tj = read_json_file(o.transform);
    PartyCard src = card_from_json(tj.at("source"), o.transform + ".source");
    PartyCard tgt = card_from_json(tj.at("target"), o.transform + ".target");
    RatMatrix m = matrix_from_json(tj.at("matrix"), o.transform + ".matrix", src.dim());
    auto v = validate(m, src, tgt);
    auto cp = is_completely_positive(m, src, tgt);
    Json r;
    r["valid"] = std::holds_alternative<LocalTransformation>(v);
    if (auto* bad = std::get_if<Violation>(&v))
      r["violation"] = {{"kind", to_string(bad->kind)}, {"message", bad->message}};
    r["completely_positive"] = cp.completely_positive;
    if (!cp.completely_positive) {
      Json w{{"kind", to_string(cp.witness)}, {"message", cp.message}};
      if (cp.probe) w["probe"] = to_json(*cp.probe);
      if (cp.image) w["image"] = to_json(*cp.image);
      w["index"] = cp.index;
      w["value"] = to_string(cp.value);
      r["witness"] = w;
    }
    if (!r["valid"].get<bool>() || !cp.completely_positive) throw Failed{r};
    return r;
  }
  Behavior p = load_behavior(o.behavior);
  Json r;
  bool nn = is_nonnegative(p), norm = is_normalized(p);
  r["nonnegative"] = nn;
  r["normalized"] = norm;
  bool ok = nn && norm;
  if (norm) {
    auto viol = check_nonsignaling(p, ns_mode(o.mode));
    r["nonsignaling"] = viol.empty();
    if (!viol.empty()) {
      Json vs = Json::array();
      for (std::size_t i = 0; i < viol.size() && i < 10; ++i) vs.push_back(violation_json(viol[i]));
      r["violations"] = vs;
      r["violation_count"] = viol.size();
      ok = false;
    }
  } else {
    r["nonsignaling"] = nullptr;
  }
  if (!ok) throw Failed{r};
  return r;
}

Json cmd_decompose(const Options& o) {
  if (!o.transform.empty()) {
    LocalTransformation t = transformation_from_json(read_json_file(o.transform), o.transform);
    auto d = decompose(t);
    Json terms = Json::array();
    for (const auto& [w, m] : d.terms) terms.push_back({{"weight", to_string(w)}, {"map", to_json(m, o.label_base)}});
    return Json{{"terms", terms}, {"exact", recombine(d) == t.matrix()}};
  }
  Behavior p = load_behavior(o.behavior);
  Json comps = Json::array();
  for (const auto& [label, v] : decompose_behavior(p)) {
    if (is_zero(v)) continue;
    comps.push_back({{"label", label_json(label)},
                     {"class", to_string(classify_component(p.scenario(), label))},
                     {"vector", to_json(v)}});
  }
  return Json{{"components", comps}};
}

Json canonical_json(const CanonicalForm& f) {
  return Json{{"mode", to_string(f.mode)}, {"scale", to_string(f.scale)}, {"coeffs", to_json(f.coeffs)},
              {"bound", to_string(f.bound)}};
}

Json cmd_canon(const Options& o) {
  if (o.exprs.size() != 1) throw InputError("canon takes exactly one --expr");
  CanonMode mode;
  if (o.mode.empty() || o.mode == "zero-bound") mode = CanonMode::ZeroBound;
  else if (o.mode == "gamma") mode = CanonMode::Gamma;
  else throw InputError("--mode must be gamma or zero-bound");
  ScaleConvention sc;
  if (o.scale == "primitive") sc = ScaleConvention::Primitive;
  else if (o.scale == "one-norm") sc = ScaleConvention::OneNorm;
  else throw InputError("--scale must be primitive or one-norm");
  return canonical_json(canonicalize(load_expr(o.exprs[0]), mode, sc));
}

Json cmd_equiv(const Options& o) {
  if (o.exprs.size() != 2) throw InputError("equiv takes two --expr files");
  auto a = load_expr(o.exprs[0]), b = load_expr(o.exprs[1]);
  auto cert = affine_equivalent(a, b);
  Json r{{"equivalent", cert.has_value()}};
  if (cert) r["certificate"] = {{"s", to_string(cert->s)}, {"t", to_string(cert->t)}, {"w", to_json(cert->w)}};
  return r;
}

Json cmd_variance(const Options& o) {
  if (o.exprs.size() != 1) throw InputError("variance takes exactly one --expr");
  need(o.counts, "--counts");
  auto phi = load_expr(o.exprs[0]);
  Json cj = read_json_file(o.counts);
  const Json& arr = cj.is_object() ? cj.at("counts") : cj;
  auto cov = covariance_from_counts(phi.scenario(), counts_from_json(arr, o.counts + ".counts"));
  auto opt = variance_optimal(phi, cov);
  auto cert = affine_equivalent(phi, opt);
  return Json{{"variance_input", to_string(variance(phi.coeffs(), cov.sigma))},
              {"variance_optimal", to_string(variance(opt.coeffs(), cov.sigma))},
              {"equivalent", cert.has_value()},
              {"optimal", to_json(opt)}};
}

std::optional<InvertibilityClass> parse_filter(const std::string& f) {
  if (f.empty() || f == "all") return std::nullopt;
  auto c = parse_invertibility_class(f);
  if (!c) throw InputError("unknown --filter \"" + f + "\"");
  return c;
}

Json cmd_maps(const Options& o) {
  if (!o.map.empty()) {
    DetMap m = detmap_from_json(read_json_file(o.map), o.label_base, o.map);
    Json r{{"class", to_string(classify(m))},
           {"left_invertible", is_left_invertible(m)},
           {"right_invertible", is_right_invertible(m)},
           {"single_output_advisory", single_output_advisory(m)},
           {"matrix", to_json(to_matrix(m))}};
    if (is_left_invertible(m)) r["left_inverse"] = to_json(find_left_inverse(m), o.label_base);
    if (is_right_invertible(m)) r["right_inverse"] = to_json(find_right_inverse(m), o.label_base);
    return r;
  }
  need(o.source, "--source");
  need(o.target, "--target");
  PartyCard s = parse_card(o.source), t = parse_card(o.target);
  auto filter = parse_filter(o.filter);
  Json r{{"total", count_maps(s, t)}};
  auto maps = enumerate_maps(s, t, filter, o.cap);
  r["count"] = maps.size();
  if (o.list) {
    Json a = Json::array();
    for (const auto& m : maps) a.push_back(to_json(m, o.label_base));
    r["maps"] = a;
  }
  return r;
}

Json payoff_json(const Options& o) {
  if (o.exprs.size() != 1) throw InputError("payoff takes exactly one --expr");
  auto phi = load_expr(o.exprs[0]);
  auto p = load_behavior(o.behavior);
  auto res = max_payoff(phi, p, o.cap, o.threads);
  Json maps = Json::array();
  for (const auto& m : res.maps) maps.push_back(to_json(m, o.label_base));
  Json r{{"value", to_string(res.value)}, {"maps", maps}};
  if (phi.bound()) r["violates_bound"] = res.value > *phi.bound();
  return r;
}

Json census_json(const Options& o) {
  Behavior p = load_behavior(o.behavior);
  need(o.target, "--target");
  PartyCard t = parse_card(o.target);
  if (o.party >= p.scenario().num_parties()) throw InputError("--party out of range");
  auto c = census_lift(p, o.party, t, o.threads);
  Json r{{"total", c.total_maps}, {"invertible", c.invertible_count}, {"unique", c.unique_images}};
  if (o.extremal) {
    HRep h = ns_hrep(p.scenario().with_party(o.party, t));
    bool all = true;
    for (const auto& img : c.images) all = all && extremal(img, h);
    r["all_extremal"] = all;
  }
  if (o.dump) {
    Json imgs = Json::array();
    for (std::size_t i = 0; i < c.images.size(); ++i)
      imgs.push_back({{"map", to_json(c.image_maps[i], o.label_base)}, {"coeffs", to_json(c.images[i].coeffs())}});
    r["images"] = imgs;
  }
  return r;
}

Json cmd_lift(const std::string& what, const Options& o) {
  if (what == "census") return census_json(o);
  if (what == "payoff") return payoff_json(o);
  need(o.map, "--map");
  DetMap m = detmap_from_json(read_json_file(o.map), o.label_base, o.map);
  if (what == "behavior") return to_json(lift_behavior(load_behavior(o.behavior), o.party, m));
  if (o.exprs.size() != 1) throw InputError("lift expression takes exactly one --expr");
  return to_json(lift_expression(load_expr(o.exprs[0]), o.party, m));
}

PolytopeLimits limits(const Options& o) {
  PolytopeLimits l;
  l.max_rays = o.cap;
  return l;
}

std::pair<PartyCard, PartyCard> causal_cards(const Options& o) {
  if (o.causal.size() != 2) throw InputError("--causal must be given twice (Alice's and Bob's cardinalities)");
  return {parse_card(o.causal[0]), parse_card(o.causal[1])};
}

Json vrep_result(const VRep& v, bool list) {
  Json r{{"count", v.vertices.size()}, {"dim", v.dim}};
  if (list) r["vertices"] = to_json(v)["vertices"];
  return r;
}

Json cmd_vertices(const Options& o) {
  if (!o.causal.empty()) {
    auto [a, b] = causal_cards(o);
    return vrep_result(causal_vertices(a, b), o.list);
  }
  HRep h;
  if (!o.scenario.empty()) h = ns_hrep(scenario_from_json(read_json_file(o.scenario), o.scenario));
  else if (!o.hrep.empty()) h = load_hrep(o.hrep);
  else throw InputError("vertices needs --scenario, --hrep or --causal");
  return vrep_result(dd_vertices(h, limits(o)), o.list);
}

Json cmd_facets(const Options& o) {
  VRep v;
  std::optional<Scenario> s;
  if (!o.causal.empty()) {
    auto [a, b] = causal_cards(o);
    v = causal_vertices(a, b);
    s = causal_scenario(a, b);
  } else {
    need(o.vrep, "--vrep");
    v = load_vrep(o.vrep);
  }
  if (!o.scenario.empty()) s = scenario_from_json(read_json_file(o.scenario), o.scenario);
  HRep h = dd_facets(v, limits(o));
  Json r{{"count", h.ineq_A.rows()}, {"equalities", h.eq_A.rows()}};
  if (o.list) {
    Json hj = to_json(h);
    r["hrep"] = hj;
  }
  if (o.classify) {
    if (!s) throw InputError("--classify needs --scenario (or --causal)");
    Json cls = Json::array();
    for (const auto& c : classify_facets(h, *s))
      cls.push_back({{"orbit_size", c.orbit_size},
                     {"members", c.members.size()},
                     {"representative", to_json(c.representative.coeffs())}});
    r["classes"] = cls;
  }
  return r;
}

Json read_any(const std::string& path, const std::string& fmt) {
  if (fmt == "ext") return to_json(vrep_from_ext(read_text_file(path), path));
  if (fmt == "ine") return to_json(hrep_from_ine(read_text_file(path), path));
  Json j = read_json_file(path);
  if (fmt == "cg-json") return to_json(behavior_from_cg_json(j, path));
  if (fmt == "json") return j;
  throw InputError("unknown format \"" + fmt + "\" (json, ext, ine, cg-json)");
}

Json cmd_convert(const Options& o) {
  need(o.in, "--in");
  std::string from = o.from.empty() ? ext_of(o.in) : o.from;
  std::string to = o.to.empty() ? ext_of(o.out) : o.to;
  need(to, "--to");
  Json mid = read_any(o.in, from);
  std::string text;
  if (to == "json") {
    // validate by parsing into the matching object
    if (mid.contains("vertices")) mid = to_json(vrep_from_json(mid, o.in));
    else if (mid.contains("equalities") || mid.contains("inequalities")) mid = to_json(hrep_from_json(mid, o.in));
    else if (mid.contains("bound")) mid = to_json(expression_from_json(mid, o.in));
    else mid = to_json(behavior_from_json(mid, o.in));
    text = mid.dump(1) + "\n";
  } else if (to == "cg-json") {
    Behavior p = behavior_from_json(mid, o.in);
    if (!(from_cg(p.scenario(), to_cg(p)) == p))
      throw std::invalid_argument("behavior is not representable in Collins-Gisin coordinates (it signals or is not normalized)");
    text = to_cg_json(p).dump(1) + "\n";
  } else if (to == "ext") {
    text = to_ext(vrep_from_json(mid, o.in));
  } else if (to == "ine") {
    text = to_ine(hrep_from_json(mid, o.in));
  } else {
    throw InputError("unknown format \"" + to + "\" (json, ext, ine, cg-json)");
  }
  if (o.out.empty()) return Json{{"format", to}, {"content", text}};
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError(o.out + ": cannot write");
  f << text;
  return Json{{"format", to}, {"written", o.out}, {"bytes", text.size()}};
}

void print_pretty(const Json& report, std::ostream& out) {
  out << report["command"].get<std::string>() << "\n";
  const Json& r = report.contains("result") ? report["result"] : report["error"];
  if (!r.is_object()) {
    out << "  " << r.dump() << "\n";
    return;
  }
  std::size_t w = 0;
  for (auto it = r.begin(); it != r.end(); ++it) w = std::max(w, it.key().size());
  for (auto it = r.begin(); it != r.end(); ++it) {
    std::string v = it->is_string() ? it->get<std::string>() : it->dump();
    out << "  " << it.key() << std::string(w - it.key().size() + 2, ' ') << v << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"exact local-transformation toolkit for correlation scenarios", "loctrans"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--pretty", o.pretty, "aligned table instead of JSON");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cap", o.cap, "refuse searches (maps or DD rays) above this size");
  app.add_option("--label-base", o.label_base, "labels in map files start at 0 or 1")->check(CLI::IsMember({0, 1}));

  auto behavior = [&](CLI::App* c) { c->add_option("--behavior", o.behavior, "behavior JSON (or cg-json)"); };
  auto expr = [&](CLI::App* c) { c->add_option("--expr", o.exprs, "expression JSON"); };
  auto nolist = [&](CLI::App* c) { c->add_flag("!--no-list", o.list, "counts only"); };

  auto* check = app.add_subcommand("check", "nonnegativity, normalization, nonsignaling; or validate a transformation");
  behavior(check);
  check->add_option("--transform", o.transform, "local transformation JSON (validity and complete positivity)");
  check->add_option("--mode", o.mode, "auto, reduced or exhaustive");

  auto* dec = app.add_subcommand("decompose", "invariant-subspace components, or convex decomposition of a transformation");
  behavior(dec);
  dec->add_option("--transform", o.transform, "local transformation JSON");

  auto* canon = app.add_subcommand("canon", "canonical form of an inequality");
  expr(canon);
  canon->add_option("--mode", o.mode, "gamma or zero-bound");
  canon->add_option("--scale", o.scale, "primitive or one-norm");

  auto* equiv = app.add_subcommand("equiv", "affine equivalence of two inequalities");
  expr(equiv);

  auto* var = app.add_subcommand("variance", "variance-optimal equivalent expression");
  expr(var);
  var->add_option("--counts", o.counts, "counts JSON {\"counts\":[...]} in coefficient order");

  auto* maps = app.add_subcommand("maps", "classify a deterministic map or enumerate maps");
  maps->add_option("--map", o.map, "DetMap JSON");
  maps->add_option("--source", o.source, "source cardinalities, e.g. 2,2");
  maps->add_option("--target", o.target, "target cardinalities");
  maps->add_option("--filter", o.filter, "all, relabeling, reordering, left-invertible, right-invertible, neither");
  nolist(maps);

  auto* lift = app.add_subcommand("lift", "liftings");
  lift->require_subcommand(1);
  std::string lift_what;
  for (const char* name : {"behavior", "expression", "census", "payoff"}) {
    auto* c = lift->add_subcommand(name);
    behavior(c);
    expr(c);
    c->add_option("--map", o.map, "DetMap JSON");
    c->add_option("--party", o.party, "party index (zero-based)");
    c->add_option("--target", o.target, "target cardinalities");
    c->add_flag("--dump", o.dump, "list the distinct images");
    c->add_flag("--extremal", o.extremal, "test every image for extremality in the nonsignaling polytope");
    c->callback([&lift_what, name] { lift_what = name; });
  }

  auto* payoff = app.add_subcommand("payoff", "maximum of an expression over deterministic maps of a behavior");
  behavior(payoff);
  expr(payoff);

  auto* census = app.add_subcommand("census", "left-invertible lifting census");
  behavior(census);
  census->add_option("--target", o.target, "target cardinalities");
  census->add_option("--party", o.party, "party index (zero-based)");
  census->add_flag("--dump", o.dump, "list the distinct images");
  census->add_flag("--extremal", o.extremal, "test every image for extremality in the nonsignaling polytope");

  auto* verts = app.add_subcommand("vertices", "vertex enumeration");
  verts->add_option("--scenario", o.scenario, "scenario JSON (nonsignaling polytope)");
  verts->add_option("--hrep", o.hrep, "H-representation (.json or .ine)");
  verts->add_option("--causal", o.causal, "Alice's then Bob's cardinalities");
  nolist(verts);

  auto* facets = app.add_subcommand("facets", "facet enumeration");
  facets->add_option("--vrep", o.vrep, "V-representation (.json or .ext)");
  facets->add_option("--causal", o.causal, "Alice's then Bob's cardinalities");
  facets->add_option("--scenario", o.scenario, "scenario JSON for --classify");
  facets->add_flag("--classify", o.classify, "relabeling classes");
  nolist(facets);

  auto* conv = app.add_subcommand("convert", "format conversion");
  conv->add_option("--in", o.in, "input path");
  conv->add_option("--from", o.from, "json, ext, ine or cg-json (default: extension)");
  conv->add_option("--out", o.out, "output path (default: embed in the report)");
  conv->add_option("--to", o.to, "json, ext, ine or cg-json (default: extension of --out)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  std::string name = app.get_subcommands().front()->get_name();
  if (name == "lift") name += " " + lift_what;
  Json report;
  report["format"] = kReportFormat;
  report["command"] = name;
  report["args"] = args;

  auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    Json r;
    if (name == "check") r = cmd_check(o);
    else if (name == "decompose") r = cmd_decompose(o);
    else if (name == "canon") r = cmd_canon(o);
    else if (name == "equiv") r = cmd_equiv(o);
    else if (name == "variance") r = cmd_variance(o);
    else if (name == "maps") r = cmd_maps(o);
    else if (name.rfind("lift ", 0) == 0) r = cmd_lift(lift_what, o);
    else if (name == "payoff") r = payoff_json(o);
    else if (name == "census") r = census_json(o);
    else if (name == "vertices") r = cmd_vertices(o);
    else if (name == "facets") r = cmd_facets(o);
    else r = cmd_convert(o);
    report["result"] = r;
  } catch (const Failed& f) {
    report["result"] = f.result;
    code = kValidation;
  } catch (const CapExceeded& e) {
    report["error"] = {{"kind", "cap"}, {"message", e.what()}};
    code = kCap;
  } catch (const std::length_error& e) {
    report["error"] = {{"kind", "cap"}, {"message", e.what()}};
    code = kCap;
  } catch (const InputError& e) {
    report["error"] = {{"kind", "input"}, {"message", e.what()}};
    code = kValidation;
  } catch (const Json::exception& e) {
    report["error"] = {{"kind", "input"}, {"message", e.what()}};
    code = kValidation;
  } catch (const std::exception& e) {
    report["error"] = {{"kind", "validation"}, {"message", e.what()}};
    code = kValidation;
  }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  report["timing_ms"] = static_cast<long long>(ms);
  if (report.contains("error")) err << "loctrans: " << report["error"]["message"].get<std::string>() << "\n";
  if (o.pretty) print_pretty(report, out);
  else out << report.dump(1) << "\n";
  return code;
}

}  // namespace loctrans::cli
