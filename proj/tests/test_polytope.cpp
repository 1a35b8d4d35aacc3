#include <doctest.h>

#include <algorithm>
#include <set>

#include "loctrans/ineq.hpp"
#include "loctrans/polytope.hpp"
#include "support.hpp"

using namespace loctrans;

namespace {

const PartyCard kBin({2, 2});

HRep cube(std::size_t n) {
  HRep h;
  h.dim = n;
  h.ineq_A = RatMatrix(2 * n, n);
  h.ineq_c = zeros(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    h.ineq_A(i, i) = -1;
    h.ineq_A(n + i, i) = 1;
    h.ineq_c[n + i] = 1;
  }
  return h;
}

std::set<RatVector> as_set(const std::vector<RatVector>& v) { return {v.begin(), v.end()}; }

std::vector<RatVector> coeffs_of(const std::vector<Behavior>& b) {
  std::vector<RatVector> out;
  for (const auto& p : b) out.push_back(p.coeffs());
  return out;
}

// facet rows as (A row, c) pairs scaled to primitive integers
std::set<std::pair<RatVector, Rational>> facet_set(const HRep& h) {
  std::set<std::pair<RatVector, Rational>> out;
  for (std::size_t i = 0; i < h.ineq_A.rows(); ++i) out.insert({h.ineq_A.row(i), h.ineq_c[i]});
  return out;
}

}  // namespace

TEST_CASE("double description on a square cone") {
  // x >= 0, y >= 0, x + y >= 0 (redundant)
  std::vector<IntVector> rows{{1, 0}, {0, 1}, {1, 1}};
  auto r = extreme_rays(rows, 2);
  CHECK(r.rays.size() == 2);
  CHECK(primitive(RatVector{Rational(2, 3), Rational(-4, 9)}) == IntVector{3, -2});
  CHECK_THROWS_AS(extreme_rays({{1, 0}}, 2), std::invalid_argument);
  std::vector<IntVector> many;
  for (int i = 0; i < 12; ++i) many.push_back({1, i, i * i});
  CHECK_THROWS_AS(extreme_rays(many, 3, {.max_rays = 3}), CapExceeded);
}

TEST_CASE("cube vertices and facets") {
  HRep h = cube(3);
  VRep v = dd_vertices(h);
  CHECK(v.vertices.size() == 8);
  CHECK(std::is_sorted(v.vertices.begin(), v.vertices.end()));
  HRep f = dd_facets(v);
  CHECK(f.eq_A.rows() == 0);
  CHECK(f.ineq_A.rows() == 6);
  CHECK(facet_set(f) == facet_set(h));
  HRep open = h;
  open.ineq_A = RatMatrix::from_rows({h.ineq_A.row(0), h.ineq_A.row(1), h.ineq_A.row(2)});
  open.ineq_c = zeros(3);
  CHECK_THROWS_AS(dd_vertices(open), std::invalid_argument);
}

TEST_CASE("single-party polytope and its facet class") {
  Scenario s = Scenario::nonsignaling({PartyCard({2, 2, 2})});
  HRep h = ns_hrep(s);
  CHECK(affine_dimension(h) == 3);
  VRep v = dd_vertices(h);
  CHECK(as_set(v.vertices) == as_set(coeffs_of(deterministic_behaviors(s))));
  HRep f = dd_facets(v);
  CHECK(f.ineq_A.rows() == 6);
  auto cls = classify_facets(f, s);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].orbit_size == 6);
  CHECK(affine_dimension(ns_hrep(Scenario::nonsignaling({kBin}))) == 2);
}

TEST_CASE("CHSH local and nonsignaling polytopes") {
  Scenario s = Scenario::nonsignaling({kBin, kBin});
  VRep local{16, coeffs_of(deterministic_behaviors(s))};
  HRep f = dd_facets(local);
  CHECK(f.ineq_A.rows() == 24);
  CHECK(affine_dimension(f) == 8);
  auto cls = classify_facets(f, s);
  std::multiset<std::size_t> sizes;
  for (const auto& c : cls) sizes.insert(c.orbit_size);
  CHECK(sizes == std::multiset<std::size_t>{8, 16});
  // CHSH is one of the 8
  auto key = canonical_key(canonicalize(stock::chsh()));
  bool found = false;
  for (std::size_t i = 0; i < f.ineq_A.rows(); ++i)
    found |= canonical_key(canonicalize(BellExpression(s, f.ineq_A.row(i), f.ineq_c[i]))) == key;
  CHECK(found);

  HRep ns = ns_hrep(s);
  CHECK(affine_dimension(ns) == 8);
  VRep nv = dd_vertices(ns);
  CHECK(nv.vertices.size() == 24);
  CHECK(std::count(nv.vertices.begin(), nv.vertices.end(), stock::pr_box().coeffs()) == 1);
  CHECK(affine_dimension(ns_hrep(Scenario::nonsignaling({PartyCard({3, 3, 3}), kBin}))) == 20);
}

TEST_CASE("round trips and adjacency variants agree") {
  Scenario s = Scenario::nonsignaling({PartyCard({2, 3}), kBin});
  HRep h = ns_hrep(s);
  VRep v = dd_vertices(h);
  PolytopeLimits rank{.max_rays = 200000, .verify = true, .rank_adjacency = true};
  CHECK(dd_vertices(h, rank).vertices == v.vertices);
  HRep f = dd_facets(v);
  CHECK(dd_facets(v, rank).ineq_A == f.ineq_A);
  CHECK(dd_vertices(f).vertices == v.vertices);
  for (const auto& x : v.vertices) {
    CHECK(satisfies(x, h));
    CHECK(extremal(x, h));
  }
  CHECK_THROWS_AS(dd_vertices(h, {.max_rays = 5}), CapExceeded);
}

TEST_CASE("causal polytope vertex counts") {
  CHECK(causal_vertices(kBin, kBin).vertices.size() == 112);
  VRep v = causal_vertices(kBin, PartyCard({3, 3}));
  CHECK(v.vertices.size() == 432);
  CHECK(std::is_sorted(v.vertices.begin(), v.vertices.end()));
  Scenario s = causal_scenario(kBin, PartyCard({3, 3}));
  CHECK_FALSE(s.is_nonsignaling());
  for (const auto& x : v.vertices) CHECK(is_normalized(Behavior(s, x)));
}

TEST_CASE("uniform behavior is not a vertex") {
  Scenario s = Scenario::nonsignaling({kBin, kBin});
  HRep h = ns_hrep(s);
  auto u = party_basis(kBin).ubar;
  RatVector uu = kron(u, u);
  CHECK(satisfies(uu, h));
  CHECK_FALSE(extremal(uu, h));
  CHECK(extremal(stock::pr_box(), h));
  CHECK_FALSE(satisfies(scaled(uu, 2), h));
}

TEST_CASE("relabeling permutations act like the maps") {
  t::Rng rng(91);
  Scenario s = Scenario::nonsignaling({kBin, PartyCard({3, 3})});
  auto ra = relabelings(kBin), rb = relabelings(PartyCard({3, 3}));
  for (int it = 0; it < 20; ++it) {
    std::vector<DetMap> g{ra[rng.uniform(0, 7)], rb[rng.uniform(0, 71)]};
    auto perm = relabeling_permutation(s, g);
    RatVector phi = rng.vec(s.dim());
    RatVector moved(s.dim());
    for (std::size_t j = 0; j < s.dim(); ++j) moved[j] = phi[perm[j]];
    RatMatrix L = kron(to_matrix(g[0]), to_matrix(g[1]));
    CHECK(moved == phi * L);
  }
}
