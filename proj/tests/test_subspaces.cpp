#include <doctest.h>

#include "loctrans/subspaces.hpp"
#include "support.hpp"

using namespace loctrans;

namespace {

RatVector q(std::initializer_list<Rational> l) { return RatVector(l); }

// rows of `spanning` span v?
bool in_span(const std::vector<RatVector>& spanning, const RatVector& v) {
  if (spanning.empty()) return is_zero(v);
  return solve(RatMatrix::from_rows(spanning).transpose(), v).has_value();
}

}  // namespace

TEST_CASE("bases of the (3,2) card") {
  PartyCard c({3, 2});
  auto b = party_basis(c);
  Rational t(1, 3), h(1, 2);
  CHECK(b.ubar == q({t, t, t, h, h}));
  REQUIRE(b.S.size() == 1);
  CHECK(b.S[0] == q({t, t, t, -h, -h}));
  REQUIRE(b.C.size() == 3);
  CHECK(b.C[0] == q({t, 0, -t, 0, 0}));
  CHECK(b.C[1] == q({0, t, -t, 0, 0}));
  CHECK(b.C[2] == q({0, 0, 0, h, -h}));

  auto f = party_dual_basis(c);
  CHECK(f.tau == q({h, h, h, h, h}));
  REQUIRE(f.Omega.size() == 1);
  CHECK(f.Omega[0] == q({h, h, h, -h, -h}));
  REQUIRE(f.chi.size() == 3);
  CHECK(f.chi[0] == q({2, -1, -1, 0, 0}));
  CHECK(f.chi[1] == q({-1, 2, -1, 0, 0}));
  CHECK(f.chi[2] == q({0, 0, 0, 1, -1}));
}

TEST_CASE("binary correlators") {
  PartyCard c({2, 2});
  auto f = party_dual_basis(c);
  RatVector p{Rational(1, 3), Rational(2, 3), Rational(3, 4), Rational(1, 4)};
  CHECK(dot(f.chi[0], p) == Rational(-1, 3));
  CHECK(dot(f.chi[1], p) == Rational(1, 2));
  CHECK(f.Omega[0] == q({Rational(1, 2), Rational(1, 2), Rational(-1, 2), Rational(-1, 2)}));
}

TEST_CASE("property: contraction table and projector algebra") {
  t::Rng rng(61);
  for (int it = 0; it < 50; ++it) {
    PartyCard c = rng.card(4, 5);
    auto b = party_basis(c);
    auto f = party_dual_basis(c);
    CHECK(1 + b.C.size() + b.S.size() == c.dim());
    CHECK(dot(f.tau, b.ubar) == 1);
    for (const auto& v : b.C) CHECK(dot(f.tau, v) == 0);
    for (const auto& v : b.S) CHECK(dot(f.tau, v) == 0);
    for (std::size_t i = 0; i < f.chi.size(); ++i) {
      CHECK(dot(f.chi[i], b.ubar) == 0);
      for (std::size_t j = 0; j < b.C.size(); ++j) CHECK(dot(f.chi[i], b.C[j]) == (i == j ? 1 : 0));
      for (const auto& v : b.S) CHECK(dot(f.chi[i], v) == 0);
    }
    for (std::size_t k = 0; k < f.Omega.size(); ++k) {
      CHECK(dot(f.Omega[k], b.ubar) == 0);
      for (const auto& v : b.C) CHECK(dot(f.Omega[k], v) == 0);
      for (std::size_t l = 0; l < b.S.size(); ++l) CHECK(dot(f.Omega[k], b.S[l]) == (k == l ? 1 : 0));
    }
    const auto& P = projectors(c);
    CHECK(P.Z + P.C + P.S == RatMatrix::identity(c.dim()));
    CHECK(P.Z * P.Z == P.Z);
    CHECK(P.C * P.C == P.C);
    CHECK(P.S * P.S == P.S);
    CHECK((P.Z * P.C).is_zero());
    CHECK((P.C * P.S).is_zero());
    CHECK((P.S * P.Z).is_zero());
  }
}

TEST_CASE("projectors on small cards") {
  const auto& one = projectors(PartyCard({1, 1}));
  CHECK(one.C.is_zero());
  CHECK(one.Z + one.S == RatMatrix::identity(2));
  PartyCard bin({2, 2});
  auto b = party_basis(bin);
  RatMatrix ZC = projector(bin, Sub::Z) + projector(bin, Sub::C);
  CHECK(rank(ZC) == 3);
  for (const auto& v : {b.ubar, b.C[0], b.C[1]}) CHECK(ZC * v == v);
}

TEST_CASE("component classes") {
  Scenario ns = Scenario::nonsignaling({PartyCard({2, 2}), PartyCard({2, 2})});
  Scenario ab({PartyCard({2, 2}), PartyCard({2, 2})}, {{0, 1}});
  CHECK(classify_component(ns, {Sub::S, Sub::C}) == ComponentClass::SignalingForbidden);
  CHECK(classify_component(ab, {Sub::S, Sub::C}) == ComponentClass::SignalingAllowed);
  CHECK(classify_component(ab, {Sub::C, Sub::S}) == ComponentClass::SignalingForbidden);
  CHECK(classify_component(ns, {Sub::Z, Sub::Z}) == ComponentClass::NormalizationFixed);
  CHECK(classify_component(ns, {Sub::S, Sub::Z}) == ComponentClass::NormalizationForbidden);
  CHECK(classify_component(ns, {Sub::C, Sub::Z}) == ComponentClass::Nonsignaling);
  CHECK_THROWS(classify_component(ns, {Sub::Z}));
  CHECK(all_labels(2).size() == 9);
  CHECK(to_string(all_labels(2)[5]) == "CS");
}

TEST_CASE("PR box decomposition") {
  Behavior pr = stock::pr_box();
  PartyCard bin({2, 2});
  auto b = party_basis(bin);
  RatVector cc = zeros(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) axpy(cc, Rational(x * y == 1 ? -1 : 1), kron(b.C[x], b.C[y]));
  RatVector total = zeros(16);
  for (const auto& [label, v] : decompose_behavior(pr)) {
    std::string l = to_string(label);
    if (l == "ZZ")
      CHECK(v == kron(b.ubar, b.ubar));
    else if (l == "CC")
      CHECK(v == cc);
    else
      CHECK(is_zero(v));
    total = add(total, v);
  }
  CHECK(total == pr.coeffs());
}

TEST_CASE("signaling behavior decomposition") {
  Scenario s({PartyCard({2, 2}), PartyCard({2, 2})}, {{0, 1}});
  Behavior p(s, t::tabulate(s, [](const auto& a, const auto& x) { return Rational(a[1] == x[0] && a[0] == 1 ? 1 : 0); }));
  for (const auto& [label, v] : decompose_behavior(p)) {
    std::string l = to_string(label);
    if (l == "SC") CHECK_FALSE(is_zero(v));
    if (l == "CS" || l == "SZ" || l == "ZS" || l == "SS") CHECK(is_zero(v));
    if (l == "ZZ") CHECK(v == kron(party_basis(s.party(0)).ubar, party_basis(s.party(1)).ubar));
  }
}

TEST_CASE("property: normalized single-party behaviors are uniform plus correlation") {
  t::Rng rng(62);
  for (int it = 0; it < 50; ++it) {
    PartyCard c = rng.card(3, 4);
    Scenario s = Scenario::nonsignaling({c});
    Behavior p = rng.behavior(s, 3);
    const auto& P = projectors(c);
    CHECK(P.Z * p.coeffs() == party_basis(c).ubar);
    CHECK(is_zero(P.S * p.coeffs()));
  }
}

TEST_CASE("deterministic nonsignaling behaviors touch every nonsignaling component") {
  Scenario s = Scenario::nonsignaling({PartyCard({2, 2}), PartyCard({2, 3})});
  for (const auto& p : deterministic_behaviors(s))
    for (const auto& [label, v] : decompose_behavior(p)) {
      auto cls = classify_component(s, label);
      if (cls == ComponentClass::Nonsignaling || cls == ComponentClass::NormalizationFixed) CHECK_FALSE(is_zero(v));
      if (is_forbidden(cls)) CHECK(is_zero(v));
    }
}

TEST_CASE("Collins-Gisin matrices of the (3,2) card") {
  const auto& m = cg_matrices(PartyCard({3, 2}));
  RatMatrix G = RatMatrix::from_rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {1, -1, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, -1}});
  RatMatrix Gp = Rational(1, 12) * RatMatrix::from_rows({{6, 6, 6, 6, 6}, {10, -2, -2, 2, 2}, {-2, 10, -2, 2, 2}, {3, 3, 3, 9, -3}});
  CHECK(m.G == G);
  CHECK(m.G_plus == Gp);
  std::string s;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) s += to_string(m.G_plus(i, j)) + " ";
  CHECK(s == "1/2 1/2 1/2 1/2 1/2 5/6 -1/6 -1/6 1/6 1/6 -1/6 5/6 -1/6 1/6 1/6 1/4 1/4 1/4 3/4 -1/4 ");
}

TEST_CASE("property: Collins-Gisin inverse and projector") {
  t::Rng rng(63);
  for (int it = 0; it < 50; ++it) {
    PartyCard c = rng.card(4, 5);
    const auto& m = cg_matrices(c);
    CHECK(m.G_plus * m.G == RatMatrix::identity(cg_dim(c)));
    CHECK(m.G * m.G_plus == projectors(c).Z + projectors(c).C);
  }
}

TEST_CASE("Collins-Gisin coordinates") {
  Behavior pr = stock::pr_box();
  RatVector h(9, Rational(1, 2));
  h[0] = 1;
  h[8] = 0;
  CHECK(to_cg(pr) == h);
  CHECK(from_cg(pr.scenario(), h) == pr);
  RatVector bad = h;
  bad[0] = 2;
  CHECK_THROWS_AS(from_cg(pr.scenario(), bad), std::invalid_argument);
  CHECK_THROWS_AS(from_cg(pr.scenario(), RatVector(8)), std::invalid_argument);

  t::Rng rng(64);
  for (int it = 0; it < 100; ++it) {
    Scenario s = Scenario::nonsignaling({rng.card(3, 3, 1), rng.card(2, 3, 1)});
    Behavior p = rng.behavior(s, 4);
    CHECK(from_cg(s, to_cg(p)) == p);
  }
}

TEST_CASE("property: local maps are block upper triangular") {
  t::Rng rng(65);
  for (int it = 0; it < 200; ++it) {
    PartyCard s = rng.card(3, 4), tc = rng.card(3, 4);
    RatMatrix L = to_matrix(rng.detmap(s, tc));
    const auto& P = projectors(s);
    const auto& Q = projectors(tc);
    CHECK(Q.C * L * P.C == L * P.C);
    RatMatrix zc = P.Z + P.C;
    CHECK((Q.Z + Q.C) * L * zc == L * zc);

    auto fs = party_dual_basis(s);
    auto ft = party_dual_basis(tc);
    auto with_tau = fs.Omega;
    with_tau.push_back(fs.tau);
    for (const auto& w : ft.Omega) CHECK(in_span(fs.Omega, w * L));
    CHECK(in_span(with_tau, ft.tau * L));
  }
}

TEST_CASE("property: every computed entry is in lowest terms") {
  auto canonical = [](const Rational& q) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return q.get_den() > 0 && g == 1;
  };
  auto all_canonical = [&](const RatMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!canonical(m(i, j))) return false;
    return true;
  };
  t::Rng rng(66);
  for (int it = 0; it < 40; ++it) {
    PartyCard c = rng.card(4, 5);
    const auto& P = projectors(c);
    CHECK(all_canonical(P.Z));
    CHECK(all_canonical(P.C));
    CHECK(all_canonical(P.S));
    CHECK(all_canonical(cg_matrices(c).G_plus));
    auto b = party_basis(c);
    auto f = party_dual_basis(c);
    std::vector<RatVector> rows{b.ubar, f.tau};
    for (auto* v : {&b.C, &b.S, &f.chi, &f.Omega, &f.Sigma}) rows.insert(rows.end(), v->begin(), v->end());
    CHECK(all_canonical(RatMatrix::from_rows(rows)));
  }
  CHECK(canonical(parse_rational("-12/18")));
}
