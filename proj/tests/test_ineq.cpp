#include <doctest.h>

#include "loctrans/ineq.hpp"
#include "support.hpp"

using namespace loctrans;

namespace {

Scenario chsh_scenario() { return Scenario::nonsignaling({PartyCard({2, 2}), PartyCard({2, 2})}); }

// s (phi + t tau + sum w_i mu_i), bound s (u + t)
BellExpression shifted(const BellExpression& phi, const Rational& s, const Rational& t, const RatVector& w) {
  auto cf = constraint_forms(phi.scenario());
  RatVector c = phi.coeffs();
  axpy(c, t, cf.tau_all);
  for (std::size_t i = 0; i < w.size(); ++i) axpy(c, w[i], cf.mu[i]);
  return BellExpression(phi.scenario(), scaled(c, s), s * (*phi.bound() + t));
}

BellExpression random_orbit_member(t::Rng& rng, const BellExpression& phi) {
  auto m = constraint_forms(phi.scenario()).mu.size();
  return shifted(phi, rng.positive(), rng.rational(), rng.vec(m));
}

}  // namespace

TEST_CASE("constraint form counts") {
  CHECK(constraint_forms(chsh_scenario()).mu.size() == 7);
  auto fs = constraint_forms(Scenario::fully_signaling({PartyCard({2, 2}), PartyCard({2, 2})}));
  // only the normalization-forbidden labels SZ, ZS, SS remain
  CHECK(fs.mu.size() == 3);
  auto one = constraint_forms(Scenario::nonsignaling({PartyCard({2, 2})}));
  REQUIRE(one.mu.size() == 1);
  CHECK(one.mu[0] == RatVector{Rational(1, 2), Rational(1, 2), Rational(-1, 2), Rational(-1, 2)});
  // every behavior in the scenario satisfies the constraints
  t::Rng rng(71);
  Scenario s = chsh_scenario();
  auto cf = constraint_forms(s);
  for (int it = 0; it < 20; ++it) {
    Behavior p = rng.behavior(s);
    CHECK(dot(cf.tau_all, p.coeffs()) == 1);
    for (const auto& m : cf.mu) CHECK(dot(m, p.coeffs()) == 0);
  }
}

TEST_CASE("projector assembly is complete") {
  t::Rng rng(72);
  for (int it = 0; it < 10; ++it) {
    std::vector<PartyCard> cards{rng.card(2, 3), rng.card(2, 2)};
    std::vector<Scenario::Edge> e;
    if (rng.coin()) e.push_back({0, 1});
    Scenario s(cards, e);
    const auto& P = scenario_projectors(s);
    CHECK(P.Z + P.Gamma + P.Omega == RatMatrix::identity(s.dim()));
  }
}

TEST_CASE("affine equivalence") {
  auto chsh = stock::chsh();
  auto self = affine_equivalent(chsh, chsh);
  REQUIRE(self);
  CHECK(self->s == 1);
  CHECK(self->t == 0);

  // CH built from CHSH by a recorded shift
  RatVector w(7);
  w[0] = 3;
  w[4] = Rational(-1, 2);
  auto ch = shifted(chsh, Rational(1, 4), -2, w);
  auto cert = affine_equivalent(chsh, ch);
  REQUIRE(cert);
  CHECK(cert->s == Rational(1, 4));
  CHECK(cert->t == -2);
  CHECK(shifted(chsh, cert->s, cert->t, cert->w) == ch);

  // same coefficients shape as GYNI but in the CHSH scenario
  BellExpression g(chsh_scenario(), stock::gyni().coeffs(), Rational(2));
  CHECK_FALSE(affine_equivalent(chsh, g));
  // flipping the sign is not allowed
  BellExpression neg(chsh_scenario(), scaled(chsh.coeffs(), -1), Rational(-2));
  CHECK_FALSE(affine_equivalent(chsh, neg));
  CHECK_THROWS(affine_equivalent(chsh, BellExpression(chsh_scenario(), chsh.coeffs())));
}

TEST_CASE("CHSH gamma form is the correlator expression") {
  auto f = canonicalize(stock::chsh(), CanonMode::Gamma);
  PartyCard bin({2, 2});
  auto d = party_dual_basis(bin);
  RatVector oracle = zeros(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) axpy(oracle, Rational(x * y == 1 ? -1 : 1), kron(d.chi[x], d.chi[y]));
  // CHSH already sits in the correlator subspace with bound 2
  CHECK(f.coeffs == oracle);
  CHECK(f.bound == 2);
  const auto& P = scenario_projectors(chsh_scenario());
  CHECK(is_zero(f.coeffs * P.Z));
  CHECK(is_zero(f.coeffs * P.Omega));
}

TEST_CASE("zero-bound form of the normalization constraint is zero") {
  auto cf = constraint_forms(chsh_scenario());
  auto f = canonicalize(BellExpression(chsh_scenario(), cf.tau_all, Rational(1)));
  CHECK(is_zero(f.coeffs));
  CHECK(f.bound == 0);
  CHECK_THROWS(canonicalize(BellExpression(chsh_scenario(), cf.tau_all)));
}

TEST_CASE("property: canonical forms collapse affine orbits") {
  t::Rng rng(73);
  for (int it = 0; it < 40; ++it) {
    Scenario s = rng.coin() ? chsh_scenario() : Scenario({PartyCard({2, 2}), PartyCard({3, 2})}, {{1, 0}});
    BellExpression phi(s, rng.vec(s.dim()), rng.rational());
    auto p1 = random_orbit_member(rng, phi), p2 = random_orbit_member(rng, phi);
    for (auto mode : {CanonMode::Gamma, CanonMode::ZeroBound})
      for (auto scale : {ScaleConvention::Primitive, ScaleConvention::OneNorm}) {
        auto f = canonicalize(phi, mode, scale);
        CHECK(canonicalize(p1, mode, scale) == f);
        CHECK(canonical_key(canonicalize(p2, mode, scale)) == canonical_key(f));
        // idempotent
        CHECK(canonicalize(BellExpression(s, f.coeffs, f.bound), mode, scale) == f);
      }
  }
}

TEST_CASE("property: the zero-bound form decides the same inequality") {
  t::Rng rng(74);
  Scenario s = chsh_scenario();
  for (int it = 0; it < 20; ++it) {
    BellExpression phi(s, rng.vec(16), rng.rational());
    auto f = canonicalize(phi);
    for (int k = 0; k < 10; ++k) {
      Behavior p = rng.behavior(s, 2);
      CHECK((evaluate(phi, p) <= *phi.bound()) == (dot(f.coeffs, p.coeffs()) <= 0));
    }
  }
}

TEST_CASE("covariance from counts") {
  Scenario s = chsh_scenario();
  auto block = [&](std::size_t i) { return s.input_tuple_index(s.tensor_unindex(i)); };
  std::vector<Integer> det(16, 0);
  for (std::size_t i = 0; i < 16; ++i)
    if (s.tensor_unindex(i)[0].a == 1 && s.tensor_unindex(i)[1].a == 2) det[i] = 7;
  CHECK(covariance_from_counts(s, det).sigma.is_zero());

  // uniform counts with N = 4 in every block
  auto cov = covariance_from_counts(s, std::vector<Integer>(16, 1));
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      Rational e = 0;
      if (block(i) == block(j)) e = ((i == j ? Rational(1, 4) : Rational(0)) - Rational(1, 16)) / 4;
      CHECK(cov.sigma(i, j) == e);
    }
  std::vector<Integer> empty(16, 1);
  for (std::size_t i = 0; i < 16; ++i)
    if (block(i) == 2) empty[i] = 0;
  CHECK_THROWS(covariance_from_counts(s, empty));
  CHECK_THROWS(covariance_from_counts(s, std::vector<Integer>(15, 1)));
}

TEST_CASE("variance optimum on trivial covariances") {
  Scenario s = chsh_scenario();
  auto chsh = stock::chsh();
  const auto& P = scenario_projectors(s);
  RatVector proj = chsh.coeffs() * (P.Z + P.Gamma);
  CHECK(variance_optimal(chsh, {s, RatMatrix(16, 16)}).coeffs() == proj);
  CHECK(variance_optimal(chsh, {s, RatMatrix::identity(16)}).coeffs() == proj);
}

TEST_CASE("property: variance optimum is stationary and minimal") {
  t::Rng rng(75);
  for (int it = 0; it < 10; ++it) {
    Scenario s = rng.coin() ? chsh_scenario() : Scenario::nonsignaling({PartyCard({2, 3}), PartyCard({2, 2})});
    std::vector<Integer> counts(s.dim());
    for (auto& c : counts) c = rng.uniform(0, 20);
    for (std::size_t i = 0; i < s.dim(); ++i) counts[i] += (i % 3 == 0);
    CovarianceModel cov;
    try {
      cov = covariance_from_counts(s, counts);
    } catch (const std::invalid_argument&) {
      continue;
    }
    BellExpression phi(s, rng.vec(s.dim()), rng.rational());
    auto best = variance_optimal(phi, cov);
    CHECK(affine_equivalent(phi, best));
    auto mu = constraint_forms(s).mu;
    RatVector grad = best.coeffs() * cov.sigma;
    for (const auto& m : mu) CHECK(dot(grad, m) == 0);
    Rational v = variance(best.coeffs(), cov.sigma);
    for (int k = 0; k < 30; ++k) {
      RatVector c = best.coeffs();
      for (const auto& m : mu) axpy(c, rng.rational(), m);
      CHECK(variance(c, cov.sigma) >= v);
    }
  }
}

TEST_CASE("property: closed form agrees on binary scenarios") {
  t::Rng rng(76);
  Scenario s = chsh_scenario();
  for (int it = 0; it < 5; ++it) {
    std::vector<Integer> counts(16);
    for (auto& c : counts) c = rng.uniform(1, 30);
    auto cov = covariance_from_counts(s, counts);
    BellExpression phi(s, rng.vec(16), Rational(0));
    CHECK(variance_optimal_closed_form(phi, cov) == variance_optimal(phi, cov).coeffs());
  }
}
