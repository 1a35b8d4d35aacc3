#include "loctrans/ineq.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace loctrans {

namespace {

std::vector<RatVector> dual_elements(const PartyCard& card, Sub s) {
  auto f = party_dual_basis(card);
  if (s == Sub::Z) return {f.tau};
  if (s == Sub::C) return f.chi;
  return f.Omega;
}

std::string scenario_key(const Scenario& s) {
  std::string k;
  for (const auto& p : s.parties()) k += p.str();
  for (const auto& [a, b] : s.signaling()) k += ";" + std::to_string(a) + ">" + std::to_string(b);
  return k;
}

}  // namespace

ConstraintForms constraint_forms(const Scenario& s) {
  ConstraintForms out;
  out.tau_all = {Rational(1)};
  for (const auto& p : s.parties()) out.tau_all = kron(out.tau_all, party_dual_basis(p).tau);
  for (const auto& label : all_labels(s.num_parties())) {
    if (!is_forbidden(classify_component(s, label))) continue;
    std::vector<RatVector> forms{{Rational(1)}};
    for (std::size_t k = 0; k < label.size(); ++k) {
      std::vector<RatVector> next;
      for (const auto& f : forms)
        for (const auto& e : dual_elements(s.party(k), label[k])) next.push_back(kron(f, e));
      forms = std::move(next);
    }
    for (auto& f : forms) out.mu.push_back(std::move(f));
  }
  return out;
}

const ScenarioProjectors& scenario_projectors(const Scenario& s) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<ScenarioProjectors>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[scenario_key(s)];
  if (!slot) {
    std::size_t d = s.dim();
    auto p = std::make_unique<ScenarioProjectors>(ScenarioProjectors{RatMatrix(d, d), RatMatrix(d, d), RatMatrix(d, d)});
    for (const auto& label : all_labels(s.num_parties())) {
      auto cls = classify_component(s, label);
      RatMatrix m = projector_matrix(s, label);
      if (cls == ComponentClass::NormalizationFixed)
        p->Z = m;
      else if (is_forbidden(cls))
        p->Omega = p->Omega + m;
      else
        p->Gamma = p->Gamma + m;
    }
    slot = std::move(p);
  }
  return *slot;
}

std::optional<AffineCertificate> affine_equivalent(const BellExpression& phi1, const BellExpression& phi2) {
  if (phi1.scenario() != phi2.scenario()) throw std::invalid_argument("affine_equivalent: scenarios differ");
  if (phi1.bound().has_value() != phi2.bound().has_value())
    throw std::invalid_argument("affine_equivalent: bounds must be both present or both absent");
  bool with_bound = phi1.bound().has_value();
  auto cf = constraint_forms(phi1.scenario());
  std::size_t d = phi1.scenario().dim(), m = cf.mu.size();
  std::size_t rows = d + (with_bound ? 1 : 0), cols = 2 + m;
  // unknowns (s, s t, s w_1 .. s w_m)
  RatMatrix A(rows, cols);
  RatVector b(rows);
  for (std::size_t i = 0; i < d; ++i) {
    A(i, 0) = phi1.coeffs()[i];
    A(i, 1) = cf.tau_all[i];
    for (std::size_t k = 0; k < m; ++k) A(i, 2 + k) = cf.mu[k][i];
    b[i] = phi2.coeffs()[i];
  }
  if (with_bound) {
    A(d, 0) = *phi1.bound();
    A(d, 1) = 1;
    b[d] = *phi2.bound();
  }
  auto z = solve(A, b);
  if (!z) return std::nullopt;
  if (sgn((*z)[0]) <= 0) {
    // s is free iff some kernel vector moves it; then pin s = 1
    bool free_s = false;
    for (const auto& k : kernel_basis(A))
      if (sgn(k[0]) != 0) free_s = true;
    if (!free_s) return std::nullopt;
    RatMatrix A2(rows + 1, cols);
    RatVector b2 = b;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) A2(i, j) = A(i, j);
    A2(rows, 0) = 1;
    b2.push_back(1);
    z = solve(A2, b2);
    if (!z) return std::nullopt;
  }
  AffineCertificate c;
  c.s = (*z)[0];
  c.t = (*z)[1] / c.s;
  for (std::size_t k = 0; k < m; ++k) c.w.push_back((*z)[2 + k] / c.s);
  return c;
}

std::string to_string(CanonMode m) { return m == CanonMode::Gamma ? "gamma" : "zero-bound"; }
std::string to_string(ScaleConvention c) { return c == ScaleConvention::Primitive ? "primitive" : "one-norm"; }

void rescale(RatVector& coeffs, Rational& bound, ScaleConvention scale) {
  if (is_zero(coeffs)) return;
  Rational f;
  if (scale == ScaleConvention::Primitive) {
    Integer l = 1, g = 0;
    auto take = [&](const Rational& q) {
      if (sgn(q) == 0) return;
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    };
    for (const auto& q : coeffs) take(q);
    take(bound);
    auto gcd_in = [&](const Rational& q) {
      Integer n = q.get_num() * (l / q.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    };
    for (const auto& q : coeffs) gcd_in(q);
    gcd_in(bound);
    f = Rational(l, g);
  } else {
    Rational n;
    for (const auto& q : coeffs) n += abs(q);
    f = 1 / n;
  }
  f.canonicalize();
  for (auto& q : coeffs) q *= f;
  bound *= f;
}

CanonicalForm canonicalize(const BellExpression& phi, CanonMode mode, ScaleConvention scale) {
  if (!phi.bound()) throw std::invalid_argument("canonicalize: the expression has no bound");
  const Scenario& s = phi.scenario();
  const auto& P = scenario_projectors(s);
  CanonicalForm f{mode, scale, {}, {}};
  if (mode == CanonMode::Gamma) {
    f.coeffs = phi.coeffs() * P.Gamma;
    RatVector uu{Rational(1)};
    for (const auto& p : s.parties()) uu = kron(uu, party_basis(p).ubar);
    f.bound = *phi.bound() - dot(phi.coeffs(), uu);
  } else {
    f.coeffs = phi.coeffs() * (P.Z + P.Gamma);
    axpy(f.coeffs, -*phi.bound(), constraint_forms(s).tau_all);
    f.bound = 0;
  }
  rescale(f.coeffs, f.bound, scale);
  return f;
}

std::string canonical_key(const CanonicalForm& f) {
  std::string k;
  for (const auto& q : f.coeffs) k += to_string(q) + ",";
  return k + "|" + to_string(f.bound);
}

CovarianceModel covariance_from_counts(const Scenario& s, const std::vector<Integer>& counts) {
  std::size_t d = s.dim();
  if (counts.size() != d) throw std::invalid_argument("counts length does not match the scenario dimension");
  std::vector<std::vector<std::size_t>> blocks(s.num_input_tuples());
  for (std::size_t i = 0; i < d; ++i) {
    if (counts[i] < 0) throw std::invalid_argument("negative count");
    blocks[s.input_tuple_index(s.tensor_unindex(i))].push_back(i);
  }
  RatMatrix sigma(d, d);
  for (const auto& blk : blocks) {
    Integer N = 0;
    for (auto i : blk) N += counts[i];
    if (N <= 0) throw std::invalid_argument("every joint input needs a positive total count");
    for (auto i : blk)
      for (auto j : blk) {
        Rational pi(counts[i], N), pj(counts[j], N);
        pi.canonicalize();
        pj.canonicalize();
        sigma(i, j) = ((i == j ? pi : Rational(0)) - pi * pj) / N;
      }
  }
  return {s, sigma};
}

Rational variance(const RatVector& phi, const RatMatrix& sigma) { return dot(phi * sigma, phi); }

BellExpression variance_optimal(const BellExpression& phi, const CovarianceModel& cov) {
  if (phi.scenario() != cov.scenario) throw std::invalid_argument("variance_optimal: scenario mismatch");
  const auto& P = scenario_projectors(phi.scenario());
  RatMatrix Pbar = P.Z + P.Gamma;
  RatMatrix Ot = P.Omega.transpose();
  RatVector g = phi.coeffs() * Pbar;
  RatMatrix M = P.Omega * cov.sigma * Ot;
  RatVector corr = g * cov.sigma * Ot * pseudo_inverse(M) * P.Omega;
  return BellExpression(phi.scenario(), sub(g, corr), phi.bound());
}

RatVector variance_optimal_closed_form(const BellExpression& phi, const CovarianceModel& cov) {
  const auto& P = scenario_projectors(phi.scenario());
  RatMatrix Pbar = P.Z + P.Gamma;
  RatMatrix inner = P.Omega * cov.sigma * P.Omega + Pbar;
  auto inv = inverse(inner);
  RatMatrix k = inv ? *inv : pseudo_inverse(inner);
  // the matrix acts on phi as a column vector
  return (Pbar - P.Omega * k * P.Omega * cov.sigma * Pbar) * phi.coeffs();
}

}  // namespace loctrans
