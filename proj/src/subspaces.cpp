#include "loctrans/subspaces.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace loctrans {

PartyBasis party_basis(const PartyCard& card) {
  PartyBasis b;
  std::size_t d = card.dim();
  int X = card.num_inputs();
  b.ubar.assign(d, Rational());
  for (int x = 1; x <= X; ++x)
    for (int a = 1; a <= card.num_outputs(x); ++a) b.ubar[card.flatten(a, x)] = Rational(1, card.num_outputs(x));
  for (int x = 1; x <= X; ++x) {
    int A = card.num_outputs(x);
    for (int i = 1; i < A; ++i) {
      RatVector c(d);
      c[card.flatten(i, x)] = Rational(1, A);
      c[card.flatten(A, x)] = Rational(-1, A);
      b.C.push_back(std::move(c));
      b.c_index.push_back({i, x});
    }
  }
  for (int k = 1; k < X; ++k) {
    RatVector s(d);
    int A = card.num_outputs(k);
    Rational w(X, A);
    w.canonicalize();
    for (int a = 1; a <= A; ++a) s[card.flatten(a, k)] = w;
    b.S.push_back(sub(s, b.ubar));
  }
  return b;
}

PartyDualBasis party_dual_basis(const PartyCard& card) {
  PartyDualBasis b;
  std::size_t d = card.dim();
  int X = card.num_inputs();
  for (int x = 1; x <= X; ++x) {
    RatVector s(d);
    for (int a = 1; a <= card.num_outputs(x); ++a) s[card.flatten(a, x)] = 1;
    b.Sigma.push_back(std::move(s));
  }
  b.tau.assign(d, Rational());
  for (const auto& s : b.Sigma) axpy(b.tau, Rational(1, X), s);
  for (int k = 1; k < X; ++k) b.Omega.push_back(scaled(sub(b.Sigma[k - 1], b.Sigma[X - 1]), Rational(1, X)));
  for (int x = 1; x <= X; ++x) {
    int A = card.num_outputs(x);
    for (int i = 1; i < A; ++i) {
      RatVector c = scaled(b.Sigma[x - 1], -1);
      c[card.flatten(i, x)] += A;
      b.chi.push_back(std::move(c));
      b.c_index.push_back({i, x});
    }
  }
  return b;
}

namespace {

Projectors build_projectors(const PartyCard& card) {
  auto b = party_basis(card);
  auto f = party_dual_basis(card);
  std::size_t d = card.dim();
  Projectors p{outer(b.ubar, f.tau), RatMatrix(d, d), RatMatrix(d, d)};
  for (std::size_t i = 0; i < b.C.size(); ++i) p.C = p.C + outer(b.C[i], f.chi[i]);
  for (std::size_t k = 0; k < b.S.size(); ++k) p.S = p.S + outer(b.S[k], f.Omega[k]);
  return p;
}

CgMatrices build_cg(const PartyCard& card) {
  int X = card.num_inputs();
  std::size_t d = card.dim(), m = cg_dim(card);
  CgMatrices r{RatMatrix(d, m), RatMatrix(m, d)};
  std::size_t col = 1;
  for (int x = 1; x <= X; ++x) {
    int A = card.num_outputs(x);
    r.G(card.flatten(A, x), 0) = 1;
    for (int i = 1; i < A; ++i, ++col) {
      r.G(card.flatten(i, x), col) = 1;
      r.G(card.flatten(A, x), col) = -1;
    }
  }
  for (std::size_t j = 0; j < d; ++j) r.G_plus(0, j) = Rational(1, X);
  std::size_t row = 1;
  for (int x = 1; x <= X; ++x) {
    int A = card.num_outputs(x);
    Rational mu(X - 1, X * A), nu(1, X * A);
    mu.canonicalize();
    for (int i = 1; i < A; ++i, ++row)
      for (int j = 1; j <= X; ++j)
        for (int a = 1; a <= card.num_outputs(j); ++a) {
          Rational& e = r.G_plus(row, card.flatten(a, j));
          if (j != x)
            e = nu;
          else
            e = (a == i ? Rational(1) : Rational(0)) - mu;
        }
  }
  return r;
}

template <class T>
const T& memo(const PartyCard& card, T (*build)(const PartyCard&)) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<T>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[card.outputs()];
  if (!slot) slot = std::make_unique<T>(build(card));
  return *slot;
}

}  // namespace

const Projectors& projectors(const PartyCard& card) { return memo(card, build_projectors); }

const CgMatrices& cg_matrices(const PartyCard& card) { return memo(card, build_cg); }

std::size_t cg_dim(const PartyCard& card) { return card.dim() - static_cast<std::size_t>(card.num_inputs()) + 1; }

char to_char(Sub s) { return s == Sub::Z ? 'Z' : s == Sub::C ? 'C' : 'S'; }

std::string to_string(const SubspaceLabel& l) {
  std::string s;
  for (auto x : l) s += to_char(x);
  return s;
}

std::string to_string(ComponentClass c) {
  switch (c) {
    case ComponentClass::NormalizationFixed: return "normalization-fixed";
    case ComponentClass::NormalizationForbidden: return "normalization-forbidden";
    case ComponentClass::Nonsignaling: return "nonsignaling";
    case ComponentClass::SignalingAllowed: return "signaling-allowed";
    case ComponentClass::SignalingForbidden: return "signaling-forbidden";
  }
  return "";
}

bool is_forbidden(ComponentClass c) {
  return c == ComponentClass::NormalizationForbidden || c == ComponentClass::SignalingForbidden;
}

ComponentClass classify_component(const Scenario& s, const SubspaceLabel& label) {
  if (label.size() != s.num_parties()) throw std::invalid_argument("label length must equal the number of parties");
  std::size_t nC = 0, nS = 0;
  for (auto l : label) {
    nC += l == Sub::C;
    nS += l == Sub::S;
  }
  if (nC == 0) return nS == 0 ? ComponentClass::NormalizationFixed : ComponentClass::NormalizationForbidden;
  if (nS == 0) return ComponentClass::Nonsignaling;
  for (std::size_t b = 0; b < label.size(); ++b)
    for (std::size_t c = 0; c < label.size(); ++c)
      if (label[b] == Sub::S && label[c] == Sub::C && s.signaling_allowed(b, c)) return ComponentClass::SignalingAllowed;
  return ComponentClass::SignalingForbidden;
}

std::vector<SubspaceLabel> all_labels(std::size_t n) {
  std::vector<SubspaceLabel> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    SubspaceLabel l(n);
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0; c /= 3) l[i] = static_cast<Sub>(c % 3);
    out.push_back(std::move(l));
  }
  return out;
}

const RatMatrix& projector(const PartyCard& card, Sub s) {
  const auto& p = projectors(card);
  return s == Sub::Z ? p.Z : s == Sub::C ? p.C : p.S;
}

RatVector project(const Scenario& s, const SubspaceLabel& label, const RatVector& v) {
  auto dims = s.dims();
  RatVector r = v;
  for (std::size_t k = 0; k < label.size(); ++k) r = apply_mode(projector(s.party(k), label[k]), dims, k, r);
  return r;
}

RatVector project_dual(const Scenario& s, const SubspaceLabel& label, const RatVector& phi) {
  auto dims = s.dims();
  RatVector r = phi;
  for (std::size_t k = 0; k < label.size(); ++k) r = apply_mode_dual(r, dims, k, projector(s.party(k), label[k]));
  return r;
}

RatMatrix projector_matrix(const Scenario& s, const SubspaceLabel& label) {
  RatMatrix m = RatMatrix::identity(1);
  for (std::size_t k = 0; k < label.size(); ++k) m = kron(m, projector(s.party(k), label[k]));
  return m;
}

std::vector<std::pair<SubspaceLabel, RatVector>> decompose_behavior(const Behavior& p) {
  std::vector<std::pair<SubspaceLabel, RatVector>> out;
  for (auto& l : all_labels(p.scenario().num_parties())) out.push_back({l, project(p.scenario(), l, p.coeffs())});
  return out;
}

RatVector to_cg(const Behavior& p) {
  const Scenario& s = p.scenario();
  auto dims = s.dims();
  RatVector v = p.coeffs();
  for (std::size_t k = 0; k < s.num_parties(); ++k) {
    v = apply_mode(cg_matrices(s.party(k)).G_plus, dims, k, v);
    dims[k] = cg_dim(s.party(k));
  }
  return v;
}

Behavior from_cg(const Scenario& s, const RatVector& cg) {
  std::vector<std::size_t> dims;
  std::size_t n = 1;
  for (const auto& c : s.parties()) {
    dims.push_back(cg_dim(c));
    n *= cg_dim(c);
  }
  if (cg.size() != n) throw std::invalid_argument("CG vector has length " + std::to_string(cg.size()) + ", expected " + std::to_string(n));
  if (cg[0] != 1) throw std::invalid_argument("CG constant slot must be 1, got " + to_string(cg[0]));
  RatVector v = cg;
  for (std::size_t k = 0; k < s.num_parties(); ++k) {
    v = apply_mode(cg_matrices(s.party(k)).G, dims, k, v);
    dims[k] = s.party(k).dim();
  }
  return Behavior(s, std::move(v));
}

}  // namespace loctrans
