#include "loctrans/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "loctrans/detmap.hpp"
#include "loctrans/ineq.hpp"

namespace loctrans {

namespace {

// greedy: keep rows (with their rhs) independent of the earlier kept rows
void keep_independent(const std::vector<RatVector>& rows, const RatVector& rhs, std::size_t d, RatMatrix& A,
                      RatVector& b) {
  std::vector<RatVector> ech, kept;
  std::vector<std::size_t> piv;
  RatVector kb;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RatVector v = rows[i];
    for (std::size_t k = 0; k < ech.size(); ++k)
      if (sgn(v[piv[k]]) != 0) axpy(v, -v[piv[k]], ech[k]);
    std::size_t p = 0;
    while (p < d && sgn(v[p]) == 0) ++p;
    if (p == d) continue;
    ech.push_back(scaled(v, 1 / Rational(v[p])));
    piv.push_back(p);
    kept.push_back(rows[i]);
    kb.push_back(rhs[i]);
  }
  A = RatMatrix::from_rows(kept, d);
  b = std::move(kb);
}

bool lex_less(const RatVector& a, const RatVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

RatVector to_rat(const IntVector& v) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

}  // namespace

HRep ns_hrep(const Scenario& s) {
  std::size_t d = s.dim();
  auto cf = constraint_forms(s);
  std::vector<RatVector> rows{cf.tau_all};
  RatVector rhs{Rational(1)};
  for (const auto& m : cf.mu) {
    rows.push_back(m);
    rhs.push_back(0);
  }
  HRep h;
  h.dim = d;
  keep_independent(rows, rhs, d, h.eq_A, h.eq_b);
  h.ineq_A = RatMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) h.ineq_A(i, i) = -1;
  h.ineq_c = zeros(d);
  return h;
}

std::size_t affine_dimension(const HRep& h) { return h.dim - rank(h.eq_A); }

bool satisfies(const RatVector& x, const HRep& h) {
  if (x.size() != h.dim) return false;
  if (h.eq_A.rows() > 0 && h.eq_A * x != h.eq_b) return false;
  if (h.ineq_A.rows() == 0) return true;
  RatVector g = h.ineq_A * x;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] > h.ineq_c[i]) return false;
  return true;
}

bool extremal(const RatVector& x, const HRep& h) {
  if (x.size() != h.dim) throw std::invalid_argument("extremal: dimension mismatch");
  std::vector<RatVector> rows;
  for (std::size_t i = 0; i < h.eq_A.rows(); ++i) rows.push_back(h.eq_A.row(i));
  for (std::size_t i = 0; i < h.ineq_A.rows(); ++i) {
    RatVector r = h.ineq_A.row(i);
    if (dot(r, x) == h.ineq_c[i]) rows.push_back(std::move(r));
  }
  return rank(RatMatrix::from_rows(rows, h.dim)) == h.dim;
}

bool extremal(const Behavior& p, const HRep& h) { return extremal(p.coeffs(), h); }

VRep dd_vertices(const HRep& h, const PolytopeLimits& limits) {
  std::size_t d = h.dim;
  RatVector x0 = zeros(d);
  std::vector<RatVector> K;
  if (h.eq_A.rows() > 0) {
    auto sol = solve(h.eq_A, h.eq_b);
    if (!sol) return {d, {}};
    x0 = *sol;
    K = kernel_basis(h.eq_A);
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      RatVector e = zeros(d);
      e[i] = 1;
      K.push_back(std::move(e));
    }
  }
  std::size_t k = K.size();
  if (k == 0) {
    if (!satisfies(x0, h)) return {d, {}};
    return {d, {x0}};
  }

  // cone over (t0, t): t0 (c - G x0) - (G K) t >= 0, t0 >= 0
  std::vector<IntVector> rows;
  std::set<IntVector> seen;
  for (std::size_t i = 0; i < h.ineq_A.rows(); ++i) {
    RatVector g = h.ineq_A.row(i);
    RatVector r(k + 1);
    r[0] = h.ineq_c[i] - dot(g, x0);
    bool zero_t = true;
    for (std::size_t j = 0; j < k; ++j) {
      r[j + 1] = -dot(g, K[j]);
      if (sgn(r[j + 1]) != 0) zero_t = false;
    }
    if (zero_t) {
      if (sgn(r[0]) < 0) return {d, {}};
      continue;
    }
    IntVector ir = primitive(r);
    if (seen.insert(ir).second) rows.push_back(std::move(ir));
  }
  IntVector t0(k + 1, 0);
  t0[0] = 1;
  if (seen.insert(t0).second) rows.push_back(t0);

  DdOptions opts{limits.max_rays, limits.rank_adjacency};
  auto res = extreme_rays(rows, k + 1, opts);

  VRep out{d, {}};
  for (const auto& ray : res.rays) {
    if (sgn(ray[0]) == 0) throw std::invalid_argument("dd_vertices: the polyhedron is unbounded");
    RatVector x = x0;
    for (std::size_t j = 0; j < k; ++j)
      if (sgn(ray[j + 1]) != 0) axpy(x, Rational(ray[j + 1], ray[0]), K[j]);
    for (auto& q : x) q.canonicalize();
    out.vertices.push_back(std::move(x));
  }
  std::sort(out.vertices.begin(), out.vertices.end(), lex_less);
  if (limits.verify)
    for (const auto& x : out.vertices)
      if (!satisfies(x, h) || !extremal(x, h))
        throw std::logic_error("dd_vertices: verification failed for an output vertex");
  return out;
}

HRep dd_facets(const VRep& v, const PolytopeLimits& limits) {
  if (v.vertices.empty()) throw std::invalid_argument("dd_facets: no vertices");
  std::size_t D = v.dim;
  std::vector<RatVector> V = v.vertices;
  std::sort(V.begin(), V.end(), lex_less);
  V.erase(std::unique(V.begin(), V.end()), V.end());
  for (const auto& x : V)
    if (x.size() != D) throw std::invalid_argument("dd_facets: vertex length mismatch");

  std::vector<RatVector> diffs;
  for (std::size_t i = 1; i < V.size(); ++i) diffs.push_back(sub(V[i], V[0]));
  RatMatrix M = RatMatrix::from_rows(diffs, D);

  HRep h;
  h.dim = D;
  std::vector<RatVector> eqs;
  RatVector eqb;
  for (const auto& c : kernel_basis(M)) {
    RatVector ci = to_rat(primitive(c));
    eqb.push_back(dot(ci, V[0]));
    eqs.push_back(std::move(ci));
  }
  h.eq_A = RatMatrix::from_rows(eqs, D);
  h.eq_b = eqb;

  auto ech = row_reduce(M);
  const auto& S = ech.pivots;
  std::size_t r = S.size();
  if (r == 0) {
    h.ineq_A = RatMatrix(0, D);
    return h;
  }

  Integer L = 1;
  for (const auto& x : V)
    for (auto j : S) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), x[j].get_den_mpz_t());

  // cone over (c, b): b - c . (L x_S) >= 0 for every vertex
  std::vector<IntVector> rows;
  for (const auto& x : V) {
    IntVector row(r + 1);
    for (std::size_t k = 0; k < r; ++k) {
      Rational y = x[S[k]] * L;
      row[k] = -y.get_num();
    }
    row[r] = 1;
    rows.push_back(std::move(row));
  }
  DdOptions opts{limits.max_rays, limits.rank_adjacency};
  auto res = extreme_rays(rows, r + 1, opts);

  std::vector<std::pair<RatVector, Rational>> facets;
  for (const auto& ray : res.rays) {
    bool trivial = true;
    for (std::size_t k = 0; k < r; ++k)
      if (sgn(ray[k]) != 0) trivial = false;
    if (trivial) continue;
    RatVector g = zeros(D + 1);
    for (std::size_t k = 0; k < r; ++k) g[S[k]] = Rational(ray[k] * L);
    g[D] = ray[r];
    IntVector pg = primitive(g);
    RatVector coeffs(D);
    for (std::size_t j = 0; j < D; ++j) coeffs[j] = pg[j];
    facets.emplace_back(std::move(coeffs), Rational(pg[D]));
  }
  std::sort(facets.begin(), facets.end());

  std::vector<RatVector> A;
  RatVector c;
  for (auto& [g, b] : facets) {
    A.push_back(g);
    c.push_back(b);
  }
  h.ineq_A = RatMatrix::from_rows(A, D);
  h.ineq_c = c;

  if (limits.verify) {
    for (const auto& x : V)
      if (!satisfies(x, h)) throw std::logic_error("dd_facets: a vertex violates an output facet");
    for (std::size_t f = 0; f < facets.size(); ++f) {
      std::vector<RatVector> tight;
      for (const auto& x : V)
        if (dot(facets[f].first, x) == facets[f].second) {
          RatVector y(x);
          y.push_back(1);
          tight.push_back(std::move(y));
        }
      // r affinely independent tight vertices
      if (rank(RatMatrix::from_rows(tight, D + 1)) != r)
        throw std::logic_error("dd_facets: an output inequality is not a facet");
    }
  }
  return h;
}

Scenario causal_scenario(const PartyCard& a, const PartyCard& b) { return Scenario::fully_signaling({a, b}); }

VRep causal_vertices(const PartyCard& a, const PartyCard& b) {
  std::set<RatVector> all;
  for (auto e : {Scenario::Edge{0, 1}, Scenario::Edge{1, 0}}) {
    Scenario s({a, b}, {e});
    for (const auto& p : deterministic_behaviors(s)) all.insert(p.coeffs());
  }
  VRep v{causal_scenario(a, b).dim(), {}};
  v.vertices.assign(all.begin(), all.end());
  std::sort(v.vertices.begin(), v.vertices.end(), lex_less);
  return v;
}

std::vector<std::size_t> relabeling_permutation(const Scenario& s, const std::vector<DetMap>& maps) {
  if (maps.size() != s.num_parties()) throw std::invalid_argument("one relabeling per party expected");
  std::vector<std::vector<std::size_t>> local;
  for (std::size_t p = 0; p < maps.size(); ++p) {
    const auto& m = maps[p];
    if (!(m.source() == s.party(p)) || !(m.target() == s.party(p)))
      throw std::invalid_argument("relabeling does not match the party cardinalities");
    // Lambda_{(alpha_z(a), z), (a, xi(z))} = 1, so (phi Lambda)_{(a, xi(z))} = phi_{(alpha_z(a), z)}
    std::vector<std::size_t> perm(m.source().dim());
    for (int z = 1; z <= m.target().num_inputs(); ++z) {
      int x = m.xi(z);
      for (int a = 1; a <= m.source().num_outputs(x); ++a)
        perm[m.source().flatten(a, x)] = m.target().flatten(m.alpha(z, a), z);
    }
    local.push_back(std::move(perm));
  }
  auto dims = s.dims();
  std::vector<std::size_t> out(s.dim());
  std::vector<std::size_t> digit(dims.size(), 0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t t = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) t = t * dims[p] + local[p][digit[p]];
    out[j] = t;
    for (std::size_t p = dims.size(); p-- > 0;) {
      if (++digit[p] < dims[p]) break;
      digit[p] = 0;
    }
  }
  return out;
}

std::vector<FacetClass> classify_facets(const HRep& h, const Scenario& s) {
  if (h.dim != s.dim()) throw std::invalid_argument("classify_facets: dimension mismatch");
  std::size_t n = h.ineq_A.rows();
  std::vector<RatVector> canon;
  std::map<RatVector, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    auto f = canonicalize(BellExpression(s, h.ineq_A.row(i), h.ineq_c[i]), CanonMode::ZeroBound);
    index.emplace(f.coeffs, i);
    canon.push_back(std::move(f.coeffs));
  }

  // group elements as coefficient permutations
  std::vector<std::vector<DetMap>> per_party;
  for (const auto& c : s.parties()) per_party.push_back(relabelings(c));
  std::vector<std::vector<std::size_t>> perms;
  std::size_t total = 1;
  for (const auto& m : per_party) total *= m.size();
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<DetMap> maps;
    std::size_t rest = t;
    for (std::size_t p = per_party.size(); p-- > 0;) {
      maps.push_back(per_party[p][rest % per_party[p].size()]);
      rest /= per_party[p].size();
    }
    std::reverse(maps.begin(), maps.end());
    perms.push_back(relabeling_permutation(s, maps));
  }

  std::vector<std::size_t> cls(n, n);
  std::vector<FacetClass> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] != n) continue;
    if (auto j = index.at(canon[i]); j != i) {  // repeated row
      cls[i] = cls[j];
      continue;
    }
    std::set<RatVector> orbit;
    FacetClass fc{BellExpression(s, canon[i], Rational(0)), 0, {}};
    for (const auto& perm : perms) {
      RatVector w(canon[i].size());
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = canon[i][perm[j]];
      auto it = index.find(w);
      if (it != index.end()) cls[it->second] = out.size();
      orbit.insert(std::move(w));
    }
    fc.orbit_size = orbit.size();
    out.push_back(std::move(fc));
  }
  for (std::size_t i = 0; i < n; ++i) out[cls[i]].members.push_back(i);
  return out;
}

}  // namespace loctrans
