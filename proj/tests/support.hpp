// random generators and brute-force oracles shared by the suites
#pragma once

#include <functional>
#include <random>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/detmap.hpp"
#include "loctrans/ratlin.hpp"
#include "loctrans/scenario.hpp"
#include "loctrans/stochmap.hpp"

namespace t {

using namespace loctrans;

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
  bool coin() { return uniform(0, 1) == 1; }
  Rational rational(int num = 9, int den = 6) {
    Rational q(uniform(-num, num), uniform(1, den));
    q.canonicalize();
    return q;
  }
  Rational positive(int num = 9, int den = 6) {
    Rational q(uniform(1, num), uniform(1, den));
    q.canonicalize();
    return q;
  }
  RatVector vec(std::size_t n) {
    RatVector v(n);
    for (auto& q : v) q = rational();
    return v;
  }
  PartyCard card(int max_inputs = 3, int max_outputs = 3, int min_outputs = 1) {
    std::vector<int> o(uniform(1, max_inputs));
    for (auto& a : o) a = uniform(min_outputs, max_outputs);
    return PartyCard(o);
  }
  DetMap detmap(const PartyCard& s, const PartyCard& t) {
    std::vector<int> xi;
    std::vector<std::vector<int>> al;
    for (int z = 1; z <= t.num_inputs(); ++z) {
      int x = uniform(1, s.num_inputs());
      xi.push_back(x);
      std::vector<int> a(s.num_outputs(x));
      for (auto& v : a) v = uniform(1, t.num_outputs(z));
      al.push_back(a);
    }
    return DetMap(s, t, xi, al);
  }
  // random convex weights summing to one
  std::vector<Rational> simplex(std::size_t n) {
    std::vector<Rational> w(n);
    Rational s = 0;
    for (auto& q : w) {
      q = uniform(0, 5);
      s += q;
    }
    if (s == 0) {
      w[0] = 1;
      return w;
    }
    for (auto& q : w) q /= s;
    return w;
  }
  // random local transformation as a mixture of a few deterministic maps
  RatMatrix stochastic(const PartyCard& s, const PartyCard& t, int terms = 3) {
    RatMatrix m(t.dim(), s.dim());
    auto w = simplex(static_cast<std::size_t>(terms));
    for (auto& q : w) m = m + q * to_matrix(detmap(s, t));
    return m;
  }
  // random point of the behavior polytope: mixture of deterministic behaviors
  Behavior behavior(const Scenario& s, int terms = 3) {
    RatVector v = zeros(s.dim());
    auto w = simplex(static_cast<std::size_t>(terms));
    for (auto& q : w) {
      DetBehaviorSpec spec;
      for (std::size_t p = 0; p < s.num_parties(); ++p) {
        std::size_t n = 1;
        for (auto q2 : inputs_of(s, p)) n *= static_cast<std::size_t>(s.party(q2).num_inputs());
        // response table over inputs_of(p); the party's own output range depends on its input,
        // so pick within the smallest range to stay valid
        int amin = s.party(p).outputs().front();
        for (int a : s.party(p).outputs()) amin = std::min(amin, a);
        std::vector<int> r(n);
        for (auto& a : r) a = uniform(1, amin);
        spec.responses.push_back(r);
      }
      axpy(v, q, deterministic_behavior(s, spec).coeffs());
    }
    return Behavior(s, v);
  }
};

// flat index by explicit mixed radix over (a_p, x_p), party 0 most significant
inline std::size_t flat_index(const Scenario& s, const std::vector<int>& a, const std::vector<int>& x) {
  std::size_t idx = 0;
  for (std::size_t p = 0; p < s.num_parties(); ++p) {
    const auto& outs = s.party(p).outputs();
    std::size_t off = 0;
    for (int z = 1; z < x[p]; ++z) off += static_cast<std::size_t>(outs[z - 1]);
    idx = idx * s.party(p).dim() + off + static_cast<std::size_t>(a[p] - 1);
  }
  return idx;
}

// visit every (a, x) tuple
inline void for_each_outcome(const Scenario& s, const std::function<void(const std::vector<int>&, const std::vector<int>&)>& f) {
  std::size_t n = s.num_parties();
  std::vector<int> a(n, 1), x(n, 1);
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == n) {
      f(a, x);
      return;
    }
    for (x[p] = 1; x[p] <= s.party(p).num_inputs(); ++x[p])
      for (a[p] = 1; a[p] <= s.party(p).num_outputs(x[p]); ++a[p]) rec(p + 1);
  };
  rec(0);
}

inline RatVector tabulate(const Scenario& s, const std::function<Rational(const std::vector<int>&, const std::vector<int>&)>& f) {
  RatVector v(s.dim());
  for_each_outcome(s, [&](const auto& a, const auto& x) { v[flat_index(s, a, x)] = f(a, x); });
  return v;
}

// direct from the definition: Lambda_{(alpha_z(a), z), (a, xi(z))} = 1
inline RatMatrix detmap_matrix_oracle(const DetMap& m) {
  RatMatrix M(m.target().dim(), m.source().dim());
  std::size_t row_off = 0;
  for (int z = 1; z <= m.target().num_inputs(); ++z) {
    int x = m.xi(z);
    std::size_t col_off = 0;
    for (int w = 1; w < x; ++w) col_off += static_cast<std::size_t>(m.source().num_outputs(w));
    for (int a = 1; a <= m.source().num_outputs(x); ++a)
      M(row_off + static_cast<std::size_t>(m.alpha(z, a) - 1), col_off + static_cast<std::size_t>(a - 1)) = 1;
    row_off += static_cast<std::size_t>(m.target().num_outputs(z));
  }
  return M;
}

// sum_{x'} sum_x A'_{x'}^{A_x}
inline std::size_t count_maps_oracle(const PartyCard& s, const PartyCard& t) {
  std::size_t total = 1;
  for (int z = 1; z <= t.num_inputs(); ++z) {
    std::size_t sum = 0;
    for (int x = 1; x <= s.num_inputs(); ++x) {
      std::size_t p = 1;
      for (int k = 0; k < s.num_outputs(x); ++k) p *= static_cast<std::size_t>(t.num_outputs(z));
      sum += p;
    }
    total *= sum;
  }
  return total;
}

}  // namespace t
