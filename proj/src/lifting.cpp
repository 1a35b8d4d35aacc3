#include "loctrans/lifting.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>

namespace loctrans {

RatVector apply_detmap_mode(const DetMap& m, std::span<const std::size_t> dims, std::size_t mode, const RatVector& v) {
  const PartyCard& S = m.source();
  const PartyCard& T = m.target();
  if (mode >= dims.size() || dims[mode] != S.dim()) throw std::invalid_argument("apply_detmap_mode: shape mismatch");
  std::size_t pre = 1, post = 1;
  for (std::size_t k = 0; k < mode; ++k) pre *= dims[k];
  for (std::size_t k = mode + 1; k < dims.size(); ++k) post *= dims[k];
  std::size_t din = S.dim(), dout = T.dim();
  RatVector r(pre * dout * post);
  for (int z = 1; z <= T.num_inputs(); ++z) {
    int x = m.xi(z);
    for (int a = 1; a <= S.num_outputs(x); ++a) {
      std::size_t row = T.flatten(m.alpha(z, a), z), col = S.flatten(a, x);
      for (std::size_t p = 0; p < pre; ++p) {
        const Rational* src = &v[(p * din + col) * post];
        Rational* dst = &r[(p * dout + row) * post];
        for (std::size_t q = 0; q < post; ++q)
          if (sgn(src[q]) != 0) dst[q] += src[q];
      }
    }
  }
  return r;
}

Behavior apply_detmaps(const std::vector<DetMap>& maps, const Behavior& p) {
  const Scenario& s = p.scenario();
  if (maps.size() != s.num_parties()) throw std::invalid_argument("one map per party expected");
  auto dims = s.dims();
  RatVector v = p.coeffs();
  std::vector<PartyCard> cards;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (!(maps[k].source() == s.party(k)))
      throw std::invalid_argument("map for party " + std::to_string(k) + " has the wrong source cardinality");
    v = apply_detmap_mode(maps[k], dims, k, v);
    dims[k] = maps[k].target().dim();
    cards.push_back(maps[k].target());
  }
  return Behavior(s.with_parties(cards), std::move(v));
}

namespace {

using Leaf = std::function<bool(const std::vector<std::size_t>&, const RatVector&)>;

// depth-first over map tuples; the first party ranges over [lo, hi)
bool dfs(const std::vector<std::vector<DetMap>>& maps, std::size_t k, std::vector<std::size_t>& dims,
         const RatVector& v, std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, const Leaf& leaf) {
  if (k == maps.size()) return leaf(idx, v);
  std::size_t b = k == 0 ? lo : 0, e = k == 0 ? hi : maps[k].size();
  std::size_t saved = dims[k];
  for (std::size_t i = b; i < e; ++i) {
    dims[k] = saved;
    RatVector w = apply_detmap_mode(maps[k][i], dims, k, v);
    dims[k] = maps[k][i].target().dim();
    idx[k] = i;
    if (!dfs(maps, k + 1, dims, w, idx, lo, hi, leaf)) {
      dims[k] = saved;
      return false;
    }
  }
  dims[k] = saved;
  return true;
}

std::vector<std::vector<DetMap>> all_tuples_maps(const std::vector<PartyCard>& from, const std::vector<PartyCard>& to,
                                                 std::size_t cap) {
  double total = 1;
  for (std::size_t k = 0; k < from.size(); ++k) total *= static_cast<double>(count_maps(from[k], to[k]));
  if (total > static_cast<double>(cap))
    throw CapExceeded("search over " + std::to_string(static_cast<long double>(total)) +
                      " map tuples exceeds the cap of " + std::to_string(cap));
  std::vector<std::vector<DetMap>> maps;
  for (std::size_t k = 0; k < from.size(); ++k) maps.push_back(enumerate_maps(from[k], to[k], std::nullopt, cap));
  return maps;
}

void run_chunks(std::size_t n, unsigned threads, const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    body(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = n * t / threads, hi = n * (t + 1) / threads;
    pool.emplace_back(body, t, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

PayoffResult max_payoff(const BellExpression& phi, const Behavior& p, std::size_t cap, unsigned threads) {
  const Scenario& s1 = phi.scenario();
  const Scenario& s2 = p.scenario();
  if (s1.num_parties() != s2.num_parties()) throw std::invalid_argument("max_payoff: party counts differ");
  auto maps = all_tuples_maps(s2.parties(), s1.parties(), cap);
  threads = std::max(1u, threads);
  std::vector<std::optional<std::pair<Rational, std::vector<std::size_t>>>> best(threads);
  run_chunks(maps[0].size(), threads, [&](std::size_t t, std::size_t lo, std::size_t hi) {
    auto dims = s2.dims();
    std::vector<std::size_t> idx(maps.size());
    auto& b = best[t];
    dfs(maps, 0, dims, p.coeffs(), idx, lo, hi, [&](const std::vector<std::size_t>& id, const RatVector& v) {
      Rational val = dot(phi.coeffs(), v);
      if (!b || val > b->first) b = {{val, id}};
      return true;
    });
  });
  std::optional<std::pair<Rational, std::vector<std::size_t>>> top;
  for (auto& b : best)
    if (b && (!top || b->first > top->first)) top = b;
  PayoffResult r;
  r.value = top->first;
  for (std::size_t k = 0; k < maps.size(); ++k) r.maps.push_back(maps[k][top->second[k]]);
  return r;
}

Behavior lift_behavior(const Behavior& p, std::size_t party, const DetMap& m) {
  if (!is_left_invertible(m)) throw NotInvertible("lift_behavior needs a left-invertible map, got " + to_string(classify(m)));
  if (!(m.source() == p.scenario().party(party))) throw std::invalid_argument("lift_behavior: map source does not match the party");
  auto dims = p.scenario().dims();
  return Behavior(p.scenario().with_party(party, m.target()), apply_detmap_mode(m, dims, party, p.coeffs()));
}

BellExpression lift_expression(const BellExpression& phi, std::size_t party, const DetMap& m) {
  if (!is_right_invertible(m))
    throw NotInvertible("lift_expression needs a right-invertible map, got " + to_string(classify(m)));
  if (!(m.target() == phi.scenario().party(party)))
    throw std::invalid_argument("lift_expression: map target does not match the party");
  auto dims = phi.scenario().dims();
  return BellExpression(phi.scenario().with_party(party, m.source()),
                        apply_mode_dual(phi.coeffs(), dims, party, to_matrix(m)), phi.bound());
}

LiftCensus census_lift(const Behavior& p, std::size_t party, const PartyCard& target, unsigned threads) {
  const PartyCard& src = p.scenario().party(party);
  LiftCensus c;
  c.total_maps = count_maps(src, target);
  auto maps = enumerate_maps(src, target, InvertibilityClass::LeftInvertible);
  c.invertible_count = maps.size();
  threads = std::max(1u, threads);
  std::vector<RatVector> lifted(maps.size());
  auto dims = p.scenario().dims();
  run_chunks(maps.size(), threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) lifted[i] = apply_detmap_mode(maps[i], dims, party, p.coeffs());
  });
  std::set<RatVector> seen;
  Scenario ts = p.scenario().with_party(party, target);
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (seen.insert(lifted[i]).second) {
      c.images.emplace_back(ts, lifted[i]);
      c.image_maps.push_back(maps[i]);
    }
  c.unique_images = c.images.size();
  return c;
}

LiftCensus census_lift_pr(const PartyCard& target, unsigned threads) {
  return census_lift(stock::pr_box(), 0, target, threads);
}

namespace {

std::optional<std::vector<DetMap>> find_conversion(const Behavior& from, const Behavior& to, std::size_t cap) {
  auto maps = all_tuples_maps(from.scenario().parties(), to.scenario().parties(), cap);
  auto dims = from.scenario().dims();
  std::vector<std::size_t> idx(maps.size()), hit;
  dfs(maps, 0, dims, from.coeffs(), idx, 0, maps[0].size(), [&](const std::vector<std::size_t>& id, const RatVector& v) {
    if (v != to.coeffs()) return true;
    hit = id;
    return false;
  });
  if (hit.empty()) return std::nullopt;
  std::vector<DetMap> out;
  for (std::size_t k = 0; k < maps.size(); ++k) out.push_back(maps[k][hit[k]]);
  return out;
}

}  // namespace

std::optional<Interconversion> interconvertible(const Behavior& p1, const Behavior& p2, std::size_t cap) {
  if (p1.scenario().num_parties() != p2.scenario().num_parties())
    throw std::invalid_argument("interconvertible: party counts differ");
  auto fwd = find_conversion(p1, p2, cap);
  if (!fwd) return std::nullopt;
  auto bwd = find_conversion(p2, p1, cap);
  if (!bwd) return std::nullopt;
  return Interconversion{*fwd, *bwd};
}

}  // namespace loctrans
