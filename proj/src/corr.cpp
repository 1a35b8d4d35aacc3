#include "loctrans/corr.hpp"

#include <map>
#include <stdexcept>

namespace loctrans {

Behavior::Behavior(Scenario scenario, RatVector coeffs) : scenario_(std::move(scenario)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != scenario_.dim())
    throw std::invalid_argument("behavior length " + std::to_string(coeffs_.size()) + " does not match scenario dimension " +
                                std::to_string(scenario_.dim()));
}

const Rational& Behavior::at(std::span<const Outcome> outcomes) const {
  return coeffs_[scenario_.tensor_index(outcomes)];
}

BellExpression::BellExpression(Scenario scenario, RatVector coeffs, std::optional<Rational> bound)
    : scenario_(std::move(scenario)), coeffs_(std::move(coeffs)), bound_(std::move(bound)) {
  if (coeffs_.size() != scenario_.dim())
    throw std::invalid_argument("expression length " + std::to_string(coeffs_.size()) +
                                " does not match scenario dimension " + std::to_string(scenario_.dim()));
}

const Rational& BellExpression::at(std::span<const Outcome> outcomes) const {
  return coeffs_[scenario_.tensor_index(outcomes)];
}

bool is_nonnegative(const Behavior& p) {
  for (const auto& c : p.coeffs())
    if (sgn(c) < 0) return false;
  return true;
}

bool is_normalized(const Behavior& p) {
  const Scenario& s = p.scenario();
  std::vector<Rational> sums(s.num_input_tuples());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto o = s.tensor_unindex(i);
    sums[s.input_tuple_index(o)] += p.coeffs()[i];
  }
  for (const auto& t : sums)
    if (t != 1) return false;
  return true;
}

namespace {

void check_group(const Behavior& p, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& targets,
                 std::vector<NsViolation>& out) {
  const Scenario& s = p.scenario();
  // marginal on the targets, keyed by (target outputs, all inputs)
  std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> marg;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto o = s.tensor_unindex(i);
    std::vector<int> outs, ins;
    for (auto t : targets) outs.push_back(o[t].a);
    for (auto& e : o) ins.push_back(e.x);
    marg[{outs, ins}] += p.coeffs()[i];
  }
  for (const auto& [key, val] : marg) {
    std::vector<int> ref = key.second;
    bool is_ref = true;
    for (auto b : sources) {
      if (ref[b] != 1) is_ref = false;
      ref[b] = 1;
    }
    if (is_ref) continue;
    const Rational& rv = marg.at({key.first, ref});
    if (rv != val) out.push_back({sources, targets, key.first, key.second, ref, val, rv});
  }
}

}  // namespace

std::vector<NsViolation> check_nonsignaling(const Behavior& p, NsMode mode) {
  if (!is_normalized(p)) throw std::invalid_argument("check_nonsignaling requires a normalized behavior");
  const Scenario& s = p.scenario();
  std::size_t n = s.num_parties();
  if (mode == NsMode::Auto) mode = s.is_nonsignaling() ? NsMode::Reduced : NsMode::Exhaustive;
  std::vector<NsViolation> out;
  if (mode == NsMode::Reduced) {
    for (std::size_t src = 0; src < n; ++src) {
      std::vector<std::size_t> targets;
      for (std::size_t t = 0; t < n; ++t)
        if (t != src && !s.signaling_allowed(src, t)) targets.push_back(t);
      if (!targets.empty()) check_group(p, {src}, targets, out);
    }
    return out;
  }
  // role of each party: 0 rest, 1 source, 2 target
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> sources, targets;
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 3) {
      if (c % 3 == 1) sources.push_back(i);
      if (c % 3 == 2) targets.push_back(i);
    }
    if (sources.empty() || targets.empty()) continue;
    bool ok = true;
    for (auto b : sources)
      for (auto t : targets)
        if (s.signaling_allowed(b, t)) ok = false;
    if (ok) check_group(p, sources, targets, out);
  }
  return out;
}

std::vector<std::size_t> inputs_of(const Scenario& s, std::size_t p) {
  std::vector<std::size_t> r;
  for (std::size_t q = 0; q < s.num_parties(); ++q)
    if (s.signaling_allowed(q, p)) r.push_back(q);
  return r;
}

namespace {

std::size_t response_size(const Scenario& s, std::size_t p) {
  std::size_t n = 1;
  for (auto q : inputs_of(s, p)) n *= static_cast<std::size_t>(s.party(q).num_inputs());
  return n;
}

// own input of party p at response-table position k
int own_input(const Scenario& s, std::size_t p, std::size_t k) {
  auto ins = inputs_of(s, p);
  int x = 1;
  for (std::size_t i = ins.size(); i-- > 0;) {
    auto X = static_cast<std::size_t>(s.party(ins[i]).num_inputs());
    if (ins[i] == p) x = static_cast<int>(k % X) + 1;
    k /= X;
  }
  return x;
}

}  // namespace

Behavior deterministic_behavior(const Scenario& s, const DetBehaviorSpec& spec) {
  std::size_t n = s.num_parties();
  if (spec.responses.size() != n) throw std::invalid_argument("one response table per party expected");
  std::vector<std::vector<std::size_t>> ins(n);
  for (std::size_t p = 0; p < n; ++p) {
    ins[p] = inputs_of(s, p);
    if (spec.responses[p].size() != response_size(s, p))
      throw std::invalid_argument("response table of party " + std::to_string(p) + " has the wrong size");
    for (std::size_t k = 0; k < spec.responses[p].size(); ++k) {
      int a = spec.responses[p][k];
      if (a < 1 || a > s.party(p).num_outputs(own_input(s, p, k)))
        throw std::invalid_argument("response out of range for party " + std::to_string(p));
    }
  }
  RatVector v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto o = s.tensor_unindex(i);
    bool hit = true;
    for (std::size_t p = 0; p < n && hit; ++p) {
      std::size_t k = 0;
      for (auto q : ins[p]) k = k * static_cast<std::size_t>(s.party(q).num_inputs()) + static_cast<std::size_t>(o[q].x - 1);
      hit = spec.responses[p][k] == o[p].a;
    }
    if (hit) v[i] = 1;
  }
  return Behavior(s, std::move(v));
}

std::size_t count_deterministic(const Scenario& s) {
  std::size_t count = 1;
  for (std::size_t p = 0; p < s.num_parties(); ++p)
    for (std::size_t k = 0; k < response_size(s, p); ++k) {
      count *= static_cast<std::size_t>(s.party(p).num_outputs(own_input(s, p, k)));
      if (count > (std::size_t(1) << 62)) return count;
    }
  return count;
}

std::vector<DetBehaviorSpec> enumerate_deterministic_specs(const Scenario& s, std::size_t cap) {
  if (count_deterministic(s) > cap)
    throw std::length_error("deterministic behavior count exceeds the cap of " + std::to_string(cap));
  std::size_t n = s.num_parties();
  std::vector<int> limits;
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  DetBehaviorSpec cur;
  cur.responses.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    cur.responses[p].assign(response_size(s, p), 1);
    for (std::size_t k = 0; k < cur.responses[p].size(); ++k) {
      limits.push_back(s.party(p).num_outputs(own_input(s, p, k)));
      slots.push_back({p, k});
    }
  }
  std::vector<DetBehaviorSpec> out;
  while (true) {
    out.push_back(cur);
    std::size_t i = slots.size();
    while (i-- > 0) {
      auto [p, k] = slots[i];
      if (cur.responses[p][k] < limits[i]) {
        ++cur.responses[p][k];
        break;
      }
      cur.responses[p][k] = 1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<Behavior> deterministic_behaviors(const Scenario& s, std::size_t cap) {
  std::vector<Behavior> out;
  for (const auto& spec : enumerate_deterministic_specs(s, cap)) out.push_back(deterministic_behavior(s, spec));
  return out;
}

Rational evaluate(const BellExpression& phi, const Behavior& p) {
  if (phi.scenario().parties() != p.scenario().parties())
    throw std::invalid_argument("expression and behavior live in different scenarios");
  return dot(phi.coeffs(), p.coeffs());
}

namespace stock {

namespace {

const PartyCard kBin{std::vector<int>{2, 2}};
const PartyCard kTer{std::vector<int>{3, 3}};

template <class F>
RatVector tabulate(const Scenario& s, F f) {
  RatVector v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto o = s.tensor_unindex(i);
    v[i] = f(o[0].a - 1, o[1].a - 1, o[0].x - 1, o[1].x - 1);
  }
  return v;
}

}  // namespace

Behavior pr_box() {
  auto s = Scenario::nonsignaling({kBin, kBin});
  return Behavior(s, tabulate(s, [](int a, int b, int x, int y) {
                    return ((a ^ b) == (x & y)) ? Rational(1, 2) : Rational(0);
                  }));
}

BellExpression chsh() {
  auto s = Scenario::nonsignaling({kBin, kBin});
  return BellExpression(s, tabulate(s, [](int a, int b, int x, int y) {
                          return ((x * y + a + b) % 2 == 0) ? Rational(1) : Rational(-1);
                        }),
                        Rational(2));
}

BellExpression gyni() {
  auto s = Scenario::fully_signaling({kBin, kBin});
  return BellExpression(s, tabulate(s, [](int a, int b, int x, int y) {
                          return (a == y && b == x) ? Rational(1) : Rational(0);
                        }),
                        Rational(2));
}

BellExpression lgyni(int c, int d, int e, int q, int r, int s_) {
  if (q == r && r == s_) throw std::invalid_argument("lgyni: q, r, s may not all be equal");
  const int guess[3] = {q, r, s_};
  auto s = Scenario::fully_signaling({kBin, kTer});
  return BellExpression(s, tabulate(s, [&](int a, int b, int x, int y) {
                          bool alice = ((x ^ c) & (a ^ d ^ y)) == 0;
                          bool bob = y == e || guess[b] == x;
                          return (alice && bob) ? Rational(1) : Rational(0);
                        }),
                        Rational(3));
}

BellExpression gyni_ternary(int c, int d, int q0, int r0, int s0, int q1, int r1, int s1) {
  if ((q0 == r0 && r0 == s0) || (q1 == r1 && r1 == s1))
    throw std::invalid_argument("gyni_ternary: q_y, r_y, s_y may not all be equal");
  const int guess[2][3] = {{q0, r0, s0}, {q1, r1, s1}};
  auto s = Scenario::fully_signaling({kBin, kTer});
  return BellExpression(s, tabulate(s, [&](int a, int b, int x, int y) {
                          bool alice = y == (c ^ (d & x) ^ a);
                          bool bob = guess[y][b] == x;
                          return (alice && bob) ? Rational(1) : Rational(0);
                        }),
                        Rational(2));
}

std::vector<BellExpression> lgyni_family() {
  std::vector<BellExpression> out;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int e = 0; e < 2; ++e)
        for (int g = 0; g < 8; ++g) {
          int q = g >> 2 & 1, r = g >> 1 & 1, s = g & 1;
          if (q == r && r == s) continue;
          out.push_back(lgyni(c, d, e, q, r, s));
        }
  return out;
}

std::vector<BellExpression> gyni_ternary_family() {
  std::vector<BellExpression> out;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int g0 = 0; g0 < 8; ++g0)
        for (int g1 = 0; g1 < 8; ++g1) {
          if (g0 == 0 || g0 == 7 || g1 == 0 || g1 == 7) continue;
          out.push_back(gyni_ternary(c, d, g0 >> 2 & 1, g0 >> 1 & 1, g0 & 1, g1 >> 2 & 1, g1 >> 1 & 1, g1 & 1));
        }
  return out;
}

}  // namespace stock

}  // namespace loctrans
