#include "loctrans/detmap.hpp"

#include <algorithm>
#include <limits>

namespace loctrans {

DetMap::DetMap(PartyCard source, PartyCard target, std::vector<int> xi, std::vector<std::vector<int>> alphas)
    : source_(std::move(source)), target_(std::move(target)), xi_(std::move(xi)), alphas_(std::move(alphas)) {
  if (xi_.size() != static_cast<std::size_t>(target_.num_inputs()))
    throw std::invalid_argument("xi must have one entry per target input");
  if (alphas_.size() != xi_.size()) throw std::invalid_argument("alphas must have one entry per target input");
  for (std::size_t z = 0; z < xi_.size(); ++z) {
    int x = xi_[z];
    if (x < 1 || x > source_.num_inputs()) throw std::invalid_argument("xi value out of range");
    if (alphas_[z].size() != static_cast<std::size_t>(source_.num_outputs(x)))
      throw std::invalid_argument("alpha " + std::to_string(z + 1) + " must have one entry per output of source input " +
                                  std::to_string(x));
    for (int a : alphas_[z])
      if (a < 1 || a > target_.outputs()[z]) throw std::invalid_argument("alpha value out of range");
  }
}

DetMap DetMap::identity(const PartyCard& card) {
  std::vector<int> xi;
  std::vector<std::vector<int>> alphas;
  for (int x = 1; x <= card.num_inputs(); ++x) {
    xi.push_back(x);
    std::vector<int> al(card.num_outputs(x));
    for (int a = 1; a <= card.num_outputs(x); ++a) al[a - 1] = a;
    alphas.push_back(std::move(al));
  }
  return DetMap(card, card, std::move(xi), std::move(alphas));
}

std::string to_string(InvertibilityClass c) {
  switch (c) {
    case InvertibilityClass::Relabeling: return "relabeling";
    case InvertibilityClass::Reordering: return "reordering";
    case InvertibilityClass::LeftInvertible: return "left-invertible";
    case InvertibilityClass::RightInvertible: return "right-invertible";
    case InvertibilityClass::Neither: return "neither";
  }
  return "neither";
}

std::optional<InvertibilityClass> parse_invertibility_class(const std::string& s) {
  for (auto c : {InvertibilityClass::Relabeling, InvertibilityClass::Reordering, InvertibilityClass::LeftInvertible,
                 InvertibilityClass::RightInvertible, InvertibilityClass::Neither})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

RatMatrix to_matrix(const DetMap& m) {
  RatMatrix r(m.target().dim(), m.source().dim());
  for (int z = 1; z <= m.target().num_inputs(); ++z) {
    int x = m.xi(z);
    for (int a = 1; a <= m.source().num_outputs(x); ++a) r(m.target().flatten(m.alpha(z, a), z), m.source().flatten(a, x)) = 1;
  }
  return r;
}

DetMap compose(const DetMap& t, const DetMap& s) {
  if (!(s.target() == t.source()))
    throw std::invalid_argument("compose: middle cardinalities differ, " + s.target().str() + " vs " + t.source().str());
  std::vector<int> xi;
  std::vector<std::vector<int>> alphas;
  for (int z = 1; z <= t.target().num_inputs(); ++z) {
    int mid = t.xi(z);
    int x = s.xi(mid);
    xi.push_back(x);
    std::vector<int> al;
    for (int a = 1; a <= s.source().num_outputs(x); ++a) al.push_back(t.alpha(z, s.alpha(mid, a)));
    alphas.push_back(std::move(al));
  }
  return DetMap(s.source(), t.target(), std::move(xi), std::move(alphas));
}

std::pair<DetMap, DetMap> factor_pure(const DetMap& m) {
  std::vector<int> mid_outputs, ident_xi;
  std::vector<std::vector<int>> ident_alphas;
  for (int z = 1; z <= m.target().num_inputs(); ++z) {
    int A = m.source().num_outputs(m.xi(z));
    mid_outputs.push_back(A);
    ident_xi.push_back(z);
    std::vector<int> al(A);
    for (int a = 1; a <= A; ++a) al[a - 1] = a;
    ident_alphas.push_back(std::move(al));
  }
  PartyCard mid(mid_outputs);
  DetMap input(m.source(), mid, m.xi(), ident_alphas);
  DetMap output(mid, m.target(), ident_xi, m.alphas());
  return {input, output};
}

namespace {

bool injective(const std::vector<int>& f) {
  auto g = f;
  std::sort(g.begin(), g.end());
  return std::adjacent_find(g.begin(), g.end()) == g.end();
}

bool surjective(const std::vector<int>& f, int range) {
  std::vector<bool> hit(range + 1, false);
  for (int v : f) hit[v] = true;
  for (int v = 1; v <= range; ++v)
    if (!hit[v]) return false;
  return true;
}

// least target input z with xi(z) = x and injective alpha_z, or 0
int left_witness(const DetMap& m, int x) {
  for (int z = 1; z <= m.target().num_inputs(); ++z)
    if (m.xi(z) == x && injective(m.alphas()[z - 1])) return z;
  return 0;
}

}  // namespace

bool is_left_invertible(const DetMap& m) {
  for (int x = 1; x <= m.source().num_inputs(); ++x)
    if (!left_witness(m, x)) return false;
  return true;
}

bool is_right_invertible(const DetMap& m) {
  if (!injective(m.xi())) return false;
  for (int z = 1; z <= m.target().num_inputs(); ++z)
    if (!surjective(m.alphas()[z - 1], m.target().num_outputs(z))) return false;
  return true;
}

InvertibilityClass classify(const DetMap& m) {
  bool left = is_left_invertible(m), right = is_right_invertible(m);
  if (left && right)
    return m.source() == m.target() ? InvertibilityClass::Relabeling : InvertibilityClass::Reordering;
  if (left) return InvertibilityClass::LeftInvertible;
  if (right) return InvertibilityClass::RightInvertible;
  return InvertibilityClass::Neither;
}

bool single_output_advisory(const DetMap& m) {
  return m.source().has_single_output_input() || m.target().has_single_output_input();
}

DetMap find_left_inverse(const DetMap& m) {
  std::vector<int> zeta;
  std::vector<std::vector<int>> gammas;
  for (int x = 1; x <= m.source().num_inputs(); ++x) {
    int z = left_witness(m, x);
    if (!z) throw NotInvertible("map has no deterministic left inverse (source input " + std::to_string(x) + ")");
    zeta.push_back(z);
    std::vector<int> g(m.target().num_outputs(z), 1);
    for (int a = 1; a <= m.source().num_outputs(x); ++a) g[m.alpha(z, a) - 1] = a;
    gammas.push_back(std::move(g));
  }
  return DetMap(m.target(), m.source(), std::move(zeta), std::move(gammas));
}

DetMap find_right_inverse(const DetMap& m) {
  if (!is_right_invertible(m)) throw NotInvertible("map has no deterministic right inverse");
  int X = m.source().num_inputs();
  std::vector<int> xi(X, 1);
  std::vector<std::vector<int>> alphas(X);
  std::vector<bool> covered(X + 1, false);
  for (int z = 1; z <= m.target().num_inputs(); ++z) {
    int x = m.xi(z);
    covered[x] = true;
    xi[x - 1] = z;
    std::vector<int> sec(m.target().num_outputs(z), 0);
    for (int a = m.source().num_outputs(x); a >= 1; --a) sec[m.alpha(z, a) - 1] = a;
    alphas[x - 1] = std::move(sec);
  }
  for (int x = 1; x <= X; ++x)
    if (!covered[x]) alphas[x - 1].assign(m.target().num_outputs(1), 1);
  return DetMap(m.target(), m.source(), std::move(xi), std::move(alphas));
}

std::size_t count_maps(const PartyCard& source, const PartyCard& target) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  auto mul = [](std::size_t a, std::size_t b) { return (b != 0 && a > kMax / b) ? kMax : a * b; };
  std::size_t total = 1;
  for (int Ap : target.outputs()) {
    std::size_t per = 0;
    for (int A : source.outputs()) {
      std::size_t p = 1;
      for (int i = 0; i < A; ++i) p = mul(p, static_cast<std::size_t>(Ap));
      per = (per > kMax - p) ? kMax : per + p;
    }
    total = mul(total, per);
  }
  return total;
}

void for_each_map(const PartyCard& source, const PartyCard& target, const std::function<bool(const DetMap&)>& fn) {
  int Xp = target.num_inputs(), X = source.num_inputs();
  std::vector<int> xi(Xp, 1);
  while (true) {
    std::vector<std::vector<int>> alphas(Xp);
    std::vector<std::pair<int, int>> slots;
    for (int z = 0; z < Xp; ++z) {
      alphas[z].assign(source.num_outputs(xi[z]), 1);
      for (int a = 0; a < source.num_outputs(xi[z]); ++a) slots.push_back({z, a});
    }
    while (true) {
      if (!fn(DetMap(source, target, xi, alphas))) return;
      int i = static_cast<int>(slots.size()) - 1;
      for (; i >= 0; --i) {
        auto [z, a] = slots[i];
        if (alphas[z][a] < target.outputs()[z]) {
          ++alphas[z][a];
          break;
        }
        alphas[z][a] = 1;
      }
      if (i < 0) break;
    }
    int z = Xp - 1;
    for (; z >= 0; --z) {
      if (xi[z] < X) {
        ++xi[z];
        break;
      }
      xi[z] = 1;
    }
    if (z < 0) return;
  }
}

bool matches_filter(const DetMap& m, InvertibilityClass filter) {
  switch (filter) {
    case InvertibilityClass::LeftInvertible: return is_left_invertible(m);
    case InvertibilityClass::RightInvertible: return is_right_invertible(m);
    default: return classify(m) == filter;
  }
}

std::vector<DetMap> enumerate_maps(const PartyCard& source, const PartyCard& target,
                                   std::optional<InvertibilityClass> filter, std::size_t cap) {
  std::size_t n = count_maps(source, target);
  if (n > cap)
    throw CapExceeded("enumerating " + source.str() + " -> " + target.str() + " would visit " +
                      (n == std::numeric_limits<std::size_t>::max() ? std::string("too many") : std::to_string(n)) +
                      " maps, above the cap of " + std::to_string(cap));
  std::vector<DetMap> out;
  for_each_map(source, target, [&](const DetMap& m) {
    if (!filter || matches_filter(m, *filter)) out.push_back(m);
    return true;
  });
  return out;
}

std::vector<DetMap> relabelings(const PartyCard& card) {
  // input permutations preserving cardinalities, times output permutations
  std::vector<DetMap> out;
  int X = card.num_inputs();
  std::vector<int> perm(X);
  for (int i = 0; i < X; ++i) perm[i] = i + 1;
  do {
    bool ok = true;
    for (int z = 0; z < X; ++z)
      if (card.num_outputs(perm[z]) != card.outputs()[z]) ok = false;
    if (!ok) continue;
    std::vector<std::vector<int>> alphas(X);
    for (int z = 0; z < X; ++z) {
      alphas[z].resize(card.outputs()[z]);
      for (int a = 0; a < card.outputs()[z]; ++a) alphas[z][a] = a + 1;
    }
    while (true) {
      out.emplace_back(card, card, perm, alphas);
      int z = X - 1;
      for (; z >= 0; --z)
        if (std::next_permutation(alphas[z].begin(), alphas[z].end())) break;
      if (z < 0) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace loctrans
