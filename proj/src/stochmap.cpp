#include "loctrans/stochmap.hpp"

#include <stdexcept>

namespace loctrans {

namespace {

void check_shape(const RatMatrix& m, const PartyCard& source, const PartyCard& target) {
  if (m.rows() != target.dim() || m.cols() != source.dim())
    throw std::invalid_argument("matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                " does not match " + target.str() + " <- " + source.str());
}

// block column sums s(x', a, x) = sum_a' M[(a',x'),(a,x)]
Rational block_sum(const RatMatrix& m, const PartyCard& source, const PartyCard& target, int xp, int a, int x) {
  Rational s;
  std::size_t col = source.flatten(a, x);
  for (int ap = 1; ap <= target.num_outputs(xp); ++ap) s += m(target.flatten(ap, xp), col);
  return s;
}

std::optional<Violation> find_violation(const RatMatrix& m, const PartyCard& source, const PartyCard& target,
                                        RatMatrix* weights) {
  check_shape(m, source, target);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) < 0) {
        auto [ap, xp] = target.unflatten(i);
        auto [a, x] = source.unflatten(j);
        return Violation{Violation::Kind::Negativity,
                         "negative entry " + to_string(m(i, j)) + " at row (a'=" + std::to_string(ap) +
                             ",x'=" + std::to_string(xp) + "), column (a=" + std::to_string(a) + ",x=" +
                             std::to_string(x) + ")",
                         xp, x, ap, a};
      }
  RatMatrix c(static_cast<std::size_t>(target.num_inputs()), static_cast<std::size_t>(source.num_inputs()));
  for (int xp = 1; xp <= target.num_inputs(); ++xp)
    for (int x = 1; x <= source.num_inputs(); ++x) {
      Rational first = block_sum(m, source, target, xp, 1, x);
      for (int a = 2; a <= source.num_outputs(x); ++a)
        if (block_sum(m, source, target, xp, a, x) != first)
          return Violation{Violation::Kind::OutputDependence,
                           "block column sums for x'=" + std::to_string(xp) + ", x=" + std::to_string(x) +
                               " depend on the source output (a=1 vs a=" + std::to_string(a) + ")",
                           xp, x, 0, a};
      c(xp - 1, x - 1) = first;
    }
  for (int xp = 1; xp <= target.num_inputs(); ++xp) {
    Rational s;
    for (int x = 1; x <= source.num_inputs(); ++x) s += c(xp - 1, x - 1);
    if (s != 1)
      return Violation{Violation::Kind::InputNormalization,
                       "input-choice weights for x'=" + std::to_string(xp) + " sum to " + to_string(s) + ", not 1", xp,
                       0, 0, 0};
  }
  if (weights) *weights = std::move(c);
  return std::nullopt;
}

}  // namespace

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Negativity: return "negativity";
    case Violation::Kind::OutputDependence: return "output-dependence";
    case Violation::Kind::InputNormalization: return "input-normalization";
  }
  return "";
}

LocalTransformation::LocalTransformation(PartyCard source, PartyCard target, RatMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (auto v = find_violation(matrix_, source_, target_, &weights_))
    throw std::invalid_argument("invalid local transformation: " + v->message);
}

LocalTransformation LocalTransformation::from(const DetMap& m) {
  return LocalTransformation(m.source(), m.target(), to_matrix(m));
}

std::variant<LocalTransformation, Violation> validate(const RatMatrix& m, const PartyCard& source,
                                                      const PartyCard& target) {
  if (auto v = find_violation(m, source, target, nullptr)) return *v;
  return LocalTransformation(source, target, m);
}

std::string to_string(CpResult::Witness w) {
  switch (w) {
    case CpResult::Witness::None: return "none";
    case CpResult::Witness::NotNormalizationPreserving: return "not-normalization-preserving";
    case CpResult::Witness::NegativeCoefficient: return "negative-coefficient";
    case CpResult::Witness::NotNormalized: return "not-normalized";
  }
  return "";
}

PartyCard swap_partner(const PartyCard& card) {
  return PartyCard(std::vector<int>(static_cast<std::size_t>(card.max_outputs()), card.num_inputs()));
}

Behavior swap_behavior(const PartyCard& card) {
  PartyCard partner = swap_partner(card);
  Scenario s({card, partner}, {{0, 1}});
  RatVector v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto o = s.tensor_unindex(i);
    int x = o[0].x, y = o[1].x;
    if (o[0].a == (y - 1) % card.num_outputs(x) + 1 && o[1].a == x) v[i] = 1;
  }
  return Behavior(s, std::move(v));
}

CpResult is_completely_positive(const RatMatrix& m, const PartyCard& source, const PartyCard& target) {
  check_shape(m, source, target);
  CpResult r;
  // affine spanning set of normalized single-party behaviors: all-first-outputs plus single changes
  RatVector base(source.dim());
  for (int x = 1; x <= source.num_inputs(); ++x) base[source.flatten(1, x)] = 1;
  auto block_sums = [&](const RatVector& v) {
    std::vector<Rational> s(static_cast<std::size_t>(target.num_inputs()));
    for (std::size_t i = 0; i < v.size(); ++i) s[target.unflatten(i).second - 1] += v[i];
    return s;
  };
  auto img = m * base;
  auto bs = block_sums(img);
  for (int xp = 1; xp <= target.num_inputs(); ++xp)
    if (bs[xp - 1] != 1) {
      r.witness = CpResult::Witness::NotNormalizationPreserving;
      r.message = "image of a normalized behavior has block sum " + to_string(bs[xp - 1]) + " at x'=" + std::to_string(xp);
      r.value = bs[xp - 1];
      return r;
    }
  for (int x = 1; x <= source.num_inputs(); ++x)
    for (int a = 2; a <= source.num_outputs(x); ++a) {
      RatVector d(source.dim());
      d[source.flatten(a, x)] = 1;
      d[source.flatten(1, x)] = -1;
      auto s = block_sums(m * d);
      for (int xp = 1; xp <= target.num_inputs(); ++xp)
        if (sgn(s[xp - 1]) != 0) {
          r.witness = CpResult::Witness::NotNormalizationPreserving;
          r.message = "changing output " + std::to_string(a) + " at input " + std::to_string(x) +
                      " changes the block sum at x'=" + std::to_string(xp);
          r.index = source.flatten(a, x);
          r.value = s[xp - 1];
          return r;
        }
    }

  Behavior probe = swap_behavior(source);
  PartyCard partner = swap_partner(source);
  auto dims = probe.scenario().dims();
  RatVector out = apply_mode(m, dims, 0, probe.coeffs());
  Scenario ts({target, partner}, {{0, 1}});
  r.probe = probe;
  r.image = out;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (sgn(out[i]) < 0) {
      auto o = ts.tensor_unindex(i);
      r.witness = CpResult::Witness::NegativeCoefficient;
      r.index = i;
      r.value = out[i];
      r.message = "P'(a'=" + std::to_string(o[0].a) + ",b=" + std::to_string(o[1].a) + "|x'=" + std::to_string(o[0].x) +
                  ",y=" + std::to_string(o[1].x) + ") = " + to_string(out[i]);
      return r;
    }
  if (!is_normalized(Behavior(ts, out))) {
    r.witness = CpResult::Witness::NotNormalized;
    r.message = "image of the swap behavior is not normalized";
    return r;
  }
  r.completely_positive = true;
  return r;
}

ConvexDecomposition decompose(const LocalTransformation& t) {
  const PartyCard& S = t.source();
  const PartyCard& T = t.target();
  RatMatrix R = t.matrix();
  ConvexDecomposition out;
  int Xp = T.num_inputs(), X = S.num_inputs();
  while (!R.is_zero()) {
    // best[x'][x] = min_a max_a' R[(a',x'),(a,x)]
    std::vector<std::vector<Rational>> best(Xp, std::vector<Rational>(X));
    Rational w;
    for (int xp = 1; xp <= Xp; ++xp) {
      Rational wx;
      for (int x = 1; x <= X; ++x) {
        Rational mn;
        for (int a = 1; a <= S.num_outputs(x); ++a) {
          Rational mx;
          for (int ap = 1; ap <= T.num_outputs(xp); ++ap) mx = std::max(mx, R(T.flatten(ap, xp), S.flatten(a, x)));
          if (a == 1 || mx < mn) mn = mx;
        }
        best[xp - 1][x - 1] = mn;
        if (x == 1 || mn > wx) wx = mn;
      }
      if (xp == 1 || wx < w) w = wx;
    }
    if (sgn(w) <= 0) throw std::logic_error("decompose: remainder admits no deterministic term");
    std::vector<int> xi;
    std::vector<std::vector<int>> alphas;
    for (int xp = 1; xp <= Xp; ++xp) {
      int x = 1;
      while (best[xp - 1][x - 1] < w) ++x;
      xi.push_back(x);
      std::vector<int> al;
      for (int a = 1; a <= S.num_outputs(x); ++a) {
        int ap = 1;
        while (R(T.flatten(ap, xp), S.flatten(a, x)) < w) ++ap;
        al.push_back(ap);
      }
      alphas.push_back(std::move(al));
    }
    DetMap d(S, T, xi, alphas);
    for (int xp = 1; xp <= Xp; ++xp)
      for (int a = 1; a <= S.num_outputs(xi[xp - 1]); ++a)
        R(T.flatten(alphas[xp - 1][a - 1], xp), S.flatten(a, xi[xp - 1])) -= w;
    out.terms.push_back({w, std::move(d)});
  }
  return out;
}

RatMatrix recombine(const ConvexDecomposition& d) {
  if (d.terms.empty()) throw std::invalid_argument("recombine: empty decomposition");
  RatMatrix r(d.terms[0].second.target().dim(), d.terms[0].second.source().dim());
  for (const auto& [w, m] : d.terms) r = r + w * to_matrix(m);
  return r;
}

Behavior apply_matrices(const LocalParts& parts, const Behavior& p, const std::vector<PartyCard>& new_cards) {
  const Scenario& s = p.scenario();
  if (parts.size() != s.num_parties() || new_cards.size() != s.num_parties())
    throw std::invalid_argument("one transformation slot per party expected");
  auto dims = s.dims();
  RatVector v = p.coeffs();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k]) continue;
    v = apply_mode(*parts[k], dims, k, v);
    dims[k] = parts[k]->rows();
  }
  return Behavior(s.with_parties(new_cards), std::move(v));
}

BellExpression pull_back_matrices(const BellExpression& phi, const LocalParts& parts,
                                  const std::vector<PartyCard>& new_cards) {
  const Scenario& s = phi.scenario();
  if (parts.size() != s.num_parties() || new_cards.size() != s.num_parties())
    throw std::invalid_argument("one transformation slot per party expected");
  auto dims = s.dims();
  RatVector v = phi.coeffs();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k]) continue;
    v = apply_mode_dual(v, dims, k, *parts[k]);
    dims[k] = parts[k]->cols();
  }
  return BellExpression(s.with_parties(new_cards), std::move(v), phi.bound());
}

Behavior apply_to_behavior(const std::vector<std::optional<LocalTransformation>>& parts, const Behavior& p) {
  const Scenario& s = p.scenario();
  if (parts.size() != s.num_parties()) throw std::invalid_argument("one transformation slot per party expected");
  LocalParts mats;
  std::vector<PartyCard> cards = s.parties();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k]) {
      mats.push_back(std::nullopt);
      continue;
    }
    if (!(parts[k]->source() == s.party(k)))
      throw std::invalid_argument("transformation for party " + std::to_string(k) + " expects source " +
                                  parts[k]->source().str() + ", behavior has " + s.party(k).str());
    mats.push_back(parts[k]->matrix());
    cards[k] = parts[k]->target();
  }
  return apply_matrices(mats, p, cards);
}

BellExpression apply_to_expression(const BellExpression& phi,
                                   const std::vector<std::optional<LocalTransformation>>& parts) {
  const Scenario& s = phi.scenario();
  if (parts.size() != s.num_parties()) throw std::invalid_argument("one transformation slot per party expected");
  LocalParts mats;
  std::vector<PartyCard> cards = s.parties();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k]) {
      mats.push_back(std::nullopt);
      continue;
    }
    if (!(parts[k]->target() == s.party(k)))
      throw std::invalid_argument("transformation for party " + std::to_string(k) + " must target " +
                                  s.party(k).str() + ", got " + parts[k]->target().str());
    mats.push_back(parts[k]->matrix());
    cards[k] = parts[k]->source();
  }
  return pull_back_matrices(phi, mats, cards);
}

}  // namespace loctrans
