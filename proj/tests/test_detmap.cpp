#include <doctest.h>

#include <algorithm>
#include <set>

#include "loctrans/detmap.hpp"
#include "support.hpp"

using namespace loctrans;

namespace {

bool has_det_left_inverse(const DetMap& m) {
  RatMatrix M = to_matrix(m);
  bool found = false;
  for_each_map(m.target(), m.source(), [&](const DetMap& l) {
    found = to_matrix(l) * M == RatMatrix::identity(m.source().dim());
    return !found;
  });
  return found;
}

bool has_det_right_inverse(const DetMap& m) {
  RatMatrix M = to_matrix(m);
  bool found = false;
  for_each_map(m.target(), m.source(), [&](const DetMap& r) {
    found = M * to_matrix(r) == RatMatrix::identity(m.target().dim());
    return !found;
  });
  return found;
}

}  // namespace

TEST_CASE("matrix of a map against the defining formula") {
  t::Rng rng(41);
  for (int it = 0; it < 200; ++it) {
    PartyCard s = rng.card(), tc = rng.card();
    DetMap m = rng.detmap(s, tc);
    RatMatrix M = to_matrix(m);
    CHECK(M == t::detmap_matrix_oracle(m));
    // column (a, x) has one entry per target input reading x
    for (std::size_t c = 0; c < M.cols(); ++c) {
      Rational sum = 0;
      for (std::size_t r = 0; r < M.rows(); ++r) sum += M(r, c);
      int x = s.unflatten(c).second;
      CHECK(sum == static_cast<long>(std::count(m.xi().begin(), m.xi().end(), x)));
    }
  }
}

TEST_CASE("invalid maps are rejected") {
  PartyCard s({2, 2}), tc({3});
  CHECK_THROWS(DetMap(s, tc, {3}, {{1, 1}}));
  CHECK_THROWS(DetMap(s, tc, {1}, {{1, 4}}));
  CHECK_THROWS(DetMap(s, tc, {1}, {{1}}));
  CHECK_THROWS(DetMap(s, tc, {1, 1}, {{1, 1}, {1, 1}}));
}

TEST_CASE("property: composition is matrix multiplication") {
  t::Rng rng(42);
  for (int it = 0; it < 200; ++it) {
    PartyCard a = rng.card(), b = rng.card(), c = rng.card();
    DetMap s = rng.detmap(a, b), u = rng.detmap(b, c);
    CHECK(to_matrix(compose(u, s)) == to_matrix(u) * to_matrix(s));
    auto [in, out] = factor_pure(s);
    CHECK(compose(out, in) == s);
  }
  CHECK_THROWS(compose(DetMap::identity(PartyCard({2})), DetMap::identity(PartyCard({3}))));
}

TEST_CASE("property: invertibility agrees with brute-force inverse search") {
  t::Rng rng(43);
  int left = 0, right = 0;
  for (int it = 0; it < 150; ++it) {
    PartyCard s = rng.card(2, 3), tc = rng.card(2, 3);
    DetMap m = rng.detmap(s, tc);
    bool l = is_left_invertible(m), r = is_right_invertible(m);
    CHECK(l == has_det_left_inverse(m));
    CHECK(r == has_det_right_inverse(m));
    if (l) {
      ++left;
      CHECK(to_matrix(find_left_inverse(m)) * to_matrix(m) == RatMatrix::identity(s.dim()));
    } else {
      CHECK_THROWS_AS(find_left_inverse(m), NotInvertible);
    }
    if (r) {
      ++right;
      CHECK(to_matrix(m) * to_matrix(find_right_inverse(m)) == RatMatrix::identity(tc.dim()));
    } else {
      CHECK_THROWS_AS(find_right_inverse(m), NotInvertible);
    }
    auto cls = classify(m);
    if (l && r) CHECK((cls == InvertibilityClass::Relabeling || cls == InvertibilityClass::Reordering));
    if (l && !r) CHECK(cls == InvertibilityClass::LeftInvertible);
    if (!l && r) CHECK(cls == InvertibilityClass::RightInvertible);
    if (!l && !r) CHECK(cls == InvertibilityClass::Neither);
  }
  // the generator should reach both kinds
  CHECK(left > 0);
  CHECK(right > 0);
}

TEST_CASE("class names round trip") {
  for (auto c : {InvertibilityClass::Relabeling, InvertibilityClass::Reordering, InvertibilityClass::LeftInvertible,
                 InvertibilityClass::RightInvertible, InvertibilityClass::Neither})
    CHECK(parse_invertibility_class(to_string(c)) == c);
  CHECK_FALSE(parse_invertibility_class("bogus"));
}

TEST_CASE("property: enumeration is complete, distinct and ordered") {
  t::Rng rng(44);
  for (int it = 0; it < 25; ++it) {
    PartyCard s = rng.card(2, 2), tc = rng.card(2, 3);
    auto all = enumerate_maps(s, tc);
    CHECK(all.size() == t::count_maps_oracle(s, tc));
    CHECK(count_maps(s, tc) == all.size());
    CHECK(std::is_sorted(all.begin(), all.end(), [](const DetMap& a, const DetMap& b) {
      return std::tie(a.xi(), a.alphas()) < std::tie(b.xi(), b.alphas());
    }));
    CHECK(std::set<DetMap>(all.begin(), all.end()).size() == all.size());
    std::size_t nl = 0;
    for (const auto& m : all) nl += is_left_invertible(m);
    CHECK(enumerate_maps(s, tc, InvertibilityClass::LeftInvertible).size() == nl);
  }
}

TEST_CASE("counts used by the lifting census") {
  PartyCard bin({2, 2}), ter({3, 3, 3});
  CHECK(count_maps(bin, ter) == 5832);
  CHECK(enumerate_maps(bin, ter, InvertibilityClass::LeftInvertible).size() == 2592);
  // square binary maps: 2 surjective input maps x 2 x 2 injective output maps
  CHECK(enumerate_maps(bin, bin, InvertibilityClass::LeftInvertible).size() == 8);
  CHECK(relabelings(bin).size() == 8);
  CHECK(relabelings(PartyCard({3, 3})).size() == 72);
  // input permutations only between equal cardinalities
  CHECK(relabelings(PartyCard({2, 3})).size() == 12);
  CHECK_THROWS_AS(enumerate_maps(ter, ter, std::nullopt, 1000), CapExceeded);
}

TEST_CASE("single-output advisory") {
  PartyCard s({1, 2});
  CHECK(single_output_advisory(DetMap::identity(s)));
  CHECK_FALSE(single_output_advisory(DetMap::identity(PartyCard({2, 2}))));
}
