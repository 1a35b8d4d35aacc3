#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loctrans/ratlin.hpp"
#include "loctrans/scenario.hpp"

namespace loctrans {

struct NotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic local map from `source` to `target`: the target input x' reads
// source input xi[x'-1] and relabels its output through alphas[x'-1].
class DetMap {
 public:
  DetMap(PartyCard source, PartyCard target, std::vector<int> xi, std::vector<std::vector<int>> alphas);

  static DetMap identity(const PartyCard& card);

  const PartyCard& source() const { return source_; }
  const PartyCard& target() const { return target_; }
  const std::vector<int>& xi() const { return xi_; }
  const std::vector<std::vector<int>>& alphas() const { return alphas_; }
  int xi(int xp) const { return xi_.at(xp - 1); }
  int alpha(int xp, int a) const { return alphas_.at(xp - 1).at(a - 1); }

  friend bool operator==(const DetMap& a, const DetMap& b) = default;
  friend auto operator<=>(const DetMap& a, const DetMap& b) = default;

 private:
  PartyCard source_, target_;
  std::vector<int> xi_;
  std::vector<std::vector<int>> alphas_;
};

enum class InvertibilityClass { Relabeling, Reordering, LeftInvertible, RightInvertible, Neither };

std::string to_string(InvertibilityClass c);
std::optional<InvertibilityClass> parse_invertibility_class(const std::string& s);

RatMatrix to_matrix(const DetMap& m);
// t after s; requires s.target() == t.source()
DetMap compose(const DetMap& t, const DetMap& s);
// (pure input map, pure output map) with compose(output, input) == m
std::pair<DetMap, DetMap> factor_pure(const DetMap& m);

bool is_left_invertible(const DetMap& m);
bool is_right_invertible(const DetMap& m);
InvertibilityClass classify(const DetMap& m);
// true when either card has an input with a single output
bool single_output_advisory(const DetMap& m);

DetMap find_left_inverse(const DetMap& m);
DetMap find_right_inverse(const DetMap& m);

// saturates at SIZE_MAX
std::size_t count_maps(const PartyCard& source, const PartyCard& target);
// Lexicographic in (xi, alphas); the callback returns false to stop early.
void for_each_map(const PartyCard& source, const PartyCard& target, const std::function<bool(const DetMap&)>& fn);
// Filters: LeftInvertible / RightInvertible keep every map with that property
// (relabelings and reorderings included); Relabeling, Reordering, Neither match classify().
std::vector<DetMap> enumerate_maps(const PartyCard& source, const PartyCard& target,
                                   std::optional<InvertibilityClass> filter = std::nullopt, std::size_t cap = 10000000);
bool matches_filter(const DetMap& m, InvertibilityClass filter);

// all invertible maps of a card onto itself
std::vector<DetMap> relabelings(const PartyCard& card);

}  // namespace loctrans
