#pragma once

#include <optional>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/detmap.hpp"

namespace loctrans {

struct PayoffResult {
  Rational value;
  std::vector<DetMap> maps;  // one per party, from the behavior's cards to the expression's cards
};

// image of v under a deterministic map on one tensor mode
RatVector apply_detmap_mode(const DetMap& m, std::span<const std::size_t> dims, std::size_t mode, const RatVector& v);
Behavior apply_detmaps(const std::vector<DetMap>& maps, const Behavior& p);

// Exhaustive over per-party DetMap tuples; lexicographically least optimizer wins ties.
PayoffResult max_payoff(const BellExpression& phi, const Behavior& p, std::size_t cap = 10000000, unsigned threads = 1);

Behavior lift_behavior(const Behavior& p, std::size_t party, const DetMap& m);
BellExpression lift_expression(const BellExpression& phi, std::size_t party, const DetMap& m);

struct LiftCensus {
  std::size_t total_maps = 0;
  std::size_t invertible_count = 0;
  std::size_t unique_images = 0;
  std::vector<Behavior> images;     // first-occurrence order
  std::vector<DetMap> image_maps;   // the first map producing each image
};

LiftCensus census_lift(const Behavior& p, std::size_t party, const PartyCard& target, unsigned threads = 1);
// PR box lifted at the first party
LiftCensus census_lift_pr(const PartyCard& target, unsigned threads = 1);

struct Interconversion {
  std::vector<DetMap> forward;   // P1 -> P2
  std::vector<DetMap> backward;  // P2 -> P1
};

// deterministic witnesses in both directions, or nullopt
std::optional<Interconversion> interconvertible(const Behavior& p1, const Behavior& p2, std::size_t cap = 10000000);

}  // namespace loctrans
