#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/dd.hpp"
#include "loctrans/detmap.hpp"
#include "loctrans/ratlin.hpp"
#include "loctrans/scenario.hpp"

namespace loctrans {

// { x : eq_A x = eq_b, ineq_A x <= ineq_c }
struct HRep {
  std::size_t dim = 0;
  RatMatrix eq_A;
  RatVector eq_b;
  RatMatrix ineq_A;
  RatVector ineq_c;

  friend bool operator==(const HRep&, const HRep&) = default;
};

struct VRep {
  std::size_t dim = 0;
  std::vector<RatVector> vertices;

  friend bool operator==(const VRep&, const VRep&) = default;
};

struct PolytopeLimits {
  std::size_t max_rays = 200000;
  bool verify = true;
  bool rank_adjacency = false;
};

// normalization and the scenario's nonsignaling forms as equalities (dependent rows dropped),
// -p_i <= 0 for every coefficient
HRep ns_hrep(const Scenario& s);

// dimension of the affine hull of the equalities (assumes feasibility)
std::size_t affine_dimension(const HRep& h);
bool satisfies(const RatVector& x, const HRep& h);
// tight inequality rows plus all equality rows have full column rank
bool extremal(const RatVector& x, const HRep& h);
bool extremal(const Behavior& p, const HRep& h);

// Vertices sorted lexicographically. Throws std::invalid_argument on an unbounded polyhedron.
VRep dd_vertices(const HRep& h, const PolytopeLimits& limits = {});
// Affine-hull equalities plus primitive-integer facets, sorted.
HRep dd_facets(const VRep& v, const PolytopeLimits& limits = {});

// fully signaling two-party scenario holding the causal polytope
Scenario causal_scenario(const PartyCard& a, const PartyCard& b);
// deterministic A-before-B and B-before-A behaviors, deduplicated and sorted
VRep causal_vertices(const PartyCard& a, const PartyCard& b);

struct FacetClass {
  BellExpression representative;     // zero-bound canonical form of the first member
  std::size_t orbit_size = 0;         // full orbit under the relabeling group
  std::vector<std::size_t> members;   // inequality rows of h in this class
};

// classes in order of their first member
std::vector<FacetClass> classify_facets(const HRep& h, const Scenario& s);

// coefficient permutation induced by one relabeling per party: (phi Lambda)_j = phi_{perm[j]}
std::vector<std::size_t> relabeling_permutation(const Scenario& s, const std::vector<DetMap>& maps);

}  // namespace loctrans
