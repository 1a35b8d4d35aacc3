#pragma once

#include <cstddef>
#include <vector>

#include "loctrans/ratlin.hpp"

namespace loctrans {

using IntVector = std::vector<Integer>;

struct DdOptions {
  std::size_t max_rays = 200000;
  // algebraic adjacency (rank of the common tight rows) instead of the combinatorial test
  bool rank_adjacency = false;
};

struct DdResult {
  std::vector<IntVector> rays;                       // primitive integer generators
  std::vector<std::vector<std::size_t>> tight_rows;  // constraint rows tight at each ray
};

// Extreme rays of the pointed cone { r : A r >= 0 }, rows inserted in the given order
// after an initial basis made of the first linearly independent rows.
// Throws std::invalid_argument if the cone is not pointed, CapExceeded above max_rays.
DdResult extreme_rays(const std::vector<IntVector>& rows, std::size_t dim, const DdOptions& opts = {});

// primitive integer multiple of a rational vector (positive factor)
IntVector primitive(const RatVector& v);

}  // namespace loctrans
