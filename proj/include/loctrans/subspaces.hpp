#pragma once

#include <string>
#include <utility>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/ratlin.hpp"
#include "loctrans/scenario.hpp"

namespace loctrans {

struct PartyBasis {
  RatVector ubar;
  std::vector<RatVector> C;                 // C^{i|x}, x-major then i
  std::vector<std::pair<int, int>> c_index;  // (i, x) of each C
  std::vector<RatVector> S;                 // S^k, k = 1..X-1
};

struct PartyDualBasis {
  RatVector tau;
  std::vector<RatVector> Sigma;             // Sigma^x, x = 1..X
  std::vector<RatVector> Omega;             // Omega^k, k = 1..X-1
  std::vector<RatVector> chi;               // chi^{i|x}, same order as PartyBasis::C
  std::vector<std::pair<int, int>> c_index;
};

PartyBasis party_basis(const PartyCard& card);
PartyDualBasis party_dual_basis(const PartyCard& card);

struct Projectors {
  RatMatrix Z, C, S;
};

// memoized per cardinality
const Projectors& projectors(const PartyCard& card);

enum class Sub { Z, C, S };
using SubspaceLabel = std::vector<Sub>;

char to_char(Sub s);
std::string to_string(const SubspaceLabel& l);

enum class ComponentClass { NormalizationFixed, NormalizationForbidden, Nonsignaling, SignalingAllowed, SignalingForbidden };

std::string to_string(ComponentClass c);
ComponentClass classify_component(const Scenario& s, const SubspaceLabel& label);
bool is_forbidden(ComponentClass c);

// all 3^n labels, Z < C < S with party 0 most significant
std::vector<SubspaceLabel> all_labels(std::size_t n);
const RatMatrix& projector(const PartyCard& card, Sub s);

RatVector project(const Scenario& s, const SubspaceLabel& label, const RatVector& v);
RatVector project_dual(const Scenario& s, const SubspaceLabel& label, const RatVector& phi);
// full Kronecker projector (dim x dim)
RatMatrix projector_matrix(const Scenario& s, const SubspaceLabel& label);

std::vector<std::pair<SubspaceLabel, RatVector>> decompose_behavior(const Behavior& p);

struct CgMatrices {
  RatMatrix G, G_plus;
};

const CgMatrices& cg_matrices(const PartyCard& card);
std::size_t cg_dim(const PartyCard& card);
RatVector to_cg(const Behavior& p);
// throws when the constant slot is not 1
Behavior from_cg(const Scenario& s, const RatVector& v);

}  // namespace loctrans
