#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/ratlin.hpp"
#include "loctrans/subspaces.hpp"

namespace loctrans {

struct ConstraintForms {
  RatVector tau_all;
  std::vector<RatVector> mu;
};

ConstraintForms constraint_forms(const Scenario& s);

// Pi_Z, Pi_Gamma (allowed labels except all-Z), Pi_Omega (forbidden labels); memoized
struct ScenarioProjectors {
  RatMatrix Z, Gamma, Omega;
};
const ScenarioProjectors& scenario_projectors(const Scenario& s);

struct AffineCertificate {
  Rational s, t;
  RatVector w;
};

// nullopt when not affine equivalent; bounds must be both present or both absent
std::optional<AffineCertificate> affine_equivalent(const BellExpression& phi1, const BellExpression& phi2);

enum class CanonMode { Gamma, ZeroBound };
enum class ScaleConvention { Primitive, OneNorm };

std::string to_string(CanonMode m);
std::string to_string(ScaleConvention c);

struct CanonicalForm {
  CanonMode mode;
  ScaleConvention scale;
  RatVector coeffs;
  Rational bound;

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) = default;
};

// throws when the expression carries no bound
CanonicalForm canonicalize(const BellExpression& phi, CanonMode mode = CanonMode::ZeroBound,
                           ScaleConvention scale = ScaleConvention::Primitive);
// scales (coeffs, bound) jointly by a positive factor
void rescale(RatVector& coeffs, Rational& bound, ScaleConvention scale);
std::string canonical_key(const CanonicalForm& f);

struct CovarianceModel {
  Scenario scenario;
  RatMatrix sigma;
};

// counts per coefficient in Kronecker order; every joint-input block needs a positive total
CovarianceModel covariance_from_counts(const Scenario& s, const std::vector<Integer>& counts);
Rational variance(const RatVector& phi, const RatMatrix& sigma);
BellExpression variance_optimal(const BellExpression& phi, const CovarianceModel& cov);
// closed form (Pbar - P_Om (P_Om S P_Om + Pbar)^-1 P_Om S Pbar) applied to phi as a column;
// agrees with variance_optimal when the projectors are orthogonal (binary outputs)
RatVector variance_optimal_closed_form(const BellExpression& phi, const CovarianceModel& cov);

}  // namespace loctrans
