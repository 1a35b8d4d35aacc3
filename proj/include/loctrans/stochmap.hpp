#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loctrans/corr.hpp"
#include "loctrans/detmap.hpp"
#include "loctrans/ratlin.hpp"

namespace loctrans {

struct Violation {
  enum class Kind { Negativity, OutputDependence, InputNormalization };
  Kind kind;
  std::string message;
  int target_input = 0;  // x'
  int source_input = 0;  // x
  int target_output = 0;
  int source_output = 0;
};

class LocalTransformation {
 public:
  // throws std::invalid_argument with the violation message when invalid
  LocalTransformation(PartyCard source, PartyCard target, RatMatrix matrix);
  static LocalTransformation from(const DetMap& m);

  const PartyCard& source() const { return source_; }
  const PartyCard& target() const { return target_; }
  const RatMatrix& matrix() const { return matrix_; }
  // input-choice weights c_{x',x}, shape X' x X
  const RatMatrix& input_weights() const { return weights_; }

  friend bool operator==(const LocalTransformation& a, const LocalTransformation& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
  }

 private:
  PartyCard source_, target_;
  RatMatrix matrix_;
  RatMatrix weights_;
};

std::string to_string(Violation::Kind k);

// throws std::invalid_argument on shape mismatch
std::variant<LocalTransformation, Violation> validate(const RatMatrix& m, const PartyCard& source,
                                                      const PartyCard& target);

struct CpResult {
  enum class Witness { None, NotNormalizationPreserving, NegativeCoefficient, NotNormalized };
  bool completely_positive = false;
  Witness witness = Witness::None;
  std::string message;
  // the swap behavior and its image (absent when normalization preservation already fails)
  std::optional<Behavior> probe;
  std::optional<RatVector> image;
  std::size_t index = 0;  // offending coefficient (image) or flat position
  Rational value;
};

std::string to_string(CpResult::Witness w);

// partner party of the swap device for a given card
PartyCard swap_partner(const PartyCard& card);
Behavior swap_behavior(const PartyCard& card);
CpResult is_completely_positive(const RatMatrix& m, const PartyCard& source, const PartyCard& target);

struct ConvexDecomposition {
  std::vector<std::pair<Rational, DetMap>> terms;
};

ConvexDecomposition decompose(const LocalTransformation& t);
RatMatrix recombine(const ConvexDecomposition& d);

// nullopt in a slot means identity on that party
using LocalParts = std::vector<std::optional<RatMatrix>>;

Behavior apply_to_behavior(const std::vector<std::optional<LocalTransformation>>& parts, const Behavior& p);
// maps go from the new scenario's cards to the expression's cards
BellExpression apply_to_expression(const BellExpression& phi, const std::vector<std::optional<LocalTransformation>>& parts);

// unchecked matrix-level versions; cards of the result are given explicitly
Behavior apply_matrices(const LocalParts& parts, const Behavior& p, const std::vector<PartyCard>& new_cards);
BellExpression pull_back_matrices(const BellExpression& phi, const LocalParts& parts,
                                  const std::vector<PartyCard>& new_cards);

}  // namespace loctrans
