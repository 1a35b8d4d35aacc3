#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loctrans/ratlin.hpp"
#include "loctrans/scenario.hpp"

namespace loctrans {

class Behavior {
 public:
  Behavior(Scenario scenario, RatVector coeffs);

  const Scenario& scenario() const { return scenario_; }
  const RatVector& coeffs() const { return coeffs_; }
  const Rational& at(std::span<const Outcome> outcomes) const;

  friend bool operator==(const Behavior& a, const Behavior& b) = default;

 private:
  Scenario scenario_;
  RatVector coeffs_;
};

class BellExpression {
 public:
  BellExpression(Scenario scenario, RatVector coeffs, std::optional<Rational> bound = std::nullopt);

  const Scenario& scenario() const { return scenario_; }
  const RatVector& coeffs() const { return coeffs_; }
  const std::optional<Rational>& bound() const { return bound_; }
  const Rational& at(std::span<const Outcome> outcomes) const;

  friend bool operator==(const BellExpression& a, const BellExpression& b) = default;

 private:
  Scenario scenario_;
  RatVector coeffs_;
  std::optional<Rational> bound_;
};

bool is_nonnegative(const Behavior& p);
bool is_normalized(const Behavior& p);

enum class NsMode { Auto, Reduced, Exhaustive };

struct NsViolation {
  std::vector<std::size_t> sources;
  std::vector<std::size_t> targets;
  std::vector<int> target_outputs;    // one per target party
  std::vector<int> inputs;            // full input tuple (1-based), one per party
  std::vector<int> reference_inputs;  // same tuple with the source inputs reset to 1
  Rational value;
  Rational reference_value;
};

// Throws std::invalid_argument when p is not normalized.
std::vector<NsViolation> check_nonsignaling(const Behavior& p, NsMode mode = NsMode::Auto);

// parties q with (q, p) in E, increasing
std::vector<std::size_t> inputs_of(const Scenario& s, std::size_t p);

// responses[p][k] is the output of party p on the k-th joint input of inputs_of(p),
// mixed radix with the first listed party most significant
struct DetBehaviorSpec {
  std::vector<std::vector<int>> responses;
};

Behavior deterministic_behavior(const Scenario& s, const DetBehaviorSpec& spec);
std::size_t count_deterministic(const Scenario& s);
std::vector<DetBehaviorSpec> enumerate_deterministic_specs(const Scenario& s, std::size_t cap = 1000000);
std::vector<Behavior> deterministic_behaviors(const Scenario& s, std::size_t cap = 1000000);

// Requires equal party cardinalities; the signaling sets may differ.
Rational evaluate(const BellExpression& phi, const Behavior& p);

namespace stock {
Behavior pr_box();
BellExpression chsh();
BellExpression gyni();
// Families on Alice (2,2), Bob (3,3), both directions allowed. Labels are 0-based
// bits; q, r, s are Bob's guesses of x for outputs 0, 1, 2 and may not all be equal.
BellExpression lgyni(int c, int d, int e, int q, int r, int s);
BellExpression gyni_ternary(int c, int d, int q0, int r0, int s0, int q1, int r1, int s1);
std::vector<BellExpression> lgyni_family();
std::vector<BellExpression> gyni_ternary_family();
}  // namespace stock

}  // namespace loctrans
