#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace loctrans {

// Inputs and outputs are 1-based; flat positions are 0-based.
class PartyCard {
 public:
  PartyCard() : PartyCard(std::vector<int>{1}) {}
  explicit PartyCard(std::vector<int> outputs_per_input);

  int num_inputs() const { return static_cast<int>(outputs_.size()); }
  int num_outputs(int x) const;
  int max_outputs() const;
  const std::vector<int>& outputs() const { return outputs_; }
  std::size_t dim() const { return dim_; }
  bool has_single_output_input() const;

  std::size_t flatten(int a, int x) const;
  std::pair<int, int> unflatten(std::size_t pos) const;  // (a, x)
  std::size_t block_offset(int x) const;

  std::string str() const;  // "(3,2)"

  friend bool operator==(const PartyCard& a, const PartyCard& b) { return a.outputs_ == b.outputs_; }
  friend auto operator<=>(const PartyCard& a, const PartyCard& b) { return a.outputs_ <=> b.outputs_; }

 private:
  std::vector<int> outputs_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_ = 0;
};

struct Outcome {
  int a;
  int x;
};

class Scenario {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Scenario() = default;
  // self-pairs (s,s) are always added
  Scenario(std::vector<PartyCard> parties, const std::vector<Edge>& signaling);

  static Scenario nonsignaling(std::vector<PartyCard> parties);
  static Scenario fully_signaling(std::vector<PartyCard> parties);

  std::size_t num_parties() const { return parties_.size(); }
  const PartyCard& party(std::size_t p) const { return parties_.at(p); }
  const std::vector<PartyCard>& parties() const { return parties_; }
  const std::set<Edge>& signaling() const { return edges_; }
  std::vector<std::size_t> dims() const;
  std::size_t dim() const;

  bool signaling_allowed(std::size_t from, std::size_t to) const;
  bool is_nonsignaling() const;  // E is the diagonal

  std::size_t tensor_index(std::span<const Outcome> outcomes) const;
  std::vector<Outcome> tensor_unindex(std::size_t pos) const;
  // number of joint input tuples and the mixed-radix index of an input tuple
  std::size_t num_input_tuples() const;
  std::size_t input_tuple_index(std::span<const Outcome> outcomes) const;

  Scenario with_party(std::size_t p, PartyCard card) const;
  Scenario with_parties(std::vector<PartyCard> cards) const;

  friend bool operator==(const Scenario& a, const Scenario& b) = default;

 private:
  std::vector<PartyCard> parties_;
  std::set<Edge> edges_;
};

}  // namespace loctrans
