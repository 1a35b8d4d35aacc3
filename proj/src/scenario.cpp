#include "loctrans/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace loctrans {

PartyCard::PartyCard(std::vector<int> outputs_per_input) : outputs_(std::move(outputs_per_input)) {
  if (outputs_.empty()) throw std::invalid_argument("party card needs at least one input");
  for (int a : outputs_) {
    if (a < 1) throw std::invalid_argument("every input needs at least one output");
    offsets_.push_back(dim_);
    dim_ += static_cast<std::size_t>(a);
  }
}

int PartyCard::num_outputs(int x) const {
  if (x < 1 || x > num_inputs()) throw std::out_of_range("input index out of range");
  return outputs_[x - 1];
}

int PartyCard::max_outputs() const { return *std::max_element(outputs_.begin(), outputs_.end()); }

bool PartyCard::has_single_output_input() const {
  return std::find(outputs_.begin(), outputs_.end(), 1) != outputs_.end();
}

std::size_t PartyCard::flatten(int a, int x) const {
  if (x < 1 || x > num_inputs()) throw std::out_of_range("input index out of range");
  if (a < 1 || a > outputs_[x - 1]) throw std::out_of_range("output index out of range");
  return offsets_[x - 1] + static_cast<std::size_t>(a - 1);
}

std::pair<int, int> PartyCard::unflatten(std::size_t pos) const {
  if (pos >= dim_) throw std::out_of_range("flat position out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), pos);
  int x = static_cast<int>(it - offsets_.begin());
  return {static_cast<int>(pos - offsets_[x - 1]) + 1, x};
}

std::size_t PartyCard::block_offset(int x) const {
  if (x < 1 || x > num_inputs()) throw std::out_of_range("input index out of range");
  return offsets_[x - 1];
}

std::string PartyCard::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(outputs_[i]);
  }
  return s + ")";
}

Scenario::Scenario(std::vector<PartyCard> parties, const std::vector<Edge>& signaling)
    : parties_(std::move(parties)) {
  if (parties_.empty()) throw std::invalid_argument("scenario needs at least one party");
  for (std::size_t s = 0; s < parties_.size(); ++s) edges_.insert({s, s});
  for (const auto& e : signaling) {
    if (e.first >= parties_.size() || e.second >= parties_.size())
      throw std::invalid_argument("signaling pair references an unknown party");
    edges_.insert(e);
  }
}

Scenario Scenario::nonsignaling(std::vector<PartyCard> parties) { return Scenario(std::move(parties), {}); }

Scenario Scenario::fully_signaling(std::vector<PartyCard> parties) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < parties.size(); ++i)
    for (std::size_t j = 0; j < parties.size(); ++j) e.push_back({i, j});
  return Scenario(std::move(parties), e);
}

std::vector<std::size_t> Scenario::dims() const {
  std::vector<std::size_t> d;
  for (const auto& p : parties_) d.push_back(p.dim());
  return d;
}

std::size_t Scenario::dim() const {
  std::size_t d = 1;
  for (const auto& p : parties_) d *= p.dim();
  return d;
}

bool Scenario::signaling_allowed(std::size_t from, std::size_t to) const {
  if (from >= parties_.size() || to >= parties_.size()) throw std::out_of_range("party index out of range");
  return edges_.count({from, to}) > 0;
}

bool Scenario::is_nonsignaling() const { return edges_.size() == parties_.size(); }

std::size_t Scenario::tensor_index(std::span<const Outcome> outcomes) const {
  if (outcomes.size() != parties_.size()) throw std::invalid_argument("one (a,x) pair per party expected");
  std::size_t pos = 0;
  for (std::size_t p = 0; p < parties_.size(); ++p)
    pos = pos * parties_[p].dim() + parties_[p].flatten(outcomes[p].a, outcomes[p].x);
  return pos;
}

std::vector<Outcome> Scenario::tensor_unindex(std::size_t pos) const {
  if (pos >= dim()) throw std::out_of_range("tensor position out of range");
  std::vector<Outcome> out(parties_.size());
  for (std::size_t p = parties_.size(); p-- > 0;) {
    auto [a, x] = parties_[p].unflatten(pos % parties_[p].dim());
    out[p] = {a, x};
    pos /= parties_[p].dim();
  }
  return out;
}

std::size_t Scenario::num_input_tuples() const {
  std::size_t n = 1;
  for (const auto& p : parties_) n *= static_cast<std::size_t>(p.num_inputs());
  return n;
}

std::size_t Scenario::input_tuple_index(std::span<const Outcome> outcomes) const {
  std::size_t pos = 0;
  for (std::size_t p = 0; p < parties_.size(); ++p)
    pos = pos * static_cast<std::size_t>(parties_[p].num_inputs()) + static_cast<std::size_t>(outcomes[p].x - 1);
  return pos;
}

Scenario Scenario::with_party(std::size_t p, PartyCard card) const {
  Scenario s = *this;
  s.parties_.at(p) = std::move(card);
  return s;
}

Scenario Scenario::with_parties(std::vector<PartyCard> cards) const {
  if (cards.size() != parties_.size()) throw std::invalid_argument("party count mismatch");
  Scenario s = *this;
  s.parties_ = std::move(cards);
  return s;
}

}  // namespace loctrans
