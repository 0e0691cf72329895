#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dfarl/dfa.hpp"

namespace dfarl {

struct DfaSpaceConfig {
  int alphabet_size = 2;
  int max_states = 10;
  double gamma = 0.9;

  void validate() const;
};

/// Advance the initial state by one symbol, then minimize and canonicalize.
CanonicalDfa step(const Dfa& dfa, Symbol symbol);

/// +1 if the step lands on the all-accepting DFA, -1 on the all-rejecting one, 0 otherwise.
int reward(const Dfa& dfa, Symbol symbol);

/**
 * Deterministic MDP induced by a DFA space: states are canonical DFAs, actions
 * are symbols. The all-accepting and all-rejecting DFAs are always present and
 * keep their self-loop rewards (+1 and -1 on every step).
 */
class InducedMdp {
 public:
  int num_states() const { return static_cast<int>(states_.size()); }
  int alphabet_size() const { return alphabet_size_; }
  int max_states() const { return max_states_; }
  int top_id() const { return top_id_; }
  int bot_id() const { return bot_id_; }
  bool is_terminal(int s) const { return s == top_id_ || s == bot_id_; }

  const CanonicalDfa& state(int s) const { return states_.at(s); }
  const std::vector<CanonicalDfa>& states() const { return states_; }
  int next(int s, Symbol a) const { return transitions_[s * alphabet_size_ + a]; }
  int reward(int s, Symbol a) const { return rewards_[s * alphabet_size_ + a]; }

  /// Id of a DFA after minimization, or -1 if it is not in the space.
  int find(const Dfa& dfa) const;
  int find(const CanonicalDfa& c) const;

  // Raw table access for constructing counterexamples in tests.
  std::vector<int>& mutable_transitions() { return transitions_; }

  friend InducedMdp enumerate(const std::vector<Dfa>& seeds, const DfaSpaceConfig& config);
  friend InducedMdp mdp_from_json(const nlohmann::json& j);
  friend InducedMdp plant_duplicate(const InducedMdp& mdp, int s, const Dfa& copy);

 private:
  int intern(CanonicalDfa c);

  int alphabet_size_ = 0;
  int max_states_ = 0;
  int top_id_ = -1;
  int bot_id_ = -1;
  std::vector<CanonicalDfa> states_;
  std::unordered_map<std::uint64_t, std::vector<int>> index_;
  std::vector<int> transitions_;
  std::vector<std::int8_t> rewards_;
};

/// Breadth-first closure of the seeds plus the two sink DFAs under `step`.
/// State 0 is the all-accepting DFA, state 1 the all-rejecting one, then seeds
/// in order, then newly discovered DFAs in BFS order.
InducedMdp enumerate(const std::vector<Dfa>& seeds, const DfaSpaceConfig& config);

/// True iff every transition lands on the registered successor DFA and every
/// state respects the state bound.
bool check_closure(const InducedMdp& mdp);

/// Appends `copy`, which must be bisimilar to state s, as an extra state with
/// the same outgoing row. Lookups keep resolving to s. Used to check that the
/// metric puts isomorphic tasks at distance zero even when they are not merged.
InducedMdp plant_duplicate(const InducedMdp& mdp, int s, const Dfa& copy);

nlohmann::json to_json(const InducedMdp& mdp);
InducedMdp mdp_from_json(const nlohmann::json& j);

}  // namespace dfarl
