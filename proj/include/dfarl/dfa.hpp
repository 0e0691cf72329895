#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dfarl {

using State = int;
using Symbol = int;
using Word = std::vector<Symbol>;

enum class Verdict { Accept, Reject, Pending };

const char* to_string(Verdict v);

/**
 * Three-valued deterministic finite automaton.
 *
 * States are 0..num_states-1 and symbols 0..alphabet_size-1. The transition
 * table is stored row-major: delta[q * alphabet_size + a]. Final states are
 * split into accepting and rejecting sets; both are kept sorted.
 */
class Dfa {
 public:
  Dfa() = default;

  // Validates totality, ranges, disjointness of the final sets and sortedness.
  // Throws ValidationError.
  Dfa(int num_states, int alphabet_size, std::vector<State> delta, State q0,
      std::vector<State> accepting, std::vector<State> rejecting);

  // Single-state all-accepting / all-rejecting automata.
  static Dfa top(int alphabet_size);
  static Dfa bottom(int alphabet_size);

  int num_states() const { return num_states_; }
  int alphabet_size() const { return alphabet_size_; }
  State initial() const { return q0_; }
  State next(State q, Symbol a) const { return delta_[q * alphabet_size_ + a]; }
  std::span<const State> delta() const { return delta_; }
  const std::vector<State>& accepting() const { return accepting_; }
  const std::vector<State>& rejecting() const { return rejecting_; }

  bool is_accepting(State q) const;
  bool is_rejecting(State q) const;
  bool is_final(State q) const { return is_accepting(q) || is_rejecting(q); }
  Verdict verdict_of(State q) const;

  // Final states are sinks.
  bool is_plan() const;

  // The same automaton with a different start state.
  Dfa with_initial(State q) const;

  // Longest shortest-path distance from the initial state.
  int diameter() const;

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  int num_states_ = 0;
  int alphabet_size_ = 0;
  std::vector<State> delta_;
  State q0_ = 0;
  std::vector<State> accepting_;
  std::vector<State> rejecting_;
  std::vector<std::uint8_t> kind_;  // 0 pending, 1 accepting, 2 rejecting
};

/// Runs the extended transition function from `from` over `word`.
State extended_transition(const Dfa& dfa, State from, std::span<const Symbol> word);

Verdict classify(const Dfa& dfa, std::span<const Symbol> word);

/// Hopcroft minimization seeded with {accepting, rejecting, pending} after
/// pruning states unreachable from the initial state. The result is numbered
/// in canonical breadth-first order.
Dfa minimize(const Dfa& dfa);

/// Decides bisimilarity by synchronized exploration from the initial pair with
/// union-find (Hopcroft-Karp). Throws ValidationError on alphabet mismatch.
bool is_bisimilar(const Dfa& a, const Dfa& b);

/// A DFA renumbered in breadth-first order from the initial state, symbols
/// visited in ascending order. Unreachable states are dropped.
struct CanonicalDfa {
  Dfa dfa;
  std::uint64_t hash = 0;

  friend bool operator==(const CanonicalDfa& x, const CanonicalDfa& y) {
    return x.hash == y.hash && x.dfa == y.dfa;
  }
};

CanonicalDfa canonicalize(const Dfa& dfa);

/// Byte string hashed by canonicalize; stable across platforms.
std::string canonical_bytes(const Dfa& dfa);

// JSON text format. Round-trips exactly.
nlohmann::json to_json(const Dfa& dfa);
Dfa dfa_from_json(const nlohmann::json& j);

/// Graphviz rendering: accepting states double-circled, rejecting states filled.
std::string to_dot(const Dfa& dfa, const std::string& name = "dfa");

std::string hash_hex(std::uint64_t h);

}  // namespace dfarl
