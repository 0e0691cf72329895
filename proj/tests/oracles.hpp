#pragma once

// Slow, obviously-correct reimplementations used to check the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dfarl/bisim_metric.hpp"
#include "dfarl/dfa.hpp"
#include "dfarl/dfa_space.hpp"
#include "dfarl/rng.hpp"

namespace oracle {

using namespace dfarl;

// Random three-valued DFA; final states are not forced to be sinks unless `plan`.
inline Dfa random_dfa(Rng& rng, int n, int k, bool plan) {
  std::vector<State> delta(static_cast<std::size_t>(n) * k);
  for (auto& d : delta) d = static_cast<State>(uniform_index(rng, n));
  std::vector<State> acc, rej;
  for (int q = 0; q < n; ++q) {
    const double u = uniform01(rng);
    if (u < 0.2) acc.push_back(q);
    else if (u < 0.4) rej.push_back(q);
  }
  if (plan) {
    for (State q : acc)
      for (int a = 0; a < k; ++a) delta[q * k + a] = q;
    for (State q : rej)
      for (int a = 0; a < k; ++a) delta[q * k + a] = q;
  }
  return Dfa(n, k, delta, static_cast<State>(uniform_index(rng, n)), acc, rej);
}

// Calls f on every word of length 0..max_len.
template <class F>
void for_each_word(int k, int max_len, F&& f) {
  Word w;
  f(w);
  for (int len = 1; len <= max_len; ++len) {
    w.assign(len, 0);
    while (true) {
      f(w);
      int i = len - 1;
      while (i >= 0 && ++w[i] == k) w[i--] = 0;
      if (i < 0) break;
    }
  }
}

// Same verdict on every word up to max_len, computed state by state.
inline bool same_classification(const Dfa& a, const Dfa& b, int max_len) {
  // Layered walk over state pairs avoids enumerating words explicitly for long lengths.
  std::vector<std::pair<State, State>> frontier{{a.initial(), b.initial()}};
  for (int len = 0; len <= max_len; ++len) {
    std::vector<std::pair<State, State>> next;
    for (auto [p, q] : frontier) {
      if (a.verdict_of(p) != b.verdict_of(q)) return false;
      if (len == max_len) continue;
      for (int s = 0; s < a.alphabet_size(); ++s) next.emplace_back(a.next(p, s), b.next(q, s));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
  }
  return true;
}

// Moore-style partition refinement on the disjoint union; bisimilar iff the
// initial states end in the same block.
inline bool bisimilar_by_refinement(const Dfa& a, const Dfa& b) {
  const int na = a.num_states(), n = na + b.num_states(), k = a.alphabet_size();
  auto verdict = [&](int q) { return q < na ? a.verdict_of(q) : b.verdict_of(q - na); };
  auto succ = [&](int q, int s) { return q < na ? a.next(q, s) : na + b.next(q - na, s); };
  std::vector<int> block(n);
  for (int q = 0; q < n; ++q) block[q] = static_cast<int>(verdict(q));
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> nb(n);
    for (int q = 0; q < n; ++q) {
      std::vector<int> key{block[q]};
      for (int s = 0; s < k; ++s) key.push_back(block[succ(q, s)]);
      nb[q] = sig.emplace(key, static_cast<int>(sig.size())).first->second;
    }
    block = nb;
    if (sig.size() == count) break;
    count = sig.size();
  }
  return block[a.initial()] == block[na + b.initial()];
}

// Number of states reachable from the initial state.
inline int reachable_count(const Dfa& d) {
  std::vector<char> seen(d.num_states(), 0);
  std::vector<State> stack{d.initial()};
  seen[d.initial()] = 1;
  int count = 0;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    ++count;
    for (int a = 0; a < d.alphabet_size(); ++a)
      if (!seen[d.next(q, a)]) {
        seen[d.next(q, a)] = 1;
        stack.push_back(d.next(q, a));
      }
  }
  return count;
}

// Full-matrix value iteration run to machine precision; no pair symmetry
// assumed and Gauss-Seidel sweeps instead of the library's synchronous ones.
inline std::vector<std::vector<double>> naive_metric(const InducedMdp& mdp, double gamma) {
  const int n = mdp.num_states();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int iter = 0; iter < 100000; ++iter) {
    double change = 0.0;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        double best = 0.0;
        for (int a = 0; a < mdp.alphabet_size(); ++a)
          best = std::max(best, std::abs(mdp.reward(s, a) - mdp.reward(t, a)) +
                                    gamma * d[mdp.next(s, a)][mdp.next(t, a)]);
        change = std::max(change, std::abs(best - d[s][t]));
        d[s][t] = best;
      }
    if (change < 1e-13) break;
  }
  return d;
}

}  // namespace oracle

namespace oracle {

// State-permuted copy: old state q becomes perm[q].
inline dfarl::Dfa permuted(const dfarl::Dfa& d, const std::vector<int>& perm) {
  const int n = d.num_states(), k = d.alphabet_size();
  std::vector<dfarl::State> delta(static_cast<std::size_t>(n) * k);
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < k; ++a) delta[perm[q] * k + a] = perm[d.next(q, a)];
  std::vector<dfarl::State> acc, rej;
  for (auto q : d.accepting()) acc.push_back(perm[q]);
  for (auto q : d.rejecting()) rej.push_back(perm[q]);
  std::sort(acc.begin(), acc.end());
  std::sort(rej.begin(), rej.end());
  return dfarl::Dfa(n, k, delta, perm[d.initial()], acc, rej);
}

inline std::vector<int> random_permutation(dfarl::Rng& rng, int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[dfarl::uniform_index(rng, i + 1)]);
  return p;
}

}  // namespace oracle
