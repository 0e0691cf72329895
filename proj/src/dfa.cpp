#include "dfarl/dfa.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>

#include "dfarl/errors.hpp"
#include "dfarl/rng.hpp"

namespace dfarl {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Reject: return "reject";
    case Verdict::Pending: return "pending";
  }
  return "?";
}

Dfa::Dfa(int num_states, int alphabet_size, std::vector<State> delta, State q0,
         std::vector<State> accepting, std::vector<State> rejecting)
    : num_states_(num_states),
      alphabet_size_(alphabet_size),
      delta_(std::move(delta)),
      q0_(q0),
      accepting_(std::move(accepting)),
      rejecting_(std::move(rejecting)) {
  require(num_states_ >= 1, "dfa: num_states must be >= 1");
  require(alphabet_size_ >= 1, "dfa: alphabet_size must be >= 1");
  require(delta_.size() == static_cast<std::size_t>(num_states_) * alphabet_size_,
          "dfa: delta must have num_states * alphabet_size entries");
  for (State t : delta_) require(t >= 0 && t < num_states_, "dfa: transition target out of range");
  require(q0_ >= 0 && q0_ < num_states_, "dfa: initial state out of range");
  kind_.assign(num_states_, 0);
  auto check_set = [&](const std::vector<State>& set, std::uint8_t tag, const char* name) {
    require(std::is_sorted(set.begin(), set.end()) &&
                std::adjacent_find(set.begin(), set.end()) == set.end(),
            std::string("dfa: ") + name + " must be sorted and unique");
    for (State q : set) {
      require(q >= 0 && q < num_states_, std::string("dfa: ") + name + " state out of range");
      require(kind_[q] == 0, "dfa: accepting and rejecting sets must be disjoint");
      kind_[q] = tag;
    }
  };
  check_set(accepting_, 1, "accepting");
  check_set(rejecting_, 2, "rejecting");
}

Dfa Dfa::top(int alphabet_size) {
  return Dfa(1, alphabet_size, std::vector<State>(alphabet_size, 0), 0, {0}, {});
}

Dfa Dfa::bottom(int alphabet_size) {
  return Dfa(1, alphabet_size, std::vector<State>(alphabet_size, 0), 0, {}, {0});
}

bool Dfa::is_accepting(State q) const { return kind_.at(q) == 1; }
bool Dfa::is_rejecting(State q) const { return kind_.at(q) == 2; }

Verdict Dfa::verdict_of(State q) const {
  switch (kind_.at(q)) {
    case 1: return Verdict::Accept;
    case 2: return Verdict::Reject;
    default: return Verdict::Pending;
  }
}

bool Dfa::is_plan() const {
  for (State q = 0; q < num_states_; ++q) {
    if (!is_final(q)) continue;
    for (Symbol a = 0; a < alphabet_size_; ++a)
      if (next(q, a) != q) return false;
  }
  return true;
}

Dfa Dfa::with_initial(State q) const {
  require(q >= 0 && q < num_states_, "dfa: initial state out of range");
  Dfa copy = *this;
  copy.q0_ = q;
  return copy;
}

int Dfa::diameter() const {
  std::vector<int> dist(num_states_, -1);
  std::queue<State> frontier;
  dist[q0_] = 0;
  frontier.push(q0_);
  int best = 0;
  while (!frontier.empty()) {
    State q = frontier.front();
    frontier.pop();
    best = std::max(best, dist[q]);
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      State t = next(q, a);
      if (dist[t] < 0) {
        dist[t] = dist[q] + 1;
        frontier.push(t);
      }
    }
  }
  return best;
}

State extended_transition(const Dfa& dfa, State from, std::span<const Symbol> word) {
  require(from >= 0 && from < dfa.num_states(), "extended_transition: state out of range");
  State q = from;
  for (Symbol a : word) {
    require(a >= 0 && a < dfa.alphabet_size(), "extended_transition: symbol out of range");
    q = dfa.next(q, a);
  }
  return q;
}

Verdict classify(const Dfa& dfa, std::span<const Symbol> word) {
  return dfa.verdict_of(extended_transition(dfa, dfa.initial(), word));
}

std::string canonical_bytes(const Dfa& dfa) {
  std::string out;
  auto put = [&out](std::int32_t v) {
    auto u = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
  };
  put(dfa.num_states());
  put(dfa.alphabet_size());
  for (State t : dfa.delta()) put(t);
  put(dfa.initial());
  put(static_cast<std::int32_t>(dfa.accepting().size()));
  for (State q : dfa.accepting()) put(q);
  put(static_cast<std::int32_t>(dfa.rejecting().size()));
  for (State q : dfa.rejecting()) put(q);
  return out;
}

CanonicalDfa canonicalize(const Dfa& dfa) {
  const int k = dfa.alphabet_size();
  std::vector<State> order;
  std::vector<State> renum(dfa.num_states(), -1);
  renum[dfa.initial()] = 0;
  order.push_back(dfa.initial());
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Symbol a = 0; a < k; ++a) {
      State t = dfa.next(order[head], a);
      if (renum[t] < 0) {
        renum[t] = static_cast<State>(order.size());
        order.push_back(t);
      }
    }
  }
  const int n = static_cast<int>(order.size());
  std::vector<State> delta(static_cast<std::size_t>(n) * k);
  std::vector<State> acc, rej;
  for (State i = 0; i < n; ++i) {
    State old = order[i];
    for (Symbol a = 0; a < k; ++a) delta[i * k + a] = renum[dfa.next(old, a)];
    if (dfa.is_accepting(old)) acc.push_back(i);
    if (dfa.is_rejecting(old)) rej.push_back(i);
  }
  CanonicalDfa c{Dfa(n, k, std::move(delta), 0, std::move(acc), std::move(rej)), 0};
  c.hash = fnv1a64(canonical_bytes(c.dfa));
  return c;
}

Dfa minimize(const Dfa& dfa) {
  const int k = dfa.alphabet_size();

  // Prune to the reachable part, already in BFS order.
  const Dfa reach = canonicalize(dfa).dfa;
  const int n = reach.num_states();

  // Inverse transitions in CSR form, one table per symbol.
  std::vector<int> inv_start(static_cast<std::size_t>(k) * (n + 1), 0);
  std::vector<State> inv(static_cast<std::size_t>(k) * n);
  for (Symbol a = 0; a < k; ++a) {
    int* start = &inv_start[static_cast<std::size_t>(a) * (n + 1)];
    for (State q = 0; q < n; ++q) ++start[reach.next(q, a) + 1];
    for (int t = 0; t < n; ++t) start[t + 1] += start[t];
    std::vector<int> fill(start, start + n);
    for (State q = 0; q < n; ++q) inv[static_cast<std::size_t>(a) * n + fill[reach.next(q, a)]++] = q;
  }
  auto preds = [&](Symbol a, State t) {
    const int* start = &inv_start[static_cast<std::size_t>(a) * (n + 1)];
    const State* base = &inv[static_cast<std::size_t>(a) * n];
    return std::span<const State>(base + start[t], base + start[t + 1]);
  };

  std::vector<std::vector<State>> blocks;
  std::vector<int> block_of(n, -1);
  {
    std::vector<State> seed[3];
    for (State q = 0; q < n; ++q) seed[static_cast<int>(reach.verdict_of(q))].push_back(q);
    for (auto& s : seed) {
      if (s.empty()) continue;
      for (State q : s) block_of[q] = static_cast<int>(blocks.size());
      blocks.push_back(std::move(s));
    }
  }

  std::vector<char> in_work;
  std::vector<std::pair<int, Symbol>> work;
  auto push_work = [&](int b, Symbol a) {
    if (in_work.size() < blocks.size() * k) in_work.resize(blocks.size() * k, 0);
    if (in_work[b * k + a]) return;
    in_work[b * k + a] = 1;
    work.emplace_back(b, a);
  };
  {
    int largest = 0;
    for (int b = 1; b < static_cast<int>(blocks.size()); ++b)
      if (blocks[b].size() > blocks[largest].size()) largest = b;
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
      if (b != largest)
        for (Symbol a = 0; a < k; ++a) push_work(b, a);
  }

  std::vector<char> marked(n, 0);
  std::vector<int> marked_count;
  std::vector<State> marked_states;
  std::vector<int> touched;
  while (!work.empty()) {
    auto [splitter, a] = work.back();
    work.pop_back();
    in_work[splitter * k + a] = 0;

    marked_count.assign(blocks.size(), 0);
    marked_states.clear();
    touched.clear();
    for (State t : blocks[splitter]) {
      for (State p : preds(a, t)) {
        if (marked[p]) continue;
        marked[p] = 1;
        marked_states.push_back(p);
        if (marked_count[block_of[p]]++ == 0) touched.push_back(block_of[p]);
      }
    }
    for (int y : touched) {
      if (marked_count[y] == static_cast<int>(blocks[y].size())) continue;
      std::vector<State> inside, outside;
      for (State q : blocks[y]) (marked[q] ? inside : outside).push_back(q);
      const int z = static_cast<int>(blocks.size());
      blocks[y] = std::move(outside);
      for (State q : inside) block_of[q] = z;
      blocks.push_back(std::move(inside));
      in_work.resize(blocks.size() * k, 0);
      for (Symbol c = 0; c < k; ++c) {
        if (in_work[y * k + c]) {
          push_work(z, c);
        } else {
          push_work(blocks[z].size() <= blocks[y].size() ? z : y, c);
        }
      }
    }
    for (State p : marked_states) marked[p] = 0;
  }

  const int m = static_cast<int>(blocks.size());
  std::vector<State> delta(static_cast<std::size_t>(m) * k);
  std::vector<State> acc, rej;
  for (int b = 0; b < m; ++b) {
    State rep = blocks[b].front();
    for (Symbol a = 0; a < k; ++a) delta[b * k + a] = block_of[reach.next(rep, a)];
    if (reach.is_accepting(rep)) acc.push_back(b);
    if (reach.is_rejecting(rep)) rej.push_back(b);
  }
  Dfa quotient(m, k, std::move(delta), block_of[reach.initial()], std::move(acc), std::move(rej));
  return canonicalize(quotient).dfa;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[y] = x;
    return true;
  }
};

}  // namespace

bool is_bisimilar(const Dfa& a, const Dfa& b) {
  require(a.alphabet_size() == b.alphabet_size(), "is_bisimilar: alphabet mismatch");
  const int na = a.num_states();
  UnionFind uf(na + b.num_states());
  std::vector<std::pair<State, State>> stack{{a.initial(), b.initial()}};
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    if (a.verdict_of(p) != b.verdict_of(q)) return false;
    if (!uf.unite(p, na + q)) continue;
    for (Symbol s = 0; s < a.alphabet_size(); ++s) stack.emplace_back(a.next(p, s), b.next(q, s));
  }
  return true;
}

nlohmann::json to_json(const Dfa& dfa) {
  nlohmann::json j;
  j["num_states"] = dfa.num_states();
  j["alphabet_size"] = dfa.alphabet_size();
  j["delta"] = std::vector<State>(dfa.delta().begin(), dfa.delta().end());
  j["q0"] = dfa.initial();
  j["accepting"] = dfa.accepting();
  j["rejecting"] = dfa.rejecting();
  return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
  try {
    return Dfa(j.at("num_states").get<int>(), j.at("alphabet_size").get<int>(),
               j.at("delta").get<std::vector<State>>(), j.at("q0").get<State>(),
               j.at("accepting").get<std::vector<State>>(),
               j.at("rejecting").get<std::vector<State>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("dfa json: ") + e.what());
  }
}

std::string to_dot(const Dfa& dfa, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (State q = 0; q < dfa.num_states(); ++q) {
    os << "  q" << q << " [label=\"" << q << "\"";
    if (dfa.is_accepting(q)) os << ", shape=doublecircle";
    else os << ", shape=circle";
    if (dfa.is_rejecting(q)) os << ", style=filled, fillcolor=gray";
    os << "];\n";
  }
  os << "  __start -> q" << dfa.initial() << ";\n";
  // Parallel edges between the same states are merged into one label.
  for (State q = 0; q < dfa.num_states(); ++q) {
    std::vector<std::vector<Symbol>> by_target(dfa.num_states());
    for (Symbol a = 0; a < dfa.alphabet_size(); ++a) by_target[dfa.next(q, a)].push_back(a);
    for (State t = 0; t < dfa.num_states(); ++t) {
      if (by_target[t].empty()) continue;
      os << "  q" << q << " -> q" << t << " [label=\"";
      for (std::size_t i = 0; i < by_target[t].size(); ++i) os << (i ? "," : "") << by_target[t][i];
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dfarl
