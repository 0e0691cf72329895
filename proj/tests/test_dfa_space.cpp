#include <doctest.h>

#include <deque>
#include <set>

#include "dfarl/dfa_space.hpp"
#include "dfarl/errors.hpp"
#include "dfarl/samplers.hpp"
#include "oracles.hpp"

using namespace dfarl;

namespace {

// Closure by plain BFS over minimized automata, keyed on the canonical bytes.
std::set<std::string> closure_oracle(const std::vector<Dfa>& seeds, int k) {
  std::set<std::string> seen;
  std::deque<Dfa> queue;
  auto push = [&](const Dfa& d) {
    const Dfa m = canonicalize(minimize(d)).dfa;
    if (seen.insert(canonical_bytes(m)).second) queue.push_back(m);
  };
  push(Dfa::top(k));
  push(Dfa::bottom(k));
  for (const auto& s : seeds) push(s);
  while (!queue.empty()) {
    const Dfa d = queue.front();
    queue.pop_front();
    for (int a = 0; a < k; ++a) push(d.with_initial(d.next(d.initial(), a)));
  }
  return seen;
}

}  // namespace

TEST_CASE("step moves the initial state and minimizes") {
  const Dfa d = make_reach_avoid_chain(3, {0, 1}, {{2}, {}});
  CHECK(step(d, 0).dfa == canonicalize(minimize(d.with_initial(1))).dfa);
  CHECK(step(d, 2).dfa == Dfa::bottom(3));
  CHECK(step(step(d, 0).dfa, 1).dfa == Dfa::top(3));
  CHECK(reward(d, 2) == -1);
  CHECK(reward(d, 0) == 0);
  CHECK(reward(step(d, 0).dfa, 1) == 1);
  CHECK(reward(Dfa::top(3), 0) == 1);
  CHECK(reward(Dfa::bottom(3), 1) == -1);
  CHECK_THROWS_AS(step(d, 3), ValidationError);
}

TEST_CASE("enumerate matches a BFS closure oracle") {
  SamplerConfig sc;
  sc.alphabet_size = 3;
  sc.kind = TaskKind::ReachAvoid;
  sc.seed = 3;
  for (int count : {1, 3, 8}) {
    const auto seeds = sample_corpus(sc, count);
    DfaSpaceConfig cfg;
    cfg.alphabet_size = 3;
    const InducedMdp mdp = enumerate(seeds, cfg);
    const auto expected = closure_oracle(seeds, 3);
    std::set<std::string> got;
    for (const auto& c : mdp.states()) got.insert(canonical_bytes(c.dfa));
    CHECK(got == expected);
    CHECK(static_cast<std::size_t>(mdp.num_states()) == expected.size());
    CHECK(check_closure(mdp));
    CHECK(mdp.top_id() == 0);
    CHECK(mdp.bot_id() == 1);
    CHECK(mdp.find(seeds[0]) == 2);
    for (int s = 0; s < mdp.num_states(); ++s)
      for (int a = 0; a < 3; ++a) CHECK(mdp.reward(s, a) == reward(mdp.state(s).dfa, a));
  }
}

TEST_CASE("enumerate deduplicates isomorphic seeds") {
  Rng rng = make_stream(4, "test-space");
  const Dfa d = make_reach_avoid_chain(2, {0, 1, 0}, {{1}, {}, {1}});
  const Dfa p = oracle::permuted(d, oracle::random_permutation(rng, d.num_states()));
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  const InducedMdp a = enumerate({d}, cfg);
  const InducedMdp b = enumerate({d, p}, cfg);
  CHECK(a.num_states() == b.num_states());
  CHECK(b.find(p) == b.find(d));
}

TEST_CASE("sinks are absorbing with self-loop rewards") {
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  const InducedMdp mdp = enumerate({}, cfg);
  CHECK(mdp.num_states() == 2);
  for (int a = 0; a < 2; ++a) {
    CHECK(mdp.next(mdp.top_id(), a) == mdp.top_id());
    CHECK(mdp.next(mdp.bot_id(), a) == mdp.bot_id());
    CHECK(mdp.reward(mdp.top_id(), a) == 1);
    CHECK(mdp.reward(mdp.bot_id(), a) == -1);
  }
}

TEST_CASE("enumerate validates its inputs") {
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  cfg.max_states = 3;
  CHECK_THROWS_AS(enumerate({make_reach_chain(2, {0, 1, 0, 1})}, cfg), ValidationError);
  CHECK_THROWS_AS(enumerate({Dfa::top(3)}, cfg), ValidationError);
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("check_closure detects a corrupted table") {
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  InducedMdp mdp = enumerate({make_reach_chain(2, {0, 1})}, cfg);
  CHECK(check_closure(mdp));
  mdp.mutable_transitions()[2 * 2 + 0] = mdp.bot_id();
  CHECK_FALSE(check_closure(mdp));
}

TEST_CASE("mdp json round trip") {
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  const InducedMdp mdp = enumerate({make_reach_avoid_chain(2, {0, 1}, {{1}, {}})}, cfg);
  const InducedMdp back = mdp_from_json(nlohmann::json::parse(to_json(mdp).dump()));
  REQUIRE(back.num_states() == mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s) {
    CHECK(back.state(s) == mdp.state(s));
    for (int a = 0; a < 2; ++a) {
      CHECK(back.next(s, a) == mdp.next(s, a));
      CHECK(back.reward(s, a) == mdp.reward(s, a));
    }
  }
  CHECK(check_closure(back));
}
