#include <doctest.h>

#include "dfarl/dfa.hpp"
#include "dfarl/errors.hpp"
#include "dfarl/samplers.hpp"
#include "oracles.hpp"

using namespace dfarl;

TEST_CASE("constructor rejects malformed automata") {
  CHECK_THROWS_AS(Dfa(2, 2, {0, 1, 1}, 0, {1}, {}), ValidationError);      // short table
  CHECK_THROWS_AS(Dfa(2, 2, {0, 1, 1, 2}, 0, {1}, {}), ValidationError);   // target out of range
  CHECK_THROWS_AS(Dfa(2, 2, {0, 1, 1, 1}, 2, {1}, {}), ValidationError);   // bad initial state
  CHECK_THROWS_AS(Dfa(2, 2, {0, 1, 1, 1}, 0, {1}, {1}), ValidationError);  // overlapping finals
  CHECK_THROWS_AS(Dfa(0, 2, {}, 0, {}, {}), ValidationError);
  CHECK_NOTHROW(Dfa(2, 2, {0, 1, 1, 1}, 0, {1}, {}));
}

TEST_CASE("sinks") {
  const Dfa t = Dfa::top(3), b = Dfa::bottom(3);
  CHECK(t.num_states() == 1);
  CHECK(t.is_accepting(0));
  CHECK(b.is_rejecting(0));
  CHECK(t.is_plan());
  CHECK(classify(t, Word{}) == Verdict::Accept);
  CHECK(classify(b, Word{0, 1, 2}) == Verdict::Reject);
  CHECK_FALSE(is_bisimilar(t, b));
}

TEST_CASE("extended transition and classify") {
  // reach 0 then 1, avoid 2 while waiting for 0
  const Dfa d = make_reach_avoid_chain(3, {0, 1}, {{2}, {}});
  CHECK(d.num_states() == 4);
  CHECK(classify(d, Word{}) == Verdict::Pending);
  CHECK(classify(d, Word{0, 1}) == Verdict::Accept);
  CHECK(classify(d, Word{1, 1, 0, 2, 1}) == Verdict::Accept);
  CHECK(classify(d, Word{2, 0, 1}) == Verdict::Reject);
  CHECK(extended_transition(d, 0, Word{0}) == 1);
  CHECK_THROWS_AS(classify(d, Word{3}), ValidationError);
  CHECK(d.diameter() == 2);
}

TEST_CASE("minimize agrees with brute-force word enumeration") {
  Rng rng = make_stream(7, "test-minimize");
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 8));
    const int k = 1 + static_cast<int>(uniform_index(rng, 3));
    const Dfa d = oracle::random_dfa(rng, n, k, trial % 2 == 0);
    const Dfa m = minimize(d);
    int checked = 0;
    bool same = true;
    oracle::for_each_word(k, 6, [&](const Word& w) {
      same = same && classify(d, w) == classify(m, w);
      ++checked;
    });
    CHECK(same);
    CHECK(m.num_states() <= oracle::reachable_count(d));
    CHECK(minimize(m) == m);
    CHECK(is_bisimilar(d, m));
  }
}

TEST_CASE("minimal automaton size matches partition refinement") {
  Rng rng = make_stream(8, "test-minimize-size");
  for (int trial = 0; trial < 200; ++trial) {
    const Dfa d = oracle::random_dfa(rng, 2 + static_cast<int>(uniform_index(rng, 7)), 2, false);
    const Dfa m = minimize(d);
    // No two states of the minimal automaton may be bisimilar.
    for (int p = 0; p < m.num_states(); ++p)
      for (int q = p + 1; q < m.num_states(); ++q)
        CHECK_FALSE(oracle::bisimilar_by_refinement(m.with_initial(p), m.with_initial(q)));
  }
}

TEST_CASE("is_bisimilar matches partition refinement") {
  Rng rng = make_stream(9, "test-bisim");
  int positives = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int k = 1 + static_cast<int>(uniform_index(rng, 2));
    const Dfa a = oracle::random_dfa(rng, 1 + static_cast<int>(uniform_index(rng, 5)), k, true);
    const Dfa b = trial % 3 == 0 ? oracle::permuted(a, oracle::random_permutation(rng, a.num_states()))
                                 : oracle::random_dfa(rng, 1 + static_cast<int>(uniform_index(rng, 5)), k, true);
    const bool expected = oracle::bisimilar_by_refinement(a, b);
    positives += expected;
    CHECK(is_bisimilar(a, b) == expected);
    CHECK(is_bisimilar(b, a) == expected);
  }
  CHECK(positives > 100);
  CHECK_THROWS_AS(is_bisimilar(Dfa::top(2), Dfa::top(3)), ValidationError);
}

TEST_CASE("canonical form is invariant under renumbering") {
  Rng rng = make_stream(10, "test-canon");
  for (int trial = 0; trial < 100; ++trial) {
    const Dfa d = oracle::random_dfa(rng, 1 + static_cast<int>(uniform_index(rng, 9)), 3, true);
    const Dfa p = oracle::permuted(d, oracle::random_permutation(rng, d.num_states()));
    const CanonicalDfa cd = canonicalize(minimize(d));
    const CanonicalDfa cp = canonicalize(minimize(p));
    CHECK(cd == cp);
    CHECK(cd.hash == cp.hash);
  }
  // Distinct minimal DFAs hash apart.
  CHECK(canonicalize(Dfa::top(2)).hash != canonicalize(Dfa::bottom(2)).hash);
  CHECK(hash_hex(0x1234).size() == 16);
}

TEST_CASE("json round trip and dot output") {
  const Dfa d = make_reach_avoid_chain(3, {0, 1}, {{2}, {}});
  const auto j = to_json(d);
  CHECK(dfa_from_json(j) == d);
  CHECK(dfa_from_json(nlohmann::json::parse(j.dump())) == d);
  nlohmann::json bad = j;
  bad["delta"].push_back(0);
  CHECK_THROWS_AS(dfa_from_json(bad), ValidationError);
  CHECK_THROWS_AS(dfa_from_json(nlohmann::json{{"num_states", 1}}), ValidationError);
  const std::string dot = to_dot(d);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("filled") != std::string::npos);
}
