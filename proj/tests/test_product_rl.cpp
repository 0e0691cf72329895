#include <doctest.h>

#include <sstream>

#include "dfarl/errors.hpp"
#include "dfarl/product_rl.hpp"
#include "dfarl/samplers.hpp"
#include "oracles.hpp"

using namespace dfarl;

namespace {

// Deterministic corridor of `len` cells; action 0 moves right, action 1 stays.
LabeledMdp corridor(const std::vector<Symbol>& labels, double gamma = 0.9) {
  LabeledMdp m;
  m.num_states = static_cast<int>(labels.size());
  m.num_actions = 2;
  m.gamma = gamma;
  m.label = labels;
  m.initial.assign(m.num_states, 0.0);
  m.initial[0] = 1.0;
  for (int s = 0; s < m.num_states; ++s) {
    m.transition.push_back({{std::min(s + 1, m.num_states - 1), 1.0}});
    m.transition.push_back({{s, 1.0}});
  }
  return m;
}

// Discounted return of a deterministic product run under `policy`, by stepping it.
double rollout_return(const ProductMdp& p, const std::vector<int>& policy, int x, int horizon) {
  double ret = 0.0, disc = 1.0;
  for (int t = 0; t < horizon && !p.is_terminal(x); ++t) {
    const auto e = p.edges(x, policy[x]);
    REQUIRE(e.size() == 1);
    ret += disc * e[0].reward;
    disc *= p.gamma();
    x = e[0].to;
  }
  return ret;
}

struct Setup {
  InducedMdp space;
  LabeledMdp base;
  TaskDist tasks;
};

Setup grid_setup(int tasks, std::uint64_t seed, int width = 5) {
  SamplerConfig sc;
  sc.alphabet_size = 5;
  sc.kind = TaskKind::ReachAvoid;
  sc.state_count.kind = StateCountDist::Kind::Uniform;
  sc.state_count.lo = 3;
  sc.state_count.hi = 5;
  sc.seed = seed;
  const auto seeds = sample_corpus(sc, tasks);
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 5;
  Setup s;
  s.space = enumerate(seeds, cfg);
  GridworldSpec g = default_gridworld(5, seed);
  g.width = g.height = width;
  g.labels.resize(static_cast<std::size_t>(width) * width);
  s.base = make_gridworld(g);
  for (const auto& d : seeds) {
    s.tasks.ids.push_back(s.space.find(d));
    s.tasks.probs.push_back(1.0 / tasks);
  }
  return s;
}

}  // namespace

TEST_CASE("gridworld rows are distributions") {
  const LabeledMdp m = make_gridworld(default_gridworld(5, 1));
  CHECK_NOTHROW(m.validate(5));
  CHECK(m.num_states == 25);
  // corner, moving into the wall: stays with 1 - slip + 2 * slip / 4
  double stay = 0.0;
  for (const auto& o : m.row(0, 0))
    if (o.to == 0) stay = o.prob;
  CHECK(stay == doctest::Approx(0.9 + 0.05));
  const auto g = gridworld_from_json(to_json(default_gridworld(5, 1)));
  CHECK(g.labels == default_gridworld(5, 1).labels);
  CHECK_THROWS_AS(m.validate(3), ValidationError);
}

TEST_CASE("product construction follows the cascade indicator") {
  const Setup s = grid_setup(3, 2);
  const ProductMdp p = compose(s.base, s.space, s.tasks);
  CHECK(p.num_states() == s.base.num_states * s.space.num_states());
  double init = 0.0;
  for (double v : p.initial()) init += v;
  CHECK(init == doctest::Approx(1.0).epsilon(1e-12));
  for (int x = 0; x < p.num_states(); ++x)
    for (int a = 0; a < p.num_actions(); ++a) {
      double sum = 0.0;
      for (const auto& e : p.edges(x, a)) {
        sum += e.prob;
        if (p.is_terminal(x)) {
          CHECK(e.to == x);
          CHECK(e.reward == 0.0);
          continue;
        }
        const int id = p.id_of_key(p.key_of(x));
        const Symbol l = s.base.label[p.base_of(e.to)];
        CHECK(p.id_of_key(p.key_of(e.to)) == s.space.next(id, l));
        CHECK(e.reward == s.space.reward(id, l));
        if (e.reward != 0.0) CHECK(p.is_terminal(e.to));
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("hand-computed values") {
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  // one-state base, task already accepted: everything is terminal from the start
  {
    const InducedMdp space = enumerate({}, cfg);
    const LabeledMdp base = corridor({0});
    const ProductMdp p = compose(base, space, TaskDist{{space.top_id()}, {1.0}});
    CHECK(p.is_terminal(p.index(0, space.top_id())));
    const auto vi = value_iteration(p, 1e-12);
    CHECK(vi.value[p.index(0, space.top_id())] == 0.0);
  }
  // corridor labels 0 0 1, reach symbol 1: the second transition enters A_top
  {
    const Dfa task = make_reach_chain(2, {1});
    const InducedMdp space = enumerate({task}, cfg);
    const LabeledMdp base = corridor({0, 0, 1});
    const ProductMdp p = compose(base, space, TaskDist{{space.find(task)}, {1.0}});
    const auto vi = value_iteration(p, 1e-12);
    const int start = p.index(0, space.find(task));
    CHECK(vi.value[start] == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(rollout_return(p, vi.policy, start, 50) == doctest::Approx(vi.value[start]).epsilon(1e-10));
    CHECK(initial_expectation(p, success_probability(p, vi.policy, 10)) == doctest::Approx(1.0));
  }
  // two-state base, one step to the target
  {
    const Dfa task = make_reach_chain(2, {1});
    const InducedMdp space = enumerate({task}, cfg);
    const LabeledMdp base = corridor({0, 1});
    const ProductMdp p = compose(base, space, TaskDist{{space.find(task)}, {1.0}});
    const auto vi = value_iteration(p, 1e-12);
    CHECK(vi.value[p.index(0, space.find(task))] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(vi.value[p.index(0, space.bot_id())] == 0.0);
  }
}

TEST_CASE("compose validates its inputs") {
  const Setup s = grid_setup(1, 3);
  CHECK_THROWS_AS(compose(s.base, s.space, TaskDist{{999}, {1.0}}), ValidationError);
  CHECK_THROWS_AS(compose(s.base, s.space, TaskDist{{2}, {0.5}}), ValidationError);
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  const InducedMdp small = enumerate({}, cfg);
  CHECK_THROWS_AS(compose(s.base, small, TaskDist{{0}, {1.0}}), ValidationError);  // labels outside alphabet
}

TEST_CASE("parallel value iteration matches the serial reference") {
  const Setup s = grid_setup(6, 4);
  const ProductMdp p = compose(s.base, s.space, s.tasks);
  const auto a = value_iteration(p, 1e-10);
  const auto b = reference::value_iteration(p, 1e-10);
  CHECK(a.value == b.value);
  CHECK(a.policy == b.policy);
  CHECK(a.iterations == b.iterations);
  const auto v = policy_evaluation(p, a.policy, 1e-12);
  double worst = 0.0;
  for (int x = 0; x < p.num_states(); ++x) worst = std::max(worst, std::abs(v[x] - a.value[x]));
  CHECK(worst <= 1e-8);
}

TEST_CASE("relabelled keys give the same values") {
  const Setup s = grid_setup(3, 5);
  const ProductMdp p = compose(s.base, s.space, s.tasks);
  // reverse the key order
  Conditioning rev = dfa_id_conditioning(s.space);
  for (auto& k : rev.key_of_id) k = rev.num_keys - 1 - k;
  const ProductMdp q = compose(s.base, s.space, s.tasks, rev);
  const auto va = value_iteration(p, 1e-10), vb = value_iteration(q, 1e-10);
  for (int id = 0; id < s.space.num_states(); ++id)
    for (int c = 0; c < s.base.num_states; ++c)
      CHECK(va.value[p.index(c, id)] == vb.value[q.index(c, rev.key_of_id[id])]);
}

TEST_CASE("embedding keys: separated model matches ids, collapsed model collides") {
  const Setup s = grid_setup(3, 6);
  Rng rng = make_stream(6, "test-embed");
  EmbeddingModel model = EmbeddingModel::tabular(s.space, 8, 10.0, rng);
  const Conditioning c = embedding_conditioning(model, s.space);
  CHECK(c.key_of_id == dfa_id_conditioning(s.space).key_of_id);
  const auto a = value_iteration(compose(s.base, s.space, s.tasks), 1e-10);
  const auto b = value_iteration(compose(s.base, s.space, s.tasks, c), 1e-10);
  CHECK(a.value == b.value);
  for (int row = 1; row < model.num_rows(); ++row)
    for (int i = 0; i < model.dim(); ++i) model.params()[row * model.dim() + i] = model.params()[i];
  CHECK_THROWS_AS(embedding_conditioning(model, s.space), EmbeddingCollisionError);
}

TEST_CASE("q-learning reaches the value-iteration success rate on a small grid") {
  const Setup s = grid_setup(1, 7, 3);
  const ProductMdp p = compose(s.base, s.space, s.tasks);
  const auto vi = value_iteration(p, 1e-10);
  const double target = initial_expectation(p, success_probability(p, vi.policy, 100));
  QLearningConfig cfg;
  cfg.episodes = 3000;
  cfg.seed = 1;
  const auto r = q_learning(p, cfg);
  CHECK(std::abs(r.final_success - target) <= 0.02);
  CHECK(r.curve.back().episode == cfg.episodes);
  // same seed, same run
  CHECK(q_learning(p, cfg).q == r.q);
}

TEST_CASE("suboptimal-step counting") {
  const Setup s = grid_setup(1, 8, 3);
  const ProductMdp p = compose(s.base, s.space, s.tasks);
  const auto vi = value_iteration(p, 1e-10);
  Rng rng = make_stream(8, "test-trace");
  auto make_trace = [&](const std::vector<int>& policy, bool random) {
    LearnerTrace tr;
    tr.policies.push_back(policy);
    for (int ep = 0; ep < 50; ++ep) {
      int x = 0;
      while (p.initial()[x] == 0.0) ++x;
      for (int t = 0; t < 30 && !p.is_terminal(x); ++t) {
        tr.states.push_back(x);
        tr.snapshot.push_back(0);
        const int a = random ? static_cast<int>(uniform_index(rng, 4)) : policy[x];
        double u = uniform01(rng);
        int y = p.edges(x, a).back().to;
        for (const auto& e : p.edges(x, a)) {
          if (u < e.prob) {
            y = e.to;
            break;
          }
          u -= e.prob;
        }
        x = y;
      }
    }
    return tr;
  };
  CHECK(count_suboptimal_steps(p, make_trace(vi.policy, false), vi.value, 0.05) == 0);
  // a constant policy that only ever moves up
  std::vector<int> up(p.num_states(), 0);
  CHECK(count_suboptimal_steps(p, make_trace(up, true), vi.value, 0.05) > 0);
}

TEST_CASE("csv exports") {
  std::ostringstream os;
  write_success_csv(os, "dfa_id", {{0, 0.5}, {10, 0.75}});
  CHECK(os.str() == "mode,episode,success_rate\ndfa_id,0,0.5\ndfa_id,10,0.75\n");
}
