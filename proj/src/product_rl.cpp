#include "dfarl/product_rl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>

#include "dfarl/errors.hpp"

namespace dfarl {

void LabeledMdp::validate(int alphabet_size) const {
  require(num_states >= 1 && num_actions >= 1, "labeled mdp: needs states and actions");
  require(gamma > 0.0 && gamma < 1.0, "labeled mdp: gamma must be in (0, 1)");
  require(transition.size() == static_cast<std::size_t>(num_states) * num_actions,
          "labeled mdp: transition table size mismatch");
  require(label.size() == static_cast<std::size_t>(num_states), "labeled mdp: one label per state");
  require(initial.size() == static_cast<std::size_t>(num_states), "labeled mdp: initial distribution size mismatch");
  for (Symbol l : label) require(l >= 0 && l < alphabet_size, "labeled mdp: label outside the alphabet");
  for (const auto& row : transition) {
    double sum = 0.0;
    for (const auto& o : row) {
      require(o.to >= 0 && o.to < num_states && o.prob >= 0.0, "labeled mdp: bad outcome");
      sum += o.prob;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "labeled mdp: transition row does not sum to 1");
  }
  double sum = 0.0;
  for (double p : initial) {
    require(p >= 0.0, "labeled mdp: negative initial probability");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "labeled mdp: initial distribution does not sum to 1");
}

GridworldSpec default_gridworld(int alphabet_size, std::uint64_t seed) {
  require(alphabet_size >= 1, "gridworld: alphabet must be nonempty");
  GridworldSpec g;
  Rng rng = make_stream(seed, "gridworld");
  g.labels.resize(static_cast<std::size_t>(g.width) * g.height);
  for (auto& l : g.labels) l = static_cast<Symbol>(uniform_index(rng, alphabet_size));
  return g;
}

LabeledMdp make_gridworld(const GridworldSpec& g) {
  require(g.width >= 1 && g.height >= 1, "gridworld: empty grid");
  require(g.labels.size() == static_cast<std::size_t>(g.width) * g.height, "gridworld: one label per cell");
  require(g.slip >= 0.0 && g.slip <= 1.0, "gridworld: slip must be in [0, 1]");
  require(g.start_x >= 0 && g.start_x < g.width && g.start_y >= 0 && g.start_y < g.height,
          "gridworld: start outside the grid");
  static constexpr int dx[4] = {0, 1, 0, -1};
  static constexpr int dy[4] = {-1, 0, 1, 0};
  LabeledMdp m;
  m.num_states = g.width * g.height;
  m.num_actions = 4;
  m.gamma = g.gamma;
  m.label = g.labels;
  m.initial.assign(m.num_states, 0.0);
  m.initial[g.start_y * g.width + g.start_x] = 1.0;
  m.transition.resize(static_cast<std::size_t>(m.num_states) * 4);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x)
      for (int a = 0; a < 4; ++a) {
        auto& row = m.transition[static_cast<std::size_t>(y * g.width + x) * 4 + a];
        auto add = [&](int dir, double p) {
          if (p == 0.0) return;
          int nx = x + dx[dir], ny = y + dy[dir];
          if (nx < 0 || nx >= g.width || ny < 0 || ny >= g.height) nx = x, ny = y;
          const int to = ny * g.width + nx;
          for (auto& o : row)
            if (o.to == to) {
              o.prob += p;
              return;
            }
          row.push_back({to, p});
        };
        add(a, 1.0 - g.slip);
        for (int d = 0; d < 4; ++d) add(d, g.slip / 4.0);
      }
  return m;
}

nlohmann::json to_json(const GridworldSpec& g) {
  return {{"width", g.width}, {"height", g.height}, {"labels", g.labels}, {"slip", g.slip},
          {"start", {g.start_x, g.start_y}}, {"gamma", g.gamma}};
}

GridworldSpec gridworld_from_json(const nlohmann::json& j) {
  GridworldSpec g;
  try {
    g.width = j.value("width", g.width);
    g.height = j.value("height", g.height);
    g.labels = j.at("labels").get<std::vector<Symbol>>();
    g.slip = j.value("slip", g.slip);
    if (j.contains("start")) {
      g.start_x = j.at("start").at(0).get<int>();
      g.start_y = j.at("start").at(1).get<int>();
    }
    g.gamma = j.value("gamma", g.gamma);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("gridworld json: ") + e.what());
  }
  make_gridworld(g);  // validates
  return g;
}

Conditioning dfa_id_conditioning(const InducedMdp& space) {
  Conditioning c;
  c.name = "dfa_id";
  c.num_keys = space.num_states();
  c.key_of_id.resize(c.num_keys);
  for (int i = 0; i < c.num_keys; ++i) c.key_of_id[i] = i;
  return c;
}

Conditioning embedding_conditioning(const EmbeddingModel& model, const InducedMdp& space, double quantum) {
  require(quantum > 0.0, "embedding conditioning: quantum must be positive");
  const Vec unit = embed_space(model, space);
  const int d = model.dim();
  const double c = model.scale();
  Conditioning out;
  out.name = "embedding_key";
  std::map<std::vector<long long>, int> keys;
  std::vector<int> first_id;
  for (int id = 0; id < space.num_states(); ++id) {
    std::vector<long long> key(d);
    for (int i = 0; i < d; ++i) key[i] = std::llround(c * unit[static_cast<std::size_t>(id) * d + i] / quantum);
    auto [it, fresh] = keys.emplace(std::move(key), static_cast<int>(first_id.size()));
    if (fresh) {
      first_id.push_back(id);
    } else if (!is_bisimilar(space.state(first_id[it->second]).dfa, space.state(id).dfa)) {
      throw EmbeddingCollisionError("embedding key collision between non-bisimilar DFAs " +
                                    hash_hex(space.state(first_id[it->second]).hash) + " (id " +
                                    std::to_string(first_id[it->second]) + ") and " +
                                    hash_hex(space.state(id).hash) + " (id " + std::to_string(id) + ")");
    }
    out.key_of_id.push_back(it->second);
  }
  out.num_keys = static_cast<int>(first_id.size());
  return out;
}

ProductMdp compose(const LabeledMdp& base, const InducedMdp& space, const TaskDist& tasks,
                   const Conditioning& cond) {
  base.validate(space.alphabet_size());
  require(cond.key_of_id.size() == static_cast<std::size_t>(space.num_states()),
          "compose: conditioning does not cover the space");
  require(!tasks.ids.empty() && tasks.ids.size() == tasks.probs.size(), "compose: empty or ragged task distribution");
  double mass = 0.0;
  for (std::size_t i = 0; i < tasks.ids.size(); ++i) {
    require(tasks.ids[i] >= 0 && tasks.ids[i] < space.num_states(), "compose: task id outside the space");
    require(tasks.probs[i] >= 0.0, "compose: negative task probability");
    mass += tasks.probs[i];
  }
  require(std::abs(mass - 1.0) <= 1e-9, "compose: task distribution does not sum to 1");

  ProductMdp p;
  p.base_states_ = base.num_states;
  p.num_actions_ = base.num_actions;
  p.gamma_ = base.gamma;
  p.cond_ = cond;
  p.id_of_key_.assign(cond.num_keys, -1);
  for (int id = 0; id < space.num_states(); ++id) {
    const int k = cond.key_of_id[id];
    require(k >= 0 && k < cond.num_keys, "compose: key out of range");
    if (p.id_of_key_[k] < 0) p.id_of_key_[k] = id;
  }
  p.num_states_ = cond.num_keys * base.num_states;
  p.terminal_.assign(p.num_states_, 0);
  for (int k = 0; k < cond.num_keys; ++k) {
    const int id = p.id_of_key_[k];
    const std::int8_t t = id == space.top_id() ? 1 : id == space.bot_id() ? 2 : 0;
    for (int s = 0; s < base.num_states; ++s) p.terminal_[p.index(s, k)] = t;
  }
  p.row_start_.reserve(static_cast<std::size_t>(p.num_states_) * p.num_actions_ + 1);
  p.row_start_.push_back(0);
  for (int x = 0; x < p.num_states_; ++x) {
    const int s = p.base_of(x);
    const int id = p.id_of_key_[p.key_of(x)];
    for (int a = 0; a < p.num_actions_; ++a) {
      if (p.terminal_[x]) {
        p.edges_.push_back({x, 1.0, 0.0});
      } else {
        for (const auto& o : base.row(s, a)) {
          const Symbol l = base.label[o.to];
          const int id2 = space.next(id, l);
          p.edges_.push_back({p.index(o.to, cond.key_of_id[id2]), o.prob, static_cast<double>(space.reward(id, l))});
        }
      }
      p.row_start_.push_back(p.edges_.size());
    }
  }
  p.initial_.assign(p.num_states_, 0.0);
  for (std::size_t i = 0; i < tasks.ids.size(); ++i)
    for (int s = 0; s < base.num_states; ++s)
      p.initial_[p.index(s, cond.key_of_id[tasks.ids[i]])] += base.initial[s] * tasks.probs[i];
  return p;
}

namespace {

inline double backup(const ProductMdp& p, const std::vector<double>& v, int x, int a) {
  double q = 0.0;
  for (const auto& e : p.edges(x, a)) q += e.prob * (e.reward + p.gamma() * v[e.to]);
  return q;
}

}  // namespace

ValueResult value_iteration(const ProductMdp& p, double tolerance) {
  require(tolerance > 0.0, "value_iteration: tolerance must be positive");
  const int n = p.num_states();
  const double stop = tolerance * (1.0 - p.gamma()) / p.gamma();
  ValueResult r;
  r.value.assign(n, 0.0);
  r.policy.assign(n, 0);
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < 100000; ++iter) {
    double residual = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residual)
    for (int x = 0; x < n; ++x) {
      if (p.is_terminal(x)) {
        next[x] = 0.0;
        continue;
      }
      double best = backup(p, r.value, x, 0);
      int arg = 0;
      for (int a = 1; a < p.num_actions(); ++a) {
        const double q = backup(p, r.value, x, a);
        if (q > best) {
          best = q;
          arg = a;
        }
      }
      next[x] = best;
      r.policy[x] = arg;
      residual = std::max(residual, std::abs(best - r.value[x]));
    }
    r.value.swap(next);
    r.iterations = iter + 1;
    r.residual = residual;
    if (residual < stop) break;
  }
  return r;
}

namespace reference {

ValueResult value_iteration(const ProductMdp& p, double tolerance) {
  require(tolerance > 0.0, "value_iteration: tolerance must be positive");
  const int n = p.num_states();
  const double stop = tolerance * (1.0 - p.gamma()) / p.gamma();
  ValueResult r;
  r.value.assign(n, 0.0);
  r.policy.assign(n, 0);
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> next(n, 0.0);
    double residual = 0.0;
    for (int x = 0; x < n; ++x) {
      if (p.is_terminal(x)) continue;
      double best = backup(p, r.value, x, 0);
      int arg = 0;
      for (int a = 1; a < p.num_actions(); ++a) {
        const double q = backup(p, r.value, x, a);
        if (q > best) {
          best = q;
          arg = a;
        }
      }
      next[x] = best;
      r.policy[x] = arg;
      residual = std::max(residual, std::abs(best - r.value[x]));
    }
    r.value = std::move(next);
    r.iterations = iter + 1;
    r.residual = residual;
    if (residual < stop) break;
  }
  return r;
}

}  // namespace reference

std::vector<double> policy_evaluation(const ProductMdp& p, const std::vector<int>& policy, double tolerance) {
  require(policy.size() == static_cast<std::size_t>(p.num_states()), "policy_evaluation: policy size mismatch");
  const int n = p.num_states();
  const double stop = tolerance * (1.0 - p.gamma()) / p.gamma();
  std::vector<double> v(n, 0.0), next(n, 0.0);
  for (int iter = 0; iter < 100000; ++iter) {
    double residual = 0.0;
    for (int x = 0; x < n; ++x) {
      next[x] = p.is_terminal(x) ? 0.0 : backup(p, v, x, policy[x]);
      residual = std::max(residual, std::abs(next[x] - v[x]));
    }
    v.swap(next);
    if (residual < stop) break;
  }
  return v;
}

std::vector<double> success_probability(const ProductMdp& p, const std::vector<int>& policy, int horizon) {
  require(policy.size() == static_cast<std::size_t>(p.num_states()), "success_probability: policy size mismatch");
  const int n = p.num_states();
  std::vector<double> prob(n, 0.0), next(n, 0.0);
  for (int x = 0; x < n; ++x) prob[x] = p.is_success(x) ? 1.0 : 0.0;
  for (int h = 0; h < horizon; ++h) {
    for (int x = 0; x < n; ++x) {
      if (p.is_terminal(x)) {
        next[x] = prob[x];
        continue;
      }
      double s = 0.0;
      for (const auto& e : p.edges(x, policy[x])) s += e.prob * prob[e.to];
      next[x] = s;
    }
    prob.swap(next);
  }
  return prob;
}

double initial_expectation(const ProductMdp& p, const std::vector<double>& values) {
  double s = 0.0;
  for (int x = 0; x < p.num_states(); ++x)
    if (p.initial()[x] > 0.0) s += p.initial()[x] * values[x];
  return s;
}

void QLearningConfig::validate() const {
  require(episodes >= 1 && max_steps >= 1, "q-learning: episodes and max_steps must be positive");
  require(learning_rate > 0.0 && learning_rate <= 1.0, "q-learning: learning rate must be in (0, 1]");
  require(epsilon >= 0.0 && epsilon <= 1.0, "q-learning: epsilon must be in [0, 1]");
  require(epsilon_decay_steps >= 0, "q-learning: epsilon_decay_steps must be nonnegative");
  require(learning_rate_exponent >= 0.0 && learning_rate_exponent <= 1.0, "q-learning: learning_rate_exponent must be in [0, 1]");
  require(eval_every >= 1 && success_horizon >= 1, "q-learning: eval_every and success_horizon must be positive");
}

nlohmann::json to_json(const QLearningConfig& c) {
  return {{"episodes", c.episodes},         {"max_steps", c.max_steps},
          {"learning_rate", c.learning_rate}, {"learning_rate_exponent", c.learning_rate_exponent},
          {"epsilon", c.epsilon},
          {"epsilon_decay_steps", c.epsilon_decay_steps}, {"optimistic_value", c.optimistic_value},
          {"eval_every", c.eval_every},     {"success_horizon", c.success_horizon},
          {"seed", c.seed}};
}

QLearningConfig qlearning_config_from_json(const nlohmann::json& j) {
  QLearningConfig c;
  try {
    c.episodes = j.value("episodes", c.episodes);
    c.max_steps = j.value("max_steps", c.max_steps);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.learning_rate_exponent = j.value("learning_rate_exponent", c.learning_rate_exponent);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.epsilon_decay_steps = j.value("epsilon_decay_steps", c.epsilon_decay_steps);
    c.optimistic_value = j.value("optimistic_value", c.optimistic_value);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.success_horizon = j.value("success_horizon", c.success_horizon);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("q-learning config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<int> greedy_policy(const ProductMdp& p, const std::vector<double>& q) {
  std::vector<int> pi(p.num_states(), 0);
  const int k = p.num_actions();
  for (int x = 0; x < p.num_states(); ++x) {
    const double* row = &q[static_cast<std::size_t>(x) * k];
    pi[x] = static_cast<int>(std::max_element(row, row + k) - row);
  }
  return pi;
}

QLearningResult q_learning(const ProductMdp& p, const QLearningConfig& cfg, bool record_trace, long long step_budget) {
  cfg.validate();
  const int n = p.num_states(), k = p.num_actions();
  const double init = cfg.optimistic_value < 0.0 ? 1.0 / (1.0 - p.gamma()) : cfg.optimistic_value;
  Rng rng = make_stream(cfg.seed, "agent");

  QLearningResult r;
  r.q.assign(static_cast<std::size_t>(n) * k, 0.0);
  for (int x = 0; x < n; ++x)
    if (!p.is_terminal(x)) std::fill_n(r.q.begin() + static_cast<std::ptrdiff_t>(x) * k, k, init);
  std::vector<int> greedy = greedy_policy(p, r.q);
  std::vector<std::uint32_t> visits(cfg.learning_rate_exponent > 0.0 ? r.q.size() : 0, 0);
  if (record_trace) r.trace.policies.push_back(greedy);

  // cumulative initial distribution for start sampling
  std::vector<std::pair<double, int>> starts;
  double acc = 0.0;
  for (int x = 0; x < n; ++x)
    if (p.initial()[x] > 0.0) starts.emplace_back(acc += p.initial()[x], x);

  auto evaluate = [&](int episode) {
    const double s = initial_expectation(p, success_probability(p, greedy, cfg.success_horizon));
    r.curve.push_back({episode, s});
    return s;
  };

  long long t = 0;
  int episode = 0;
  for (; episode < cfg.episodes && (step_budget <= 0 || t < step_budget); ++episode) {
    const double u0 = uniform01(rng) * acc;
    int x = starts.back().second;
    for (const auto& [c, id] : starts)
      if (u0 < c) {
        x = id;
        break;
      }
    for (int step = 0; step < cfg.max_steps && !p.is_terminal(x); ++step) {
      if (step_budget > 0 && t >= step_budget) break;
      const double frac = cfg.epsilon_decay_steps > 0 ? static_cast<double>(t) / cfg.epsilon_decay_steps
                                                      : static_cast<double>(episode) / cfg.episodes;
      const double eps = cfg.epsilon * std::max(0.0, 1.0 - frac);
      int a = greedy[x];
      if (uniform01(rng) < eps) a = static_cast<int>(uniform_index(rng, k));
      if (record_trace) {
        r.trace.states.push_back(x);
        r.trace.snapshot.push_back(static_cast<int>(r.trace.policies.size()) - 1);
      }
      const auto edges = p.edges(x, a);
      double u = uniform01(rng);
      const ProductMdp::Edge* e = &edges.back();
      for (const auto& cand : edges) {
        if (u < cand.prob) {
          e = &cand;
          break;
        }
        u -= cand.prob;
      }
      const int y = e->to;
      const double future = p.is_terminal(y) ? 0.0 : r.q[static_cast<std::size_t>(y) * k + greedy[y]];
      double& qa = r.q[static_cast<std::size_t>(x) * k + a];
      double lr = cfg.learning_rate;
      if (!visits.empty()) lr /= std::pow(1.0 + visits[static_cast<std::size_t>(x) * k + a]++, cfg.learning_rate_exponent);
      qa += lr * (e->reward + p.gamma() * future - qa);
      const double* row = &r.q[static_cast<std::size_t>(x) * k];
      const int g = static_cast<int>(std::max_element(row, row + k) - row);
      if (g != greedy[x]) {
        greedy[x] = g;
        if (record_trace) r.trace.policies.push_back(greedy);
      }
      x = y;
      ++t;
    }
    if ((episode + 1) % cfg.eval_every == 0) evaluate(episode + 1);
  }
  if (r.curve.empty() || r.curve.back().episode != episode) evaluate(episode);
  r.final_success = r.curve.back().success;
  r.greedy = greedy;
  r.steps = t;
  return r;
}

namespace {

// Iterative evaluation from a starting guess; the stopping rule bounds the
// error by `tolerance` whatever the guess.
void evaluate_from(const ProductMdp& p, const std::vector<int>& policy, double tolerance, std::vector<double>& v) {
  const int n = p.num_states();
  const double stop = tolerance * (1.0 - p.gamma()) / p.gamma();
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < 100000; ++iter) {
    double residual = 0.0;
    for (int x = 0; x < n; ++x) {
      next[x] = p.is_terminal(x) ? 0.0 : backup(p, v, x, policy[x]);
      residual = std::max(residual, std::abs(next[x] - v[x]));
    }
    v.swap(next);
    if (residual < stop) break;
  }
}

// Per step of [begin, end): was the visited state epsilon-suboptimal under the
// policy in force? Snapshots are evaluated once each, warm-started from the
// previous one (consecutive snapshots differ in a single state).
std::vector<char> suboptimal_flags(const ProductMdp& p, const LearnerTrace& trace, const std::vector<double>& v_star,
                                   double epsilon, std::size_t begin, std::size_t end) {
  require(trace.states.size() == trace.snapshot.size(), "count_suboptimal_steps: ragged trace");
  require(v_star.size() == static_cast<std::size_t>(p.num_states()), "count_suboptimal_steps: value table size mismatch");
  end = std::min(end, trace.states.size());
  std::vector<char> flags(end > begin ? end - begin : 0, 0);
  std::vector<double> v(p.num_states(), 0.0);
  int current = -1;
  for (std::size_t t = begin; t < end; ++t) {
    const int snap = trace.snapshot[t];
    if (snap != current) {
      evaluate_from(p, trace.policies[snap], 1e-9, v);
      current = snap;
    }
    const int x = trace.states[t];
    flags[t - begin] = v[x] < v_star[x] - epsilon;
  }
  return flags;
}

}  // namespace

long long count_suboptimal_steps(const ProductMdp& p, const LearnerTrace& trace, const std::vector<double>& v_star,
                                 double epsilon, std::size_t begin, std::size_t end) {
  const auto flags = suboptimal_flags(p, trace, v_star, epsilon, begin, end);
  return std::count(flags.begin(), flags.end(), 1);
}

void PacConfig::validate() const {
  require(epsilon > 0.0, "pac: epsilon must be positive");
  require(confidence > 0.0 && confidence < 1.0, "pac: confidence must be in (0, 1)");
  require(base_budget >= 1 && budgets >= 1 && seeds >= 1, "pac: budgets and seeds must be positive");
  require(horizon_cap >= 1, "pac: horizon cap must be positive");
}

namespace {

double median(std::vector<long long> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? static_cast<double>(v[m]) : 0.5 * static_cast<double>(v[m - 1] + v[m]);
}

}  // namespace

QLearningConfig pac_learner() {
  QLearningConfig c;
  c.learning_rate = 1.0;
  c.learning_rate_exponent = 0.7;
  return c;
}

std::vector<PacRow> pac_demo(const ProductMdp& p, const PacConfig& pac, const QLearningConfig& base) {
  pac.validate();
  const ValueResult vstar = value_iteration(p, 1e-10);
  const long long largest = pac.base_budget << (pac.budgets - 1);
  std::vector<PacRow> rows(pac.budgets);
  for (int b = 0; b < pac.budgets; ++b) rows[b].budget = pac.base_budget << b;
  for (int seed = 0; seed < pac.seeds; ++seed) {
    QLearningConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(seed);
    cfg.episodes = std::numeric_limits<int>::max();
    cfg.max_steps = static_cast<int>(pac.horizon_cap);
    cfg.eval_every = std::numeric_limits<int>::max();
    // Exploration decays on an absolute clock so every budget is a prefix of the largest run.
    if (cfg.epsilon_decay_steps == 0) cfg.epsilon_decay_steps = pac.base_budget;
    const QLearningResult run = q_learning(p, cfg, true, largest);
    const auto flags = suboptimal_flags(p, run.trace, vstar.value, pac.epsilon, 0, run.trace.states.size());
    for (auto& row : rows) {
      const auto end = std::min(static_cast<std::size_t>(row.budget), flags.size());
      row.total.push_back(std::count(flags.begin(), flags.begin() + end, 1));
      row.window.push_back(std::count(flags.begin() + std::min(end, static_cast<std::size_t>(row.budget) / 2),
                                      flags.begin() + end, 1));
    }
  }
  for (auto& row : rows) {
    row.median_total = median(row.total);
    row.median_window = median(row.window);
  }
  return rows;
}

void write_success_csv(std::ostream& os, const std::string& mode, const std::vector<CurvePoint>& curve) {
  char buf[64];
  os << "mode,episode,success_rate\n";
  for (const auto& c : curve) {
    std::snprintf(buf, sizeof buf, "%.15g", c.success);
    os << mode << ',' << c.episode << ',' << buf << '\n';
  }
}

void write_pac_csv(std::ostream& os, const std::vector<PacRow>& rows) {
  os << "budget,seed,suboptimal_total,suboptimal_window\n";
  for (const auto& r : rows)
    for (std::size_t s = 0; s < r.total.size(); ++s)
      os << r.budget << ',' << s << ',' << r.total[s] << ',' << r.window[s] << '\n';
  os << "# medians\n";
  for (const auto& r : rows) os << "# " << r.budget << ',' << r.median_total << ',' << r.median_window << '\n';
}

}  // namespace dfarl
