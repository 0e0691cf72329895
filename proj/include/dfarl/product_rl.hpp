#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfarl/dfa_space.hpp"
#include "dfarl/encoder.hpp"

namespace dfarl {

/// Finite labeled MDP. Rows are indexed s * num_actions + a and hold the
/// successor distribution as (state, probability) pairs.
struct LabeledMdp {
  struct Outcome {
    int to = 0;
    double prob = 0.0;
  };

  int num_states = 0;
  int num_actions = 0;
  std::vector<std::vector<Outcome>> transition;
  std::vector<Symbol> label;
  std::vector<double> initial;
  double gamma = 0.9;

  const std::vector<Outcome>& row(int s, int a) const { return transition[static_cast<std::size_t>(s) * num_actions + a]; }
  void validate(int alphabet_size) const;
};

struct GridworldSpec {
  int width = 5;
  int height = 5;
  std::vector<Symbol> labels;  // row-major, width * height
  double slip = 0.1;           // probability of moving to a uniformly random neighbor instead
  int start_x = 0;
  int start_y = 0;
  double gamma = 0.9;
};

/// 5x5 grid painted with labels drawn uniformly from the alphabet ("gridworld"
/// stream of `seed`); start in the corner.
GridworldSpec default_gridworld(int alphabet_size, std::uint64_t seed);

/// Four moves (up, right, down, left). Moves into a wall leave the agent in
/// place; with probability `slip` the agent moves towards a uniformly random
/// direction instead.
LabeledMdp make_gridworld(const GridworldSpec& spec);

nlohmann::json to_json(const GridworldSpec& spec);
GridworldSpec gridworld_from_json(const nlohmann::json& j);

/// Which task representation the agent conditions on. key_of_id maps every
/// state of the DFA space to a dense key; DfaId is the identity.
struct Conditioning {
  std::string name = "dfa_id";
  std::vector<int> key_of_id;
  int num_keys = 0;
};

Conditioning dfa_id_conditioning(const InducedMdp& space);

/// Keys from embeddings rounded to multiples of `quantum`, numbered in order of
/// first appearance over the space's ids. Two non-bisimilar DFAs sharing a key
/// throw EmbeddingCollisionError.
Conditioning embedding_conditioning(const EmbeddingModel& model, const InducedMdp& space, double quantum = 1e-8);

/// Task distribution over space ids.
struct TaskDist {
  std::vector<int> ids;
  std::vector<double> probs;
};

/**
 * Cascade product of a labeled MDP and a DFA space. Product state
 * (s, key) has index key * base_states + s. Moving to s' reads L(s') and steps
 * the DFA; entering the all-accepting DFA pays +1, the all-rejecting one -1.
 * Terminal states absorb with no further reward.
 */
class ProductMdp {
 public:
  struct Edge {
    int to = 0;
    double prob = 0.0;
    double reward = 0.0;
  };

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int base_states() const { return base_states_; }
  double gamma() const { return gamma_; }
  int index(int s, int key) const { return key * base_states_ + s; }
  int base_of(int x) const { return x % base_states_; }
  int key_of(int x) const { return x / base_states_; }
  bool is_terminal(int x) const { return terminal_[x] != 0; }
  bool is_success(int x) const { return terminal_[x] == 1; }

  std::span<const Edge> edges(int x, int a) const {
    const std::size_t r = static_cast<std::size_t>(x) * num_actions_ + a;
    return std::span<const Edge>(edges_).subspan(row_start_[r], row_start_[r + 1] - row_start_[r]);
  }
  const std::vector<double>& initial() const { return initial_; }
  const Conditioning& conditioning() const { return cond_; }
  // Space id represented by each key.
  int id_of_key(int key) const { return id_of_key_[key]; }

  friend ProductMdp compose(const LabeledMdp& base, const InducedMdp& space, const TaskDist& tasks,
                            const Conditioning& cond);

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  int base_states_ = 0;
  double gamma_ = 0.9;
  std::vector<std::size_t> row_start_;
  std::vector<Edge> edges_;
  std::vector<std::int8_t> terminal_;  // 0 running, 1 accepted, 2 rejected
  std::vector<double> initial_;
  Conditioning cond_;
  std::vector<int> id_of_key_;
};

ProductMdp compose(const LabeledMdp& base, const InducedMdp& space, const TaskDist& tasks,
                   const Conditioning& cond);
inline ProductMdp compose(const LabeledMdp& base, const InducedMdp& space, const TaskDist& tasks) {
  return compose(base, space, tasks, dfa_id_conditioning(space));
}

struct ValueResult {
  std::vector<double> value;
  std::vector<int> policy;  // greedy action, lowest index on ties
  int iterations = 0;
  double residual = 0.0;
};

/// Synchronous value iteration from zero until the sup-norm change drops below
/// tolerance * (1 - gamma) / gamma. OpenMP over product states.
ValueResult value_iteration(const ProductMdp& product, double tolerance);

namespace reference {
ValueResult value_iteration(const ProductMdp& product, double tolerance);
}

/// Discounted value of a fixed deterministic policy.
std::vector<double> policy_evaluation(const ProductMdp& product, const std::vector<int>& policy,
                                      double tolerance = 1e-10);

/// Probability of entering an accepting terminal within `horizon` steps when
/// following `policy`, from every product state.
std::vector<double> success_probability(const ProductMdp& product, const std::vector<int>& policy, int horizon);

/// Expectation of per-state values under the product's initial distribution.
double initial_expectation(const ProductMdp& product, const std::vector<double>& values);

struct QLearningConfig {
  int episodes = 3000;
  int max_steps = 100;           // episode horizon cap
  double learning_rate = 0.1;
  double learning_rate_exponent = 0.0;  // step size learning_rate / (1 + visits(x, a))^exponent
  double epsilon = 0.1;          // decayed linearly to 0 over `epsilon_decay_steps` (or the episodes)
  long long epsilon_decay_steps = 0;  // 0: decay over the episodes instead
  double optimistic_value = -1;  // < 0: 1 / (1 - gamma)
  int eval_every = 100;
  int success_horizon = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const QLearningConfig& c);
QLearningConfig qlearning_config_from_json(const nlohmann::json& j);

struct CurvePoint {
  int episode = 0;
  double success = 0.0;
};

/// A learner's trajectory: the product state at every step and the greedy
/// policy in force when it was visited (index into `policies`).
struct LearnerTrace {
  std::vector<int> states;
  std::vector<int> snapshot;
  std::vector<std::vector<int>> policies;
};

struct QLearningResult {
  std::vector<double> q;  // num_states * num_actions
  std::vector<CurvePoint> curve;
  std::vector<int> greedy;
  double final_success = 0.0;
  LearnerTrace trace;     // filled when requested
  long long steps = 0;
};

/// Tabular epsilon-greedy Q-learning with optimistic initialization. Keys come
/// from the product's conditioning. Stops after config.episodes episodes or
/// `step_budget` environment steps, whichever comes first (budget <= 0: none).
QLearningResult q_learning(const ProductMdp& product, const QLearningConfig& config, bool record_trace = false,
                           long long step_budget = 0);

/// Greedy action per product state, lowest index on ties.
std::vector<int> greedy_policy(const ProductMdp& product, const std::vector<double>& q);

/// Steps t of the trace with V^{pi_t}(x_t) < V*(x_t) - epsilon. Snapshots are
/// evaluated in order, each warm-started from the previous one. Counts steps in [begin, end).
long long count_suboptimal_steps(const ProductMdp& product, const LearnerTrace& trace,
                                 const std::vector<double>& v_star, double epsilon, std::size_t begin = 0,
                                 std::size_t end = static_cast<std::size_t>(-1));

struct PacConfig {
  double epsilon = 0.05;
  double confidence = 0.95;
  long long base_budget = 20000;
  int budgets = 4;  // base, 2 base, 4 base, ...
  int seeds = 5;
  long long horizon_cap = 100;

  void validate() const;
};

/// Learner used by the PAC demo: optimistic, with a visit-count step size
/// 1 / (1 + n)^0.7 so that slip noise stops moving the greedy policy.
QLearningConfig pac_learner();

struct PacRow {
  long long budget = 0;
  std::vector<long long> total;   // per seed, over the whole run
  std::vector<long long> window;  // per seed, over the second half of the budget
  double median_total = 0.0;
  double median_window = 0.0;
};

/// Runs Q-learning once per seed for the largest budget and reads every
/// smaller budget off the same trace, so budgets are nested prefixes.
std::vector<PacRow> pac_demo(const ProductMdp& product, const PacConfig& pac, const QLearningConfig& base);

void write_success_csv(std::ostream& os, const std::string& mode, const std::vector<CurvePoint>& curve);
void write_pac_csv(std::ostream& os, const std::vector<PacRow>& rows);

}  // namespace dfarl
