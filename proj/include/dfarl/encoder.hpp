#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dfarl/dfa_space.hpp"
#include "dfarl/rng.hpp"

namespace dfarl {

using Vec = std::vector<double>;

enum class EncoderMode { Tabular, MessagePassing };

const char* to_string(EncoderMode m);
EncoderMode encoder_mode_from_string(const std::string& s);

/// A DFA handed to the encoder: a state id of the training space (used by the
/// tabular mode) and the DFA itself (used by message passing).
struct DfaInput {
  int id = -1;
  const Dfa* dfa = nullptr;
};

/**
 * Maps DFAs to latent vectors. Distances are c * |phi^(A) - phi^(B)| where
 * phi^ is the unit-normalized embedding and c a learnable nonnegative scale.
 *
 * Tabular: one free vector per state of a fixed space.
 * MessagePassing: node features (initial, accepting, rejecting) are lifted to
 * the hidden size, then n rounds of h_q <- tanh(U h_q + sum_a W_a h_{delta(q,a)} + b)
 * run on an n-state DFA; the embedding is the initial node's vector.
 *
 * All parameters live in one flat vector so optimizers and gradient checks can
 * treat both modes alike; the scale is the last entry.
 */
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  static EmbeddingModel tabular(const InducedMdp& space, int dim, double init_scale, Rng& rng);
  static EmbeddingModel message_passing(int alphabet_size, int dim, double init_scale, Rng& rng);

  EncoderMode mode() const { return mode_; }
  int dim() const { return dim_; }
  int alphabet_size() const { return alphabet_size_; }
  int num_rows() const { return static_cast<int>(row_hashes_.size()); }

  double scale() const { return params_.back(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t scale_index() const { return params_.size() - 1; }

  /// Raw embedding. Tabular mode needs a valid id; message passing needs the DFA.
  Vec embed(const DfaInput& in) const;

  /// Tabular row for an arbitrary DFA, looked up by canonical form; -1 if unknown.
  int row_of(const Dfa& dfa) const;
  const std::vector<std::uint64_t>& row_hashes() const { return row_hashes_; }

  /// Adds (dL/dphi)^T dphi/dtheta to grad for one embedding.
  void backprop(const DfaInput& in, std::span<const double> dphi, std::span<double> grad) const;

  nlohmann::json to_json() const;
  static EmbeddingModel from_json(const nlohmann::json& j);

 private:
  struct Layout {
    std::size_t w_in = 0, b_in = 0, u = 0, w_sym = 0, b = 0;
  };
  struct Tape {
    std::vector<Vec> rounds;  // rounds[r][q * dim + i]
  };

  Vec mp_forward(const Dfa& dfa, Tape* tape) const;
  void mp_backward(const Dfa& dfa, const Tape& tape, std::span<const double> dphi,
                   std::span<double> grad) const;

  EncoderMode mode_ = EncoderMode::Tabular;
  int dim_ = 0;
  int alphabet_size_ = 0;
  Layout layout_;
  std::vector<std::uint64_t> row_hashes_;
  std::vector<double> params_;
};

/// Unit-normalized copy; throws InvariantError on a zero vector.
Vec normalized(const Vec& v);

/// c * |phi^(a) - phi^(b)|.
double embed_distance(const EmbeddingModel& model, const DfaInput& a, const DfaInput& b);
double embed_distance(const EmbeddingModel& model, const Dfa& a, const Dfa& b);

/// Distance from precomputed normalized embeddings.
double scaled_distance(double scale, std::span<const double> ua, std::span<const double> ub);

/// Categorical policy over symbols from a concatenated pair of normalized
/// embeddings: one tanh hidden layer, softmax output.
class PairPolicyModel {
 public:
  PairPolicyModel() = default;
  PairPolicyModel(int embed_dim, int hidden, int alphabet_size, Rng& rng);

  int input_dim() const { return 2 * embed_dim_; }
  int alphabet_size() const { return alphabet_size_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  Vec probs(std::span<const double> ua, std::span<const double> ub) const;

  /// Adds d(sum_a coeff[a] * logit_a)/dtheta to grad, where coeff is dL/dlogits.
  void backprop(std::span<const double> ua, std::span<const double> ub,
                std::span<const double> dlogits, std::span<double> grad) const;

  nlohmann::json to_json() const;
  static PairPolicyModel from_json(const nlohmann::json& j);

 private:
  void hidden_layer(std::span<const double> ua, std::span<const double> ub, Vec& h) const;

  int embed_dim_ = 0;
  int hidden_ = 0;
  int alphabet_size_ = 0;
  std::vector<double> params_;  // W1 (hidden x 2D), b1, W2 (|S| x hidden), b2
};

struct TrainConfig {
  double gamma = 0.9;
  double learning_rate = 1e-2;
  double policy_learning_rate = 1e-2;
  double momentum = 0.9;
  double clip_ratio = 0.2;
  int rollout_horizon = 25;
  int batch_size = 64;        // rollouts per epoch
  int minibatch_size = 256;   // transitions per gradient step
  int update_passes = 4;      // passes over each epoch's transitions
  int epochs = 200;
  std::uint64_t seed = 0;
  bool signed_reward = true;
  EncoderMode mode = EncoderMode::Tabular;
  int embed_dim = 32;
  int policy_hidden = 64;
  double forced_start_fraction = 0.1;
  double entropy_coef = 0.2;  // annealed linearly to 0 by 75% of the epochs
  bool expected_surrogate = false;  // surrogate over every symbol of a visited pair

  void validate(const InducedMdp& space) const;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct PairTransition {
  int s = 0, t = 0;      // current pair
  Symbol a = 0;
  int s2 = 0, t2 = 0;    // successor pair
  int r_s = 0, r_t = 0;  // rewards of each component
  double log_prob = 0.0;
};

/// Normalized embeddings of every state of the space, row-major (id * dim).
Vec embed_space(const EmbeddingModel& model, const InducedMdp& space);

/// Samples one joint episode: both DFAs read the same symbol drawn from the
/// policy. Stops at the horizon or once both components sit on the same sink.
std::vector<PairTransition> rollout_pair(const EmbeddingModel& model, const PairPolicyModel& policy,
                                         const InducedMdp& space, int s, int t,
                                         const TrainConfig& config, Rng& rng);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// (d(A,A') - (|r - r'| + gamma * stopgrad d(A_next, A'_next)))^2 and its gradient
/// with respect to every encoder parameter including the scale.
LossAndGrad value_loss(const EmbeddingModel& model, const InducedMdp& space,
                       const PairTransition& tr, double gamma);

struct PolicySample {
  Vec ua, ub;  // normalized embeddings of the pair
  Symbol a = 0;
  double advantage = 0.0;
  double old_log_prob = 0.0;
  double weight = 1.0;
};

/// Clipped-ratio surrogate, returned as a loss (negated objective averaged over
/// the batch), with its gradient with respect to the policy parameters.
LossAndGrad policy_loss(const PairPolicyModel& policy, std::span<const PolicySample> batch,
                        double clip_ratio, double entropy_coef = 0.0);

struct EpochStats {
  int epoch = 0;
  double value_loss = 0.0;
  double policy_objective = 0.0;
  double separation_rate = 0.0;
};

struct TrainResult {
  EmbeddingModel model;
  PairPolicyModel policy;
  std::vector<EpochStats> curve;
};

/// Alternates rollout collection and momentum gradient steps on the combined
/// clipped-policy + value objective. Throws TrainingDivergedError if the value
/// loss stays above 10x its first-epoch value for 3 consecutive epochs.
TrainResult train(const InducedMdp& space, const TrainConfig& config);

/// Fraction of distinct-state pairs whose embedding distance exceeds threshold.
double separation_rate(const EmbeddingModel& model, const InducedMdp& space, double threshold);

/// Pairwise embedding distances; the diagonal is exactly zero.
std::vector<std::vector<double>> evaluate_heatmap(const EmbeddingModel& model,
                                                  const std::vector<Dfa>& dfas);

void write_curve_csv(std::ostream& os, const std::vector<EpochStats>& curve);

}  // namespace dfarl
