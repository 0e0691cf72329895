#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfarl/encoder.hpp"
#include "dfarl/errors.hpp"

namespace dfarl {

namespace {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Symbol sample_categorical(const Vec& probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    acc += probs[a];
    if (u < acc) return static_cast<Symbol>(a);
  }
  return static_cast<Symbol>(probs.size() - 1);
}

// Raw and unit embeddings of every state in the space.
struct SpaceCache {
  int dim = 0;
  Vec raw;
  Vec unit;
  std::vector<double> len;

  std::span<const double> u(int s) const { return std::span(unit).subspan(static_cast<std::size_t>(s) * dim, dim); }
};

SpaceCache cache_space(const EmbeddingModel& model, const InducedMdp& space) {
  SpaceCache c;
  c.dim = model.dim();
  const int n = space.num_states();
  c.raw.resize(static_cast<std::size_t>(n) * c.dim);
  c.unit.resize(c.raw.size());
  c.len.resize(n);
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 4)
  for (int s = 0; s < n; ++s) {
    const Vec v = model.embed(DfaInput{s, &space.state(s).dfa});
    double l = 0.0;
    for (double x : v) l += x * x;
    l = std::sqrt(l);
    if (!(l > 0.0) || !std::isfinite(l)) {
#pragma omp atomic write
      failed = true;
      continue;
    }
    c.len[s] = l;
    for (int i = 0; i < c.dim; ++i) {
      c.raw[static_cast<std::size_t>(s) * c.dim + i] = v[i];
      c.unit[static_cast<std::size_t>(s) * c.dim + i] = v[i] / l;
    }
  }
  if (failed) throw InvariantError("encoder: zero-norm embedding");
  return c;
}

// Accumulates coeff * d(c |u_s - u_t|)/d(raw v_s, raw v_t, c).
void accumulate_distance_grad(const SpaceCache& cache, double scale, int s, int t, double coeff,
                              std::vector<Vec>& dphi, double& dscale) {
  if (s == t) return;
  const int d = cache.dim;
  auto us = cache.u(s);
  auto ut = cache.u(t);
  double n2 = 0.0, ps = 0.0, pt = 0.0;
  Vec diff(d);
  for (int i = 0; i < d; ++i) {
    diff[i] = us[i] - ut[i];
    n2 += diff[i] * diff[i];
  }
  const double n = std::sqrt(n2);
  dscale += coeff * n;
  if (n == 0.0) return;
  for (int i = 0; i < d; ++i) {
    ps += us[i] * diff[i];
    pt += ut[i] * diff[i];
  }
  if (dphi[s].empty()) dphi[s].assign(d, 0.0);
  if (dphi[t].empty()) dphi[t].assign(d, 0.0);
  const double ks = coeff * scale / (n * cache.len[s]);
  const double kt = coeff * scale / (n * cache.len[t]);
  for (int i = 0; i < d; ++i) {
    dphi[s][i] += ks * (diff[i] - us[i] * ps);
    dphi[t][i] -= kt * (diff[i] - ut[i] * pt);
  }
}

// Pushes per-state dL/dphi through the encoder, summing in state order.
void backprop_states(const EmbeddingModel& model, const InducedMdp& space, const std::vector<Vec>& dphi,
                     std::vector<double>& grad) {
  const int n = space.num_states();
  if (model.mode() == EncoderMode::Tabular) {
    for (int s = 0; s < n; ++s)
      if (!dphi[s].empty()) model.backprop(DfaInput{s, &space.state(s).dfa}, dphi[s], grad);
    return;
  }
  std::vector<int> touched;
  for (int s = 0; s < n; ++s)
    if (!dphi[s].empty()) touched.push_back(s);
  std::vector<Vec> partial(touched.size());
  const int m = static_cast<int>(touched.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < m; ++i) {
    partial[i].assign(grad.size(), 0.0);
    const int s = touched[i];
    model.backprop(DfaInput{s, &space.state(s).dfa}, dphi[s], partial[i]);
  }
  for (const Vec& p : partial)
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += p[k];
}

double pair_distance(const SpaceCache& cache, double scale, int s, int t) {
  if (s == t) return 0.0;
  return scaled_distance(scale, cache.u(s), cache.u(t));
}

std::vector<PairTransition> rollout_cached(const SpaceCache& cache, const PairPolicyModel& policy,
                                           const InducedMdp& space, int s, int t,
                                           const TrainConfig& config, Rng& rng) {
  std::vector<PairTransition> out;
  for (int step = 0; step < config.rollout_horizon; ++step) {
    const Vec p = policy.probs(cache.u(s), cache.u(t));
    const Symbol a = sample_categorical(p, rng);
    PairTransition tr;
    tr.s = s;
    tr.t = t;
    tr.a = a;
    tr.s2 = space.next(s, a);
    tr.t2 = space.next(t, a);
    tr.r_s = space.reward(s, a);
    tr.r_t = space.reward(t, a);
    tr.log_prob = std::log(p[a]);
    out.push_back(tr);
    s = tr.s2;
    t = tr.t2;
    if (s == t && space.is_terminal(s)) break;
  }
  return out;
}

struct Momentum {
  std::vector<double> velocity;
  void apply(std::vector<double>& params, const std::vector<double>& grad, double lr, double mu) {
    if (velocity.empty()) velocity.assign(params.size(), 0.0);
    for (std::size_t i = 0; i < params.size(); ++i) {
      velocity[i] = mu * velocity[i] + grad[i];
      params[i] -= lr * velocity[i];
    }
  }
};

}  // namespace

PairPolicyModel::PairPolicyModel(int embed_dim, int hidden, int alphabet_size, Rng& rng)
    : embed_dim_(embed_dim), hidden_(hidden), alphabet_size_(alphabet_size) {
  require(embed_dim >= 1 && hidden >= 1 && alphabet_size >= 1, "pair policy: bad shape");
  const int in = 2 * embed_dim;
  params_.assign(static_cast<std::size_t>(hidden) * in + hidden + static_cast<std::size_t>(alphabet_size) * hidden + alphabet_size, 0.0);
  const double s1 = 1.5;
  for (std::size_t i = 0; i < static_cast<std::size_t>(hidden) * in; ++i) params_[i] = s1 * gaussian(rng);
  const std::size_t w2 = static_cast<std::size_t>(hidden) * in + hidden;
  const double s2 = 0.1 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t i = 0; i < static_cast<std::size_t>(alphabet_size) * hidden; ++i) params_[w2 + i] = s2 * gaussian(rng);
}

void PairPolicyModel::hidden_layer(std::span<const double> ua, std::span<const double> ub, Vec& h) const {
  const int in = 2 * embed_dim_;
  const std::size_t b1 = static_cast<std::size_t>(hidden_) * in;
  h.assign(hidden_, 0.0);
  for (int i = 0; i < hidden_; ++i) {
    const double* w = &params_[static_cast<std::size_t>(i) * in];
    double z = params_[b1 + i];
    for (int j = 0; j < embed_dim_; ++j) z += w[j] * ua[j] + w[embed_dim_ + j] * ub[j];
    h[i] = std::tanh(z);
  }
}

Vec PairPolicyModel::probs(std::span<const double> ua, std::span<const double> ub) const {
  require(static_cast<int>(ua.size()) == embed_dim_ && static_cast<int>(ub.size()) == embed_dim_,
          "pair policy: embedding size mismatch");
  Vec h;
  hidden_layer(ua, ub, h);
  const int in = 2 * embed_dim_;
  const std::size_t w2 = static_cast<std::size_t>(hidden_) * in + hidden_;
  const std::size_t b2 = w2 + static_cast<std::size_t>(alphabet_size_) * hidden_;
  Vec logits(alphabet_size_);
  for (int a = 0; a < alphabet_size_; ++a) {
    double z = params_[b2 + a];
    for (int i = 0; i < hidden_; ++i) z += params_[w2 + static_cast<std::size_t>(a) * hidden_ + i] * h[i];
    logits[a] = z;
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) sum += (z = std::exp(z - mx));
  for (double& z : logits) z /= sum;
  return logits;
}

void PairPolicyModel::backprop(std::span<const double> ua, std::span<const double> ub,
                               std::span<const double> dlogits, std::span<double> grad) const {
  Vec h;
  hidden_layer(ua, ub, h);
  const int in = 2 * embed_dim_;
  const std::size_t b1 = static_cast<std::size_t>(hidden_) * in;
  const std::size_t w2 = b1 + hidden_;
  const std::size_t b2 = w2 + static_cast<std::size_t>(alphabet_size_) * hidden_;
  Vec dh(hidden_, 0.0);
  for (int a = 0; a < alphabet_size_; ++a) {
    const double g = dlogits[a];
    if (g == 0.0) continue;
    grad[b2 + a] += g;
    for (int i = 0; i < hidden_; ++i) {
      grad[w2 + static_cast<std::size_t>(a) * hidden_ + i] += g * h[i];
      dh[i] += params_[w2 + static_cast<std::size_t>(a) * hidden_ + i] * g;
    }
  }
  for (int i = 0; i < hidden_; ++i) {
    const double g = dh[i] * (1.0 - h[i] * h[i]);
    if (g == 0.0) continue;
    grad[b1 + i] += g;
    double* w = &grad[static_cast<std::size_t>(i) * in];
    for (int j = 0; j < embed_dim_; ++j) {
      w[j] += g * ua[j];
      w[embed_dim_ + j] += g * ub[j];
    }
  }
}

nlohmann::json PairPolicyModel::to_json() const {
  return {{"embed_dim", embed_dim_}, {"hidden", hidden_}, {"alphabet_size", alphabet_size_}, {"params", params_}};
}

PairPolicyModel PairPolicyModel::from_json(const nlohmann::json& j) {
  try {
    Rng dummy(0);
    PairPolicyModel p(j.at("embed_dim").get<int>(), j.at("hidden").get<int>(), j.at("alphabet_size").get<int>(), dummy);
    auto params = j.at("params").get<std::vector<double>>();
    require(params.size() == p.params_.size(), "pair policy json: parameter count mismatch");
    p.params_ = std::move(params);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pair policy json: ") + e.what());
  }
}

void TrainConfig::validate(const InducedMdp& space) const {
  require(gamma > 0.0 && gamma < 1.0, "train: gamma must be in (0, 1)");
  require(learning_rate > 0.0 && policy_learning_rate > 0.0, "train: learning rates must be positive");
  require(momentum >= 0.0 && momentum < 1.0, "train: momentum must be in [0, 1)");
  require(clip_ratio > 0.0, "train: clip-ratio must be positive");
  require(batch_size >= 1 && minibatch_size >= 1 && update_passes >= 1 && epochs >= 1,
          "train: batch sizes, passes and epochs must be positive");
  require(embed_dim >= 1 && policy_hidden >= 1, "train: model sizes must be positive");
  require(entropy_coef >= 0.0, "train: entropy_coef must be nonnegative");
  require(forced_start_fraction >= 0.0 && forced_start_fraction <= 1.0,
          "train: forced_start_fraction must be in [0, 1]");
  int diameter = 0;
  for (const auto& c : space.states()) diameter = std::max(diameter, c.dfa.diameter());
  require(rollout_horizon >= diameter,
          "train: rollout horizon " + std::to_string(rollout_horizon) + " is below the space's DFA diameter " +
              std::to_string(diameter));
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"gamma", c.gamma},
          {"learning_rate", c.learning_rate},
          {"policy_learning_rate", c.policy_learning_rate},
          {"momentum", c.momentum},
          {"clip_ratio", c.clip_ratio},
          {"rollout_horizon", c.rollout_horizon},
          {"batch_size", c.batch_size},
          {"minibatch_size", c.minibatch_size},
          {"update_passes", c.update_passes},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"signed_reward", c.signed_reward},
          {"mode", to_string(c.mode)},
          {"embed_dim", c.embed_dim},
          {"policy_hidden", c.policy_hidden},
          {"forced_start_fraction", c.forced_start_fraction},
          {"entropy_coef", c.entropy_coef},
          {"expected_surrogate", c.expected_surrogate}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    if (j.contains("mode")) c.mode = encoder_mode_from_string(j.at("mode").get<std::string>());
    // Mode-dependent defaults.
    if (c.mode == EncoderMode::MessagePassing) {
      c.embed_dim = 16;
      c.learning_rate = c.policy_learning_rate = 1e-3;
    }
    c.gamma = j.value("gamma", c.gamma);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.policy_learning_rate = j.value("policy_learning_rate", c.policy_learning_rate);
    c.momentum = j.value("momentum", c.momentum);
    c.clip_ratio = j.value("clip_ratio", c.clip_ratio);
    c.rollout_horizon = j.value("rollout_horizon", c.rollout_horizon);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.minibatch_size = j.value("minibatch_size", c.minibatch_size);
    c.update_passes = j.value("update_passes", c.update_passes);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.signed_reward = j.value("signed_reward", c.signed_reward);
    c.embed_dim = j.value("embed_dim", c.embed_dim);
    c.policy_hidden = j.value("policy_hidden", c.policy_hidden);
    c.forced_start_fraction = j.value("forced_start_fraction", c.forced_start_fraction);
    c.entropy_coef = j.value("entropy_coef", c.entropy_coef);
    c.expected_surrogate = j.value("expected_surrogate", c.expected_surrogate);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("train config: ") + e.what());
  }
  return c;
}

std::vector<PairTransition> rollout_pair(const EmbeddingModel& model, const PairPolicyModel& policy,
                                         const InducedMdp& space, int s, int t,
                                         const TrainConfig& config, Rng& rng) {
  require(s >= 0 && s < space.num_states() && t >= 0 && t < space.num_states(),
          "rollout_pair: start pair outside the space");
  return rollout_cached(cache_space(model, space), policy, space, s, t, config, rng);
}

LossAndGrad value_loss(const EmbeddingModel& model, const InducedMdp& space, const PairTransition& tr,
                       double gamma) {
  const SpaceCache cache = cache_space(model, space);
  const double c = model.scale();
  const double d = pair_distance(cache, c, tr.s, tr.t);
  const double target = std::abs(tr.r_s - tr.r_t) + gamma * pair_distance(cache, c, tr.s2, tr.t2);
  const double err = d - target;
  LossAndGrad out;
  out.loss = err * err;
  out.grad.assign(model.params().size(), 0.0);
  std::vector<Vec> dphi(space.num_states());
  double dscale = 0.0;
  accumulate_distance_grad(cache, c, tr.s, tr.t, 2.0 * err, dphi, dscale);
  backprop_states(model, space, dphi, out.grad);
  out.grad[model.scale_index()] += dscale;
  return out;
}

LossAndGrad policy_loss(const PairPolicyModel& policy, std::span<const PolicySample> batch, double clip_ratio,
                        double entropy_coef) {
  LossAndGrad out;
  out.grad.assign(policy.params().size(), 0.0);
  if (batch.empty()) return out;
  const double inv = 1.0 / static_cast<double>(batch.size());
  Vec dlogits(policy.alphabet_size());
  for (const PolicySample& x : batch) {
    const Vec p = policy.probs(x.ua, x.ub);
    const double ratio = std::exp(std::log(p[x.a]) - x.old_log_prob);
    const double clipped = std::clamp(ratio, 1.0 - clip_ratio, 1.0 + clip_ratio);
    const double unclipped_term = ratio * x.advantage;
    const double clipped_term = clipped * x.advantage;
    out.loss -= inv * x.weight * std::min(unclipped_term, clipped_term);
    std::fill(dlogits.begin(), dlogits.end(), 0.0);
    bool any = false;
    if (unclipped_term <= clipped_term && x.advantage != 0.0) {
      // d(-ratio * A)/d logits = -ratio * A * (onehot(a) - p)
      const double g = -inv * x.weight * ratio * x.advantage;
      for (int a = 0; a < policy.alphabet_size(); ++a) dlogits[a] = g * ((a == x.a ? 1.0 : 0.0) - p[a]);
      any = true;
    }
    if (entropy_coef > 0.0) {
      double h = 0.0;
      for (double q : p) h -= q > 0.0 ? q * std::log(q) : 0.0;
      out.loss -= inv * x.weight * entropy_coef * h;
      for (int a = 0; a < policy.alphabet_size(); ++a)
        if (p[a] > 0.0) dlogits[a] += inv * x.weight * entropy_coef * p[a] * (std::log(p[a]) + h);
      any = true;
    }
    if (any) policy.backprop(x.ua, x.ub, dlogits, out.grad);
  }
  return out;
}

TrainResult train(const InducedMdp& space, const TrainConfig& config) {
  config.validate(space);
  const int n = space.num_states();
  require(n >= 2, "train: space must contain at least the two sink DFAs");
  Rng init_rng = make_stream(config.seed, "encoder-init");
  Rng rollout_rng = make_stream(config.seed, "rollout");
  Rng shuffle_rng = make_stream(config.seed, "minibatch");

  const double init_scale = 1.0 / (1.0 - config.gamma);
  TrainResult result;
  result.model = config.mode == EncoderMode::Tabular
                     ? EmbeddingModel::tabular(space, config.embed_dim, init_scale, init_rng)
                     : EmbeddingModel::message_passing(space.alphabet_size(), config.embed_dim, init_scale, init_rng);
  result.policy = PairPolicyModel(config.embed_dim, config.policy_hidden, space.alphabet_size(), init_rng);
  EmbeddingModel& model = result.model;
  PairPolicyModel& policy = result.policy;
  Momentum enc_opt, pol_opt;

  std::vector<std::pair<int, int>> starts;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (!(space.is_terminal(s) && space.is_terminal(t))) starts.emplace_back(s, t);

  double initial_loss = -1.0;
  int diverged_epochs = 0;
  std::vector<PairTransition> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    SpaceCache cache = cache_space(model, space);

    batch.clear();
    for (int r = 0; r < config.batch_size; ++r) {
      int s, t;
      if (starts.empty() || uniform01(rollout_rng) < config.forced_start_fraction) {
        if (uniform01(rollout_rng) < 0.5) {
          const bool flip = uniform01(rollout_rng) < 0.5;
          s = flip ? space.bot_id() : space.top_id();
          t = flip ? space.top_id() : space.bot_id();
        } else {
          s = t = static_cast<int>(uniform_index(rollout_rng, n));
        }
      } else {
        std::tie(s, t) = starts[uniform_index(rollout_rng, starts.size())];
      }
      auto traj = rollout_cached(cache, policy, space, s, t, config, rollout_rng);
      batch.insert(batch.end(), traj.begin(), traj.end());
    }

    // Advantages from the embeddings the rollouts were collected with. With the
    // expected surrogate every symbol of a visited pair gets its one-step
    // advantage, weighted by the behavior probability.
    const int m = static_cast<int>(batch.size());
    const int k_sym = space.alphabet_size();
    const int per = config.expected_surrogate ? k_sym : 1;
    std::vector<double> adv(static_cast<std::size_t>(m) * per);
    std::vector<double> old_prob(adv.size(), 1.0);
    double epoch_loss = 0.0;
    for (int i = 0; i < m; ++i) {
      const PairTransition& tr = batch[i];
      const double c = model.scale();
      const double d = pair_distance(cache, c, tr.s, tr.t);
      const double dn = pair_distance(cache, c, tr.s2, tr.t2);
      const double err = d - (std::abs(tr.r_s - tr.r_t) + config.gamma * dn);
      epoch_loss += err * err;
      auto one_step = [&](Symbol a) {
        const int rs = space.reward(tr.s, a), rt = space.reward(tr.t, a);
        const double gap = config.signed_reward ? rs - rt : std::abs(rs - rt);
        return gap + config.gamma * pair_distance(cache, c, space.next(tr.s, a), space.next(tr.t, a)) - d;
      };
      if (per == 1) {
        adv[i] = one_step(tr.a);
        continue;
      }
      const Vec p = policy.probs(cache.u(tr.s), cache.u(tr.t));
      for (Symbol a = 0; a < k_sym; ++a) {
        adv[static_cast<std::size_t>(i) * per + a] = one_step(a);
        old_prob[static_cast<std::size_t>(i) * per + a] = p[a];
      }
    }
    epoch_loss /= std::max(1, m);
    {
      // Rescale only; the advantages already carry their own baseline.
      double sq = 0.0, wsum = 0.0;
      for (std::size_t i = 0; i < adv.size(); ++i) {
        sq += old_prob[i] * adv[i] * adv[i];
        wsum += old_prob[i];
      }
      const double rms = wsum > 0.0 ? std::sqrt(sq / wsum) : 0.0;
      if (rms > 0.0)
        for (double& a : adv) a /= rms;
    }

    double objective = 0.0;
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    for (int pass = 0; pass < config.update_passes; ++pass) {
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      objective = 0.0;
      for (int start = 0; start < m; start += config.minibatch_size) {
        const int end = std::min(m, start + config.minibatch_size);
        const double inv = 1.0 / (end - start);
        const SpaceCache cur = cache_space(model, space);
        const double c = model.scale();

        std::vector<double> grad(model.params().size(), 0.0);
        std::vector<Vec> dphi(n);
        double dscale = 0.0;
        std::vector<PolicySample> samples;
        samples.reserve(static_cast<std::size_t>(end - start) * per);
        for (int k = start; k < end; ++k) {
          const PairTransition& tr = batch[order[k]];
          const double d = pair_distance(cur, c, tr.s, tr.t);
          const double target = std::abs(tr.r_s - tr.r_t) + config.gamma * pair_distance(cur, c, tr.s2, tr.t2);
          accumulate_distance_grad(cur, c, tr.s, tr.t, 2.0 * (d - target) * inv, dphi, dscale);
          auto us = cur.u(tr.s);
          auto ut = cur.u(tr.t);
          for (int j = 0; j < per; ++j) {
            const std::size_t slot = static_cast<std::size_t>(order[k]) * per + j;
            if (per > 1 && old_prob[slot] <= 0.0) continue;
            PolicySample ps;
            ps.ua.assign(us.begin(), us.end());
            ps.ub.assign(ut.begin(), ut.end());
            ps.a = per == 1 ? tr.a : j;
            ps.advantage = adv[slot];
            ps.old_log_prob = per == 1 ? tr.log_prob : std::log(old_prob[slot]);
            ps.weight = per == 1 ? 1.0 : old_prob[slot] * per;
            samples.push_back(std::move(ps));
          }
        }
        backprop_states(model, space, dphi, grad);
        grad[model.scale_index()] += dscale;
        enc_opt.apply(model.params(), grad, config.learning_rate, config.momentum);
        model.params().back() = std::max(0.0, model.params().back());

        const double beta = config.entropy_coef * std::max(0.0, 1.0 - epoch / (0.75 * config.epochs));
        LossAndGrad pl = policy_loss(policy, samples, config.clip_ratio, beta);
        objective -= pl.loss * (end - start);
        pol_opt.apply(policy.params(), pl.grad, config.policy_learning_rate, config.momentum);
      }
      objective /= std::max(1, m);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.value_loss = epoch_loss;
    stats.policy_objective = objective;
    stats.separation_rate = separation_rate(model, space, 1e-8);
    result.curve.push_back(stats);

    if (!std::isfinite(epoch_loss)) throw TrainingDivergedError("train: value loss is not finite at epoch " + std::to_string(epoch));
    if (initial_loss < 0.0) initial_loss = epoch_loss;
    diverged_epochs = epoch_loss > 10.0 * initial_loss && initial_loss > 0.0 ? diverged_epochs + 1 : 0;
    if (diverged_epochs >= 3)
      throw TrainingDivergedError("train: value loss " + std::to_string(epoch_loss) + " exceeded 10x the initial " +
                                  std::to_string(initial_loss) + " for 3 consecutive epochs (epoch " +
                                  std::to_string(epoch) + ")");
  }
  return result;
}

}  // namespace dfarl
