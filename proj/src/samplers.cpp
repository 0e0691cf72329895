#include "dfarl/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "dfarl/dfa_space.hpp"
#include "dfarl/errors.hpp"

namespace dfarl {

namespace {

constexpr int kResampleBudget = 1000;

int min_states_for(TaskKind kind) { return kind == TaskKind::Reach ? 2 : 3; }

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1)));
}

// Targets with no symbol repeated back to back.
std::vector<Symbol> sample_targets(int alphabet_size, int length, Rng& rng) {
  std::vector<Symbol> targets;
  for (int i = 0; i < length; ++i) {
    Symbol t;
    do {
      t = uniform_int(rng, 0, alphabet_size - 1);
    } while (alphabet_size > 1 && !targets.empty() && t == targets.back());
    targets.push_back(t);
  }
  return targets;
}

}  // namespace

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Reach: return "reach";
    case TaskKind::ReachAvoid: return "reach_avoid";
    case TaskKind::ReachAvoidDerived: return "rad";
  }
  return "?";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "reach" || s == "R") return TaskKind::Reach;
  if (s == "reach_avoid" || s == "RA") return TaskKind::ReachAvoid;
  if (s == "rad" || s == "RAD") return TaskKind::ReachAvoidDerived;
  throw ValidationError("unknown task kind: " + s);
}

int StateCountDist::sample(Rng& rng) const {
  if (kind == Kind::Uniform) return uniform_int(rng, lo, hi);
  for (;;) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double g = std::floor(std::log(u) / std::log1p(-p));
    if (g <= static_cast<double>(hi - lo)) return lo + static_cast<int>(g);
  }
}

void SamplerConfig::validate() const {
  require(alphabet_size >= 2, "sampler: alphabet_size must be >= 2");
  require(state_count.lo >= min_states_for(kind),
          std::string("sampler: ") + to_string(kind) + " needs at least " +
              std::to_string(min_states_for(kind)) + " states");
  require(state_count.hi >= state_count.lo, "sampler: state count upper bound below lower bound");
  if (state_count.kind == StateCountDist::Kind::TruncatedGeometric)
    require(state_count.p > 0.0 && state_count.p < 1.0, "sampler: geometric p must be in (0, 1)");
}

Dfa make_reach_chain(int alphabet_size, const std::vector<Symbol>& targets) {
  return make_reach_avoid_chain(alphabet_size, targets,
                                std::vector<std::vector<Symbol>>(targets.size()));
}

Dfa make_reach_avoid_chain(int alphabet_size, const std::vector<Symbol>& targets,
                           const std::vector<std::vector<Symbol>>& avoid) {
  require(!targets.empty(), "chain: need at least one target");
  require(avoid.size() == targets.size(), "chain: one avoid set per target");
  const int k = static_cast<int>(targets.size());
  bool any_avoid = false;
  for (const auto& v : avoid) any_avoid = any_avoid || !v.empty();
  const State top = k;
  const State bot = k + 1;
  const int n = any_avoid ? k + 2 : k + 1;
  std::vector<State> delta(static_cast<std::size_t>(n) * alphabet_size);
  for (State q = 0; q < k; ++q) {
    for (Symbol a = 0; a < alphabet_size; ++a) delta[q * alphabet_size + a] = q;
    for (Symbol a : avoid[q]) {
      require(a >= 0 && a < alphabet_size && a != targets[q], "chain: bad avoid symbol");
      delta[q * alphabet_size + a] = bot;
    }
    require(targets[q] >= 0 && targets[q] < alphabet_size, "chain: target out of range");
    delta[q * alphabet_size + targets[q]] = q + 1 < k ? q + 1 : top;
  }
  for (Symbol a = 0; a < alphabet_size; ++a) {
    delta[top * alphabet_size + a] = top;
    if (any_avoid) delta[bot * alphabet_size + a] = bot;
  }
  std::vector<State> rej;
  if (any_avoid) rej.push_back(bot);
  return Dfa(n, alphabet_size, std::move(delta), 0, {top}, std::move(rej));
}

Dfa sample_reach(const SamplerConfig& config, Rng& rng) {
  const int n = config.state_count.sample(rng);
  require(n >= 2, "sample_reach: state budget must be >= 2");
  return minimize(make_reach_chain(config.alphabet_size, sample_targets(config.alphabet_size, n - 1, rng)));
}

Dfa sample_reach_avoid(const SamplerConfig& config, Rng& rng) {
  require(config.alphabet_size >= 2, "sample_reach_avoid: alphabet must host a target and an avoid symbol");
  const int n = config.state_count.sample(rng);
  require(n >= 3, "sample_reach_avoid: state budget must be >= 3");
  const int k = n - 2;
  const int sigma = config.alphabet_size;
  std::vector<Symbol> targets = sample_targets(sigma, k, rng);
  std::vector<std::vector<Symbol>> avoid(k);
  for (int i = 0; i < k; ++i) {
    std::vector<Symbol> others;
    for (Symbol a = 0; a < sigma; ++a)
      if (a != targets[i]) others.push_back(a);
    // Leave one neutral symbol whenever the alphabet allows it.
    const int max_size = std::max(1, sigma - 2);
    const int size = uniform_int(rng, 1, max_size);
    for (int j = 0; j < size; ++j) {
      const std::size_t pick = j + uniform_index(rng, others.size() - j);
      std::swap(others[j], others[pick]);
    }
    avoid[i].assign(others.begin(), others.begin() + size);
    std::sort(avoid[i].begin(), avoid[i].end());
  }
  return minimize(make_reach_avoid_chain(sigma, targets, avoid));
}

Dfa random_walk(const Dfa& dfa, int steps, Rng& rng) {
  Dfa cur = minimize(dfa);
  for (int i = 0; i < steps; ++i)
    cur = step(cur, static_cast<Symbol>(uniform_index(rng, static_cast<std::size_t>(cur.alphabet_size())))).dfa;
  return cur;
}

Dfa sample_rad(const SamplerConfig& config, Rng& rng) {
  const int target = config.state_count.sample(rng);
  require(target >= 3, "sample_rad: state budget must be >= 3");
  SamplerConfig seed_config = config;
  seed_config.kind = TaskKind::ReachAvoid;
  seed_config.state_count.kind = StateCountDist::Kind::Uniform;
  seed_config.state_count.lo = target;
  seed_config.state_count.hi = std::max(target, config.state_count.hi);
  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    const Dfa seed = sample_reach_avoid(seed_config, rng);
    const int walk = uniform_int(rng, 0, seed.diameter());
    const Dfa derived = random_walk(seed, walk, rng);
    if (derived.num_states() == 1 && derived.is_final(0)) continue;
    if (derived.num_states() != target) continue;
    return derived;
  }
  throw SamplerExhaustedError("sample_rad: no admissible derived DFA after 1000 attempts");
}

Dfa sample(const SamplerConfig& config, Rng& rng) {
  switch (config.kind) {
    case TaskKind::Reach: return sample_reach(config, rng);
    case TaskKind::ReachAvoid: return sample_reach_avoid(config, rng);
    case TaskKind::ReachAvoidDerived: return sample_rad(config, rng);
  }
  throw InvariantError("sample: unknown task kind");
}

std::vector<Dfa> sample_corpus(const SamplerConfig& config, int count) {
  config.validate();
  Rng rng = make_stream(config.seed, "sampler");
  std::vector<Dfa> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample(config, rng));
  return out;
}

nlohmann::json to_json(const SamplerConfig& config) {
  nlohmann::json dist;
  if (config.state_count.kind == StateCountDist::Kind::Uniform) {
    dist = {{"kind", "uniform"}, {"lo", config.state_count.lo}, {"hi", config.state_count.hi}};
  } else {
    dist = {{"kind", "truncated_geometric"},
            {"p", config.state_count.p},
            {"lo", config.state_count.lo},
            {"hi", config.state_count.hi}};
  }
  return {{"alphabet_size", config.alphabet_size},
          {"kind", to_string(config.kind)},
          {"seed", config.seed},
          {"state_count", dist}};
}

SamplerConfig sampler_config_from_json(const nlohmann::json& j) {
  SamplerConfig c;
  try {
    c.alphabet_size = j.value("alphabet_size", c.alphabet_size);
    c.kind = task_kind_from_string(j.value("kind", std::string(to_string(c.kind))));
    c.seed = j.value("seed", c.seed);
    c.state_count.lo = min_states_for(c.kind);
    if (j.contains("state_count")) {
      const auto& d = j.at("state_count");
      const std::string kind = d.value("kind", std::string("truncated_geometric"));
      if (kind == "uniform") c.state_count.kind = StateCountDist::Kind::Uniform;
      else if (kind == "truncated_geometric") c.state_count.kind = StateCountDist::Kind::TruncatedGeometric;
      else throw ValidationError("unknown state count distribution: " + kind);
      c.state_count.p = d.value("p", c.state_count.p);
      c.state_count.lo = d.value("lo", c.state_count.lo);
      c.state_count.hi = d.value("hi", c.state_count.hi);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sampler config: ") + e.what());
  }
  c.validate();
  return c;
}

void write_corpus(std::ostream& os, const Corpus& corpus) {
  nlohmann::json header = corpus.header;
  header["type"] = "header";
  header["count"] = corpus.dfas.size();
  os << header.dump() << '\n';
  for (const Dfa& d : corpus.dfas) os << to_json(d).dump() << '\n';
}

Corpus read_corpus(std::istream& is) {
  Corpus corpus;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("corpus: ") + e.what());
    }
    if (first && j.value("type", std::string()) == "header") {
      corpus.header = std::move(j);
    } else {
      corpus.dfas.push_back(dfa_from_json(j));
    }
    first = false;
  }
  return corpus;
}

Corpus read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open corpus file: " + path);
  return read_corpus(in);
}

}  // namespace dfarl
