#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfarl/dfa.hpp"
#include "dfarl/rng.hpp"

namespace dfarl {

enum class TaskKind { Reach, ReachAvoid, ReachAvoidDerived };

const char* to_string(TaskKind k);
TaskKind task_kind_from_string(const std::string& s);

/// Distribution of the number of DFA states. Truncated-geometric draws
/// lo + Geometric(p) and rejects values above `hi`; uniform draws from [lo, hi].
struct StateCountDist {
  enum class Kind { TruncatedGeometric, Uniform } kind = Kind::TruncatedGeometric;
  double p = 0.5;
  int lo = 3;
  int hi = 10;

  int sample(Rng& rng) const;
};

struct SamplerConfig {
  int alphabet_size = 4;
  StateCountDist state_count;
  std::uint64_t seed = 0;
  TaskKind kind = TaskKind::ReachAvoid;

  void validate() const;
};

// Plain constructors used by the samplers and by tests.
// State i advances on targets[i]; the last advance reaches the accepting sink.
Dfa make_reach_chain(int alphabet_size, const std::vector<Symbol>& targets);
// As make_reach_chain, and state i moves to the rejecting sink on avoid[i].
Dfa make_reach_avoid_chain(int alphabet_size, const std::vector<Symbol>& targets,
                           const std::vector<std::vector<Symbol>>& avoid);

Dfa sample_reach(const SamplerConfig& config, Rng& rng);
Dfa sample_reach_avoid(const SamplerConfig& config, Rng& rng);
Dfa sample_rad(const SamplerConfig& config, Rng& rng);
Dfa sample(const SamplerConfig& config, Rng& rng);

/// `steps` uniformly random symbols applied through `step`.
Dfa random_walk(const Dfa& dfa, int steps, Rng& rng);

/// `count` samples from the "sampler" stream of config.seed.
std::vector<Dfa> sample_corpus(const SamplerConfig& config, int count);

nlohmann::json to_json(const SamplerConfig& config);
SamplerConfig sampler_config_from_json(const nlohmann::json& j);

// Corpus files: a header line recording the sampler config, then one DFA JSON
// record per line.
struct Corpus {
  nlohmann::json header;
  std::vector<Dfa> dfas;
};

void write_corpus(std::ostream& os, const Corpus& corpus);
Corpus read_corpus(std::istream& is);
Corpus read_corpus_file(const std::string& path);

}  // namespace dfarl
