#include "dfarl/dfa_space.hpp"

#include <string>

#include "dfarl/errors.hpp"

namespace dfarl {

void DfaSpaceConfig::validate() const {
  require(alphabet_size >= 1, "dfa space: alphabet_size must be >= 1");
  require(max_states >= 1, "dfa space: max_states must be >= 1");
  require(gamma >= 0.0 && gamma < 1.0, "dfa space: gamma must be in [0, 1)");
}

CanonicalDfa step(const Dfa& dfa, Symbol symbol) {
  require(symbol >= 0 && symbol < dfa.alphabet_size(), "step: symbol out of range");
  return canonicalize(minimize(dfa.with_initial(dfa.next(dfa.initial(), symbol))));
}

int reward(const Dfa& dfa, Symbol symbol) {
  const Dfa next = step(dfa, symbol).dfa;
  if (next.num_states() != 1) return 0;
  if (next.is_accepting(0)) return 1;
  if (next.is_rejecting(0)) return -1;
  return 0;
}

int InducedMdp::find(const CanonicalDfa& c) const {
  auto it = index_.find(c.hash);
  if (it == index_.end()) return -1;
  for (int id : it->second)
    if (states_[id].dfa == c.dfa) return id;
  return -1;
}

int InducedMdp::find(const Dfa& dfa) const { return find(canonicalize(minimize(dfa))); }

int InducedMdp::intern(CanonicalDfa c) {
  if (int id = find(c); id >= 0) return id;
  const int id = static_cast<int>(states_.size());
  index_[c.hash].push_back(id);
  states_.push_back(std::move(c));
  return id;
}

InducedMdp enumerate(const std::vector<Dfa>& seeds, const DfaSpaceConfig& config) {
  config.validate();
  const int k = config.alphabet_size;
  InducedMdp mdp;
  mdp.alphabet_size_ = k;
  mdp.max_states_ = config.max_states;
  mdp.top_id_ = mdp.intern(canonicalize(Dfa::top(k)));
  mdp.bot_id_ = mdp.intern(canonicalize(Dfa::bottom(k)));
  for (const Dfa& seed : seeds) {
    require(seed.alphabet_size() == k, "enumerate: seed alphabet does not match the space");
    require(seed.num_states() <= config.max_states,
            "enumerate: seed has " + std::to_string(seed.num_states()) +
                " states, exceeding max_states " + std::to_string(config.max_states));
    mdp.intern(canonicalize(minimize(seed)));
  }
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (Symbol a = 0; a < k; ++a) {
      CanonicalDfa next = step(mdp.states_[s].dfa, a);
      if (next.dfa.num_states() > config.max_states)
        throw InvariantError("enumerate: successor exceeds max_states");
      const int t = mdp.intern(std::move(next));
      mdp.transitions_.push_back(t);
      mdp.rewards_.push_back(static_cast<std::int8_t>(t == mdp.top_id_ ? 1 : t == mdp.bot_id_ ? -1 : 0));
    }
  }
  return mdp;
}

bool check_closure(const InducedMdp& mdp) {
  const int n = mdp.num_states();
  if (mdp.top_id() < 0 || mdp.bot_id() < 0) return false;
  for (int s = 0; s < n; ++s) {
    const Dfa& dfa = mdp.state(s).dfa;
    if (dfa.num_states() > mdp.max_states()) return false;
    for (Symbol a = 0; a < mdp.alphabet_size(); ++a) {
      const int t = mdp.next(s, a);
      if (t < 0 || t >= n) return false;
      if (mdp.find(step(dfa, a)) != t) return false;
    }
  }
  return true;
}

InducedMdp plant_duplicate(const InducedMdp& mdp, int s, const Dfa& copy) {
  require(s >= 0 && s < mdp.num_states(), "plant_duplicate: state out of range");
  require(is_bisimilar(copy, mdp.state(s).dfa), "plant_duplicate: copy is not bisimilar to the state");
  InducedMdp out = mdp;
  out.states_.push_back(CanonicalDfa{copy, mdp.state(s).hash});
  for (Symbol a = 0; a < mdp.alphabet_size(); ++a) {
    out.transitions_.push_back(mdp.next(s, a));
    out.rewards_.push_back(static_cast<std::int8_t>(mdp.reward(s, a)));
  }
  return out;
}

nlohmann::json to_json(const InducedMdp& mdp) {
  nlohmann::json j;
  j["alphabet_size"] = mdp.alphabet_size();
  j["max_states"] = mdp.max_states();
  j["top_id"] = mdp.top_id();
  j["bot_id"] = mdp.bot_id();
  auto& states = j["states"] = nlohmann::json::array();
  for (const auto& c : mdp.states()) {
    nlohmann::json rec = to_json(c.dfa);
    rec["hash"] = hash_hex(c.hash);
    states.push_back(std::move(rec));
  }
  std::vector<int> trans, rew;
  for (int s = 0; s < mdp.num_states(); ++s)
    for (Symbol a = 0; a < mdp.alphabet_size(); ++a) {
      trans.push_back(mdp.next(s, a));
      rew.push_back(mdp.reward(s, a));
    }
  j["transitions"] = trans;
  j["rewards"] = rew;
  return j;
}

InducedMdp mdp_from_json(const nlohmann::json& j) {
  InducedMdp mdp;
  try {
    mdp.alphabet_size_ = j.at("alphabet_size").get<int>();
    mdp.max_states_ = j.at("max_states").get<int>();
    for (const auto& rec : j.at("states")) mdp.intern(canonicalize(dfa_from_json(rec)));
    mdp.top_id_ = j.at("top_id").get<int>();
    mdp.bot_id_ = j.at("bot_id").get<int>();
    mdp.transitions_ = j.at("transitions").get<std::vector<int>>();
    for (int r : j.at("rewards").get<std::vector<int>>()) mdp.rewards_.push_back(static_cast<std::int8_t>(r));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("induced mdp json: ") + e.what());
  }
  const std::size_t cells = static_cast<std::size_t>(mdp.num_states()) * mdp.alphabet_size_;
  require(mdp.transitions_.size() == cells && mdp.rewards_.size() == cells,
          "induced mdp json: table size mismatch");
  return mdp;
}

}  // namespace dfarl
