#include "dfarl/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "dfarl/bisim_metric.hpp"
#include "dfarl/encoder.hpp"
#include "dfarl/errors.hpp"
#include "dfarl/product_rl.hpp"
#include "dfarl/rng.hpp"
#include "dfarl/samplers.hpp"

namespace dfarl {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Collects outputs in memory, then writes them together with the sidecar.
class Run {
 public:
  Run(std::string command, std::ostream& out) : out_(out) { m_.command = std::move(command); }

  RunManifest& manifest() { return m_; }
  void input(const std::string& path) { m_.inputs.emplace_back(path, file_digest(path)); }

  // Must be called once the config and inputs are final.
  std::string seal() {
    run_ = m_.run_digest();
    return run_;
  }
  void output(const std::string& path, const std::string& content) { files_.emplace_back(path, content); }

  void commit(const std::string& primary) {
    for (const auto& [path, content] : files_) {
      write_file(path, content);
      m_.outputs.emplace_back(path, hash_hex(fnv1a64(content)));
    }
    write_file(primary + ".manifest.json", m_.to_json().dump(2) + "\n");
    out_ << "manifest " << run_ << " -> " << primary << ".manifest.json\n";
  }

 private:
  RunManifest m_;
  std::string run_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::ostream& out_;
};

int alphabet_of(const Corpus& c, std::optional<int> flag) {
  if (flag) return *flag;
  if (c.header.contains("alphabet_size")) return c.header.at("alphabet_size").get<int>();
  if (!c.dfas.empty()) return c.dfas.front().alphabet_size();
  throw ValidationError("empty corpus without alphabet_size; pass --alphabet");
}

InducedMdp space_of(const Corpus& c, const DfaSpaceConfig& cfg) {
  for (const Dfa& d : c.dfas)
    if (d.alphabet_size() != cfg.alphabet_size)
      throw ValidationError("corpus DFA alphabet does not match " + std::to_string(cfg.alphabet_size));
  return enumerate(c.dfas, cfg);
}

template <class T>
void override_key(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

// ---- sample --------------------------------------------------------------

struct SampleArgs {
  std::string config, out;
  std::optional<int> count, alphabet, lo, hi;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kind, dist;
  std::optional<double> p;
};

void cmd_sample(const SampleArgs& a, std::ostream& out) {
  Run run("sample", out);
  nlohmann::json j = nlohmann::json::object();
  if (!a.config.empty()) {
    j = load_json(a.config);
    run.input(a.config);
  }
  override_key(j, "alphabet_size", a.alphabet);
  override_key(j, "seed", a.seed);
  override_key(j, "kind", a.kind);
  override_key(j, "count", a.count);
  if (a.dist || a.lo || a.hi || a.p) {
    nlohmann::json& sc = j["state_count"];
    if (!sc.is_object()) sc = nlohmann::json::object();
    override_key(sc, "kind", a.dist);
    override_key(sc, "lo", a.lo);
    override_key(sc, "hi", a.hi);
    override_key(sc, "p", a.p);
  }
  const SamplerConfig sc = sampler_config_from_json(j);
  const int count = j.value("count", 10);
  if (count < 0) throw ValidationError("count must be nonnegative");

  nlohmann::json resolved = to_json(sc);
  resolved["count"] = count;
  run.manifest().config = resolved;
  run.manifest().seed = sc.seed;
  const std::string digest = run.seal();

  Corpus corpus;
  corpus.header = to_json(sc);
  corpus.header["manifest"] = digest;
  corpus.dfas = sample_corpus(sc, count);
  std::ostringstream os;
  write_corpus(os, corpus);
  run.output(a.out, os.str());
  run.commit(a.out);
  out << "sampled " << count << " " << to_string(sc.kind) << " DFAs\n";
}

// ---- metric --------------------------------------------------------------

struct MetricArgs {
  std::string corpus, out, report, config;
  std::optional<double> gamma, alpha;
  std::optional<int> alphabet, max_states;
};

void cmd_metric(const MetricArgs& a, std::ostream& out) {
  Run run("metric", out);
  nlohmann::json j = nlohmann::json::object();
  if (!a.config.empty()) {
    j = load_json(a.config);
    run.input(a.config);
  }
  const Corpus corpus = read_corpus_file(a.corpus);
  run.input(a.corpus);
  override_key(j, "gamma", a.gamma);
  override_key(j, "alpha", a.alpha);
  override_key(j, "max_states", a.max_states);
  DfaSpaceConfig sc;
  sc.alphabet_size = alphabet_of(corpus, a.alphabet);
  sc.gamma = j.value("gamma", 0.9);
  sc.max_states = j.value("max_states", sc.max_states);
  const double alpha = j.value("alpha", 1e-6);
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  sc.validate();
  run.manifest().config = {{"gamma", sc.gamma}, {"alpha", alpha}, {"max_states", sc.max_states},
                           {"alphabet_size", sc.alphabet_size}};
  const std::string digest = run.seal();

  const InducedMdp space = space_of(corpus, sc);
  const FixedPoint fp = solve_fixed_point(space, sc.gamma, alpha);

  std::ostringstream csv;
  csv << "# manifest " << digest << '\n';
  write_metric_csv(csv, space, fp.metric);

  // Zero set against the combinatorial bisimilarity check, over all pairs.
  const int n = space.num_states();
  std::ostringstream rep;
  rep << "# manifest " << digest << '\n';
  rep << "states: " << n << '\n';
  rep << "iterations: " << fp.metric.iterations << '\n';
  rep << "residual: " << fmt(fp.metric.residual) << '\n';
  rep << "d(top,bottom): " << fmt(fp.metric(space.top_id(), space.bot_id())) << '\n';
  int mismatches = 0, zero_pairs = 0;
  std::ostringstream pairs;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      const bool zero = fp.metric(s, t) <= alpha;
      const bool bisim = is_bisimilar(space.state(s).dfa, space.state(t).dfa);
      if (zero) {
        ++zero_pairs;
        pairs << "  " << s << ' ' << t << ' ' << fmt(fp.metric(s, t)) << (bisim ? " bisimilar" : " NOT bisimilar")
              << '\n';
      }
      if (zero != bisim) ++mismatches;
    }
  rep << "zero-set pairs (off-diagonal): " << zero_pairs << '\n' << pairs.str();
  rep << "mismatches: " << mismatches << '\n';

  const std::string report = a.report.empty() ? a.out + ".report.txt" : a.report;
  run.output(a.out, csv.str());
  run.output(report, rep.str());
  run.commit(a.out);
  out << "states " << n << ", iterations " << fp.metric.iterations << ", mismatches " << mismatches << '\n';
  if (mismatches != 0) throw InvariantError("metric zero set disagrees with bisimilarity");
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
  std::string corpus, config, out, curve;
  std::optional<int> epochs, alphabet, max_states;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> gamma, lr;
  std::optional<bool> signed_reward;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
  Run run("train", out);
  nlohmann::json j = nlohmann::json::object();
  if (!a.config.empty()) {
    j = load_json(a.config);
    run.input(a.config);
  }
  const Corpus corpus = read_corpus_file(a.corpus);
  run.input(a.corpus);
  override_key(j, "epochs", a.epochs);
  override_key(j, "seed", a.seed);
  override_key(j, "mode", a.mode);
  override_key(j, "gamma", a.gamma);
  override_key(j, "learning_rate", a.lr);
  override_key(j, "signed_reward", a.signed_reward);
  const TrainConfig tc = train_config_from_json(j);
  DfaSpaceConfig sc;
  sc.alphabet_size = alphabet_of(corpus, a.alphabet);
  sc.gamma = tc.gamma;
  sc.max_states = a.max_states.value_or(j.value("max_states", sc.max_states));
  sc.validate();

  nlohmann::json resolved = to_json(tc);
  resolved["max_states"] = sc.max_states;
  resolved["alphabet_size"] = sc.alphabet_size;
  run.manifest().config = resolved;
  run.manifest().seed = tc.seed;
  const std::string digest = run.seal();

  const InducedMdp space = space_of(corpus, sc);
  tc.validate(space);
  const TrainResult r = train(space, tc);

  nlohmann::json ck = {{"manifest", digest},
                       {"config", resolved},
                       {"model", r.model.to_json()},
                       {"policy", r.policy.to_json()}};
  std::ostringstream curve;
  curve << "# manifest " << digest << '\n';
  write_curve_csv(curve, r.curve);
  run.output(a.out, ck.dump() + "\n");
  run.output(a.curve.empty() ? a.out + ".curve.csv" : a.curve, curve.str());
  run.commit(a.out);
  const EpochStats& last = r.curve.back();
  out << "states " << space.num_states() << ", final value loss " << fmt(last.value_loss) << ", separation "
      << fmt(separation_rate(r.model, space, 1e-8)) << '\n';
}

struct Checkpoint {
  nlohmann::json config;
  EmbeddingModel model;
};

Checkpoint load_checkpoint(const std::string& path) {
  const nlohmann::json j = load_json(path);
  try {
    return {j.at("config"), EmbeddingModel::from_json(j.at("model"))};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": not a checkpoint (" + e.what() + ")");
  }
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint, out, report;
  std::vector<std::string> corpora;
  double threshold = 1e-8;
};

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  Run run("eval", out);
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  run.input(a.checkpoint);
  std::vector<Corpus> corpora;
  for (const auto& p : a.corpora) {
    corpora.push_back(read_corpus_file(p));
    run.input(p);
  }
  if (!(a.threshold > 0.0)) throw ValidationError("threshold must be positive");
  run.manifest().config = {{"threshold", a.threshold}, {"corpora", a.corpora}};
  const std::string digest = run.seal();

  std::vector<Dfa> all;
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> span;
  for (std::size_t c = 0; c < corpora.size(); ++c) {
    span.emplace_back(all.size(), all.size() + corpora[c].dfas.size());
    for (std::size_t i = 0; i < corpora[c].dfas.size(); ++i) {
      all.push_back(corpora[c].dfas[i]);
      labels.push_back(std::to_string(c) + ":" + std::to_string(i));
    }
  }
  const auto h = evaluate_heatmap(ck.model, all);

  std::ostringstream csv;
  csv << "# manifest " << digest << '\n' << "dfa";
  for (const auto& l : labels) csv << ',' << l;
  csv << '\n';
  bool diagonal_zero = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    csv << labels[i];
    for (std::size_t k = 0; k < all.size(); ++k) csv << ',' << fmt(h[i][k]);
    csv << '\n';
    diagonal_zero = diagonal_zero && h[i][i] == 0.0;
  }

  std::ostringstream rep;
  rep << "# manifest " << digest << '\n';
  rep << "diagonal zero: " << (diagonal_zero ? "yes" : "no") << '\n';
  rep << "corpus,path,dfas,distinct_pairs,separated,separation_rate,bisimilar_pairs,merged\n";
  for (std::size_t c = 0; c < corpora.size(); ++c) {
    long long distinct = 0, separated = 0, bisim = 0, merged = 0;
    for (std::size_t i = span[c].first; i < span[c].second; ++i)
      for (std::size_t k = i + 1; k < span[c].second; ++k) {
        if (is_bisimilar(all[i], all[k])) {
          ++bisim;
          if (h[i][k] <= a.threshold) ++merged;
        } else {
          ++distinct;
          if (h[i][k] > a.threshold) ++separated;
        }
      }
    const double rate = distinct ? static_cast<double>(separated) / distinct : 1.0;
    rep << c << ',' << a.corpora[c] << ',' << (span[c].second - span[c].first) << ',' << distinct << ','
        << separated << ',' << fmt(rate) << ',' << bisim << ',' << merged << '\n';
    out << a.corpora[c] << ": separation " << fmt(rate) << " (" << separated << "/" << distinct << ")\n";
  }
  run.output(a.out, csv.str());
  run.output(a.report.empty() ? a.out + ".report.txt" : a.report, rep.str());
  run.commit(a.out);
  if (!diagonal_zero) throw InvariantError("heatmap diagonal is not zero");
}

// ---- policy / pac --------------------------------------------------------

struct GridArgs {
  std::string grid;
  std::uint64_t grid_seed = 0;
};

GridworldSpec grid_of(const GridArgs& g, int alphabet, Run& run) {
  if (g.grid.empty()) return default_gridworld(alphabet, g.grid_seed);
  run.input(g.grid);
  return gridworld_from_json(load_json(g.grid));
}

TaskDist uniform_tasks(const InducedMdp& space, const std::vector<Dfa>& dfas) {
  if (dfas.empty()) throw ValidationError("task corpus is empty");
  std::map<int, double> mass;
  for (const Dfa& d : dfas) mass[space.find(d)] += 1.0 / static_cast<double>(dfas.size());
  TaskDist t;
  for (const auto& [id, p] : mass) {
    t.ids.push_back(id);
    t.probs.push_back(p);
  }
  return t;
}

struct PolicyArgs {
  GridArgs grid;
  std::string corpus, checkpoint, config, out, conditioning = "dfa_id";
  std::optional<int> episodes, max_states;
  std::optional<std::uint64_t> seed;
};

void cmd_policy(const PolicyArgs& a, std::ostream& out) {
  Run run("policy", out);
  nlohmann::json j = nlohmann::json::object();
  if (!a.config.empty()) {
    j = load_json(a.config);
    run.input(a.config);
  }
  override_key(j, "episodes", a.episodes);
  override_key(j, "seed", a.seed);
  const QLearningConfig qc = qlearning_config_from_json(j);
  qc.validate();
  const Corpus corpus = read_corpus_file(a.corpus);
  run.input(a.corpus);
  if (a.conditioning != "dfa_id" && a.conditioning != "embedding")
    throw ValidationError("conditioning must be dfa_id or embedding");
  std::optional<Checkpoint> ck;
  if (!a.checkpoint.empty()) {
    ck = load_checkpoint(a.checkpoint);
    run.input(a.checkpoint);
  }
  if (a.conditioning == "embedding" && !ck) throw ValidationError("embedding conditioning needs --checkpoint");

  DfaSpaceConfig sc;
  sc.alphabet_size = alphabet_of(corpus, std::nullopt);
  const GridworldSpec g = grid_of(a.grid, sc.alphabet_size, run);
  sc.gamma = g.gamma;
  sc.max_states = a.max_states.value_or(ck ? ck->config.value("max_states", sc.max_states) : sc.max_states);
  sc.validate();
  nlohmann::json resolved = {{"qlearning", to_json(qc)}, {"gridworld", to_json(g)},
                             {"conditioning", a.conditioning}, {"max_states", sc.max_states}};
  run.manifest().config = resolved;
  run.manifest().seed = qc.seed;
  const std::string digest = run.seal();

  const InducedMdp space = space_of(corpus, sc);
  const LabeledMdp base = make_gridworld(g);
  const TaskDist tasks = uniform_tasks(space, corpus.dfas);
  const Conditioning cond =
      a.conditioning == "embedding" ? embedding_conditioning(ck->model, space) : dfa_id_conditioning(space);
  const ProductMdp p = compose(base, space, tasks, cond);
  const ValueResult vi = value_iteration(p, 1e-10);
  const double target = initial_expectation(p, success_probability(p, vi.policy, qc.success_horizon));
  const QLearningResult r = q_learning(p, qc);

  std::ostringstream csv;
  csv << "# manifest " << digest << '\n';
  write_success_csv(csv, cond.name, r.curve);
  run.output(a.out, csv.str());
  run.commit(a.out);
  out << "keys " << cond.num_keys << ", value-iteration success " << fmt(target) << ", learned success "
      << fmt(r.final_success) << '\n';
}

struct PacArgs {
  GridArgs grid;
  std::string corpus, config, out;
  int task = 0;
  std::optional<double> epsilon;
  std::optional<long long> base_budget;
  std::optional<int> budgets, seeds, max_states;
};

void cmd_pac(const PacArgs& a, std::ostream& out) {
  Run run("pac", out);
  nlohmann::json j = nlohmann::json::object();
  if (!a.config.empty()) {
    j = load_json(a.config);
    run.input(a.config);
  }
  const Corpus corpus = read_corpus_file(a.corpus);
  run.input(a.corpus);
  if (a.task < 0 || a.task >= static_cast<int>(corpus.dfas.size())) throw ValidationError("task index out of range");
  PacConfig pc;
  pc.epsilon = a.epsilon.value_or(j.value("epsilon", pc.epsilon));
  pc.base_budget = a.base_budget.value_or(j.value("base_budget", pc.base_budget));
  pc.budgets = a.budgets.value_or(j.value("budgets", pc.budgets));
  pc.seeds = a.seeds.value_or(j.value("seeds", pc.seeds));
  pc.validate();
  nlohmann::json qj = to_json(pac_learner());
  if (j.contains("qlearning")) qj.update(j.at("qlearning"));
  const QLearningConfig qc = qlearning_config_from_json(qj);
  qc.validate();

  DfaSpaceConfig sc;
  sc.alphabet_size = alphabet_of(corpus, std::nullopt);
  const GridworldSpec g = grid_of(a.grid, sc.alphabet_size, run);
  sc.gamma = g.gamma;
  sc.max_states = a.max_states.value_or(j.value("max_states", sc.max_states));
  sc.validate();
  run.manifest().config = {{"epsilon", pc.epsilon}, {"base_budget", pc.base_budget}, {"budgets", pc.budgets},
                           {"seeds", pc.seeds},     {"task", a.task},               {"gridworld", to_json(g)},
                           {"qlearning", to_json(qc)}, {"max_states", sc.max_states}};
  run.manifest().seed = qc.seed;
  const std::string digest = run.seal();

  const std::vector<Dfa> task{corpus.dfas[a.task]};
  const InducedMdp space = space_of(Corpus{corpus.header, task}, sc);
  const ProductMdp p = compose(make_gridworld(g), space, uniform_tasks(space, task));
  const auto rows = pac_demo(p, pc, qc);

  std::ostringstream csv;
  csv << "# manifest " << digest << '\n';
  write_pac_csv(csv, rows);
  run.output(a.out, csv.str());
  run.commit(a.out);
  for (const auto& r : rows)
    out << "budget " << r.budget << ": median total " << fmt(r.median_total) << ", median window "
        << fmt(r.median_window) << '\n';
}

}  // namespace

std::string file_digest(const std::string& path) { return hash_hex(fnv1a64(read_file(path))); }

std::string RunManifest::run_digest() const {
  nlohmann::json j = {{"command", command}, {"config", config}, {"seed", seed}, {"version", version}};
  for (const auto& [path, digest] : inputs) j["inputs"].push_back({path, digest});
  return hash_hex(fnv1a64(j.dump()));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j = {{"command", command}, {"config", config},       {"seed", seed},
                      {"version", version}, {"run", run_digest()}};
  j["inputs"] = nlohmann::json::object();
  j["outputs"] = nlohmann::json::object();
  for (const auto& [path, digest] : inputs) j["inputs"][path] = digest;
  for (const auto& [path, digest] : outputs) j["outputs"][path] = digest;
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DFA-conditioned RL toolkit", "dfarl"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "sample a DFA corpus");
  sample->add_option("--config", sa.config, "sampler config (JSON)");
  sample->add_option("--out", sa.out, "output corpus (JSON lines)")->required();
  sample->add_option("--count", sa.count);
  sample->add_option("--seed", sa.seed);
  sample->add_option("--kind", sa.kind, "reach | reach_avoid | rad");
  sample->add_option("--alphabet", sa.alphabet);
  sample->add_option("--dist", sa.dist, "uniform | truncated_geometric");
  sample->add_option("--lo", sa.lo);
  sample->add_option("--hi", sa.hi);
  sample->add_option("--p", sa.p);

  MetricArgs ma;
  auto* metric = app.add_subcommand("metric", "exact bisimulation metric of the enumerated space");
  metric->add_option("--corpus", ma.corpus)->required();
  metric->add_option("--config", ma.config);
  metric->add_option("--out", ma.out, "metric CSV")->required();
  metric->add_option("--report", ma.report);
  metric->add_option("--gamma", ma.gamma);
  metric->add_option("--alpha", ma.alpha);
  metric->add_option("--alphabet", ma.alphabet);
  metric->add_option("--max-states", ma.max_states);

  TrainArgs ta;
  auto* trn = app.add_subcommand("train", "train DFA embeddings");
  trn->add_option("--corpus", ta.corpus)->required();
  trn->add_option("--config", ta.config);
  trn->add_option("--out", ta.out, "checkpoint (JSON)")->required();
  trn->add_option("--curve", ta.curve);
  trn->add_option("--epochs", ta.epochs);
  trn->add_option("--seed", ta.seed);
  trn->add_option("--mode", ta.mode, "tabular | message_passing");
  trn->add_option("--gamma", ta.gamma);
  trn->add_option("--lr", ta.lr);
  trn->add_option("--signed-reward", ta.signed_reward);
  trn->add_option("--alphabet", ta.alphabet);
  trn->add_option("--max-states", ta.max_states);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "distance heatmap and separation report");
  eval->add_option("--checkpoint", ea.checkpoint)->required();
  eval->add_option("--corpus", ea.corpora)->required();
  eval->add_option("--out", ea.out, "heatmap CSV")->required();
  eval->add_option("--report", ea.report);
  eval->add_option("--threshold", ea.threshold);

  PolicyArgs pa;
  auto* policy = app.add_subcommand("policy", "Q-learning on the gridworld product");
  policy->add_option("--corpus", pa.corpus, "task corpus")->required();
  policy->add_option("--grid", pa.grid.grid, "gridworld spec (JSON)");
  policy->add_option("--grid-seed", pa.grid.grid_seed);
  policy->add_option("--checkpoint", pa.checkpoint);
  policy->add_option("--conditioning", pa.conditioning, "dfa_id | embedding");
  policy->add_option("--config", pa.config);
  policy->add_option("--out", pa.out, "success curve CSV")->required();
  policy->add_option("--episodes", pa.episodes);
  policy->add_option("--seed", pa.seed);
  policy->add_option("--max-states", pa.max_states);

  PacArgs ca;
  auto* pac = app.add_subcommand("pac", "suboptimal-step counts over doubling budgets");
  pac->add_option("--corpus", ca.corpus, "task corpus")->required();
  pac->add_option("--task", ca.task, "index into the corpus");
  pac->add_option("--grid", ca.grid.grid);
  pac->add_option("--grid-seed", ca.grid.grid_seed);
  pac->add_option("--config", ca.config);
  pac->add_option("--out", ca.out)->required();
  pac->add_option("--epsilon", ca.epsilon);
  pac->add_option("--base-budget", ca.base_budget);
  pac->add_option("--budgets", ca.budgets);
  pac->add_option("--seeds", ca.seeds);
  pac->add_option("--max-states", ca.max_states);

  std::vector<std::string> argv_store{"dfarl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(kToolVersion) + "\n"
                                                            : app.help());
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*sample) cmd_sample(sa, out);
    else if (*metric) cmd_metric(ma, out);
    else if (*trn) cmd_train(ta, out);
    else if (*eval) cmd_eval(ea, out);
    else if (*policy) cmd_policy(pa, out);
    else if (*pac) cmd_pac(ca, out);
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace dfarl
