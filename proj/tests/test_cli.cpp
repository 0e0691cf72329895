#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dfarl/cli.hpp"
#include "dfarl/encoder.hpp"
#include "dfarl/samplers.hpp"

using namespace dfarl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("dfarl_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int rc = run_cli(args, o, e);
  if (out) *out = o.str() + e.str();
  return rc;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli sample is deterministic and respects the size bounds") {
  TempDir dir;
  REQUIRE(cli({"sample", "--out", dir / "a.jsonl", "--kind", "reach", "--count", "10", "--seed", "7"}) == 0);
  REQUIRE(cli({"sample", "--out", dir / "b.jsonl", "--kind", "reach", "--count", "10", "--seed", "7"}) == 0);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  CHECK(fs::exists(dir / "a.jsonl.manifest.json"));

  REQUIRE(cli({"sample", "--out", dir / "rad.jsonl", "--kind", "rad", "--count", "20", "--hi", "10"}) == 0);
  for (const Dfa& d : read_corpus_file(dir / "rad.jsonl").dfas) CHECK(d.num_states() <= 10);

  std::ofstream(dir / "ood.json") << R"({"kind": "reach_avoid", "count": 10, "seed": 3,
    "state_count": {"kind": "uniform", "lo": 11, "hi": 20}})";
  REQUIRE(cli({"sample", "--config", dir / "ood.json", "--out", dir / "ood.jsonl"}) == 0);
  const Corpus ood = read_corpus_file(dir / "ood.jsonl");
  CHECK(ood.dfas.size() == 10);
  for (const Dfa& d : ood.dfas) {
    CHECK(d.num_states() >= 11);
    CHECK(d.num_states() <= 20);
  }
  // flags win over the config file
  REQUIRE(cli({"sample", "--config", dir / "ood.json", "--out", dir / "ood3.jsonl", "--count", "3"}) == 0);
  CHECK(read_corpus_file(dir / "ood3.jsonl").dfas.size() == 3);
}

TEST_CASE("cli metric on the empty corpus and on a sampled one") {
  TempDir dir;
  REQUIRE(cli({"sample", "--out", dir / "e.jsonl", "--count", "0", "--alphabet", "2"}) == 0);
  REQUIRE(cli({"metric", "--corpus", dir / "e.jsonl", "--out", dir / "e.csv"}) == 0);
  std::istringstream csv(slurp(dir / "e.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("# manifest ", 0) == 0);
  std::vector<std::string> rows;
  while (std::getline(csv, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  const double d = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
  CHECK(std::abs(d - 20.0) <= 1e-6);

  REQUIRE(cli({"sample", "--out", dir / "ra.jsonl", "--count", "5", "--seed", "2"}) == 0);
  REQUIRE(cli({"metric", "--corpus", dir / "ra.jsonl", "--out", dir / "m1.csv"}) == 0);
  REQUIRE(cli({"metric", "--corpus", dir / "ra.jsonl", "--out", dir / "m2.csv"}) == 0);
  CHECK(slurp(dir / "m1.csv") == slurp(dir / "m2.csv"));
  CHECK(slurp(dir / "m1.csv.report.txt").find("mismatches: 0") != std::string::npos);
}

TEST_CASE("cli train, eval and policy") {
  TempDir dir;
  REQUIRE(cli({"sample", "--out", dir / "t.jsonl", "--count", "2", "--alphabet", "3", "--seed", "1", "--dist",
               "uniform", "--lo", "3", "--hi", "4"}) == 0);
  REQUIRE(cli({"train", "--corpus", dir / "t.jsonl", "--out", dir / "a.json", "--epochs", "5"}) == 0);
  REQUIRE(cli({"train", "--corpus", dir / "t.jsonl", "--out", dir / "b.json", "--epochs", "5"}) == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.json.curve.csv") == slurp(dir / "b.json.curve.csv"));

  REQUIRE(cli({"eval", "--checkpoint", dir / "a.json", "--corpus", dir / "t.jsonl", "--out", dir / "h.csv"}) == 0);
  CHECK(slurp(dir / "h.csv.report.txt").find("diagonal zero: yes") != std::string::npos);

  REQUIRE(cli({"policy", "--corpus", dir / "t.jsonl", "--out", dir / "p.csv", "--episodes", "200"}) == 0);
  CHECK(slurp(dir / "p.csv").find("dfa_id,200,") != std::string::npos);
  // embedding conditioning needs a checkpoint
  CHECK(cli({"policy", "--corpus", dir / "t.jsonl", "--out", dir / "q.csv", "--conditioning", "embedding"}) == 1);

  // a checkpoint whose rows all coincide merges distinct tasks
  const Corpus corpus = read_corpus_file(dir / "t.jsonl");
  DfaSpaceConfig sc;
  sc.alphabet_size = 3;
  const InducedMdp space = enumerate(corpus.dfas, sc);
  Rng rng = make_stream(0, "test-collapse");
  EmbeddingModel m = EmbeddingModel::tabular(space, 4, 5.0, rng);
  for (int r = 1; r < m.num_rows(); ++r)
    for (int i = 0; i < m.dim(); ++i) m.params()[r * m.dim() + i] = m.params()[i];
  std::ofstream(dir / "collapsed.json") << nlohmann::json{{"config", {{"max_states", 10}}}, {"model", m.to_json()}}.dump();
  std::string msg;
  CHECK(cli({"policy", "--corpus", dir / "t.jsonl", "--out", dir / "c.csv", "--conditioning", "embedding",
             "--checkpoint", dir / "collapsed.json"},
            &msg) == 3);
  CHECK(msg.find("collision") != std::string::npos);
}

TEST_CASE("cli pac and error codes") {
  TempDir dir;
  REQUIRE(cli({"sample", "--out", dir / "t.jsonl", "--count", "1", "--alphabet", "5", "--seed", "4"}) == 0);
  REQUIRE(cli({"pac", "--corpus", dir / "t.jsonl", "--out", dir / "pac.csv", "--base-budget", "1000", "--seeds",
               "2", "--budgets", "2"}) == 0);
  CHECK(slurp(dir / "pac.csv").find("budget,seed,suboptimal_total,suboptimal_window") != std::string::npos);

  CHECK(cli({}) == 1);
  CHECK(cli({"--help"}) == 0);
  CHECK(cli({"sample", "--out", dir / "x", "--kind", "nonsense"}) == 1);
  CHECK(cli({"metric", "--corpus", dir / "missing.jsonl", "--out", dir / "x.csv"}) == 1);
  std::ofstream(dir / "bad.jsonl") << "{not json\n";
  CHECK(cli({"metric", "--corpus", dir / "bad.jsonl", "--out", dir / "x.csv"}) == 1);
  CHECK(cli({"train", "--corpus", dir / "t.jsonl", "--out", dir / "x.json", "--gamma", "1.5"}) == 1);
}
