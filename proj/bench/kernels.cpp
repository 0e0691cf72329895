// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the team.

#include <benchmark/benchmark.h>

#include <map>

#include "dfarl/bisim_metric.hpp"
#include "dfarl/product_rl.hpp"
#include "dfarl/samplers.hpp"

using namespace dfarl;

namespace {

const InducedMdp& space(int seeds) {
  static std::map<int, InducedMdp> cache;
  auto it = cache.find(seeds);
  if (it == cache.end()) {
    SamplerConfig sc;
    sc.alphabet_size = 4;
    sc.kind = TaskKind::ReachAvoid;
    sc.state_count.kind = StateCountDist::Kind::Uniform;
    sc.state_count.lo = 3;
    sc.state_count.hi = 10;
    DfaSpaceConfig cfg;
    cfg.alphabet_size = 4;
    it = cache.emplace(seeds, enumerate(sample_corpus(sc, seeds), cfg)).first;
  }
  return it->second;
}

const ProductMdp& product(int tasks) {
  static std::map<int, ProductMdp> cache;
  auto it = cache.find(tasks);
  if (it == cache.end()) {
    SamplerConfig sc;
    sc.alphabet_size = 5;
    sc.kind = TaskKind::ReachAvoid;
    sc.state_count.kind = StateCountDist::Kind::Uniform;
    sc.state_count.lo = 3;
    sc.state_count.hi = 10;
    const auto dfas = sample_corpus(sc, tasks);
    DfaSpaceConfig cfg;
    cfg.alphabet_size = 5;
    const InducedMdp s = enumerate(dfas, cfg);
    TaskDist d;
    for (const Dfa& t : dfas) {
      d.ids.push_back(s.find(t));
      d.probs.push_back(1.0 / tasks);
    }
    it = cache.emplace(tasks, compose(make_gridworld(default_gridworld(5, 0)), s, d)).first;
  }
  return it->second;
}

void BM_metric_parallel(benchmark::State& st) {
  const InducedMdp& s = space(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_fixed_point(s, 0.9, 1e-6));
  st.counters["states"] = s.num_states();
}

void BM_metric_serial(benchmark::State& st) {
  const InducedMdp& s = space(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::solve_fixed_point(s, 0.9, 1e-6));
  st.counters["states"] = s.num_states();
}

void BM_value_iteration_parallel(benchmark::State& st) {
  const ProductMdp& p = product(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(value_iteration(p, 1e-10));
  st.counters["states"] = p.num_states();
}

void BM_value_iteration_serial(benchmark::State& st) {
  const ProductMdp& p = product(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::value_iteration(p, 1e-10));
  st.counters["states"] = p.num_states();
}

}  // namespace

BENCHMARK(BM_metric_parallel)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_metric_serial)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_value_iteration_parallel)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_value_iteration_serial)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
