#include <doctest.h>

#include <sstream>

#include "dfarl/bisim_metric.hpp"
#include "dfarl/errors.hpp"
#include "dfarl/samplers.hpp"
#include "oracles.hpp"

using namespace dfarl;

namespace {

InducedMdp sampled_space(int seeds, std::uint64_t seed, int sigma = 3) {
  SamplerConfig sc;
  sc.alphabet_size = sigma;
  sc.kind = TaskKind::ReachAvoid;
  sc.state_count.kind = StateCountDist::Kind::Uniform;
  sc.state_count.lo = 3;
  sc.state_count.hi = 7;
  sc.seed = seed;
  DfaSpaceConfig cfg;
  cfg.alphabet_size = sigma;
  return enumerate(sample_corpus(sc, seeds), cfg);
}

}  // namespace

TEST_CASE("closed forms") {
  CHECK(iteration_count(0.9, 1e-6) == 132);
  CHECK(absolute_iteration_bound(0.9, 1e-6) == 161);
  DfaSpaceConfig cfg;
  cfg.alphabet_size = 2;
  const auto fp = solve_fixed_point(enumerate({}, cfg), 0.9, 1e-6);
  // 2 + 2 gamma + 2 gamma^2 + ... = 2 / (1 - gamma)
  CHECK(std::abs(fp.metric(0, 1) - 20.0) <= 1e-6);
  CHECK(fp.metric(0, 0) == 0.0);
  for (double g : {0.5, 0.75, 0.95}) {
    const auto f = solve_fixed_point(enumerate({}, cfg), g, 1e-8);
    CHECK(std::abs(f.metric(0, 1) - 2.0 / (1.0 - g)) <= 1e-8);
  }
}

TEST_CASE("solver matches a full-matrix Gauss-Seidel oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const InducedMdp mdp = sampled_space(4, seed);
    const auto fp = solve_fixed_point(mdp, 0.9, 1e-6);
    const auto ref = oracle::naive_metric(mdp, 0.9);
    double worst = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s)
      for (int t = 0; t < mdp.num_states(); ++t) worst = std::max(worst, std::abs(fp.metric(s, t) - ref[s][t]));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("parallel and serial solvers agree bit for bit") {
  const InducedMdp mdp = sampled_space(10, 4, 4);
  const auto a = solve_fixed_point(mdp, 0.9, 1e-6);
  const auto b = reference::solve_fixed_point(mdp, 0.9, 1e-6);
  CHECK(a.metric.values() == b.metric.values());
  CHECK(a.policy.values() == b.policy.values());
  CHECK(a.residuals == b.residuals);
  CHECK(a.metric.iterations == b.metric.iterations);
}

TEST_CASE("pseudometric axioms and contraction") {
  const InducedMdp mdp = sampled_space(6, 5);
  const auto fp = solve_fixed_point(mdp, 0.9, 1e-6);
  const int n = mdp.num_states();
  for (int s = 0; s < n; ++s) CHECK(fp.metric(s, s) == 0.0);
  int violations = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (fp.metric(a, c) > fp.metric(a, b) + fp.metric(b, c) + 1e-9) ++violations;
  CHECK(violations == 0);
  for (std::size_t k = 0; k + 1 < fp.residuals.size(); ++k)
    CHECK(fp.residuals[k + 1] <= 0.9 * fp.residuals[k] + 1e-12);
  CHECK(fp.residuals.back() < 1e-6 * (1.0 - 0.9));
}

TEST_CASE("policy attains the maximum with lowest-index ties") {
  const InducedMdp mdp = sampled_space(3, 6);
  const auto fp = solve_fixed_point(mdp, 0.9, 1e-6);
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int t = s; t < mdp.num_states(); ++t) {
      const Symbol a = fp.policy(s, t);
      const double best = operator_value(mdp, fp.metric, s, t, a);
      for (Symbol b = 0; b < mdp.alphabet_size(); ++b) {
        CHECK(operator_value(mdp, fp.metric, s, t, b) <= best + 1e-6);
      }
    }
  // identical components tie on every symbol
  CHECK(fp.policy(2, 2) == 0);
}

TEST_CASE("zero set is exactly bisimilarity") {
  const InducedMdp base = sampled_space(5, 7);
  Rng rng = make_stream(7, "test-plant");
  const Dfa& victim = base.state(2).dfa;
  const InducedMdp mdp =
      plant_duplicate(base, 2, oracle::permuted(victim, oracle::random_permutation(rng, victim.num_states())));
  const auto fp = solve_fixed_point(mdp, 0.9, 1e-6);
  const int n = mdp.num_states();
  for (int s = 0; s < n; ++s)
    for (int t = s; t < n; ++t)
      CHECK((fp.metric(s, t) <= 1e-6) == is_bisimilar(mdp.state(s).dfa, mdp.state(t).dfa));
  const auto zs = zero_set(fp.metric, 1e-6);
  CHECK(zs.size() == static_cast<std::size_t>(n) + 1);
  CHECK(std::find(zs.begin(), zs.end(), std::make_pair(2, n - 1)) != zs.end());
}

TEST_CASE("solver input validation and csv") {
  const InducedMdp mdp = sampled_space(1, 8);
  CHECK_THROWS_AS(solve_fixed_point(mdp, 1.0, 1e-6), ValidationError);
  CHECK_THROWS_AS(solve_fixed_point(mdp, 0.9, 0.0), ValidationError);
  const auto fp = solve_fixed_point(mdp, 0.9, 1e-6);
  std::ostringstream os;
  write_metric_csv(os, mdp, fp.metric);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == mdp.num_states() + 1);
  CHECK(residual_curve(mdp, 0.9, 1e-6) == fp.residuals);
}
