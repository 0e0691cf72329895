#include "dfarl/bisim_metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dfarl/errors.hpp"

namespace dfarl {

int iteration_count(double gamma, double alpha) {
  require(gamma > 0.0 && gamma < 1.0, "iteration_count: gamma must be in (0, 1)");
  require(alpha > 0.0 && alpha < 1.0, "iteration_count: alpha must be in (0, 1)");
  return static_cast<int>(std::ceil(std::log(alpha) / std::log(gamma)));
}

int absolute_iteration_bound(double gamma, double alpha) {
  require(gamma > 0.0 && gamma < 1.0, "gamma must be in (0, 1)");
  require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
  return static_cast<int>(std::ceil(std::log(alpha * (1.0 - gamma) / 2.0) / std::log(gamma))) + 1;
}

namespace detail {

void check_solver_inputs(const InducedMdp& mdp, double gamma, double alpha) {
  require(gamma > 0.0 && gamma < 1.0, "solve_fixed_point: gamma must be in (0, 1)");
  require(alpha > 0.0 && alpha < 1.0, "solve_fixed_point: alpha must be in (0, 1)");
  require(mdp.num_states() > 0, "solve_fixed_point: empty mdp");
  for (int s = 0; s < mdp.num_states(); ++s)
    for (Symbol a = 0; a < mdp.alphabet_size(); ++a) {
      const int t = mdp.next(s, a);
      require(t >= 0 && t < mdp.num_states(), "solve_fixed_point: mdp is not closed");
    }
}

}  // namespace detail

FixedPoint solve_fixed_point(const InducedMdp& mdp, double gamma, double alpha) {
  detail::check_solver_inputs(mdp, gamma, alpha);
  const int n = mdp.num_states();
  const int k = mdp.alphabet_size();
  const int max_iter = absolute_iteration_bound(gamma, alpha);
  const double stop = alpha * (1.0 - gamma);

  FixedPoint out{MetricTable(n, gamma), PairPolicy(n), {}};
  MetricTable next(n, gamma);
  for (int iter = 0; iter < max_iter; ++iter) {
    const MetricTable& prev = out.metric;
    std::vector<double>& dst = next.values();
    std::vector<Symbol>& pol = out.policy.values();
    double residual = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : residual)
    for (int t = 0; t < n; ++t) {
      for (int s = 0; s <= t; ++s) {
        double best = -1.0;
        Symbol arg = 0;
        for (Symbol a = 0; a < k; ++a) {
          const double v = operator_value(mdp, prev, s, t, a);
          if (v > best) {
            best = v;
            arg = a;
          }
        }
        const std::size_t idx = MetricTable::pair_index(s, t);
        dst[idx] = best;
        pol[idx] = arg;
        residual = std::max(residual, std::abs(best - prev.values()[idx]));
      }
    }
    std::swap(out.metric.values(), next.values());
    out.metric.residual = residual;
    out.metric.iterations = iter + 1;
    out.residuals.push_back(residual);
    if (residual < stop) break;
  }
  return out;
}

std::vector<double> residual_curve(const InducedMdp& mdp, double gamma, double alpha) {
  return solve_fixed_point(mdp, gamma, alpha).residuals;
}

std::vector<std::pair<int, int>> zero_set(const MetricTable& metric, double tolerance) {
  std::vector<std::pair<int, int>> out;
  for (int t = 0; t < metric.size(); ++t)
    for (int s = 0; s <= t; ++s)
      if (metric(s, t) <= tolerance) out.emplace_back(s, t);
  return out;
}

void write_metric_csv(std::ostream& os, const InducedMdp& mdp, const MetricTable& metric) {
  os << "hash";
  for (const auto& c : mdp.states()) os << ',' << hash_hex(c.hash);
  os << '\n';
  char buf[32];
  for (int s = 0; s < metric.size(); ++s) {
    os << hash_hex(mdp.state(s).hash);
    for (int t = 0; t < metric.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", metric(s, t));
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace dfarl
