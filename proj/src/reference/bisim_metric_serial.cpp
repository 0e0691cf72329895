#include <algorithm>
#include <cmath>

#include "dfarl/bisim_metric.hpp"

namespace dfarl {

namespace detail {
void check_solver_inputs(const InducedMdp& mdp, double gamma, double alpha);
}

namespace reference {

FixedPoint solve_fixed_point(const InducedMdp& mdp, double gamma, double alpha) {
  detail::check_solver_inputs(mdp, gamma, alpha);
  const int n = mdp.num_states();
  const int max_iter = absolute_iteration_bound(gamma, alpha);

  FixedPoint out{MetricTable(n, gamma), PairPolicy(n), {}};
  for (int iter = 0; iter < max_iter; ++iter) {
    MetricTable next(n, gamma);
    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
      for (int t = s; t < n; ++t) {
        double best = -1.0;
        Symbol arg = 0;
        for (Symbol a = 0; a < mdp.alphabet_size(); ++a) {
          const double v = operator_value(mdp, out.metric, s, t, a);
          if (v > best) {
            best = v;
            arg = a;
          }
        }
        next.values()[MetricTable::pair_index(s, t)] = best;
        out.policy.values()[MetricTable::pair_index(s, t)] = arg;
        residual = std::max(residual, std::abs(best - out.metric(s, t)));
      }
    }
    next.residual = residual;
    next.iterations = iter + 1;
    out.metric = std::move(next);
    out.residuals.push_back(residual);
    if (residual < alpha * (1.0 - gamma)) break;
  }
  return out;
}

}  // namespace reference
}  // namespace dfarl
