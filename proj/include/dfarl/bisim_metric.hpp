#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dfarl/dfa_space.hpp"

namespace dfarl {

/// Dense symmetric distance table over the states of an induced MDP. Each
/// unordered pair is stored once, so symmetry is exact.
class MetricTable {
 public:
  MetricTable() = default;
  MetricTable(int n, double gamma) : n_(n), gamma_(gamma), d_(num_pairs(n), 0.0) {}

  static std::size_t num_pairs(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2; }
  static std::size_t pair_index(int s, int t) {
    if (s > t) std::swap(s, t);
    return static_cast<std::size_t>(t) * (t + 1) / 2 + s;
  }

  int size() const { return n_; }
  double gamma() const { return gamma_; }
  double operator()(int s, int t) const { return d_[pair_index(s, t)]; }
  std::vector<double>& values() { return d_; }
  const std::vector<double>& values() const { return d_; }

  double residual = 0.0;  // sup-norm of the last update
  int iterations = 0;

 private:
  int n_ = 0;
  double gamma_ = 0.0;
  std::vector<double> d_;
};

/// Maximizing symbol per unordered pair; ties go to the lowest symbol.
class PairPolicy {
 public:
  PairPolicy() = default;
  explicit PairPolicy(int n) : n_(n), a_(MetricTable::num_pairs(n), 0) {}

  int size() const { return n_; }
  Symbol operator()(int s, int t) const { return a_[MetricTable::pair_index(s, t)]; }
  std::vector<Symbol>& values() { return a_; }
  const std::vector<Symbol>& values() const { return a_; }

 private:
  int n_ = 0;
  std::vector<Symbol> a_;
};

struct FixedPoint {
  MetricTable metric;
  PairPolicy policy;
  std::vector<double> residuals;  // residuals[k] = sup |d^{k+1} - d^k|
};

/// ceil(ln alpha / ln gamma): iterations after which the error is at most
/// alpha times the largest distance.
int iteration_count(double gamma, double alpha);

/// Iterations after which the absolute sup-norm error is at most alpha, given
/// rewards in [-1, 1]: ceil(ln(alpha (1 - gamma) / 2) / ln gamma) + 1.
int absolute_iteration_bound(double gamma, double alpha);

/// One-step operator value of symbol a at pair (s, t) under distances d.
inline double operator_value(const InducedMdp& mdp, const MetricTable& d, int s, int t, Symbol a) {
  const double gap = std::abs(mdp.reward(s, a) - mdp.reward(t, a));
  return gap + d.gamma() * d(mdp.next(s, a), mdp.next(t, a));
}

/**
 * Bisimulation metric of a deterministic induced MDP as the fixed point of
 *   d(s,t) <- max_a |R(s,a) - R(t,a)| + gamma d(T(s,a), T(t,a)).
 *
 * Starts from d = 0 and applies synchronous (double-buffered) updates until the
 * residual drops below alpha (1 - gamma), which bounds the sup-norm error by
 * alpha. Pairs are updated in parallel with OpenMP; results are bit-identical to
 * reference::solve_fixed_point.
 */
FixedPoint solve_fixed_point(const InducedMdp& mdp, double gamma, double alpha);

/// Residual per iteration of the same solve.
std::vector<double> residual_curve(const InducedMdp& mdp, double gamma, double alpha);

/// Unordered pairs (s <= t) with distance at most `tolerance`, diagonal included.
std::vector<std::pair<int, int>> zero_set(const MetricTable& metric, double tolerance);

/// Distance matrix CSV with canonical hashes labelling rows and columns.
void write_metric_csv(std::ostream& os, const InducedMdp& mdp, const MetricTable& metric);

namespace reference {

// Single-threaded version of the solver, kept as the oracle for the parallel kernel.
FixedPoint solve_fixed_point(const InducedMdp& mdp, double gamma, double alpha);

}  // namespace reference

}  // namespace dfarl
