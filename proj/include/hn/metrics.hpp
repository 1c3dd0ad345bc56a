#pragma once

#include <cstdint>
#include <vector>

#include "hn/hn_graph.hpp"

namespace hn {

// Fixed-bin histogram with per-bin value accumulators (for bucketed means).
// Samples outside the edge range are clamped into the first/last bin.
struct Histogram {
  std::vector<double> edges;           // bins+1 ascending
  std::vector<std::uint64_t> counts;   // per bin
  std::vector<double> sums;            // per bin, sum of associated values
  std::uint64_t n = 0;
  double sum = 0;
  double sum_sq = 0;

  static Histogram uniform(double lo, double hi, std::size_t bins);

  std::size_t bin_of(double x) const;
  void add(double x) { add(x, x); }
  void add(double x, double value);

  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const;
  double bucket_center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double bucket_mean(std::size_t i) const {
    return counts[i] ? sums[i] / static_cast<double>(counts[i]) : 0.0;
  }
};

// Least-squares fit of log(count) against bucket centers over non-empty
// bins.
struct LinFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t points = 0;
};
LinFit fit_log_linear(const Histogram& hist);

Histogram degree_stats(const HnGraph& g);
Histogram edge_length_stats(const HnGraph& g);

// Closed-form upper bound on the probability that two nodes at distance l
// are directly connected when positions come from a Poisson process of
// density lambda.
double direct_edge_prob_bound(double l, double lambda, double p);

// True iff a single traversal reaches every node (empty graph: true).
bool is_connected(const HnGraph& g);

struct ThresholdResult {
  double r = 0;
  double lambda_min = 0;
  int increments_checked = 0;
  double step = 0;
};

// Sweeps lambda upward in `step` increments building `trials` radius-bounded
// graphs per value; a candidate must stay connected (every trial, each with
// at least one point) for the next 10 increments as well. Throws
// NoResultError if the sweep cap (1000/r^2 by default) is reached first.
// Trials within one density are independent jobs and may run on `jobs`
// threads without affecting the result.
ThresholdResult find_lambda_min(double r, double p, const Region& region, double step, int trials,
                                std::uint64_t seed, double lambda_cap = 0, int jobs = 1);

struct HopStats {
  Histogram by_distance;       // bucketed by pair distance; value = BFS hops
  std::uint64_t unreachable = 0;
};

// BFS hop counts over `pair_sample` random node pairs.
HopStats hop_stats(const HnGraph& g, std::size_t pair_sample, std::uint64_t seed);

// Distance stretch d_G/d over pairs whose separation lies in
// [distance - tol, distance + tol]; d_G is the Euclidean-weighted shortest
// path. Requires a connected graph on a torus region. All pairs are
// enumerated up to 2000 nodes, sampled (10^4) beyond.
Histogram stretch_distribution(const HnGraph& g, double distance, double tol, std::uint64_t seed);

// Empirical tail P(ht >= k), k = 0..max observed, over `trials` level draws
// for n unit-weight nodes (positions do not influence the height).
std::vector<double> height_tail(std::size_t trials, std::size_t n, double p, std::uint64_t seed);

// Same tail with n ~ Poisson(lambda * area) per trial.
std::vector<double> height_tail_poisson(std::size_t trials, double lambda, const Region& region,
                                        double p, std::uint64_t seed);

}  // namespace hn
