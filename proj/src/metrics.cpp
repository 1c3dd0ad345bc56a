#include "hn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <queue>
#include <unordered_map>

#include "hn/error.hpp"
#include "hn/experiments.hpp"

namespace hn {

Histogram Histogram::uniform(double lo, double hi, std::size_t bins) {
  if (!(hi > lo) || bins == 0) throw ParameterError("histogram: need hi > lo and bins > 0");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  h.sums.assign(bins, 0.0);
  return h;
}

std::size_t Histogram::bin_of(double x) const {
  if (x < edges.front()) return 0;
  if (x >= edges.back()) return counts.size() - 1;
  const double w = (edges.back() - edges.front()) / static_cast<double>(counts.size());
  auto i = static_cast<std::size_t>((x - edges.front()) / w);
  if (i >= counts.size()) i = counts.size() - 1;
  // Guard against rounding at bin boundaries.
  while (i > 0 && x < edges[i]) --i;
  while (i + 1 < counts.size() && x >= edges[i + 1]) ++i;
  return i;
}

void Histogram::add(double x, double value) {
  const std::size_t i = bin_of(x);
  counts[i] += 1;
  sums[i] += value;
  n += 1;
  sum += value;
  sum_sq += value * value;
}

double Histogram::variance() const {
  if (n < 2) return 0.0;
  const double m = mean();
  return (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
}

LinFit fit_log_linear(const Histogram& hist) {
  LinFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    if (hist.counts[i] == 0) continue;
    const double x = hist.bucket_center(i);
    const double y = std::log(static_cast<double>(hist.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  fit.points = m;
  if (m < 2) return fit;
  const double dm = static_cast<double>(m);
  const double denom = dm * sxx - sx * sx;
  if (denom == 0) return fit;
  fit.slope = (dm * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / dm;
  const double ss_tot = syy - sy * sy / dm;
  double ss_res = 0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    if (hist.counts[i] == 0) continue;
    const double x = hist.bucket_center(i);
    const double y = std::log(static_cast<double>(hist.counts[i]));
    const double e = y - (fit.slope * x + fit.intercept);
    ss_res += e * e;
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

Histogram degree_stats(const HnGraph& g) {
  std::size_t max_deg = 0;
  for (const HnNode& n : g.nodes()) max_deg = std::max(max_deg, g.degree(n.id));
  Histogram h = Histogram::uniform(0.0, static_cast<double>(max_deg + 1),
                                   std::max<std::size_t>(max_deg + 1, 1));
  for (const HnNode& n : g.nodes()) h.add(static_cast<double>(g.degree(n.id)));
  return h;
}

Histogram edge_length_stats(const HnGraph& g) {
  std::vector<double> lengths;
  lengths.reserve(g.edge_count());
  for (const EdgeRecord& e : g.sorted_edges()) lengths.push_back(g.dist(e.u, e.v));
  double hi = 0;
  for (double l : lengths) hi = std::max(hi, l);
  if (hi <= 0) hi = 1.0;
  Histogram h = Histogram::uniform(0.0, hi * (1.0 + 1e-12), 64);
  for (double l : lengths) h.add(l);
  return h;
}

double direct_edge_prob_bound(double l, double lambda, double p) {
  if (!(l > 0)) throw ParameterError("direct_edge_prob_bound: l must be positive");
  if (!(lambda > 0)) throw ParameterError("direct_edge_prob_bound: lambda must be positive");
  if (!(p > 0) || !(p < 1)) throw ParameterError("direct_edge_prob_bound: p in (0,1) required");
  const double x = lambda * std::numbers::pi * l * l * p;
  const double integral = (1.0 - std::exp(-x) * (x + 1.0)) / std::log(1.0 / p);
  const double peak = 4.0 / (std::numbers::e * std::numbers::e);
  return (2.0 * (1.0 - p) / (x * x)) * (integral + peak);
}

bool is_connected(const HnGraph& g) {
  if (g.empty()) return true;
  std::vector<char> seen(g.size(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (NodeId nb : g.neighbors(g.node_at(cur).id)) {
      const std::size_t ni = g.index_of(nb);
      if (!seen[ni]) {
        seen[ni] = 1;
        ++visited;
        queue.push_back(ni);
      }
    }
  }
  return visited == g.size();
}

ThresholdResult find_lambda_min(double r, double p, const Region& region, double step, int trials,
                                std::uint64_t seed, double lambda_cap, int jobs) {
  if (!(r > 0)) throw ParameterError("find_lambda_min: r must be positive");
  if (!(step > 0)) throw ParameterError("find_lambda_min: step must be positive");
  if (trials <= 0) throw ParameterError("find_lambda_min: trials must be positive");
  const Params params = Params::with_p(p);
  if (lambda_cap <= 0) lambda_cap = 1000.0 / (r * r);

  auto run_trial = [&](int idx, int t) -> bool {
    const double lambda = idx * step;
    const std::uint64_t trial_seed =
        derive_stream(seed, "lambda-min", static_cast<std::uint64_t>(idx), t).next_u64();
    PointSet ps = poisson_points(region, lambda, trial_seed);
    if (ps.size() == 0) return false;
    const std::vector<double> radius(ps.size(), r);
    HnGraph g =
        build_radius_bounded(ps, WeightAssignment::unit(ps.size()), params, radius, trial_seed);
    return is_connected(g);
  };

  // pass(i): every trial at lambda = i*step yields a non-empty connected
  // radius-bounded graph. Memoized so the confirmation window never redraws.
  std::vector<signed char> memo;  // -1 unknown, 0 fail, 1 pass
  int checked = 0;
  auto pass = [&](int idx) -> bool {
    if (static_cast<std::size_t>(idx) >= memo.size()) memo.resize(idx + 1, -1);
    if (memo[idx] != -1) return memo[idx] == 1;
    ++checked;
    bool ok = true;
    if (jobs <= 1) {
      for (int t = 0; t < trials && ok; ++t) ok = run_trial(idx, t);
    } else {
      std::vector<char> results(static_cast<std::size_t>(trials), 0);
      parallel_for(static_cast<std::size_t>(trials), jobs,
                   [&](std::size_t t) { results[t] = run_trial(idx, static_cast<int>(t)); });
      ok = std::all_of(results.begin(), results.end(), [](char c) { return c != 0; });
    }
    memo[idx] = ok ? 1 : 0;
    return ok;
  };

  const int max_idx = static_cast<int>(lambda_cap / step);
  for (int idx = 1; idx + 10 <= max_idx; ++idx) {
    if (!pass(idx)) continue;
    bool confirmed = true;
    for (int j = 1; j <= 10; ++j) {
      if (!pass(idx + j)) {
        confirmed = false;
        break;
      }
    }
    if (confirmed) {
      return ThresholdResult{r, idx * step, checked, step};
    }
  }
  throw NoResultError("find_lambda_min: no confirmed threshold below the sweep cap");
}

namespace {

std::vector<int> bfs_hops(const HnGraph& g, std::size_t src_index) {
  std::vector<int> dist(g.size(), -1);
  std::deque<std::size_t> queue{src_index};
  dist[src_index] = 0;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (NodeId nb : g.neighbors(g.node_at(cur).id)) {
      const std::size_t ni = g.index_of(nb);
      if (dist[ni] < 0) {
        dist[ni] = dist[cur] + 1;
        queue.push_back(ni);
      }
    }
  }
  return dist;
}

std::vector<double> dijkstra(const HnGraph& g, std::size_t src_index) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src_index] = 0;
  heap.emplace(0.0, src_index);
  while (!heap.empty()) {
    const auto [d, cur] = heap.top();
    heap.pop();
    if (d > dist[cur]) continue;
    const HnNode& cn = g.node_at(cur);
    for (NodeId nb : g.neighbors(cn.id)) {
      const std::size_t ni = g.index_of(nb);
      const double nd = d + std::sqrt(g.dist_sq(cn, g.node_at(ni)));
      if (nd < dist[ni]) {
        dist[ni] = nd;
        heap.emplace(nd, ni);
      }
    }
  }
  return dist;
}

}  // namespace

HopStats hop_stats(const HnGraph& g, std::size_t pair_sample, std::uint64_t seed) {
  if (g.empty()) throw ParameterError("hop_stats: empty graph");
  HopStats out;
  out.by_distance = Histogram::uniform(0.0, g.region().diameter() * (1 + 1e-12), 12);
  RngStream pick = derive_stream(seed, "hop-pairs");
  std::unordered_map<std::size_t, std::vector<int>> bfs_cache;
  for (std::size_t s = 0; s < pair_sample; ++s) {
    const std::size_t a = static_cast<std::size_t>(pick.next_below(g.size()));
    const std::size_t b = static_cast<std::size_t>(pick.next_below(g.size()));
    auto it = bfs_cache.find(a);
    if (it == bfs_cache.end()) it = bfs_cache.emplace(a, bfs_hops(g, a)).first;
    const int hops = it->second[b];
    if (hops < 0) {
      ++out.unreachable;
      continue;
    }
    const double d = std::sqrt(g.dist_sq(g.node_at(a), g.node_at(b)));
    out.by_distance.add(d, static_cast<double>(hops));
  }
  return out;
}

Histogram stretch_distribution(const HnGraph& g, double distance, double tol,
                               std::uint64_t seed) {
  if (g.region().kind != Region::Kind::torus) {
    throw ParameterError("stretch_distribution: torus region required");
  }
  if (!(distance > 0) || !(tol >= 0) || tol >= distance) {
    throw ParameterError("stretch_distribution: need 0 <= tol < distance");
  }
  if (!is_connected(g)) throw ParameterError("stretch_distribution: graph must be connected");

  const double lo = distance - tol, hi = distance + tol;
  const double lo_sq = lo * lo, hi_sq = hi * hi;
  std::vector<std::pair<std::size_t, std::size_t>> band;
  const std::size_t n = g.size();
  if (n <= 2000) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d2 = g.dist_sq(g.node_at(i), g.node_at(j));
        if (d2 >= lo_sq && d2 <= hi_sq) band.emplace_back(i, j);
      }
    }
  } else {
    RngStream pick = derive_stream(seed, "stretch-pairs");
    constexpr std::size_t kSamples = 10000;
    for (std::size_t s = 0; s < kSamples; ++s) {
      const std::size_t i = static_cast<std::size_t>(pick.next_below(n));
      const std::size_t j = static_cast<std::size_t>(pick.next_below(n));
      if (i == j) continue;
      const double d2 = g.dist_sq(g.node_at(i), g.node_at(j));
      if (d2 >= lo_sq && d2 <= hi_sq) band.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  if (band.empty()) throw NoResultError("stretch_distribution: no pairs in the distance band");

  std::sort(band.begin(), band.end());
  Histogram hist = Histogram::uniform(1.0, 8.0, 70);
  std::vector<double> dist_from;
  std::size_t cached_src = static_cast<std::size_t>(-1);
  for (const auto& [i, j] : band) {
    if (i != cached_src) {
      dist_from = dijkstra(g, i);
      cached_src = i;
    }
    const double d = std::sqrt(g.dist_sq(g.node_at(i), g.node_at(j)));
    hist.add(dist_from[j] / d);
  }
  return hist;
}

std::vector<double> height_tail(std::size_t trials, std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw ParameterError("height_tail: n must be >= 1");
  if (trials == 0) throw ParameterError("height_tail: trials must be >= 1");
  const Params params = Params::with_p(p);
  std::vector<std::uint64_t> ht_count;  // ht_count[h] = trials with height exactly h
  for (std::size_t t = 0; t < trials; ++t) {
    int ht = 0;
    for (std::size_t i = 0; i < n; ++i) {
      RngStream stream = derive_stream(seed, "height-trial", t, i);
      ht = std::max(ht, assign_level(1.0, params, stream));
    }
    if (static_cast<std::size_t>(ht) >= ht_count.size()) ht_count.resize(ht + 1, 0);
    ht_count[ht] += 1;
  }
  std::vector<double> tail(ht_count.size() + 1, 0.0);
  std::uint64_t at_least = 0;
  for (std::size_t k = ht_count.size(); k-- > 0;) {
    at_least += ht_count[k];
    tail[k] = static_cast<double>(at_least) / static_cast<double>(trials);
  }
  tail.back() = 0.0;
  return tail;
}

std::vector<double> height_tail_poisson(std::size_t trials, double lambda, const Region& region,
                                        double p, std::uint64_t seed) {
  if (!(lambda > 0)) throw ParameterError("height_tail_poisson: lambda must be positive");
  if (trials == 0) throw ParameterError("height_tail_poisson: trials must be >= 1");
  const Params params = Params::with_p(p);
  std::vector<std::uint64_t> ht_count;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream count_stream = derive_stream(seed, "height-poisson-count", t);
    const std::uint64_t n = count_stream.poisson(lambda * region.area());
    int ht = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      RngStream stream = derive_stream(seed, "height-poisson-trial", t, i);
      ht = std::max(ht, assign_level(1.0, params, stream));
    }
    if (static_cast<std::size_t>(ht) >= ht_count.size()) ht_count.resize(ht + 1, 0);
    ht_count[ht] += 1;
  }
  std::vector<double> tail(ht_count.size() + 1, 0.0);
  std::uint64_t at_least = 0;
  for (std::size_t k = ht_count.size(); k-- > 0;) {
    at_least += ht_count[k];
    tail[k] = static_cast<double>(at_least) / static_cast<double>(trials);
  }
  tail.back() = 0.0;
  return tail;
}

}  // namespace hn
