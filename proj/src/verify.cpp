#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <vector>

#include "hn/dynamics.hpp"
#include "hn/error.hpp"
#include "hn/experiments.hpp"
#include "hn/hn_graph.hpp"
#include "hn/metrics.hpp"
#include "hn/routing.hpp"
#include "hn/wsn.hpp"

namespace hn {

namespace {

struct Reporter {
  std::ostream& out;
  bool ok = true;

  void check(const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "PASS" : "FAIL") << "  " << name << ": " << detail << "\n";
    ok = ok && pass;
  }
};

std::vector<int> bfs_from(const HnGraph& g, NodeId src) {
  std::vector<int> dist(g.size(), -1);
  std::deque<std::size_t> queue{g.index_of(src)};
  dist[g.index_of(src)] = 0;
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

void verify_degree_bounds(Reporter& rep) {
  const Params params = Params::with_p(0.5);
  const Region region = Region::torus(6.0);
  std::vector<double> means;
  for (int s = 0; s < 30; ++s) {
    const std::uint64_t seed = derive_stream(9000, "verify-degree", s).next_u64();
    PointSet ps = poisson_points(region, 50.0, seed);
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
    means.push_back(2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.size()));
  }
  double m = 0;
  for (double x : means) m += x;
  m /= static_cast<double>(means.size());
  double ss = 0;
  for (double x : means) ss += (x - m) * (x - m);
  const double se = std::sqrt(ss / (means.size() * (means.size() - 1.0)));
  char buf[160];
  std::snprintf(buf, sizeof(buf), "mean degree %.3f (+3se %.3f) vs 7/p = 14", m, m + 3 * se);
  rep.check("degree-poisson-bound", m + 3 * se < 14.0, buf);
  std::snprintf(buf, sizeof(buf), "mean degree %.3f (+3se %.3f) vs 1/p + 6/(p(1-p)) = 26", m,
                m + 3 * se);
  rep.check("degree-general-bound", m + 3 * se < 26.0, buf);
}

void verify_height_tail(Reporter& rep) {
  const std::size_t trials = 3000, n = 100;
  const double p = 0.5;
  const std::vector<double> tail = height_tail(trials, n, p, 9001);
  double worst = 1e9;
  bool pass = true;
  for (std::size_t k = 0; k < tail.size(); ++k) {
    if (tail[k] <= 0) continue;
    const double bound = std::min(1.0, static_cast<double>(n) * std::pow(p, static_cast<double>(k)));
    // Standard error of the empirical tail estimate.
    const double sigma = std::sqrt(tail[k] * (1 - tail[k]) / static_cast<double>(trials));
    const double margin = bound + 3 * sigma - tail[k];
    worst = std::min(worst, margin);
    if (margin < 0) pass = false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "min margin (bound + 3sigma - tail) = %.5f over %zu trials",
                worst, trials);
  rep.check("height-tail-union-bound", pass, buf);
}

void verify_lambda_min(Reporter& rep) {
  const Region region = Region::square(10.0);
  std::vector<double> products;
  for (double r : {0.6, 1.0, 1.6}) {
    try {
      const ThresholdResult t = find_lambda_min(r, 0.5, region, 0.5, 5, 9002);
      products.push_back(t.lambda_min * r * r);
      char buf[160];
      std::snprintf(buf, sizeof(buf), "r=%.1f lambda_min=%.2f lambda_min*r^2=%.2f vs [2.9,4.4]", r,
                    t.lambda_min, products.back());
      rep.check("lambda-min-band", products.back() >= 2.9 && products.back() <= 4.4, buf);
    } catch (const NoResultError&) {
      rep.check("lambda-min-band", false, "no confirmed threshold below the sweep cap");
    }
  }
  if (products.size() >= 2) {
    const double lo = *std::min_element(products.begin(), products.end());
    const double hi = *std::max_element(products.begin(), products.end());
    const double spread = (hi - lo) / hi;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "lambda_min*r^2 spread %.1f%% vs 25%%", spread * 100);
    rep.check("lambda-min-constancy", spread <= 0.25, buf);
  }
}

void verify_repair_oracle(Reporter& rep) {
  const Params params = Params::with_p(0.5);
  const Region region = Region::square(10.0);
  int failures = 0;
  const int sequences = 50, events = 20;
  for (int s = 0; s < sequences; ++s) {
    const std::uint64_t seed = derive_stream(9003, "verify-repair", s).next_u64();
    PointSet ps = uniform_points(region, 30, seed);
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
    RngStream ops = derive_stream(seed, "ops");
    for (int e = 0; e < events; ++e) {
      const std::uint64_t kind = ops.next_below(3);
      try {
        if (kind == 0 || g.size() < 3) {
          RngStream level_stream = derive_stream(seed, "add-level", e);
          auto [next, delta] = add_node(g, ops.next_unit() * region.side,
                                        ops.next_unit() * region.side,
                                        1.0 + ops.next_unit() * 15.0, level_stream);
          g = std::move(next);
        } else if (kind == 1) {
          const std::size_t pick = static_cast<std::size_t>(ops.next_below(g.size()));
          auto [next, delta] = remove_node(g, g.node_at(pick).id);
          g = std::move(next);
        } else {
          const std::size_t pick = static_cast<std::size_t>(ops.next_below(g.size()));
          auto [next, delta] =
              update_weight(g, g.node_at(pick).id, 1.0 + ops.next_unit() * 15.0);
          g = std::move(next);
        }
      } catch (const OverflowError&) {
        // astronomically unlikely; skip the event
      }
    }
    if (!g.structurally_equal(rebuild_from_levels(g))) ++failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d/%d sequences diverged from the from-scratch rebuild",
                failures, sequences);
  rep.check("repair-rebuild-equivalence", failures == 0, buf);
}

void verify_routing_oracle(Reporter& rep) {
  const Params params = Params::with_p(0.5);
  const Region region = Region::square(6.0);
  int bad_paths = 0, below_bfs = 0, failures = 0, pairs_checked = 0;
  for (int s = 0; s < 20; ++s) {
    const std::uint64_t seed = derive_stream(9004, "verify-routing", s).next_u64();
    PointSet ps = poisson_points(region, 4.0, seed);
    if (ps.size() < 2) continue;
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
    RoutingState state = build_directories(g);
    RngStream pick = derive_stream(seed, "pairs");
    for (int q = 0; q < 50; ++q) {
      const NodeId src = g.node_at(static_cast<std::size_t>(pick.next_below(g.size()))).id;
      const NodeId dst = g.node_at(static_cast<std::size_t>(pick.next_below(g.size()))).id;
      const std::vector<int> bfs = bfs_from(g, src);
      ++pairs_checked;
      try {
        for (const RouteResult& r :
             {proactive_route(g, state, src, dst), reactive_route(g, src, dst)}) {
          for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
            if (!g.has_edge(r.path[i], r.path[i + 1])) ++bad_paths;
          }
          if (r.path.front() != src || r.path.back() != dst) ++bad_paths;
          if (static_cast<int>(r.hops) < bfs[g.index_of(dst)]) ++below_bfs;
        }
      } catch (const UnreachableError&) {
        ++failures;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d pairs: %d invalid path steps, %d below BFS distance, %d unreachable",
                pairs_checked, bad_paths, below_bfs, failures);
  rep.check("routing-validity", bad_paths == 0 && below_bfs == 0 && failures == 0, buf);
}

void verify_energy_conservation(Reporter& rep) {
  EnergyConfig cfg;
  PointSet ps = uniform_points(Region::square(100.0), 30, 9005);
  for (const char* label : {"hn", "leach"}) {
    SimResult r = std::string(label) == "hn"
                      ? run_hn_simulation(ps, cfg, AggregationModel::unlimited(), 0.5, 9005)
                      : run_leach_baseline(ps, cfg, 5, 9005);
    double residual_drop = 0;
    for (double res : r.final_residual) residual_drop += cfg.init_energy - res;
    const double rel = std::fabs(r.consumed_total - residual_drop) / residual_drop;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s relative error %.3e vs 1e-9", label, rel);
    rep.check("energy-conservation", rel < 1e-9, buf);
  }
}

}  // namespace

bool run_verify_suite(const std::string& name, std::ostream& out) {
  Reporter rep{out};
  if (name == "degree-bounds") {
    verify_degree_bounds(rep);
  } else if (name == "height-tail") {
    verify_height_tail(rep);
  } else if (name == "lambda-min") {
    verify_lambda_min(rep);
  } else if (name == "repair-oracle") {
    verify_repair_oracle(rep);
  } else if (name == "routing-oracle") {
    verify_routing_oracle(rep);
  } else if (name == "energy-conservation") {
    verify_energy_conservation(rep);
  } else {
    throw ParameterError(
        "verify: unknown suite '" + name +
        "' (known: degree-bounds, height-tail, lambda-min, repair-oracle, routing-oracle, "
        "energy-conservation)");
  }
  return rep.ok;
}

}  // namespace hn
