#include "hn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

#include "hn/csv.hpp"
#include "hn/dynamics.hpp"
#include "hn/error.hpp"
#include "hn/hn_graph.hpp"
#include "hn/metrics.hpp"
#include "hn/routing.hpp"
#include "hn/wsn.hpp"

namespace hn {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(jobs, static_cast<int>(n));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

namespace {

Region region_from(Config& cfg, const std::string& fallback_kind, double fallback_side) {
  const std::string kind = cfg.get_string("region", fallback_kind);
  const double side = cfg.get_double("side", fallback_side);
  if (kind == "square") return Region::square(side);
  if (kind == "torus") return Region::torus(side);
  throw ParameterError("config: region must be 'square' or 'torus', got '" + kind + "'");
}

PointSet points_from(Config& cfg, const Region& region, std::uint64_t seed) {
  const std::string kind = cfg.get_string("points", "poisson");
  if (kind == "poisson") {
    return poisson_points(region, cfg.get_double("lambda"), seed);
  }
  if (kind == "uniform") {
    return uniform_points(region, static_cast<std::size_t>(cfg.get_uint("n")), seed);
  }
  throw ParameterError("config: points must be 'poisson' or 'uniform', got '" + kind + "'");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_manifest(const Config& cfg, const std::string& out_dir) {
  std::ofstream out(join_path(out_dir, "manifest.txt"), std::ios::binary);
  if (!out) throw ParameterError("cannot write manifest in " + out_dir);
  out << "# resolved configuration (" << kVersion << ")\n" << cfg.manifest();
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0;
  const double m = mean_of(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(xs.size() - 1) * static_cast<double>(xs.size())));
}

// ---------------------------------------------------------------------- build

std::vector<std::string> run_build(Config& cfg, const std::string& out_dir) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const Region region = region_from(cfg, "square", 10.0);
  PointSet ps = points_from(cfg, region, seed);
  const Params params = Params::with_p(cfg.get_double("p", 0.5));
  const double radius = cfg.get_double("radius", 0.0);
  cfg.reject_unknown();

  HnGraph g =
      radius > 0
          ? build_radius_bounded(ps, WeightAssignment::unit(ps.size()), params,
                                 std::vector<double>(ps.size(), radius), seed)
          : build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);

  const std::string graph_path = join_path(out_dir, "graph.txt");
  write_graph_file(g, graph_path);

  CsvWriter summary(join_path(out_dir, "summary.csv"));
  summary.row({"n", "edges", "height", "mean_degree", "connected"});
  const double mean_degree =
      g.empty() ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.size());
  summary.row({std::to_string(g.size()), std::to_string(g.edge_count()),
               g.empty() ? "0" : std::to_string(g.height()), fmt_real(mean_degree),
               is_connected(g) ? "1" : "0"});
  return {graph_path, join_path(out_dir, "summary.csv")};
}

// --------------------------------------------------------------------- degree

std::vector<std::string> run_degree(Config& cfg, const std::string& out_dir, int jobs) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const Region region = region_from(cfg, "torus", 10.0);
  const double lambda = cfg.get_double("lambda", 200.0);
  const double p = cfg.get_double("p", 0.5);
  const int seeds = static_cast<int>(cfg.get_int("seeds", 200));
  const double heavy_weight = cfg.get_double("heavy_weight", 1.0);
  cfg.reject_unknown();
  const Params params = Params::with_p(p);

  std::vector<double> means(seeds), heavy_degrees(seeds);
  std::vector<std::vector<std::uint64_t>> hists(seeds);
  parallel_for(static_cast<std::size_t>(seeds), jobs, [&](std::size_t i) {
    const std::uint64_t s = derive_stream(seed, "degree-seed", i).next_u64();
    PointSet ps = poisson_points(region, lambda, s);
    WeightAssignment w = WeightAssignment::unit(ps.size());
    if (heavy_weight > 1.0 && !ps.points.empty()) {
      // The heavy node is the last generated point.
      w.w.back() = heavy_weight;
    }
    HnGraph g = build_graph(ps, w, params, s);
    std::vector<std::uint64_t> hist;
    double total = 0;
    for (const HnNode& n : g.nodes()) {
      const std::size_t d = g.degree(n.id);
      if (d >= hist.size()) hist.resize(d + 1, 0);
      hist[d] += 1;
      total += static_cast<double>(d);
    }
    means[i] = g.empty() ? 0.0 : total / static_cast<double>(g.size());
    heavy_degrees[i] =
        (heavy_weight > 1.0 && !g.empty())
            ? static_cast<double>(g.degree(g.nodes().back().id))
            : 0.0;
    hists[i] = std::move(hist);
  });

  std::vector<std::uint64_t> hist;
  for (const auto& h : hists) {
    if (h.size() > hist.size()) hist.resize(h.size(), 0);
    for (std::size_t d = 0; d < h.size(); ++d) hist[d] += h[d];
  }

  const std::string hist_path = join_path(out_dir, "degree_hist.csv");
  CsvWriter hist_csv(hist_path);
  hist_csv.row({"degree", "count"});
  for (std::size_t d = 0; d < hist.size(); ++d) {
    hist_csv.row({std::to_string(d), std::to_string(hist[d])});
  }

  const double bound_general = 1.0 / p + 6.0 / (p * (1.0 - p));
  const double bound_poisson = 7.0 / p;
  const std::string summary_path = join_path(out_dir, "degree_summary.csv");
  CsvWriter summary(summary_path);
  if (heavy_weight > 1.0) {
    const double heavy_bound =
        1.0 / p + (6.0 / p) * (std::log(heavy_weight) / std::log(1.0 / p) + 1.0 / (1.0 - p));
    summary.row({"seeds", "mean_degree", "std_error", "bound_poisson", "bound_general",
                 "heavy_mean", "heavy_std_error", "heavy_bound"});
    summary.row({std::to_string(seeds), fmt_real(mean_of(means)), fmt_real(std_error(means)),
                 fmt_real(bound_poisson), fmt_real(bound_general), fmt_real(mean_of(heavy_degrees)),
                 fmt_real(std_error(heavy_degrees)), fmt_real(heavy_bound)});
  } else {
    summary.row({"seeds", "mean_degree", "std_error", "bound_poisson", "bound_general"});
    summary.row({std::to_string(seeds), fmt_real(mean_of(means)), fmt_real(std_error(means)),
                 fmt_real(bound_poisson), fmt_real(bound_general)});
  }
  return {hist_path, summary_path};
}

// ----------------------------------------------------------------- lambda-min

std::vector<std::string> run_lambda_min(Config& cfg, const std::string& out_dir, int jobs) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const Region region = region_from(cfg, "square", 10.0);
  const double p = cfg.get_double("p", 0.5);
  const std::vector<double> rs = cfg.get_double_list("r", "0.6,1.0,1.6");
  const double step = cfg.get_double("step", 0.1);
  const int trials = static_cast<int>(cfg.get_int("trials", 20));
  const double cap = cfg.get_double("lambda_cap", 0.0);
  cfg.reject_unknown();

  std::vector<ThresholdResult> results(rs.size());
  std::vector<std::string> errors(rs.size());
  parallel_for(rs.size(), jobs, [&](std::size_t i) {
    try {
      results[i] = find_lambda_min(rs[i], p, region, step, trials,
                                   derive_stream(seed, "lambda-min-r", i).next_u64(), cap);
    } catch (const NoResultError& e) {
      errors[i] = e.what();
    }
  });

  const std::string path = join_path(out_dir, "lambda_min.csv");
  CsvWriter csv(path);
  csv.row({"r", "lambda_min", "lambda_r2", "increments_checked", "step", "trials", "status"});
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!errors[i].empty()) {
      csv.row({fmt_real(rs[i]), "", "", "", fmt_real(step), std::to_string(trials), "not-found"});
      continue;
    }
    const ThresholdResult& t = results[i];
    csv.row({fmt_real(t.r), fmt_real(t.lambda_min), fmt_real(t.lambda_min * t.r * t.r),
             std::to_string(t.increments_checked), fmt_real(t.step), std::to_string(trials),
             "ok"});
  }
  return {path};
}

// -------------------------------------------------------------------- stretch

std::vector<std::string> run_stretch(Config& cfg, const std::string& out_dir, int jobs) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const double side = cfg.get_double("side", 1.0);
  const Region region = Region::torus(side);
  const double lambda = cfg.get_double("lambda", 500.0);
  const double p = cfg.get_double("p", 0.5);
  const std::vector<double> distances = cfg.get_double_list("distance", "0.1,0.3");
  const double tol_frac = cfg.get_double("tol_frac", 0.05);
  const int instances = static_cast<int>(cfg.get_int("instances", 20));
  cfg.reject_unknown();
  const Params params = Params::with_p(p);

  struct Agg {
    Histogram hist = Histogram::uniform(1.0, 8.0, 70);
    std::uint64_t pairs = 0;
  };
  std::vector<std::vector<Histogram>> partial(distances.size());
  for (auto& v : partial) v.resize(static_cast<std::size_t>(instances), Histogram::uniform(1.0, 8.0, 70));

  parallel_for(static_cast<std::size_t>(instances), jobs, [&](std::size_t inst) {
    const std::uint64_t s = derive_stream(seed, "stretch-instance", inst).next_u64();
    PointSet ps = poisson_points(region, lambda, s);
    if (ps.size() == 0) return;
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, s);
    for (std::size_t di = 0; di < distances.size(); ++di) {
      try {
        partial[di][inst] = stretch_distribution(g, distances[di], distances[di] * tol_frac, s);
      } catch (const NoResultError&) {
        // no pairs in band for this instance; leave empty
      }
    }
  });

  const std::string hist_path = join_path(out_dir, "stretch_hist.csv");
  const std::string fit_path = join_path(out_dir, "stretch_fit.csv");
  CsvWriter hist_csv(hist_path);
  hist_csv.row({"distance", "bucket_lo", "bucket_hi", "count"});
  CsvWriter fit_csv(fit_path);
  fit_csv.row({"distance", "pairs", "slope", "intercept", "r2", "tail_frac_gt2"});
  for (std::size_t di = 0; di < distances.size(); ++di) {
    Agg agg;
    for (const Histogram& h : partial[di]) {
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        agg.hist.counts[b] += h.counts[b];
        agg.hist.sums[b] += h.sums[b];
      }
      agg.hist.n += h.n;
      agg.hist.sum += h.sum;
      agg.hist.sum_sq += h.sum_sq;
      agg.pairs += h.n;
    }
    for (std::size_t b = 0; b < agg.hist.counts.size(); ++b) {
      if (agg.hist.counts[b]) {
        hist_csv.row({fmt_real(distances[di]), fmt_real(agg.hist.edges[b]),
                      fmt_real(agg.hist.edges[b + 1]), std::to_string(agg.hist.counts[b])});
      }
    }
    const LinFit fit = fit_log_linear(agg.hist);
    std::uint64_t gt2 = 0;
    for (std::size_t b = 0; b < agg.hist.counts.size(); ++b) {
      if (agg.hist.edges[b] >= 2.0) gt2 += agg.hist.counts[b];
    }
    const double tail_frac =
        agg.pairs ? static_cast<double>(gt2) / static_cast<double>(agg.pairs) : 0.0;
    fit_csv.row({fmt_real(distances[di]), std::to_string(agg.pairs), fmt_real(fit.slope),
                 fmt_real(fit.intercept), fmt_real(fit.r2), fmt_real(tail_frac)});
  }
  return {hist_path, fit_path};
}

// ----------------------------------------------------------------------- hops

std::vector<std::string> run_hops(Config& cfg, const std::string& out_dir, int jobs) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const Region region = region_from(cfg, "torus", 10.0);
  const double lambda = cfg.get_double("lambda", 100.0);
  const double p = cfg.get_double("p", 0.5);
  const int instances = static_cast<int>(cfg.get_int("instances", 5));
  const std::size_t pairs = static_cast<std::size_t>(cfg.get_uint("pairs", 2000));
  cfg.reject_unknown();
  const Params params = Params::with_p(p);

  std::vector<HopStats> parts(static_cast<std::size_t>(instances));
  parallel_for(parts.size(), jobs, [&](std::size_t i) {
    const std::uint64_t s = derive_stream(seed, "hops-instance", i).next_u64();
    PointSet ps = poisson_points(region, lambda, s);
    if (ps.size() == 0) return;
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, s);
    parts[i] = hop_stats(g, pairs, s);
  });

  Histogram total = Histogram::uniform(0.0, region.diameter() * (1 + 1e-12), 12);
  std::uint64_t unreachable = 0;
  for (const HopStats& h : parts) {
    if (h.by_distance.counts.empty()) continue;
    for (std::size_t b = 0; b < total.counts.size(); ++b) {
      total.counts[b] += h.by_distance.counts[b];
      total.sums[b] += h.by_distance.sums[b];
    }
    total.n += h.by_distance.n;
    total.sum += h.by_distance.sum;
    total.sum_sq += h.by_distance.sum_sq;
    unreachable += h.unreachable;
  }

  const std::string path = join_path(out_dir, "hops.csv");
  CsvWriter csv(path);
  csv.row({"bucket_lo", "bucket_hi", "count", "mean_hops"});
  for (std::size_t b = 0; b < total.counts.size(); ++b) {
    csv.row({fmt_real(total.edges[b]), fmt_real(total.edges[b + 1]),
             std::to_string(total.counts[b]), fmt_real(total.bucket_mean(b))});
  }
  const std::string sum_path = join_path(out_dir, "hops_summary.csv");
  CsvWriter sum_csv(sum_path);
  sum_csv.row({"pairs", "unreachable"});
  sum_csv.row({std::to_string(total.n), std::to_string(unreachable)});
  return {path, sum_path};
}

// --------------------------------------------------------------------- height

std::vector<std::string> run_height(Config& cfg, const std::string& out_dir) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const double p = cfg.get_double("p", 0.5);
  const std::size_t trials = static_cast<std::size_t>(cfg.get_uint("trials", 10000));
  const double lambda = cfg.get_double("lambda", 0.0);
  std::vector<double> tail;
  double weight_total = 0;
  if (lambda > 0) {
    const Region region = region_from(cfg, "square", 10.0);
    cfg.reject_unknown();
    tail = height_tail_poisson(trials, lambda, region, p, seed);
    weight_total = lambda * region.area();
  } else {
    const std::size_t n = static_cast<std::size_t>(cfg.get_uint("n", 100));
    cfg.reject_unknown();
    tail = height_tail(trials, n, p, seed);
    weight_total = static_cast<double>(n);
  }

  const std::string path = join_path(out_dir, "height_tail.csv");
  CsvWriter csv(path);
  csv.row({"k", "tail", "union_bound"});
  for (std::size_t k = 0; k < tail.size(); ++k) {
    const double bound = std::min(1.0, weight_total * std::pow(p, static_cast<double>(k)));
    csv.row({std::to_string(k), fmt_real(tail[k]), fmt_real(bound)});
  }
  return {path};
}

// ---------------------------------------------------------------------- route

std::vector<std::string> run_route(Config& cfg, const std::string& out_dir) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const Region region = region_from(cfg, "square", 10.0);
  PointSet ps = points_from(cfg, region, seed);
  const Params params = Params::with_p(cfg.get_double("p", 0.5));
  const std::size_t pairs = static_cast<std::size_t>(cfg.get_uint("pairs", 100));
  const std::string protocol = cfg.get_string("protocol", "both");
  cfg.reject_unknown();
  if (protocol != "both" && protocol != "proactive" && protocol != "reactive") {
    throw ParameterError("config: protocol must be proactive, reactive or both");
  }

  HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
  if (g.empty()) throw ParameterError("route: empty graph");
  RoutingState state = build_directories(g);

  const std::string path = join_path(out_dir, "routes.csv");
  CsvWriter csv(path);
  csv.row({"src", "dst", "protocol", "hops", "flooded", "path"});
  RngStream pick = derive_stream(seed, "route-pairs");
  auto emit = [&](NodeId src, NodeId dst, const char* name, const RouteResult& r) {
    std::string pathfield;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      if (i) pathfield += ' ';
      pathfield += std::to_string(r.path[i]);
    }
    csv.row({std::to_string(src), std::to_string(dst), name, std::to_string(r.hops),
             std::to_string(r.flooded), pathfield});
  };
  for (std::size_t i = 0; i < pairs; ++i) {
    const NodeId src = g.node_at(static_cast<std::size_t>(pick.next_below(g.size()))).id;
    const NodeId dst = g.node_at(static_cast<std::size_t>(pick.next_below(g.size()))).id;
    if (protocol != "reactive") emit(src, dst, "proactive", proactive_route(g, state, src, dst));
    if (protocol != "proactive") emit(src, dst, "reactive", reactive_route(g, src, dst));
  }
  return {path};
}

// ------------------------------------------------------------------- dynamics

std::vector<std::string> run_dynamics(Config& cfg, const std::string& out_dir) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const Region region = region_from(cfg, "square", 10.0);
  PointSet ps = points_from(cfg, region, seed);
  const Params params = Params::with_p(cfg.get_double("p", 0.5));
  const std::string trace_path = cfg.get_string("trace");
  cfg.reject_unknown();

  std::ifstream in(trace_path);
  if (!in) throw ParameterError("dynamics: cannot open trace " + trace_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::vector<TraceEvent> events = parse_trace(buf.str());

  HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
  auto [final_graph, steps] = replay_trace(std::move(g), events, seed);

  const std::string graph_path = join_path(out_dir, "final_graph.txt");
  write_graph_file(final_graph, graph_path);
  const std::string delta_path = join_path(out_dir, "deltas.csv");
  CsvWriter csv(delta_path);
  csv.row({"event", "kind", "added_edges", "removed_edges", "reparented", "affected"});
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const char* kind = steps[i].event.kind == TraceEvent::Kind::add      ? "ADD"
                       : steps[i].event.kind == TraceEvent::Kind::remove ? "REMOVE"
                                                                         : "WEIGHT";
    csv.row({std::to_string(i), kind, std::to_string(steps[i].delta.added_edges.size()),
             std::to_string(steps[i].delta.removed_edges.size()),
             std::to_string(steps[i].delta.reparented.size()),
             std::to_string(steps[i].delta.affected.size())});
  }
  return {graph_path, delta_path};
}

// ------------------------------------------------------------------------ wsn

AggregationModel parse_aggregation(const std::string& label) {
  if (label == "unlimited") return AggregationModel::unlimited();
  if (label.rfind("limited", 0) == 0) {
    const std::string digits = label.substr(7);
    if (digits.empty()) throw ParameterError("aggregation: limited needs a ratio, e.g. limited20");
    return AggregationModel::limited(static_cast<unsigned>(std::stoul(digits)));
  }
  throw ParameterError("aggregation: unknown model '" + label + "'");
}

EnergyConfig energy_from(Config& cfg) {
  EnergyConfig e;
  e.e_elec = cfg.get_double("e_elec", e.e_elec);
  e.eps_fs = cfg.get_double("eps_fs", e.eps_fs);
  e.e_da = cfg.get_double("e_da", e.e_da);
  e.signal_bytes = static_cast<unsigned>(cfg.get_uint("signal_bytes", e.signal_bytes));
  e.header_bytes = static_cast<unsigned>(cfg.get_uint("header_bytes", e.header_bytes));
  e.bandwidth_bps = cfg.get_double("bandwidth_bps", e.bandwidth_bps);
  e.init_energy = cfg.get_double("init_energy", e.init_energy);
  e.death_threshold = cfg.get_double("death_threshold", e.death_threshold);
  e.round_seconds = cfg.get_double("round_seconds", e.round_seconds);
  e.bs_x = cfg.get_double("bs_x", e.bs_x);
  e.bs_y = cfg.get_double("bs_y", e.bs_y);
  e.validate();
  return e;
}

std::vector<std::string> run_wsn(Config& cfg, const std::string& out_dir, int jobs) {
  const std::uint64_t seed = cfg.get_uint("seed", 1);
  const double side = cfg.get_double("side", 100.0);
  const Region region = Region::square(side);
  const std::size_t n = static_cast<std::size_t>(cfg.get_uint("n", 100));
  const double p = cfg.get_double("p", 0.5);
  const unsigned k = static_cast<unsigned>(cfg.get_uint("k", 5));
  const EnergyConfig energy = energy_from(cfg);
  const std::vector<std::string> runs =
      cfg.get_string_list("protocols", "hn-unlimited,hn-limited10,hn-limited20,leach");
  cfg.reject_unknown();

  PointSet ps = uniform_points(region, n, seed);
  std::vector<SimResult> results(runs.size());
  parallel_for(runs.size(), jobs, [&](std::size_t i) {
    const std::string& label = runs[i];
    if (label == "leach") {
      results[i] = run_leach_baseline(ps, energy, k, seed);
    } else if (label.rfind("hn-", 0) == 0) {
      results[i] = run_hn_simulation(ps, energy, parse_aggregation(label.substr(3)), p, seed);
    } else {
      throw ParameterError("wsn: unknown protocol '" + label + "'");
    }
  });

  const std::string rounds_path = join_path(out_dir, "rounds.csv");
  CsvWriter rounds(rounds_path);
  rounds.row({"round", "t_seconds", "nodes_alive", "raw_signals", "effective_signals",
              "cum_effective", "energy_j", "cum_energy_j", "protocol", "aggregation"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string protocol = runs[i] == "leach" ? "leach" : "hn";
    const std::string aggregation = runs[i] == "leach" ? "head-fusion" : runs[i].substr(3);
    for (const RoundStats& r : results[i].rounds) {
      rounds.row({std::to_string(r.round), fmt_real(r.t_seconds), std::to_string(r.nodes_alive),
                  std::to_string(r.raw_signals), std::to_string(r.effective_signals),
                  std::to_string(r.cum_effective), fmt_real(r.energy_j), fmt_real(r.cum_energy_j),
                  protocol, aggregation});
    }
  }

  const std::string a_path = join_path(out_dir, "fig4a.csv");
  const std::string b_path = join_path(out_dir, "fig4b.csv");
  const std::string c_path = join_path(out_dir, "fig4c.csv");
  CsvWriter fa(a_path), fb(b_path), fc(c_path);
  fa.row({"run", "t_seconds", "cum_effective"});
  fb.row({"run", "cum_energy_j", "cum_effective"});
  fc.row({"run", "t_seconds", "nodes_alive"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (const RoundStats& r : results[i].rounds) {
      fa.row({runs[i], fmt_real(r.t_seconds), std::to_string(r.cum_effective)});
      fb.row({runs[i], fmt_real(r.cum_energy_j), std::to_string(r.cum_effective)});
      fc.row({runs[i], fmt_real(r.t_seconds), std::to_string(r.nodes_alive)});
    }
  }

  const std::string sum_path = join_path(out_dir, "wsn_summary.csv");
  CsvWriter sum(sum_path);
  sum.row({"run", "rounds", "cum_effective", "cum_energy_j", "eff_per_joule",
           "max_deaths_per_round", "conservation_rel_err"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SimResult& r = results[i];
    const std::uint64_t eff = r.rounds.empty() ? 0 : r.rounds.back().cum_effective;
    const double energy_total = r.rounds.empty() ? 0.0 : r.rounds.back().cum_energy_j;
    double residual_drop = 0;
    for (double res : r.final_residual) residual_drop += energy.init_energy - res;
    const double rel_err =
        residual_drop > 0 ? std::fabs(r.consumed_total - residual_drop) / residual_drop : 0.0;
    sum.row({runs[i], std::to_string(r.rounds.size()), std::to_string(eff),
             fmt_real(energy_total),
             fmt_real(energy_total > 0 ? static_cast<double>(eff) / energy_total : 0.0),
             std::to_string(r.max_deaths_per_round), fmt_real(rel_err)});
  }
  return {rounds_path, a_path, b_path, c_path, sum_path};
}

}  // namespace

std::vector<std::string> run_experiment(Config& cfg, const std::string& out_dir, int jobs) {
  fs::create_directories(out_dir);
  const std::string kind = cfg.get_string("experiment");
  std::vector<std::string> artifacts;
  if (kind == "build") {
    artifacts = run_build(cfg, out_dir);
  } else if (kind == "degree") {
    artifacts = run_degree(cfg, out_dir, jobs);
  } else if (kind == "lambda-min") {
    artifacts = run_lambda_min(cfg, out_dir, jobs);
  } else if (kind == "stretch") {
    artifacts = run_stretch(cfg, out_dir, jobs);
  } else if (kind == "hops") {
    artifacts = run_hops(cfg, out_dir, jobs);
  } else if (kind == "height") {
    artifacts = run_height(cfg, out_dir);
  } else if (kind == "route") {
    artifacts = run_route(cfg, out_dir);
  } else if (kind == "dynamics") {
    artifacts = run_dynamics(cfg, out_dir);
  } else if (kind == "wsn") {
    artifacts = run_wsn(cfg, out_dir, jobs);
  } else {
    throw ParameterError("config: unknown experiment kind '" + kind + "'");
  }
  write_manifest(cfg, out_dir);
  artifacts.push_back(join_path(out_dir, "manifest.txt"));
  return artifacts;
}

}  // namespace hn
