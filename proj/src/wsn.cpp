#include "hn/wsn.hpp"

#include <algorithm>
#include <cmath>

#include "hn/error.hpp"
#include "hn/hn_graph.hpp"

namespace hn {

void EnergyConfig::validate() const {
  const double fields[] = {e_elec,     eps_fs,          e_da,          bandwidth_bps,
                           init_energy, death_threshold, round_seconds};
  for (double f : fields) {
    if (!(f > 0) || !std::isfinite(f)) throw ParameterError("energy config: fields must be positive");
  }
  if (signal_bytes == 0 || header_bytes == 0) {
    throw ParameterError("energy config: packet sizes must be positive");
  }
  if (!(death_threshold < init_energy)) {
    throw ParameterError("energy config: death threshold must be below initial energy");
  }
}

double energy_tx(double bits, double d, const EnergyConfig& cfg) {
  if (bits < 0 || d < 0) throw ParameterError("energy_tx: negative input");
  return bits * cfg.e_elec + bits * cfg.eps_fs * d * d;
}

double energy_rx(double bits, const EnergyConfig& cfg) {
  if (bits < 0) throw ParameterError("energy_rx: negative input");
  return bits * cfg.e_elec;
}

AggregationModel AggregationModel::limited(unsigned ratio) {
  if (ratio < 1) throw ParameterError("aggregation: limited ratio must be >= 1");
  return {Kind::limited, ratio};
}

std::string AggregationModel::label() const {
  if (kind == Kind::unlimited) return "unlimited";
  return "limited" + std::to_string(ratio);
}

AggregateResult aggregate(const std::vector<std::uint64_t>& incoming_effective,
                          const AggregationModel& model, const EnergyConfig& cfg) {
  AggregateResult out;
  std::uint64_t total = 1;  // the node's own sensed signal
  for (std::uint64_t e : incoming_effective) total += e;
  out.signals_fused = incoming_effective.size() + 1;
  out.e_da_cost = cfg.e_da * cfg.signal_bits() * static_cast<double>(out.signals_fused);
  if (model.kind == AggregationModel::Kind::unlimited) {
    out.packets.push_back(total);
  } else {
    std::uint64_t left = total;
    while (left > 0) {
      const std::uint64_t take = std::min<std::uint64_t>(model.ratio, left);
      out.packets.push_back(take);
      left -= take;
    }
  }
  return out;
}

namespace {

struct BatteryState {
  std::vector<double> residual;
  std::vector<char> alive;

  explicit BatteryState(std::size_t n, double init)
      : residual(n, init), alive(n, 1) {}

  std::vector<std::size_t> alive_ids() const {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (alive[i]) ids.push_back(i);
    }
    return ids;
  }
};

void finish_round(SimResult& result, RoundStats stats, BatteryState& batt,
                  const std::vector<std::size_t>& ids, const std::vector<double>& spent,
                  const EnergyConfig& cfg) {
  double round_energy = 0;
  std::uint64_t deaths = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    round_energy += spent[k];
    batt.residual[ids[k]] -= spent[k];
    if (batt.residual[ids[k]] < cfg.death_threshold) {
      batt.alive[ids[k]] = 0;
      ++deaths;
    }
  }
  stats.energy_j = round_energy;
  stats.deaths = deaths;
  stats.nodes_alive = ids.size() - deaths;
  const RoundStats* prev = result.rounds.empty() ? nullptr : &result.rounds.back();
  stats.cum_raw = (prev ? prev->cum_raw : 0) + stats.raw_signals;
  stats.cum_effective = (prev ? prev->cum_effective : 0) + stats.effective_signals;
  stats.cum_energy_j = (prev ? prev->cum_energy_j : 0) + stats.energy_j;
  result.consumed_total += round_energy;
  result.max_deaths_per_round = std::max(result.max_deaths_per_round, deaths);
  result.rounds.push_back(stats);
}

}  // namespace

SimResult run_hn_simulation(const PointSet& points, const EnergyConfig& cfg,
                            const AggregationModel& model, double p, std::uint64_t seed) {
  cfg.validate();
  if (points.size() == 0) throw ParameterError("run_hn_simulation: empty point set");
  const Params params = Params::with_p(p);
  const std::size_t n = points.size();

  SimResult result;
  result.final_residual.assign(n, cfg.init_energy);
  result.init_energy_total = cfg.init_energy * static_cast<double>(n);
  BatteryState batt(n, cfg.init_energy);

  const double pkt_bits = cfg.packet_bits();

  for (int round = 1;; ++round) {
    const std::vector<std::size_t> ids = batt.alive_ids();
    if (ids.empty()) break;

    // Rebuild the hierarchy over alive nodes with residual-energy weights.
    PointSet sub;
    sub.region = points.region;
    sub.seed = seed;
    WeightAssignment weights;
    std::vector<int> det(ids.size()), inc(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      Point pt;
      pt.id = static_cast<NodeId>(k);
      pt.x = points.points[ids[k]].x;
      pt.y = points.points[ids[k]].y;
      sub.points.push_back(pt);
      const double w = std::max(1.0, batt.residual[ids[k]] / cfg.death_threshold);
      weights.w.push_back(w);
      det[k] = det_level(w, p);
      RngStream stream = derive_stream(seed, "wsn-level", static_cast<std::uint64_t>(round),
                                       static_cast<std::uint64_t>(ids[k]));
      inc[k] = stream.geometric(p);
    }
    HnGraph g = build_with_levels(sub, weights, params, det, inc);

    // Data flows bottom-up; rounds are atomic, so the topology built at the
    // start of the round is used throughout it.
    std::vector<std::size_t> order(ids.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const int la = g.node(static_cast<NodeId>(a)).level();
      const int lb = g.node(static_cast<NodeId>(b)).level();
      if (la != lb) return la < lb;
      return a < b;
    });

    std::vector<std::vector<std::uint64_t>> incoming(ids.size());
    std::vector<double> spent(ids.size(), 0.0);
    RoundStats stats;
    stats.round = round;
    stats.t_seconds = round * cfg.round_seconds;
    stats.raw_signals = ids.size();

    for (std::size_t k : order) {
      const HnNode& u = g.node(static_cast<NodeId>(k));
      std::vector<std::uint64_t> packets;
      if (incoming[k].empty()) {
        // Leaf duty (level 0 or childless): one sensed signal, nothing to
        // fuse.
        packets.push_back(1);
      } else {
        AggregateResult agg = aggregate(incoming[k], model, cfg);
        spent[k] += agg.e_da_cost;
        packets = std::move(agg.packets);
      }
      if (u.parent) {
        const std::size_t pk = static_cast<std::size_t>(*u.parent);
        const double d = g.dist(u.id, *u.parent);
        for (std::uint64_t eff : packets) {
          spent[k] += energy_tx(pkt_bits, d, cfg);
          spent[pk] += energy_rx(pkt_bits, cfg);
          incoming[pk].push_back(eff);
        }
      } else {
        const double d = std::hypot(u.x - cfg.bs_x, u.y - cfg.bs_y);
        for (std::uint64_t eff : packets) {
          spent[k] += energy_tx(pkt_bits, d, cfg);
          stats.effective_signals += eff;
          stats.bs_packets += 1;
        }
      }
    }

    finish_round(result, stats, batt, ids, spent, cfg);
  }

  result.final_residual = batt.residual;
  result.lifetime_rounds = result.rounds.size();
  return result;
}

SimResult run_leach_baseline(const PointSet& points, const EnergyConfig& cfg, unsigned k,
                             std::uint64_t seed) {
  cfg.validate();
  if (points.size() == 0) throw ParameterError("run_leach_baseline: empty point set");
  if (k < 1) throw ParameterError("run_leach_baseline: k must be >= 1");
  const std::size_t n = points.size();

  SimResult result;
  result.final_residual.assign(n, cfg.init_energy);
  result.init_energy_total = cfg.init_energy * static_cast<double>(n);
  BatteryState batt(n, cfg.init_energy);
  std::vector<char> headed(n, 0);  // served as head in the current epoch

  const double pkt_bits = cfg.packet_bits();

  for (int round = 1;; ++round) {
    const std::vector<std::size_t> ids = batt.alive_ids();
    if (ids.empty()) break;

    // Head rotation: uniform among alive nodes that have not yet served this
    // epoch; when the pool runs dry a new epoch starts.
    std::vector<std::size_t> candidates;
    for (std::size_t id : ids) {
      if (!headed[id]) candidates.push_back(id);
    }
    const std::size_t nheads = std::min<std::size_t>(k, ids.size());
    if (candidates.size() < nheads) {
      std::fill(headed.begin(), headed.end(), 0);
      candidates = ids;
    }
    RngStream pick = derive_stream(seed, "leach-heads", static_cast<std::uint64_t>(round));
    std::vector<std::size_t> heads;
    for (std::size_t h = 0; h < nheads; ++h) {
      const std::size_t j = h + static_cast<std::size_t>(pick.next_below(candidates.size() - h));
      std::swap(candidates[h], candidates[j]);
      heads.push_back(candidates[h]);
    }
    std::sort(heads.begin(), heads.end());
    for (std::size_t h : heads) headed[h] = 1;

    std::vector<double> spent_by_id(n, 0.0);
    std::vector<std::uint64_t> members(heads.size(), 0);
    RoundStats stats;
    stats.round = round;
    stats.t_seconds = round * cfg.round_seconds;
    stats.raw_signals = ids.size();

    for (std::size_t id : ids) {
      if (std::binary_search(heads.begin(), heads.end(), id)) continue;
      // Join the nearest head (lowest id on ties).
      std::size_t best = heads[0];
      double best_d2 = std::numeric_limits<double>::infinity();
      std::size_t best_slot = 0;
      for (std::size_t h = 0; h < heads.size(); ++h) {
        const double dx = points.points[id].x - points.points[heads[h]].x;
        const double dy = points.points[id].y - points.points[heads[h]].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
          best_d2 = d2;
          best = heads[h];
          best_slot = h;
        }
      }
      const double d = std::sqrt(best_d2);
      spent_by_id[id] += energy_tx(pkt_bits, d, cfg);
      spent_by_id[best] += energy_rx(pkt_bits, cfg);
      members[best_slot] += 1;
    }

    for (std::size_t h = 0; h < heads.size(); ++h) {
      const std::size_t id = heads[h];
      // Fuse all member signals plus the head's own into one signal.
      spent_by_id[id] +=
          cfg.e_da * cfg.signal_bits() * static_cast<double>(members[h] + 1);
      const double d = std::hypot(points.points[id].x - cfg.bs_x, points.points[id].y - cfg.bs_y);
      spent_by_id[id] += energy_tx(pkt_bits, d, cfg);
      stats.effective_signals += 1;  // one aggregated signal reaches the BS
      stats.bs_packets += 1;
    }

    std::vector<double> spent(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) spent[i] = spent_by_id[ids[i]];
    finish_round(result, stats, batt, ids, spent, cfg);
  }

  result.final_residual = batt.residual;
  result.lifetime_rounds = result.rounds.size();
  return result;
}

}  // namespace hn
