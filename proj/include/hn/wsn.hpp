#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hn/geometry.hpp"

namespace hn {

// Radio and aggregation energy constants (first-order radio model with the
// free-space d^2 amplifier on every hop, including node-to-base-station).
struct EnergyConfig {
  double e_elec = 50e-9;        // J/bit
  double eps_fs = 10e-12;       // J/bit/m^2
  double e_da = 5e-9;           // J/bit/signal
  unsigned signal_bytes = 500;
  unsigned header_bytes = 25;
  double bandwidth_bps = 1e6;
  double init_energy = 2.0;     // J
  double death_threshold = 0.1; // J
  double round_seconds = 20.0;
  double bs_x = 50.0;           // base station sits outside the field
  double bs_y = 175.0;

  double packet_bits() const { return (signal_bytes + header_bytes) * 8.0; }
  double signal_bits() const { return signal_bytes * 8.0; }
  void validate() const;
};

double energy_tx(double bits, double d, const EnergyConfig& cfg);
double energy_rx(double bits, const EnergyConfig& cfg);

struct AggregationModel {
  enum class Kind { unlimited, limited };
  Kind kind = Kind::unlimited;
  unsigned ratio = 1;  // max raw signals represented per fused packet

  static AggregationModel unlimited() { return {Kind::unlimited, 1}; }
  static AggregationModel limited(unsigned ratio);
  std::string label() const;
};

struct AggregateResult {
  std::vector<std::uint64_t> packets;  // effective count carried per outgoing packet
  std::uint64_t signals_fused = 0;     // incoming packets + the node's own signal
  double e_da_cost = 0;                // J
};

// Fuses the incoming packets plus the node's own sensed signal: unlimited
// puts the whole total into one packet; limited(r) emits ceil(total/r)
// packets each carrying at most r effectives. Aggregation energy is
// e_da * signal_bits * signals_fused.
AggregateResult aggregate(const std::vector<std::uint64_t>& incoming_effective,
                          const AggregationModel& model, const EnergyConfig& cfg);

struct RoundStats {
  int round = 0;            // 1-based
  double t_seconds = 0;
  std::uint64_t nodes_alive = 0;        // at round end
  std::uint64_t raw_signals = 0;        // sensed this round
  std::uint64_t effective_signals = 0;  // delivered to the BS this round
  std::uint64_t bs_packets = 0;
  std::uint64_t deaths = 0;
  double energy_j = 0;
  std::uint64_t cum_raw = 0;
  std::uint64_t cum_effective = 0;
  double cum_energy_j = 0;
};

struct SimResult {
  std::vector<RoundStats> rounds;
  std::vector<double> final_residual;  // per original node id
  double init_energy_total = 0;
  double consumed_total = 0;
  std::size_t lifetime_rounds = 0;     // rounds until the last node died
  std::uint64_t max_deaths_per_round = 0;
};

// Round-based data collation over the hierarchy: the network is rebuilt
// every round over the alive nodes with weight w(u) = batt_u / batt_th
// (clamped at 1); leaves transmit one sensed signal to their parent,
// interior nodes fuse incoming packets with their own signal and forward,
// top-level (or parentless) nodes transmit to the base station. Deaths are
// applied at round end; the effective count of a packet is the number of raw
// signals it represents.
SimResult run_hn_simulation(const PointSet& points, const EnergyConfig& cfg,
                            const AggregationModel& model, double p, std::uint64_t seed);

// LEACH-style baseline: k cluster heads per round, rotated uniformly among
// alive nodes that have not yet served in the current epoch; members
// transmit to their nearest head; each head fuses all member signals plus
// its own into one signal and transmits it to the base station. Each
// BS-received aggregated signal counts as one delivered signal.
SimResult run_leach_baseline(const PointSet& points, const EnergyConfig& cfg, unsigned k,
                             std::uint64_t seed);

}  // namespace hn
