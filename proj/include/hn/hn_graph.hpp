#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hn/geometry.hpp"
#include "hn/rng.hpp"

namespace hn {

// Construction parameters. p is the per-round promotion probability;
// max_level_cap guards against (astronomically unlikely) runaway promotion
// streaks.
struct Params {
  double p = 0.5;
  int max_level_cap = 64;

  static Params with_p(double p);
  void validate() const;
};

// Per-node weights; battery power is c*w(u) with w >= 1 for any functioning
// node.
struct WeightAssignment {
  std::vector<double> w;

  static WeightAssignment unit(std::size_t n) { return WeightAssignment{std::vector<double>(n, 1.0)}; }
  void validate() const;
};

// floor(log_{1/p} weight), computed with integer stepping so exact powers do
// not suffer from rounding (e.g. weight 8, p 0.5 -> 3).
int det_level(double weight, double p);

// Draws the probabilistic promotion increment and returns det + increment.
// Throws OverflowError if the cap binds.
int assign_level(double weight, const Params& params, RngStream& stream);

struct HnNode {
  NodeId id = 0;
  double x = 0;
  double y = 0;
  double weight = 1.0;
  int det = 0;       // deterministic promotion floor(log_{1/p} w)
  int prob_inc = 0;  // stored geometric increment
  std::optional<NodeId> parent;

  int level() const { return det + prob_inc; }
};

// Creation level plus which endpoint(s) initiated the connection. Same-level
// edges may be initiated from both sides; cross-level edges only by the
// lower node.
struct EdgeData {
  int level = 0;
  bool init_lo = false;
  bool init_hi = false;
};

inline std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct EdgeRecord {
  NodeId u = 0;
  NodeId v = 0;  // u < v
  int level = 0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
  friend auto operator<=>(const EdgeRecord&, const EdgeRecord&) = default;
};

// A built hierarchical neighbor graph. Nodes are kept sorted by id (ids stay
// stable across repairs, so they may become non-dense after removals).
class HnGraph {
 public:
  HnGraph() = default;

  const Region& region() const { return region_; }
  const Params& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<HnNode>& nodes() const { return nodes_; }
  bool has_node(NodeId id) const;
  const HnNode& node(NodeId id) const;         // throws NotFoundError
  std::size_t index_of(NodeId id) const;       // throws NotFoundError
  const HnNode& node_at(std::size_t i) const { return nodes_[i]; }

  const std::vector<NodeId>& neighbors(NodeId id) const;
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(NodeId a, NodeId b) const { return edges_.count(edge_key(a, b)) != 0; }
  const EdgeData& edge(NodeId a, NodeId b) const;  // throws NotFoundError
  const std::unordered_map<std::uint64_t, EdgeData>& edges() const { return edges_; }
  std::vector<EdgeRecord> sorted_edges() const;

  // Maximum level over nodes; throws NoResultError on an empty graph.
  int height() const;

  // S_i = {u : lev(u) >= i} for i = 0..height, ids sorted. Empty graph gives
  // an empty sequence.
  std::vector<std::vector<NodeId>> level_sets() const;

  bool radius_bounded() const { return !radius_limit_.empty(); }
  // Transmission radius of a node (infinity when the graph is unbounded).
  double radius_of(NodeId id) const;

  double dist_sq(const HnNode& a, const HnNode& b) const {
    return distance_sq(a.x, a.y, b.x, b.y, region_);
  }
  double dist(NodeId a, NodeId b) const;

  bool structurally_equal(const HnGraph& other, bool check_initiators = true) const;

 private:
  friend struct GraphBuilder;
  friend class GraphEditor;

  Region region_;
  Params params_;
  std::uint64_t seed_ = 0;
  std::vector<HnNode> nodes_;                     // sorted by id
  std::vector<std::vector<NodeId>> adj_;          // parallel to nodes_, sorted
  std::unordered_map<std::uint64_t, EdgeData> edges_;
  std::vector<double> radius_limit_;              // parallel to nodes_; empty if unbounded
};

// Levels drawn per node from streams derived off `seed`, then connections
// per the construction rule: each node links to its nearest strictly-higher
// neighbor(s) (all of them on ties; the lowest id becomes the parent) and to
// every same-level node not farther than the parent. Top-level nodes have an
// unbounded ball, which makes the top level a clique.
HnGraph build_graph(const PointSet& points, const WeightAssignment& weights, const Params& params,
                    std::uint64_t seed);

// Same construction with explicit level assignments (deterministic; used by
// repair oracles and hand-traced tests).
HnGraph build_with_levels(const PointSet& points, const WeightAssignment& weights,
                          const Params& params, const std::vector<int>& det,
                          const std::vector<int>& prob_inc);

// Radius-bounded variant: identical level draws for the same seed; every
// connection whose initiator would have to transmit farther than its radius
// is suppressed, and a node whose nearest higher neighbor is beyond its
// radius keeps no parent. Always a subgraph of the unbounded build.
HnGraph build_radius_bounded(const PointSet& points, const WeightAssignment& weights,
                             const Params& params, const std::vector<double>& radius,
                             std::uint64_t seed);

HnGraph build_radius_bounded_with_levels(const PointSet& points, const WeightAssignment& weights,
                                         const Params& params, const std::vector<int>& det,
                                         const std::vector<int>& prob_inc,
                                         const std::vector<double>& radius);

// Serialized line-oriented text format; bit-exact round trip.
std::string serialize_graph(const HnGraph& g);
HnGraph parse_graph(const std::string& text);
void write_graph_file(const HnGraph& g, const std::string& path);
HnGraph read_graph_file(const std::string& path);

// Internal construction and mutation primitives shared by the builders and
// the repair operations. Not part of the public surface.
struct GraphBuilder {
  static void add_initiation(std::unordered_map<std::uint64_t, EdgeData>& edges, NodeId u,
                             NodeId v, int level);
  static void rebuild_adjacency(HnGraph& g);
  static HnGraph make(const PointSet& points, const WeightAssignment& weights,
                      const Params& params, const std::vector<int>& det,
                      const std::vector<int>& inc, std::uint64_t seed);
  static void apply_radius_filter(HnGraph& g, const std::vector<double>& radius);
  static std::vector<int> draw_increments(const WeightAssignment& weights, const Params& params,
                                          std::uint64_t seed, std::vector<int>& det_out);
  static HnGraph from_parts(Region region, Params params, std::uint64_t seed,
                            std::vector<HnNode> nodes,
                            std::unordered_map<std::uint64_t, EdgeData> edges,
                            std::vector<double> radius);
};

namespace detail {
// Result of one node's connection search against a fixed level assignment.
struct ConnSearch {
  double ball_sq = std::numeric_limits<double>::infinity();
  std::vector<NodeId> nearest_higher;  // all minimal-distance higher nodes, sorted by id
  std::vector<NodeId> same_level_ball; // same-level nodes with d^2 <= ball_sq (excl. self)
};

// Brute-force reference search; the grid index must match it exactly.
ConnSearch conn_search_brute(const std::vector<HnNode>& nodes, std::size_t ui,
                             const Region& region);

// Recomputes one node's connections against the current graph state.
ConnSearch conn_search_graph(const HnGraph& g, NodeId id);
}  // namespace detail

}  // namespace hn
