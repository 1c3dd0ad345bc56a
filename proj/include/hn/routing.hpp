#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hn/hn_graph.hpp"

namespace hn {

// First node of level >= i on u's parent chain (u itself when lev(u) >= i).
// Throws UnreachableError if the chain ends below i (possible in
// radius-bounded graphs, or when i exceeds the height).
NodeId ancestor(const HnGraph& g, NodeId u, int i);

// Connected component of u in the subgraph induced on {v : lev(v) >= i}.
// Sorted ids. Requires lev(u) >= i.
std::vector<NodeId> component_at_level(const HnGraph& g, NodeId u, int i);

struct DirEntry {
  NodeId next_hop = 0;
  int hops = 0;

  friend bool operator==(const DirEntry&, const DirEntry&) = default;
};

// Per-node, per-level directories built by the bottom-up hierarchical
// distance-vector sweep. directory(u, i) exists for 0 <= i <= lev(u); every
// next hop is a graph neighbor of u.
class RoutingState {
 public:
  const std::map<NodeId, DirEntry>& directory(NodeId u, int level) const;
  int directory_levels(NodeId u) const;  // lev(u) + 1

  // Best entry for dst over all of u's directories (smallest hop count, then
  // lowest next-hop id, then lowest level). Null if absent everywhere.
  const DirEntry* lookup(NodeId u, NodeId dst) const;

  bool fully_connected() const { return fully_connected_; }
  std::size_t component_count() const { return component_count_; }
  std::uint64_t built_for() const { return fingerprint_; }

 private:
  friend RoutingState build_directories(const HnGraph& g);
  std::vector<NodeId> ids_;                                    // graph index -> id
  std::vector<std::vector<std::map<NodeId, DirEntry>>> dirs_;  // [index][level]
  std::uint64_t fingerprint_ = 0;
  bool fully_connected_ = true;
  std::size_t component_count_ = 1;
  std::size_t index_of(NodeId id) const;
};

// Structural fingerprint used to pin a RoutingState to the graph it was
// built for.
std::uint64_t graph_fingerprint(const HnGraph& g);

// Bottom-up sweep: at each level i the level-i nodes run synchronous
// distance-vector rounds over their level-i (same-level) edges, advertising
// themselves and everything consolidated from below; afterwards each level-i
// node pushes its consolidated table to its parent, which stores it in the
// directory for the next processed level. On a disconnected graph the state
// is still built (partial) and fully_connected() reports false.
RoutingState build_directories(const HnGraph& g);

struct RouteResult {
  std::vector<NodeId> path;  // src..dst along graph edges
  std::size_t hops = 0;
  std::size_t flooded = 0;   // distinct nodes that processed the query (reactive only)
};

// Walks up src's ancestor chain to the first level whose directory lists
// dst, then descends along directory next hops.
RouteResult proactive_route(const HnGraph& g, const RoutingState& state, NodeId src, NodeId dst);

// Hierarchical controlled flooding: phase k floods the slice around
// anc_k(src) (same-level edges plus parent links pointing down), stopping at
// the first phase that finds dst.
RouteResult reactive_route(const HnGraph& g, NodeId src, NodeId dst);

}  // namespace hn
