#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hn/hn_graph.hpp"

namespace hn {

// Exact difference between the graph before and after one repair.
struct GraphDelta {
  struct Reparent {
    NodeId node = 0;
    std::optional<NodeId> old_parent;
    std::optional<NodeId> new_parent;
    friend bool operator==(const Reparent&, const Reparent&) = default;
  };

  std::vector<EdgeRecord> added_edges;    // sorted
  std::vector<EdgeRecord> removed_edges;  // sorted
  std::vector<Reparent> reparented;       // sorted by node, excludes added/removed node
  std::vector<NodeId> affected;           // sorted; superset of all endpoints above

  bool empty() const {
    return added_edges.empty() && removed_edges.empty() && reparented.empty() && affected.empty();
  }
};

// Inserts a node at `position` with the given weight; its level is drawn
// from `stream`. Nodes whose nearest-higher search or ball the new node
// perturbs are locally reconnected. For radius-bounded graphs the repair
// runs on the unbounded structure and is re-filtered; `radius` is the new
// node's transmission radius (ignored for unbounded graphs).
std::pair<HnGraph, GraphDelta> add_node(const HnGraph& g, double x, double y, double weight,
                                        RngStream& stream,
                                        double radius = std::numeric_limits<double>::infinity());

// Removes a node; orphaned children re-run their parent search against the
// survivors. Levels of survivors never change.
std::pair<HnGraph, GraphDelta> remove_node(const HnGraph& g, NodeId id);

// Re-derives the node's level as det(new_weight) + stored probabilistic
// increment and locally reconnects everything the level change perturbs.
std::pair<HnGraph, GraphDelta> update_weight(const HnGraph& g, NodeId id, double new_weight);

// Event-trace replay: one event per line, `ADD x y w`, `REMOVE id`,
// `WEIGHT id w`; '#' starts a comment.
struct TraceEvent {
  enum class Kind { add, remove, weight };
  Kind kind = Kind::add;
  double x = 0, y = 0, w = 1;
  NodeId id = 0;
};

std::vector<TraceEvent> parse_trace(const std::string& text);

struct ReplayStep {
  TraceEvent event;
  GraphDelta delta;
};

std::pair<HnGraph, std::vector<ReplayStep>> replay_trace(HnGraph g,
                                                         const std::vector<TraceEvent>& events,
                                                         std::uint64_t seed);

// From-scratch reconstruction of the unbounded connection structure for the
// graph's current positions and levels (the repair oracle).
HnGraph rebuild_from_levels(const HnGraph& g);

}  // namespace hn
