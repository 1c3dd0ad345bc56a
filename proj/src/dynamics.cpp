#include "hn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hn/error.hpp"

namespace hn {

// Mutation primitives over a graph's private state (friend of HnGraph). All
// repairs boil down to: adjust the node set / levels, then recompute the
// initiations of exactly the nodes whose connection search the change can
// perturb. Initiation sets are pure functions of positions and levels, so
// recomputation order never matters.
class GraphEditor {
 public:
  static void link(HnGraph& g, NodeId a, NodeId b) {
    insert_sorted(g.adj_[g.index_of(a)], b);
    insert_sorted(g.adj_[g.index_of(b)], a);
  }

  static void unlink(HnGraph& g, NodeId a, NodeId b) {
    erase_sorted(g.adj_[g.index_of(a)], b);
    erase_sorted(g.adj_[g.index_of(b)], a);
  }

  // Drops every initiation made by `id`; removes edges left with no
  // initiator.
  static void clear_initiations(HnGraph& g, NodeId id) {
    const std::vector<NodeId> nbs = g.adj_[g.index_of(id)];
    for (NodeId nb : nbs) {
      const std::uint64_t key = edge_key(id, nb);
      auto it = g.edges_.find(key);
      EdgeData& e = it->second;
      if (id < nb) {
        e.init_lo = false;
      } else {
        e.init_hi = false;
      }
      if (!e.init_lo && !e.init_hi) {
        g.edges_.erase(it);
        unlink(g, id, nb);
      }
    }
  }

  // Re-runs the connection search for `id` against the current nodes and
  // rebuilds its initiations (parent, circumference links, same-level ball).
  static void recompute_connections(HnGraph& g, NodeId id) {
    clear_initiations(g, id);
    const std::size_t ui = g.index_of(id);
    detail::ConnSearch cs = detail::conn_search_brute(g.nodes_, ui, g.region_);
    HnNode& u = g.nodes_[ui];
    u.parent = cs.nearest_higher.empty() ? std::optional<NodeId>{} : cs.nearest_higher.front();
    auto initiate = [&](NodeId v) {
      const bool existed = g.edges_.count(edge_key(id, v)) != 0;
      const int level = std::min(u.level(), g.node(v).level());
      GraphBuilder::add_initiation(g.edges_, id, v, level);
      if (!existed) link(g, id, v);
    };
    for (NodeId v : cs.nearest_higher) initiate(v);
    for (NodeId v : cs.same_level_ball) initiate(v);
  }

  static void insert_node(HnGraph& g, const HnNode& node, double radius) {
    g.nodes_.push_back(node);
    g.adj_.emplace_back();
    if (!g.radius_limit_.empty()) g.radius_limit_.push_back(radius);
  }

  static void erase_node(HnGraph& g, NodeId id) {
    const std::vector<NodeId> nbs = g.adj_[g.index_of(id)];
    for (NodeId nb : nbs) {
      g.edges_.erase(edge_key(id, nb));
      erase_sorted(g.adj_[g.index_of(nb)], id);
    }
    const std::size_t ui = g.index_of(id);
    g.nodes_.erase(g.nodes_.begin() + ui);
    g.adj_.erase(g.adj_.begin() + ui);
    if (!g.radius_limit_.empty()) g.radius_limit_.erase(g.radius_limit_.begin() + ui);
  }

  static double ball_sq_of(const HnGraph& g, const HnNode& v) {
    if (!v.parent) return std::numeric_limits<double>::infinity();
    return g.dist_sq(v, g.node(*v.parent));
  }

  static HnGraph strip_radius(const HnGraph& g) {
    HnGraph u = g;
    u.radius_limit_.clear();
    return u;
  }

  static void set_level_basis(HnGraph& g, NodeId id, double weight, int det) {
    HnNode& n = g.nodes_[g.index_of(id)];
    n.weight = weight;
    n.det = det;
  }

 private:
  static void insert_sorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  }
  static void erase_sorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
  }
};

namespace {

GraphDelta diff_graphs(const HnGraph& before, const HnGraph& after,
                       std::optional<NodeId> subject) {
  GraphDelta delta;
  for (const auto& [key, data] : after.edges()) {
    auto it = before.edges().find(key);
    if (it == before.edges().end() || it->second.level != data.level) {
      delta.added_edges.push_back(EdgeRecord{static_cast<NodeId>(key >> 32),
                                             static_cast<NodeId>(key & 0xffffffffu), data.level});
    }
  }
  for (const auto& [key, data] : before.edges()) {
    auto it = after.edges().find(key);
    if (it == after.edges().end() || it->second.level != data.level) {
      delta.removed_edges.push_back(EdgeRecord{
          static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), data.level});
    }
  }
  std::sort(delta.added_edges.begin(), delta.added_edges.end());
  std::sort(delta.removed_edges.begin(), delta.removed_edges.end());

  for (const HnNode& b : before.nodes()) {
    if (!after.has_node(b.id)) continue;
    const HnNode& a = after.node(b.id);
    if ((subject && b.id == *subject)) continue;
    if (a.parent != b.parent) {
      delta.reparented.push_back(GraphDelta::Reparent{b.id, b.parent, a.parent});
    }
  }

  std::vector<NodeId> affected;
  for (const EdgeRecord& e : delta.added_edges) {
    affected.push_back(e.u);
    affected.push_back(e.v);
  }
  for (const EdgeRecord& e : delta.removed_edges) {
    affected.push_back(e.u);
    affected.push_back(e.v);
  }
  for (const auto& r : delta.reparented) affected.push_back(r.node);
  if (subject) affected.push_back(*subject);
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
  delta.affected = std::move(affected);
  return delta;
}

// Nodes whose connection search an appearance of a (new or promoted) node at
// (x, y) with level L perturbs: nodes below L that see it inside or on their
// ball, and level-L nodes that see it inside or on their ball.
std::vector<NodeId> perturbed_by_appearance(const HnGraph& g, double x, double y, int level,
                                            NodeId skip) {
  std::vector<NodeId> out;
  for (const HnNode& v : g.nodes()) {
    if (v.id == skip) continue;
    const int lv = v.level();
    if (lv > level) continue;
    const double d2 = distance_sq(v.x, v.y, x, y, g.region());
    if (d2 <= GraphEditor::ball_sq_of(g, v)) out.push_back(v.id);
  }
  return out;
}

std::pair<HnGraph, GraphDelta> add_node_unbounded(const HnGraph& g, double x, double y,
                                                  double weight, int det, int inc) {
  HnGraph next = g;
  const NodeId id = next.empty() ? 0 : next.nodes().back().id + 1;
  const std::vector<NodeId> perturbed =
      perturbed_by_appearance(next, x, y, det + inc, kNoNode);
  HnNode node;
  node.id = id;
  node.x = x;
  node.y = y;
  node.weight = weight;
  node.det = det;
  node.prob_inc = inc;
  GraphEditor::insert_node(next, node, std::numeric_limits<double>::infinity());
  GraphEditor::recompute_connections(next, id);
  for (NodeId v : perturbed) GraphEditor::recompute_connections(next, v);
  return {std::move(next), GraphDelta{}};
}

std::pair<HnGraph, GraphDelta> remove_node_unbounded(const HnGraph& g, NodeId id) {
  HnGraph next = g;
  const HnNode& victim = next.node(id);
  const int level = victim.level();
  std::vector<NodeId> orphans;
  for (NodeId nb : next.neighbors(id)) {
    if (next.node(nb).level() < level) orphans.push_back(nb);
  }
  GraphEditor::erase_node(next, id);
  for (NodeId v : orphans) GraphEditor::recompute_connections(next, v);
  return {std::move(next), GraphDelta{}};
}

std::pair<HnGraph, GraphDelta> update_weight_unbounded(const HnGraph& g, NodeId id,
                                                       double new_weight) {
  HnGraph next = g;
  const HnNode& u = next.node(id);
  const int old_level = u.level();
  const int new_det = det_level(new_weight, next.params().p);
  const int new_level = new_det + u.prob_inc;

  if (new_level == old_level) {
    GraphEditor::set_level_basis(next, id, new_weight, new_det);
    return {std::move(next), GraphDelta{}};
  }

  std::vector<NodeId> recompute;
  if (new_level > old_level) {
    // The node rises: anyone at levels [old, new) that now sees it inside or
    // on the ball truncates/reparents, and new same-level peers gain edges.
    for (const HnNode& v : next.nodes()) {
      if (v.id == id) continue;
      const int lv = v.level();
      if (lv < old_level || lv > new_level) continue;
      const double d2 = next.dist_sq(v, u);
      if (d2 <= GraphEditor::ball_sq_of(next, v)) recompute.push_back(v.id);
    }
  } else {
    // The node sinks: former dependents between the levels re-run their
    // search; old same-level peers drop their initiations; new same-level
    // peers may gain a ball edge.
    for (const HnNode& v : next.nodes()) {
      if (v.id == id) continue;
      const int lv = v.level();
      if (lv >= new_level && lv < old_level && next.has_edge(v.id, id)) {
        recompute.push_back(v.id);
      } else if (lv == old_level && next.has_edge(v.id, id)) {
        recompute.push_back(v.id);
      } else if (lv == new_level) {
        const double d2 = next.dist_sq(v, u);
        if (d2 <= GraphEditor::ball_sq_of(next, v)) recompute.push_back(v.id);
      }
    }
  }

  GraphEditor::set_level_basis(next, id, new_weight, new_det);
  GraphEditor::recompute_connections(next, id);
  for (NodeId v : recompute) GraphEditor::recompute_connections(next, v);
  return {std::move(next), GraphDelta{}};
}

// Rebuilds the unbounded connection structure for arbitrary (possibly
// non-dense) node ids from positions and levels alone.
HnGraph rebuild_unbounded(const HnGraph& g) {
  std::vector<HnNode> nodes = g.nodes();
  for (HnNode& n : nodes) n.parent.reset();
  std::unordered_map<std::uint64_t, EdgeData> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    detail::ConnSearch cs = detail::conn_search_brute(nodes, i, g.region());
    HnNode& u = nodes[i];
    if (!cs.nearest_higher.empty()) u.parent = cs.nearest_higher.front();
    for (NodeId v : cs.nearest_higher) {
      GraphBuilder::add_initiation(edges, u.id, v, u.level());
    }
    for (NodeId v : cs.same_level_ball) {
      GraphBuilder::add_initiation(edges, u.id, v, u.level());
    }
  }
  return GraphBuilder::from_parts(g.region(), g.params(), g.seed(), std::move(nodes),
                                  std::move(edges), {});
}

std::vector<double> current_radii(const HnGraph& g) {
  std::vector<double> r;
  r.reserve(g.size());
  for (const HnNode& n : g.nodes()) r.push_back(g.radius_of(n.id));
  return r;
}

}  // namespace

HnGraph rebuild_from_levels(const HnGraph& g) {
  HnGraph u = rebuild_unbounded(g);
  if (g.radius_bounded()) GraphBuilder::apply_radius_filter(u, current_radii(g));
  return u;
}

std::pair<HnGraph, GraphDelta> add_node(const HnGraph& g, double x, double y, double weight,
                                        RngStream& stream, double radius) {
  if (!g.region().contains(x, y)) throw ParameterError("add_node: position outside region");
  if (!(weight >= 1.0) || !std::isfinite(weight)) {
    throw ParameterError("add_node: weight must be finite and >= 1");
  }
  const int level = assign_level(weight, g.params(), stream);
  const int det = det_level(weight, g.params().p);
  const int inc = level - det;

  if (!g.radius_bounded()) {
    auto [next, unused] = add_node_unbounded(g, x, y, weight, det, inc);
    const NodeId id = next.nodes().back().id;
    GraphDelta delta = diff_graphs(g, next, id);
    return {std::move(next), std::move(delta)};
  }
  if (!(radius > 0)) throw ParameterError("add_node: radius must be positive");
  HnGraph unbounded = rebuild_unbounded(g);
  auto [repaired, unused] = add_node_unbounded(unbounded, x, y, weight, det, inc);
  const NodeId id = repaired.nodes().back().id;
  std::vector<double> radii = current_radii(g);
  radii.push_back(radius);
  GraphBuilder::apply_radius_filter(repaired, radii);
  GraphDelta delta = diff_graphs(g, repaired, id);
  return {std::move(repaired), std::move(delta)};
}

std::pair<HnGraph, GraphDelta> remove_node(const HnGraph& g, NodeId id) {
  if (!g.has_node(id)) throw NotFoundError("remove_node: unknown id " + std::to_string(id));
  if (!g.radius_bounded()) {
    auto [next, unused] = remove_node_unbounded(g, id);
    GraphDelta delta = diff_graphs(g, next, id);
    return {std::move(next), std::move(delta)};
  }
  HnGraph unbounded = rebuild_unbounded(g);
  std::vector<double> radii;
  for (const HnNode& n : g.nodes()) {
    if (n.id != id) radii.push_back(g.radius_of(n.id));
  }
  auto [repaired, unused] = remove_node_unbounded(unbounded, id);
  GraphBuilder::apply_radius_filter(repaired, radii);
  GraphDelta delta = diff_graphs(g, repaired, id);
  return {std::move(repaired), std::move(delta)};
}

std::pair<HnGraph, GraphDelta> update_weight(const HnGraph& g, NodeId id, double new_weight) {
  if (!g.has_node(id)) throw NotFoundError("update_weight: unknown id " + std::to_string(id));
  if (!(new_weight >= 1.0) || !std::isfinite(new_weight)) {
    throw ParameterError("update_weight: weight must be finite and >= 1");
  }
  // A change that leaves floor(log_{1/p} w) alone keeps the whole structure;
  // the delta is empty (the stored weight still updates).
  {
    const HnNode& u = g.node(id);
    if (det_level(new_weight, g.params().p) + u.prob_inc == u.level()) {
      HnGraph next = g;
      GraphEditor::set_level_basis(next, id, new_weight, det_level(new_weight, g.params().p));
      return {std::move(next), GraphDelta{}};
    }
  }
  if (!g.radius_bounded()) {
    auto [next, unused] = update_weight_unbounded(g, id, new_weight);
    GraphDelta delta = diff_graphs(g, next, id);
    return {std::move(next), std::move(delta)};
  }
  HnGraph unbounded = rebuild_unbounded(g);
  auto [repaired, unused] = update_weight_unbounded(unbounded, id, new_weight);
  GraphBuilder::apply_radius_filter(repaired, current_radii(g));
  GraphDelta delta = diff_graphs(g, repaired, id);
  return {std::move(repaired), std::move(delta)};
}

std::vector<TraceEvent> parse_trace(const std::string& text) {
  std::vector<TraceEvent> events;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    TraceEvent ev;
    if (kind == "ADD") {
      ev.kind = TraceEvent::Kind::add;
      if (!(ls >> ev.x >> ev.y >> ev.w)) {
        throw ParameterError("trace line " + std::to_string(lineno) + ": expected ADD x y w");
      }
    } else if (kind == "REMOVE") {
      ev.kind = TraceEvent::Kind::remove;
      if (!(ls >> ev.id)) {
        throw ParameterError("trace line " + std::to_string(lineno) + ": expected REMOVE id");
      }
    } else if (kind == "WEIGHT") {
      ev.kind = TraceEvent::Kind::weight;
      if (!(ls >> ev.id >> ev.w)) {
        throw ParameterError("trace line " + std::to_string(lineno) + ": expected WEIGHT id w");
      }
    } else {
      throw ParameterError("trace line " + std::to_string(lineno) + ": unknown event '" + kind +
                           "'");
    }
    events.push_back(ev);
  }
  return events;
}

std::pair<HnGraph, std::vector<ReplayStep>> replay_trace(HnGraph g,
                                                         const std::vector<TraceEvent>& events,
                                                         std::uint64_t seed) {
  std::vector<ReplayStep> steps;
  steps.reserve(events.size());
  std::size_t index = 0;
  for (const TraceEvent& ev : events) {
    switch (ev.kind) {
      case TraceEvent::Kind::add: {
        RngStream stream = derive_stream(seed, "trace-add", index);
        auto [next, delta] = add_node(g, ev.x, ev.y, ev.w, stream);
        g = std::move(next);
        steps.push_back(ReplayStep{ev, std::move(delta)});
        break;
      }
      case TraceEvent::Kind::remove: {
        auto [next, delta] = remove_node(g, ev.id);
        g = std::move(next);
        steps.push_back(ReplayStep{ev, std::move(delta)});
        break;
      }
      case TraceEvent::Kind::weight: {
        auto [next, delta] = update_weight(g, ev.id, ev.w);
        g = std::move(next);
        steps.push_back(ReplayStep{ev, std::move(delta)});
        break;
      }
    }
    ++index;
  }
  return {std::move(g), std::move(steps)};
}

}  // namespace hn
