#include "hn/routing.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "hn/error.hpp"

namespace hn {

NodeId ancestor(const HnGraph& g, NodeId u, int i) {
  if (i < 0) throw ParameterError("ancestor: negative level");
  NodeId cur = u;
  for (;;) {
    const HnNode& n = g.node(cur);
    if (n.level() >= i) return cur;
    if (!n.parent) {
      throw UnreachableError("ancestor: chain from " + std::to_string(u) +
                             " ends below level " + std::to_string(i));
    }
    cur = *n.parent;
  }
}

std::vector<NodeId> component_at_level(const HnGraph& g, NodeId u, int i) {
  const HnNode& start = g.node(u);
  if (start.level() < i) throw ParameterError("component_at_level: lev(u) < i");
  std::unordered_set<NodeId> seen{u};
  std::deque<NodeId> queue{u};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    for (NodeId nb : g.neighbors(cur)) {
      if (g.node(nb).level() < i || seen.count(nb)) continue;
      seen.insert(nb);
      queue.push_back(nb);
    }
  }
  std::vector<NodeId> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t graph_fingerprint(const HnGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ull;
  };
  for (const HnNode& n : g.nodes()) {
    mix(n.id);
    mix(static_cast<std::uint64_t>(n.level()) + 1);
    mix(n.parent ? *n.parent + 2 : 1);
  }
  for (const EdgeRecord& e : g.sorted_edges()) {
    mix(edge_key(e.u, e.v));
    mix(static_cast<std::uint64_t>(e.level) + 1);
  }
  return h;
}

std::size_t RoutingState::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw NotFoundError("routing state: unknown node " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

const std::map<NodeId, DirEntry>& RoutingState::directory(NodeId u, int level) const {
  const std::size_t i = index_of(u);
  if (level < 0 || static_cast<std::size_t>(level) >= dirs_[i].size()) {
    throw ParameterError("directory level out of range for node " + std::to_string(u));
  }
  return dirs_[i][static_cast<std::size_t>(level)];
}

int RoutingState::directory_levels(NodeId u) const {
  return static_cast<int>(dirs_[index_of(u)].size());
}

const DirEntry* RoutingState::lookup(NodeId u, NodeId dst) const {
  const std::size_t i = index_of(u);
  const DirEntry* best = nullptr;
  for (const auto& dir : dirs_[i]) {
    auto it = dir.find(dst);
    if (it == dir.end()) continue;
    if (!best || it->second.hops < best->hops ||
        (it->second.hops == best->hops && it->second.next_hop < best->next_hop)) {
      best = &it->second;
    }
  }
  return best;
}

namespace {

// Keep the better of two entries: fewer hops, then lower next-hop id.
void improve(std::map<NodeId, DirEntry>& table, NodeId dst, DirEntry cand) {
  auto it = table.find(dst);
  if (it == table.end() || cand.hops < it->second.hops ||
      (cand.hops == it->second.hops && cand.next_hop < it->second.next_hop)) {
    table[dst] = cand;
  }
}

}  // namespace

RoutingState build_directories(const HnGraph& g) {
  RoutingState state;
  state.fingerprint_ = graph_fingerprint(g);
  const std::size_t n = g.size();
  state.ids_.reserve(n);
  state.dirs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const HnNode& node = g.node_at(i);
    state.ids_.push_back(node.id);
    state.dirs_[i].resize(static_cast<std::size_t>(node.level()) + 1);
  }
  if (n == 0) {
    state.component_count_ = 0;
    return state;
  }

  const int height = g.height();

  // Consolidated view of everything a node knows from below (all its
  // directory levels merged; self excluded).
  auto consolidated = [&](std::size_t idx) {
    std::map<NodeId, DirEntry> merged;
    for (const auto& dir : state.dirs_[idx]) {
      for (const auto& [dst, entry] : dir) improve(merged, dst, entry);
    }
    return merged;
  };

  for (int level = 0; level <= height; ++level) {
    // Members of this phase: nodes at exactly this level.
    std::vector<NodeId> members;
    for (const HnNode& node : g.nodes()) {
      if (node.level() == level) members.push_back(node.id);
    }
    if (members.empty()) continue;

    // Components over same-level edges.
    std::unordered_set<NodeId> unvisited(members.begin(), members.end());
    for (NodeId root : members) {
      if (!unvisited.count(root)) continue;
      std::vector<NodeId> comp;
      std::deque<NodeId> queue{root};
      unvisited.erase(root);
      while (!queue.empty()) {
        const NodeId cur = queue.front();
        queue.pop_front();
        comp.push_back(cur);
        for (NodeId nb : g.neighbors(cur)) {
          if (g.node(nb).level() != level || !unvisited.count(nb)) continue;
          unvisited.erase(nb);
          queue.push_back(nb);
        }
      }
      std::sort(comp.begin(), comp.end());

      // Synchronous distance-vector rounds to convergence inside the
      // component. Tables are seeded with each member's consolidated
      // knowledge from below.
      std::unordered_map<NodeId, std::map<NodeId, DirEntry>> table;
      for (NodeId v : comp) table[v] = consolidated(state.index_of(v));
      bool changed = true;
      while (changed) {
        changed = false;
        std::unordered_map<NodeId, std::map<NodeId, DirEntry>> snapshot = table;
        for (NodeId v : comp) {
          for (NodeId w : g.neighbors(v)) {
            if (g.node(w).level() != level) continue;
            auto& incoming = snapshot[w];
            improve(table[v], w, DirEntry{w, 1});
            for (const auto& [dst, entry] : incoming) {
              if (dst == v) continue;
              improve(table[v], dst, DirEntry{w, entry.hops + 1});
            }
          }
          if (table[v] != snapshot[v]) changed = true;
        }
      }
      for (NodeId v : comp) {
        state.dirs_[state.index_of(v)][static_cast<std::size_t>(level)] = std::move(table[v]);
      }
    }

    // Push consolidated tables (plus self) up to parents; the parent stores
    // them at the directory for the next processed level.
    for (NodeId v : members) {
      const HnNode& node = g.node(v);
      if (!node.parent) continue;
      const std::size_t pi = state.index_of(*node.parent);
      auto& updir = state.dirs_[pi][static_cast<std::size_t>(level) + 1];
      improve(updir, v, DirEntry{v, 1});
      for (const auto& [dst, entry] : consolidated(state.index_of(v))) {
        if (dst == *node.parent) continue;
        improve(updir, dst, DirEntry{v, entry.hops + 1});
      }
    }
  }

  // Connectivity report: number of components of the whole graph.
  std::unordered_set<NodeId> seen;
  std::size_t components = 0;
  for (const HnNode& node : g.nodes()) {
    if (seen.count(node.id)) continue;
    ++components;
    std::deque<NodeId> queue{node.id};
    seen.insert(node.id);
    while (!queue.empty()) {
      const NodeId cur = queue.front();
      queue.pop_front();
      for (NodeId nb : g.neighbors(cur)) {
        if (!seen.count(nb)) {
          seen.insert(nb);
          queue.push_back(nb);
        }
      }
    }
  }
  state.component_count_ = components;
  state.fully_connected_ = components <= 1;
  return state;
}

namespace {

// Directory-guided descent from x to dst; every step follows a graph edge
// and strictly decreases the best known hop count.
void descend(const HnGraph& g, const RoutingState& state, NodeId x, NodeId dst,
             std::vector<NodeId>& path) {
  std::size_t guard = g.size() + 2;
  while (x != dst) {
    const DirEntry* e = state.lookup(x, dst);
    if (!e || guard-- == 0) {
      throw UnreachableError("descent from " + std::to_string(x) + " lost destination " +
                             std::to_string(dst));
    }
    path.push_back(e->next_hop);
    x = e->next_hop;
  }
}

}  // namespace

RouteResult proactive_route(const HnGraph& g, const RoutingState& state, NodeId src, NodeId dst) {
  if (state.built_for() != graph_fingerprint(g)) {
    throw ParameterError("proactive_route: routing state was built for a different graph");
  }
  g.index_of(src);
  g.index_of(dst);
  RouteResult result;
  result.path.push_back(src);
  if (src == dst) return result;

  const int height = g.height();
  NodeId chain = src;
  for (int i = 0; i <= height; ++i) {
    // Advance the chain to the ancestor at level >= i.
    while (g.node(chain).level() < i) {
      const auto& parent = g.node(chain).parent;
      if (!parent) throw UnreachableError("proactive_route: broken ancestor chain");
      chain = *parent;
      result.path.push_back(chain);
      if (chain == dst) {
        result.hops = result.path.size() - 1;
        return result;
      }
    }
    const auto& dir = state.directory(chain, i);
    auto it = dir.find(dst);
    if (it != dir.end()) {
      descend(g, state, chain, dst, result.path);
      result.hops = result.path.size() - 1;
      return result;
    }
  }
  throw UnreachableError("proactive_route: destination " + std::to_string(dst) +
                         " absent from every directory");
}

RouteResult reactive_route(const HnGraph& g, NodeId src, NodeId dst) {
  g.index_of(src);
  g.index_of(dst);
  RouteResult result;
  result.path.push_back(src);
  result.flooded = 1;
  if (src == dst) return result;

  std::unordered_set<NodeId> processed{src};
  std::vector<NodeId> ascent{src};

  NodeId phase_root = src;
  for (;;) {
    // Flood around the current ancestor: same-level edges spread the query
    // horizontally, parent links pointing down descend into subtrees.
    std::unordered_map<NodeId, NodeId> pred;
    std::deque<NodeId> queue{phase_root};
    pred[phase_root] = phase_root;
    bool found = false;
    while (!queue.empty() && !found) {
      const NodeId cur = queue.front();
      queue.pop_front();
      processed.insert(cur);
      const int cur_level = g.node(cur).level();
      for (NodeId nb : g.neighbors(cur)) {
        if (pred.count(nb)) continue;
        const HnNode& nbn = g.node(nb);
        const bool horizontal = nbn.level() == cur_level;
        const bool downward = nbn.level() < cur_level && nbn.parent && *nbn.parent == cur;
        if (!horizontal && !downward) continue;
        pred[nb] = cur;
        if (nb == dst) {
          found = true;
          break;
        }
        queue.push_back(nb);
      }
    }
    if (found) {
      for (const auto& [node, unused] : pred) processed.insert(node);
      std::vector<NodeId> tail;
      for (NodeId cur = dst; cur != phase_root; cur = pred[cur]) tail.push_back(cur);
      result.path = ascent;
      for (auto it = tail.rbegin(); it != tail.rend(); ++it) result.path.push_back(*it);
      result.hops = result.path.size() - 1;
      result.flooded = processed.size();
      return result;
    }
    for (const auto& [node, unused] : pred) processed.insert(node);

    // Not found at this slice: escalate to the next ancestor.
    const auto& parent = g.node(phase_root).parent;
    if (!parent) {
      result.flooded = processed.size();
      throw UnreachableError("reactive_route: destination " + std::to_string(dst) +
                             " not found by the top phase");
    }
    phase_root = *parent;
    ascent.push_back(phase_root);
    processed.insert(phase_root);
    if (phase_root == dst) {
      result.path = ascent;
      result.hops = result.path.size() - 1;
      result.flooded = processed.size();
      return result;
    }
  }
}

}  // namespace hn
