#include "hn/hn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hn/error.hpp"

namespace hn {

Params Params::with_p(double p) {
  Params params;
  params.p = p;
  params.max_level_cap = 64;
  params.validate();
  return params;
}

void Params::validate() const {
  if (!(p > 0.0) || !(p < 1.0)) throw ParameterError("params: p must lie strictly in (0,1)");
  if (max_level_cap < 0) throw ParameterError("params: max_level_cap must be non-negative");
}

void WeightAssignment::validate() const {
  for (double x : w) {
    if (!(x >= 1.0) || !std::isfinite(x)) {
      throw ParameterError("weights: every weight must be finite and >= 1");
    }
  }
}

int det_level(double weight, double p) {
  if (!(weight >= 1.0) || !std::isfinite(weight)) {
    throw ParameterError("det_level: weight must be finite and >= 1");
  }
  // Initial guess from logs, then correct with exact pow comparisons so that
  // exact powers of 1/p land on the right integer.
  const double inv = 1.0 / p;
  int k = static_cast<int>(std::floor(std::log(weight) / std::log(inv)));
  if (k < 0) k = 0;
  while (std::pow(inv, k + 1) <= weight) ++k;
  while (k > 0 && std::pow(inv, k) > weight) --k;
  return k;
}

int assign_level(double weight, const Params& params, RngStream& stream) {
  params.validate();
  const int det = det_level(weight, params.p);
  const int cap = std::max(params.max_level_cap, det);
  int level = det;
  while (stream.next_unit() < params.p) {
    ++level;
    if (level > cap) throw OverflowError("assign_level: promotion exceeded max_level_cap");
  }
  return level;
}

// ---------------------------------------------------------------------------
// Spatial index: one uniform grid; each cell holds node indices sorted by
// (level desc, id asc) so the strictly-higher prefix can be scanned cheaply.

namespace {

struct Grid {
  const std::vector<HnNode>* nodes = nullptr;
  Region region;
  int g = 1;
  double cell = 1.0;
  std::vector<std::vector<std::uint32_t>> buckets;
  std::vector<std::vector<std::uint32_t>> by_level;  // node indices per exact level, id order

  int cell_of(double coord) const {
    int c = static_cast<int>(coord / cell);
    if (c >= g) c = g - 1;
    if (c < 0) c = 0;
    return c;
  }
};

Grid make_grid(const std::vector<HnNode>& nodes, const Region& region) {
  Grid grid;
  grid.nodes = &nodes;
  grid.region = region;
  const std::size_t n = nodes.size();
  grid.g = std::max<int>(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
  grid.cell = region.side / grid.g;
  grid.buckets.assign(static_cast<std::size_t>(grid.g) * grid.g, {});
  int max_level = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const HnNode& u = nodes[i];
    grid.buckets[static_cast<std::size_t>(grid.cell_of(u.y)) * grid.g + grid.cell_of(u.x)]
        .push_back(static_cast<std::uint32_t>(i));
    max_level = std::max(max_level, u.level());
  }
  for (auto& b : grid.buckets) {
    std::sort(b.begin(), b.end(), [&](std::uint32_t a, std::uint32_t c) {
      const int la = nodes[a].level(), lc = nodes[c].level();
      if (la != lc) return la > lc;
      return nodes[a].id < nodes[c].id;
    });
  }
  grid.by_level.assign(static_cast<std::size_t>(max_level) + 1, {});
  for (std::size_t i = 0; i < n; ++i) {
    grid.by_level[nodes[i].level()].push_back(static_cast<std::uint32_t>(i));
  }
  return grid;
}

// Visits every cell at Chebyshev ring k around (cx,cy); wraps on a torus,
// clips on a square.
template <typename F>
void for_ring(const Grid& grid, int cx, int cy, int k, F&& f) {
  const int g = grid.g;
  const bool torus = grid.region.kind == Region::Kind::torus;
  auto visit = [&](int x, int y) {
    if (torus) {
      x = ((x % g) + g) % g;
      y = ((y % g) + g) % g;
    } else if (x < 0 || x >= g || y < 0 || y >= g) {
      return;
    }
    f(static_cast<std::size_t>(y) * g + x);
  };
  if (k == 0) {
    visit(cx, cy);
    return;
  }
  if (torus && 2 * k >= g + 1) return;  // smaller rings already covered every cell
  for (int dx = -k; dx <= k; ++dx) {
    visit(cx + dx, cy - k);
    visit(cx + dx, cy + k);
  }
  for (int dy = -k + 1; dy <= k - 1; ++dy) {
    visit(cx - k, cy + dy);
    visit(cx + k, cy + dy);
  }
}

bool ring_exhausted(const Grid& grid, int k) {
  if (grid.region.kind == Region::Kind::torus) return 2 * k >= grid.g + 1;
  return k > grid.g;
}

void nearest_higher_grid(const Grid& grid, std::size_t ui, double& best_sq,
                         std::vector<NodeId>& out) {
  const auto& nodes = *grid.nodes;
  const HnNode& u = nodes[ui];
  const int lu = u.level();
  best_sq = std::numeric_limits<double>::infinity();
  out.clear();
  const int cx = grid.cell_of(u.x), cy = grid.cell_of(u.y);
  for (int k = 0;; ++k) {
    if (k > 0) {
      const double reach = (k - 1) * grid.cell;
      if (reach * reach > best_sq) break;
      if (ring_exhausted(grid, k)) break;
    }
    for_ring(grid, cx, cy, k, [&](std::size_t bi) {
      for (std::uint32_t vi : grid.buckets[bi]) {
        const HnNode& v = nodes[vi];
        if (v.level() <= lu) break;  // bucket sorted level-desc
        const double d2 = distance_sq(u.x, u.y, v.x, v.y, grid.region);
        if (d2 < best_sq) {
          best_sq = d2;
          out.clear();
          out.push_back(v.id);
        } else if (d2 == best_sq) {
          out.push_back(v.id);
        }
      }
    });
  }
  // Wrapped rings can visit a bucket twice near the torus midline.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

void same_level_ball_grid(const Grid& grid, std::size_t ui, double ball_sq,
                          std::vector<NodeId>& out) {
  const auto& nodes = *grid.nodes;
  const HnNode& u = nodes[ui];
  const int lu = u.level();
  out.clear();
  if (std::isinf(ball_sq)) {
    for (std::uint32_t vi : grid.by_level[lu]) {
      if (vi != ui) out.push_back(nodes[vi].id);
    }
    std::sort(out.begin(), out.end());
    return;
  }
  const double r = std::sqrt(ball_sq);
  const bool torus = grid.region.kind == Region::Kind::torus;
  int lox = static_cast<int>(std::floor((u.x - r) / grid.cell));
  int hix = static_cast<int>(std::floor((u.x + r) / grid.cell));
  int loy = static_cast<int>(std::floor((u.y - r) / grid.cell));
  int hiy = static_cast<int>(std::floor((u.y + r) / grid.cell));
  if (torus) {
    if (hix - lox + 1 >= grid.g) { lox = 0; hix = grid.g - 1; }
    if (hiy - loy + 1 >= grid.g) { loy = 0; hiy = grid.g - 1; }
  } else {
    lox = std::max(lox, 0); hix = std::min(hix, grid.g - 1);
    loy = std::max(loy, 0); hiy = std::min(hiy, grid.g - 1);
  }
  for (int y = loy; y <= hiy; ++y) {
    for (int x = lox; x <= hix; ++x) {
      int xx = x, yy = y;
      if (torus) {
        xx = ((x % grid.g) + grid.g) % grid.g;
        yy = ((y % grid.g) + grid.g) % grid.g;
      }
      for (std::uint32_t vi : grid.buckets[static_cast<std::size_t>(yy) * grid.g + xx]) {
        const HnNode& v = nodes[vi];
        if (v.level() < lu) break;
        if (v.level() != lu || vi == ui) continue;
        if (distance_sq(u.x, u.y, v.x, v.y, grid.region) <= ball_sq) out.push_back(v.id);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

constexpr std::size_t kGridThreshold = 96;  // brute force below this size

}  // namespace

namespace detail {

ConnSearch conn_search_brute(const std::vector<HnNode>& nodes, std::size_t ui,
                             const Region& region) {
  ConnSearch cs;
  const HnNode& u = nodes[ui];
  const int lu = u.level();
  for (std::size_t vi = 0; vi < nodes.size(); ++vi) {
    if (vi == ui) continue;
    const HnNode& v = nodes[vi];
    if (v.level() <= lu) continue;
    const double d2 = distance_sq(u.x, u.y, v.x, v.y, region);
    if (d2 < cs.ball_sq) {
      cs.ball_sq = d2;
      cs.nearest_higher.clear();
      cs.nearest_higher.push_back(v.id);
    } else if (d2 == cs.ball_sq) {
      cs.nearest_higher.push_back(v.id);
    }
  }
  for (std::size_t vi = 0; vi < nodes.size(); ++vi) {
    if (vi == ui) continue;
    const HnNode& v = nodes[vi];
    if (v.level() != lu) continue;
    if (distance_sq(u.x, u.y, v.x, v.y, region) <= cs.ball_sq) {
      cs.same_level_ball.push_back(v.id);
    }
  }
  std::sort(cs.nearest_higher.begin(), cs.nearest_higher.end());
  std::sort(cs.same_level_ball.begin(), cs.same_level_ball.end());
  return cs;
}

ConnSearch conn_search_graph(const HnGraph& g, NodeId id) {
  return conn_search_brute(g.nodes(), g.index_of(id), g.region());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Builders

void GraphBuilder::add_initiation(std::unordered_map<std::uint64_t, EdgeData>& edges, NodeId u,
                                  NodeId v, int level) {
    const std::uint64_t key = edge_key(u, v);
    auto [it, inserted] = edges.try_emplace(key, EdgeData{level, false, false});
    // The creation level is always min(lev(u), lev(v)); refreshing it keeps a
    // re-initiated edge consistent after level changes.
    it->second.level = level;
    if (u < v) {
      it->second.init_lo = true;
    } else {
      it->second.init_hi = true;
    }
  }

void GraphBuilder::rebuild_adjacency(HnGraph& g) {
    g.adj_.assign(g.nodes_.size(), {});
    for (const auto& [key, data] : g.edges_) {
      const NodeId lo = static_cast<NodeId>(key >> 32);
      const NodeId hi = static_cast<NodeId>(key & 0xffffffffu);
      g.adj_[g.index_of(lo)].push_back(hi);
      g.adj_[g.index_of(hi)].push_back(lo);
    }
    for (auto& a : g.adj_) std::sort(a.begin(), a.end());
  }

HnGraph GraphBuilder::make(const PointSet& points, const WeightAssignment& weights,
                           const Params& params, const std::vector<int>& det,
                           const std::vector<int>& inc, std::uint64_t seed) {
    params.validate();
    weights.validate();
    const std::size_t n = points.size();
    if (weights.w.size() != n || det.size() != n || inc.size() != n) {
      throw ParameterError("build: weights/levels must cover every point");
    }
    HnGraph g;
    g.region_ = points.region;
    g.params_ = params;
    g.seed_ = seed;
    g.nodes_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Point& p = points.points[i];
      if (p.id != i) throw ParameterError("build: point ids must be dense 0..n-1");
      if (!points.region.contains(p.x, p.y)) throw ParameterError("build: point outside region");
      if (inc[i] < 0) throw ParameterError("build: negative promotion increment");
      HnNode node;
      node.id = p.id;
      node.x = p.x;
      node.y = p.y;
      node.weight = weights.w[i];
      node.det = det[i];
      node.prob_inc = inc[i];
      g.nodes_.push_back(node);
    }

    const bool use_grid = n >= kGridThreshold;
    Grid grid;
    if (use_grid) grid = make_grid(g.nodes_, g.region_);

    std::vector<NodeId> higher, ball;
    for (std::size_t i = 0; i < n; ++i) {
      double ball_sq;
      if (use_grid) {
        nearest_higher_grid(grid, i, ball_sq, higher);
        same_level_ball_grid(grid, i, ball_sq, ball);
      } else {
        detail::ConnSearch cs = detail::conn_search_brute(g.nodes_, i, g.region_);
        ball_sq = cs.ball_sq;
        higher = std::move(cs.nearest_higher);
        ball = std::move(cs.same_level_ball);
      }
      HnNode& u = g.nodes_[i];
      if (!higher.empty()) u.parent = higher.front();
      const int lu = u.level();
      for (NodeId v : higher) add_initiation(g.edges_, u.id, v, lu);
      for (NodeId v : ball) add_initiation(g.edges_, u.id, v, lu);
    }
    rebuild_adjacency(g);
    return g;
  }

void GraphBuilder::apply_radius_filter(HnGraph& g, const std::vector<double>& radius) {
    if (radius.size() != g.nodes_.size()) {
      throw ParameterError("radius filter: one radius per node required");
    }
    for (double r : radius) {
      if (!(r > 0)) throw ParameterError("radius filter: radii must be positive");
    }
    g.radius_limit_ = radius;
    std::unordered_map<std::uint64_t, EdgeData> kept;
    kept.reserve(g.edges_.size());
    for (const auto& [key, data] : g.edges_) {
      const NodeId lo = static_cast<NodeId>(key >> 32);
      const NodeId hi = static_cast<NodeId>(key & 0xffffffffu);
      const double d2 = g.dist_sq(g.node(lo), g.node(hi));
      EdgeData nd = data;
      const double rlo = radius[g.index_of(lo)];
      const double rhi = radius[g.index_of(hi)];
      if (d2 > rlo * rlo) nd.init_lo = false;
      if (d2 > rhi * rhi) nd.init_hi = false;
      if (nd.init_lo || nd.init_hi) kept.emplace(key, nd);
    }
    g.edges_ = std::move(kept);
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
      HnNode& u = g.nodes_[i];
      if (u.parent) {
        const double d2 = g.dist_sq(u, g.node(*u.parent));
        const double r = radius[i];
        if (d2 > r * r) u.parent.reset();
      }
    }
    rebuild_adjacency(g);
  }

std::vector<int> GraphBuilder::draw_increments(const WeightAssignment& weights,
                                               const Params& params, std::uint64_t seed,
                                               std::vector<int>& det_out) {
    const std::size_t n = weights.w.size();
    std::vector<int> inc(n);
    det_out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      RngStream stream = derive_stream(seed, "level", i);
      const int level = assign_level(weights.w[i], params, stream);
      det_out[i] = det_level(weights.w[i], params.p);
      inc[i] = level - det_out[i];
    }
    return inc;
  }

HnGraph GraphBuilder::from_parts(Region region, Params params, std::uint64_t seed,
                                 std::vector<HnNode> nodes,
                                 std::unordered_map<std::uint64_t, EdgeData> edges,
                                 std::vector<double> radius) {
    HnGraph g;
    g.region_ = region;
    g.params_ = params;
    g.seed_ = seed;
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    g.radius_limit_ = std::move(radius);
    rebuild_adjacency(g);
    return g;
  }

HnGraph build_graph(const PointSet& points, const WeightAssignment& weights, const Params& params,
                    std::uint64_t seed) {
  std::vector<int> det;
  std::vector<int> inc = GraphBuilder::draw_increments(weights, params, seed, det);
  return GraphBuilder::make(points, weights, params, det, inc, seed);
}

HnGraph build_with_levels(const PointSet& points, const WeightAssignment& weights,
                          const Params& params, const std::vector<int>& det,
                          const std::vector<int>& prob_inc) {
  return GraphBuilder::make(points, weights, params, det, prob_inc, points.seed);
}

HnGraph build_radius_bounded(const PointSet& points, const WeightAssignment& weights,
                             const Params& params, const std::vector<double>& radius,
                             std::uint64_t seed) {
  HnGraph g = build_graph(points, weights, params, seed);
  GraphBuilder::apply_radius_filter(g, radius);
  return g;
}

HnGraph build_radius_bounded_with_levels(const PointSet& points, const WeightAssignment& weights,
                                         const Params& params, const std::vector<int>& det,
                                         const std::vector<int>& prob_inc,
                                         const std::vector<double>& radius) {
  HnGraph g = GraphBuilder::make(points, weights, params, det, prob_inc, points.seed);
  GraphBuilder::apply_radius_filter(g, radius);
  return g;
}

// ---------------------------------------------------------------------------
// HnGraph methods

bool HnGraph::has_node(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const HnNode& n, NodeId v) { return n.id < v; });
  return it != nodes_.end() && it->id == id;
}

std::size_t HnGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const HnNode& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) {
    throw NotFoundError("node id " + std::to_string(id) + " not in graph");
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

const HnNode& HnGraph::node(NodeId id) const { return nodes_[index_of(id)]; }

const std::vector<NodeId>& HnGraph::neighbors(NodeId id) const { return adj_[index_of(id)]; }

const EdgeData& HnGraph::edge(NodeId a, NodeId b) const {
  auto it = edges_.find(edge_key(a, b));
  if (it == edges_.end()) throw NotFoundError("edge not in graph");
  return it->second;
}

std::vector<EdgeRecord> HnGraph::sorted_edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(edges_.size());
  for (const auto& [key, data] : edges_) {
    out.push_back(EdgeRecord{static_cast<NodeId>(key >> 32),
                             static_cast<NodeId>(key & 0xffffffffu), data.level});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int HnGraph::height() const {
  if (nodes_.empty()) throw NoResultError("height: empty graph");
  int h = 0;
  for (const HnNode& n : nodes_) h = std::max(h, n.level());
  return h;
}

std::vector<std::vector<NodeId>> HnGraph::level_sets() const {
  if (nodes_.empty()) return {};
  const int h = height();
  std::vector<std::vector<NodeId>> sets(static_cast<std::size_t>(h) + 1);
  for (const HnNode& n : nodes_) {
    for (int i = 0; i <= n.level(); ++i) sets[i].push_back(n.id);
  }
  return sets;  // nodes_ is id-sorted, so each set is sorted
}

double HnGraph::radius_of(NodeId id) const {
  if (radius_limit_.empty()) return std::numeric_limits<double>::infinity();
  return radius_limit_[index_of(id)];
}

double HnGraph::dist(NodeId a, NodeId b) const {
  return std::sqrt(dist_sq(node(a), node(b)));
}

bool HnGraph::structurally_equal(const HnGraph& other, bool check_initiators) const {
  if (nodes_.size() != other.nodes_.size() || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const HnNode& a = nodes_[i];
    const HnNode& b = other.nodes_[i];
    if (a.id != b.id || a.x != b.x || a.y != b.y || a.det != b.det || a.prob_inc != b.prob_inc ||
        a.parent != b.parent) {
      return false;
    }
  }
  for (const auto& [key, data] : edges_) {
    auto it = other.edges_.find(key);
    if (it == other.edges_.end()) return false;
    if (it->second.level != data.level) return false;
    if (check_initiators &&
        (it->second.init_lo != data.init_lo || it->second.init_hi != data.init_hi)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string serialize_graph(const HnGraph& g) {
  std::ostringstream out;
  out << "hn-graph v1\n";
  out << "n " << g.size() << " p " << fmt_g17(g.params().p) << " cap " << g.params().max_level_cap
      << " region " << (g.region().kind == Region::Kind::torus ? "torus" : "square") << " "
      << fmt_g17(g.region().side) << " seed " << g.seed() << "\n";
  for (const HnNode& n : g.nodes()) {
    out << "node " << n.id << " " << fmt_g17(n.x) << " " << fmt_g17(n.y) << " "
        << fmt_g17(n.weight) << " " << n.level() << " "
        << (n.parent ? static_cast<long long>(*n.parent) : -1LL) << "\n";
  }
  if (g.radius_bounded()) {
    for (const HnNode& n : g.nodes()) {
      out << "radius " << n.id << " " << fmt_g17(g.radius_of(n.id)) << "\n";
    }
  }
  for (const EdgeRecord& e : g.sorted_edges()) {
    out << "edge " << e.u << " " << e.v << " " << e.level << "\n";
  }
  return out.str();
}

HnGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ParameterError("graph parse error at line " + std::to_string(lineno) + ": " + msg);
  };

  if (!std::getline(in, line)) fail("empty input");
  ++lineno;
  if (line != "hn-graph v1") fail("bad magic, expected 'hn-graph v1'");

  if (!std::getline(in, line)) fail("missing header");
  ++lineno;
  std::istringstream hdr(line);
  std::string tok, region_kind;
  std::size_t n = 0;
  Params params;
  double side = 0;
  std::uint64_t seed = 0;
  if (!(hdr >> tok && tok == "n" && hdr >> n && hdr >> tok && tok == "p" && hdr >> params.p &&
        hdr >> tok && tok == "cap" && hdr >> params.max_level_cap && hdr >> tok &&
        tok == "region" && hdr >> region_kind >> side && hdr >> tok && tok == "seed" &&
        hdr >> seed)) {
    fail("malformed header");
  }
  Region region = region_kind == "torus" ? Region::torus(side) : Region::square(side);
  if (region_kind != "torus" && region_kind != "square") fail("unknown region kind");

  std::vector<HnNode> nodes;
  nodes.reserve(n);
  std::vector<double> radius;
  std::unordered_map<std::uint64_t, EdgeData> edges;
  std::vector<std::pair<std::uint64_t, int>> edge_list;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "node") {
      HnNode nd;
      long long parent = -1;
      int level = 0;
      if (!(ls >> nd.id >> nd.x >> nd.y >> nd.weight >> level >> parent)) fail("malformed node");
      nd.det = det_level(nd.weight, params.p);
      nd.prob_inc = level - nd.det;
      if (nd.prob_inc < 0) fail("node level below deterministic level");
      if (parent >= 0) nd.parent = static_cast<NodeId>(parent);
      if (!nodes.empty() && nodes.back().id >= nd.id) fail("node ids must be increasing");
      nodes.push_back(nd);
    } else if (kind == "radius") {
      NodeId id;
      double r;
      if (!(ls >> id >> r)) fail("malformed radius");
      if (radius.empty()) radius.assign(nodes.size(), 0.0);
      bool found = false;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) {
          radius[i] = r;
          found = true;
          break;
        }
      }
      if (!found) fail("radius for unknown node");
    } else if (kind == "edge") {
      NodeId u, v;
      int level;
      if (!(ls >> u >> v >> level)) fail("malformed edge");
      if (u >= v) fail("edge endpoints must satisfy u < v");
      edge_list.emplace_back(edge_key(u, v), level);
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (nodes.size() != n) fail("node count does not match header");

  // Reconstruct initiator flags from the construction rule: the unbounded
  // ball radius of u is its distance to the nearest strictly-higher node.
  std::vector<double> ball_sq(nodes.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j || nodes[j].level() <= nodes[i].level()) continue;
      ball_sq[i] = std::min(ball_sq[i], distance_sq(nodes[i].x, nodes[i].y, nodes[j].x, nodes[j].y, region));
    }
  }
  auto index_of = [&](NodeId id) -> std::size_t {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const HnNode& nd, NodeId v) { return nd.id < v; });
    if (it == nodes.end() || it->id != id) {
      throw ParameterError("graph parse error: edge references unknown node " + std::to_string(id));
    }
    return static_cast<std::size_t>(it - nodes.begin());
  };
  for (const auto& [key, level] : edge_list) {
    const NodeId lo = static_cast<NodeId>(key >> 32);
    const NodeId hi = static_cast<NodeId>(key & 0xffffffffu);
    const std::size_t li = index_of(lo), hi_i = index_of(hi);
    const double d2 = distance_sq(nodes[li].x, nodes[li].y, nodes[hi_i].x, nodes[hi_i].y, region);
    EdgeData data{level, false, false};
    if (nodes[li].level() == nodes[hi_i].level()) {
      data.init_lo = d2 <= ball_sq[li];
      data.init_hi = d2 <= ball_sq[hi_i];
      if (!radius.empty()) {
        if (d2 > radius[li] * radius[li]) data.init_lo = false;
        if (d2 > radius[hi_i] * radius[hi_i]) data.init_hi = false;
      }
    } else if (nodes[li].level() < nodes[hi_i].level()) {
      data.init_lo = true;
    } else {
      data.init_hi = true;
    }
    edges.emplace(key, data);
  }
  return GraphBuilder::from_parts(region, params, seed, std::move(nodes), std::move(edges),
                                  std::move(radius));
}

void write_graph_file(const HnGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  out << serialize_graph(g);
}

HnGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

}  // namespace hn
