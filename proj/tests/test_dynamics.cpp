#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hn/dynamics.hpp"
#include "hn/error.hpp"
#include "hn/metrics.hpp"

using namespace hn;

namespace {

PointSet make_points(const Region& region, std::vector<std::pair<double, double>> xy) {
  PointSet ps;
  ps.region = region;
  ps.seed = 0;
  for (std::size_t i = 0; i < xy.size(); ++i) {
    ps.points.push_back(Point{static_cast<NodeId>(i), xy[i].first, xy[i].second});
  }
  return ps;
}

// Delta consistency: removed edges existed before, added edges exist after,
// and pre - removed + added = post.
void check_delta(const HnGraph& before, const HnGraph& after, const GraphDelta& delta) {
  std::set<std::pair<NodeId, NodeId>> pre, post;
  for (const EdgeRecord& e : before.sorted_edges()) pre.insert({e.u, e.v});
  for (const EdgeRecord& e : after.sorted_edges()) post.insert({e.u, e.v});
  std::set<std::pair<NodeId, NodeId>> rebuilt = pre;
  for (const EdgeRecord& e : delta.removed_edges) {
    CHECK(pre.count({e.u, e.v}) == 1);
    rebuilt.erase({e.u, e.v});
  }
  for (const EdgeRecord& e : delta.added_edges) {
    CHECK(post.count({e.u, e.v}) == 1);
    rebuilt.insert({e.u, e.v});
  }
  CHECK(rebuilt == post);

  std::set<NodeId> affected(delta.affected.begin(), delta.affected.end());
  for (const EdgeRecord& e : delta.added_edges) {
    CHECK(affected.count(e.u) == 1);
    CHECK(affected.count(e.v) == 1);
  }
  for (const EdgeRecord& e : delta.removed_edges) {
    CHECK(affected.count(e.u) == 1);
    CHECK(affected.count(e.v) == 1);
  }
  for (const auto& r : delta.reparented) CHECK(affected.count(r.node) == 1);
}

}  // namespace

TEST_CASE("add into an empty graph") {
  const Params params = Params::with_p(0.5);
  PointSet ps = make_points(Region::square(10.0), {});
  HnGraph g = build_graph(ps, WeightAssignment::unit(0), params, 1);
  RngStream s = derive_stream(1, "add");
  auto [next, delta] = add_node(g, 5.0, 5.0, 1.0, s);
  CHECK(next.size() == 1);
  CHECK(next.edge_count() == 0);
  CHECK_FALSE(next.node(0).parent.has_value());
  CHECK(delta.added_edges.empty());
  CHECK(delta.removed_edges.empty());
  CHECK(delta.reparented.empty());
  CHECK(delta.affected == std::vector<NodeId>{0});
}

TEST_CASE("add-node errors") {
  const Params params = Params::with_p(0.5);
  PointSet ps = make_points(Region::square(10.0), {{1, 1}});
  HnGraph g = build_with_levels(ps, WeightAssignment::unit(1), params, {0}, {0});
  RngStream s = derive_stream(2, "add");
  CHECK_THROWS_AS(add_node(g, 11.0, 1.0, 1.0, s), ParameterError);
  CHECK_THROWS_AS(add_node(g, 1.0, 1.0, 0.5, s), ParameterError);
  // Duplicate position is allowed; ids differ.
  auto [next, delta] = add_node(g, 1.0, 1.0, 1.0, s);
  CHECK(next.size() == 2);
  CHECK(next.has_node(1));
}

TEST_CASE("high add steals nearby children and truncates their balls") {
  const Params params = Params::with_p(0.5);
  // Node 0 (level 0) at origin with a far parent 1 (level 1) at x=6; node 2
  // is a same-level neighbor at x=5.5, inside node 0's wide ball but with a
  // tight ball of its own.
  PointSet ps = make_points(Region::square(20.0), {{0.0, 0.0}, {6.0, 0.0}, {5.5, 0.0}});
  HnGraph g = build_with_levels(ps, WeightAssignment::unit(3), params, {0, 0, 0}, {0, 1, 0});
  REQUIRE(g.has_edge(0, 2));
  REQUIRE(g.node(0).parent == NodeId{1});
  REQUIRE(g.node(2).parent == NodeId{1});

  // Insert a level-5 node right next to node 0: node 0 reparents to it and
  // drops the now-out-of-ball edge to node 2 (whose own state is untouched).
  HnGraph before = g;
  auto forced = [&] {
    // find a stream that draws geometric increment 5 for weight 1
    for (int seed = 0; seed < 4096; ++seed) {
      RngStream probe = derive_stream(seed, "force5");
      if (probe.geometric(0.5) == 5) return derive_stream(seed, "force5");
    }
    FAIL("no stream found");
    return derive_stream(0, "force5");
  }();
  auto [next, delta] = add_node(g, 0.5, 0.0, 1.0, forced);
  const NodeId added = 3;
  REQUIRE(next.node(added).level() == 5);
  CHECK(next.node(0).parent == added);
  CHECK_FALSE(next.has_edge(0, 2));      // dropped: outside the shrunken ball
  CHECK_FALSE(next.has_edge(0, 1));      // old parent link dropped
  CHECK(next.has_edge(0, added));
  CHECK(next.has_edge(1, added));        // node 1 reparents too (level 1 < 5)
  check_delta(before, next, delta);
  // The removed edges are exactly node 0's former out-of-ball connections.
  for (const EdgeRecord& e : delta.removed_edges) CHECK((e.u == 0 || e.v == 0));
  // Node 2 keeps its own parent link; it was never perturbed.
  CHECK(next.has_edge(2, 1));
  CHECK(next.node(2).parent == NodeId{1});
  // The incremental result matches the from-scratch rebuild.
  CHECK(next.structurally_equal(rebuild_from_levels(next)));
}

TEST_CASE("add far outside every ball touches only the new node") {
  const Params params = Params::with_p(0.5);
  PointSet ps = make_points(Region::square(100.0), {{1.0, 1.0}, {2.0, 1.0}, {1.5, 2.0}});
  HnGraph g = build_with_levels(ps, WeightAssignment::unit(3), params, {0, 0, 0}, {0, 2, 0});
  auto level0 = [&] {
    for (int seed = 0; seed < 4096; ++seed) {
      RngStream probe = derive_stream(seed, "force0");
      if (probe.geometric(0.5) == 0) return derive_stream(seed, "force0");
    }
    FAIL("no stream found");
    return derive_stream(0, "force0");
  }();
  HnGraph before = g;
  auto [next, delta] = add_node(g, 90.0, 90.0, 1.0, level0);
  // Every new edge is one of the new node's own connections; nothing is
  // removed and nobody reparents.
  CHECK_FALSE(delta.added_edges.empty());
  for (const EdgeRecord& e : delta.added_edges) CHECK((e.u == 3 || e.v == 3));
  CHECK(delta.removed_edges.empty());
  CHECK(delta.reparented.empty());
  check_delta(before, next, delta);
}

TEST_CASE("remove examples") {
  const Params params = Params::with_p(0.5);

  SUBCASE("removing the only node empties the graph") {
    PointSet ps = make_points(Region::square(10.0), {{5, 5}});
    HnGraph g = build_with_levels(ps, WeightAssignment::unit(1), params, {0}, {0});
    auto [next, delta] = remove_node(g, 0);
    CHECK(next.empty());
    CHECK(delta.affected == std::vector<NodeId>{0});
  }

  SUBCASE("unknown id raises not-found") {
    PointSet ps = make_points(Region::square(10.0), {{5, 5}});
    HnGraph g = build_with_levels(ps, WeightAssignment::unit(1), params, {0}, {0});
    CHECK_THROWS_AS(remove_node(g, 7), NotFoundError);
  }

  SUBCASE("removing a leaf only drops its incident edges") {
    PointSet ps = make_points(Region::square(10.0), {{0, 0}, {1, 0}, {5, 0}});
    HnGraph g = build_with_levels(ps, WeightAssignment::unit(3), params, {0, 0, 0}, {0, 1, 0});
    HnGraph before = g;
    auto [next, delta] = remove_node(g, 0);
    CHECK(delta.added_edges.empty());
    for (const EdgeRecord& e : delta.removed_edges) CHECK((e.u == 0 || e.v == 0));
    check_delta(before, next, delta);
    CHECK(next.structurally_equal(rebuild_from_levels(next)));
  }

  SUBCASE("removing a hub reparents orphans to the nearest survivor") {
    // Hub 2 (level 2) near the origin; node 3 (level 1) farther away.
    PointSet ps =
        make_points(Region::square(20.0), {{0.0, 0.0}, {1.0, 0.5}, {0.5, 0.0}, {4.0, 0.0}});
    HnGraph g =
        build_with_levels(ps, WeightAssignment::unit(4), params, {0, 0, 0, 0}, {0, 0, 2, 1});
    REQUIRE(g.node(0).parent == NodeId{2});
    REQUIRE(g.node(1).parent == NodeId{2});
    HnGraph before = g;
    auto [next, delta] = remove_node(g, 2);
    CHECK(next.node(0).parent == NodeId{3});
    CHECK(next.node(1).parent == NodeId{3});
    check_delta(before, next, delta);
    CHECK(next.structurally_equal(rebuild_from_levels(next)));
  }

  SUBCASE("removing the only top node promotes the next level to a clique") {
    PointSet ps =
        make_points(Region::square(20.0), {{0.0, 0.0}, {8.0, 0.0}, {4.0, 3.0}, {4.0, 1.0}});
    HnGraph g =
        build_with_levels(ps, WeightAssignment::unit(4), params, {0, 0, 0, 0}, {1, 1, 1, 3});
    REQUIRE(g.height() == 3);
    auto [next, delta] = remove_node(g, 3);
    CHECK(next.height() == 1);
    CHECK(next.has_edge(0, 1));
    CHECK(next.has_edge(0, 2));
    CHECK(next.has_edge(1, 2));
    CHECK(next.structurally_equal(rebuild_from_levels(next)));
  }
}

TEST_CASE("update_weight examples") {
  const Params params = Params::with_p(0.5);
  PointSet ps = make_points(Region::square(20.0), {{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}});

  SUBCASE("weight change within the same power stays a no-op") {
    HnGraph g = build_with_levels(ps, WeightAssignment{{8.0, 1.0, 1.0}}, params, {3, 0, 0},
                                  {0, 0, 0});
    auto [next, delta] = update_weight(g, 0, 9.0);
    CHECK(delta.empty());
    CHECK(next.node(0).weight == 9.0);
    CHECK(next.node(0).level() == 3);
  }

  SUBCASE("weight 8 -> 4 with zero increment drops the level from 3 to 2") {
    HnGraph g = build_with_levels(ps, WeightAssignment{{8.0, 1.0, 1.0}}, params, {3, 0, 0},
                                  {0, 0, 0});
    auto [next, delta] = update_weight(g, 0, 4.0);
    CHECK(next.node(0).level() == 2);
    CHECK(next.node(0).prob_inc == 0);
    CHECK(next.structurally_equal(rebuild_from_levels(next)));
  }

  SUBCASE("weight below one and unknown ids are rejected") {
    HnGraph g = build_with_levels(ps, WeightAssignment::unit(3), params, {0, 0, 0}, {0, 1, 0});
    CHECK_THROWS_AS(update_weight(g, 0, 0.25), ParameterError);
    CHECK_THROWS_AS(update_weight(g, 42, 2.0), NotFoundError);
  }

  SUBCASE("a drain sequence matches the rebuild after every step") {
    HnGraph g = build_with_levels(ps, WeightAssignment{{16.0, 2.0, 1.0}}, params, {4, 1, 0},
                                  {0, 0, 0});
    for (double w : {14.0, 7.9, 3.5, 1.9, 1.0}) {
      HnGraph before = g;
      auto [next, delta] = update_weight(g, 0, w);
      check_delta(before, next, delta);
      g = std::move(next);
      CHECK(g.structurally_equal(rebuild_from_levels(g)));
    }
    CHECK(g.node(0).level() == 0);
  }

  SUBCASE("a weight gain re-routes nearby lower nodes through the riser") {
    HnGraph g = build_with_levels(ps, WeightAssignment::unit(3), params, {0, 0, 0}, {0, 1, 0});
    HnGraph before = g;
    auto [next, delta] = update_weight(g, 0, 4.0);  // level 0 -> 2
    CHECK(next.node(0).level() == 2);
    CHECK(next.node(1).parent == NodeId{0});
    check_delta(before, next, delta);
    CHECK(next.structurally_equal(rebuild_from_levels(next)));
  }
}

TEST_CASE("repair-rebuild equivalence over random mixed sequences") {
  const Params params = Params::with_p(0.5);
  const Region region = Region::square(10.0);
  const int sequences = 60, events = 40;
  for (int s = 0; s < sequences; ++s) {
    const std::uint64_t seed = derive_stream(31337, "seq", s).next_u64();
    PointSet ps = uniform_points(region, 24, seed);
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
    RngStream ops = derive_stream(seed, "ops");
    for (int e = 0; e < events; ++e) {
      const std::uint64_t kind = ops.next_below(3);
      HnGraph before = g;
      GraphDelta delta;
      if (kind == 0 || g.size() < 4) {
        RngStream level_stream = derive_stream(seed, "lvl", e);
        auto [next, d] = add_node(g, ops.next_unit() * 10, ops.next_unit() * 10,
                                  1.0 + ops.next_unit() * 20.0, level_stream);
        g = std::move(next);
        delta = std::move(d);
      } else if (kind == 1) {
        const NodeId id = g.node_at(static_cast<std::size_t>(ops.next_below(g.size()))).id;
        auto [next, d] = remove_node(g, id);
        g = std::move(next);
        delta = std::move(d);
      } else {
        const NodeId id = g.node_at(static_cast<std::size_t>(ops.next_below(g.size()))).id;
        auto [next, d] = update_weight(g, id, 1.0 + ops.next_unit() * 20.0);
        g = std::move(next);
        delta = std::move(d);
      }
      check_delta(before, g, delta);
    }
    REQUIRE(g.structurally_equal(rebuild_from_levels(g)));
    if (!g.empty()) CHECK(is_connected(g));  // repairs preserve connectivity
  }
}

TEST_CASE("radius-bounded graphs are repaired through the unbounded model") {
  const Params params = Params::with_p(0.5);
  const Region region = Region::square(10.0);
  PointSet ps = uniform_points(region, 30, 5150);
  HnGraph g = build_radius_bounded(ps, WeightAssignment::unit(30), params,
                                   std::vector<double>(30, 2.5), 5150);
  RngStream ops = derive_stream(5150, "bounded-ops");
  for (int e = 0; e < 10; ++e) {
    HnGraph before = g;
    const std::uint64_t kind = ops.next_below(3);
    GraphDelta delta;
    if (kind == 0) {
      RngStream level_stream = derive_stream(5150, "bounded-lvl", e);
      auto [next, d] = add_node(g, ops.next_unit() * 10, ops.next_unit() * 10, 1.0, level_stream,
                                2.5);
      g = std::move(next);
      delta = std::move(d);
    } else if (kind == 1 && g.size() > 2) {
      auto [next, d] = remove_node(g, g.node_at(ops.next_below(g.size())).id);
      g = std::move(next);
      delta = std::move(d);
    } else {
      auto [next, d] =
          update_weight(g, g.node_at(ops.next_below(g.size())).id, 1.0 + ops.next_unit() * 10);
      g = std::move(next);
      delta = std::move(d);
    }
    check_delta(before, g, delta);
    CHECK(g.radius_bounded());
    CHECK(g.structurally_equal(rebuild_from_levels(g)));
  }
}

TEST_CASE("trace parsing and replay") {
  const std::string text =
      "# events\n"
      "ADD 1.0 1.0 1\n"
      "ADD 2.0 1.0 4 # a heavier arrival\n"
      "WEIGHT 1 2.0\n"
      "REMOVE 0\n";
  const std::vector<TraceEvent> events = parse_trace(text);
  REQUIRE(events.size() == 4);
  CHECK(events[0].kind == TraceEvent::Kind::add);
  CHECK(events[1].w == 4.0);
  CHECK(events[2].kind == TraceEvent::Kind::weight);
  CHECK(events[3].kind == TraceEvent::Kind::remove);

  CHECK_THROWS_AS(parse_trace("FROB 1 2\n"), ParameterError);
  CHECK_THROWS_AS(parse_trace("ADD 1.0\n"), ParameterError);

  const Params params = Params::with_p(0.5);
  PointSet ps;
  ps.region = Region::square(10.0);
  HnGraph g0 = build_graph(ps, WeightAssignment::unit(0), params, 9);
  auto [g, steps] = replay_trace(g0, events, 9);
  CHECK(steps.size() == 4);
  CHECK(g.size() == 1);  // two adds, one removal
  CHECK(g.has_node(1));
  CHECK(g.node(1).weight == 2.0);
  // Determinism: replaying again gives the same graph.
  auto [g2, steps2] = replay_trace(g0, events, 9);
  CHECK(g.structurally_equal(g2));
}
