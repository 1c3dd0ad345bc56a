#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

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

}  // namespace

TEST_CASE("histogram accounting stays consistent") {
  Histogram h = Histogram::uniform(0.0, 10.0, 10);
  for (double x : {0.5, 1.5, 1.7, 9.99, 11.0, -1.0}) h.add(x);
  std::uint64_t total = 0;
  for (auto c : h.counts) total += c;
  CHECK(total == h.n);
  CHECK(h.counts[0] == 2);  // 0.5 and the clamped -1.0
  CHECK(h.counts[1] == 2);
  CHECK(h.counts[9] == 2);  // 9.99 and the clamped 11.0
  CHECK(h.mean() == doctest::Approx((0.5 + 1.5 + 1.7 + 9.99 + 11.0 - 1.0) / 6.0));
}

TEST_CASE("degree_stats trivia") {
  const Params params = Params::with_p(0.5);
  PointSet one = make_points(Region::square(10.0), {{1, 1}});
  HnGraph g1 = build_with_levels(one, WeightAssignment::unit(1), params, {0}, {0});
  Histogram h1 = degree_stats(g1);
  CHECK(h1.n == 1);
  CHECK(h1.counts[h1.bin_of(0.0)] == 1);

  PointSet two = make_points(Region::square(10.0), {{1, 1}, {2, 2}});
  HnGraph g2 = build_with_levels(two, WeightAssignment::unit(2), params, {0, 0}, {0, 1});
  Histogram h2 = degree_stats(g2);
  CHECK(h2.n == 2);
  CHECK(h2.mean() == doctest::Approx(1.0));
}

TEST_CASE("edge length stats and density comparison") {
  const Params params = Params::with_p(0.5);
  PointSet two = make_points(Region::square(10.0), {{1.0, 1.0}, {4.0, 5.0}});
  HnGraph g = build_with_levels(two, WeightAssignment::unit(2), params, {0, 0}, {0, 1});
  Histogram h = edge_length_stats(g);
  CHECK(h.n == 1);
  CHECK(h.mean() == doctest::Approx(5.0));

  // Higher density gives stochastically shorter edges.
  auto median_edge = [&](double lambda, int seed) {
    PointSet ps = poisson_points(Region::torus(5.0), lambda, seed);
    HnGraph gg = build_graph(ps, WeightAssignment::unit(ps.size()), params, seed);
    std::vector<double> lengths;
    for (const EdgeRecord& e : gg.sorted_edges()) lengths.push_back(gg.dist(e.u, e.v));
    std::nth_element(lengths.begin(), lengths.begin() + lengths.size() / 2, lengths.end());
    return lengths[lengths.size() / 2];
  };
  CHECK(median_edge(500.0, 21) < median_edge(100.0, 22));
}

TEST_CASE("direct_edge_prob_bound closed form") {
  SUBCASE("frozen reference value") {
    // Independently evaluated with 30-digit arithmetic before the build.
    CHECK(direct_edge_prob_bound(1.0, 1.0, 0.5) ==
          doctest::Approx(0.4916252921837978).epsilon(1e-12));
  }
  SUBCASE("decreases in l and vanishes in the limit") {
    CHECK(direct_edge_prob_bound(2.0, 1.0, 0.5) < direct_edge_prob_bound(1.0, 1.0, 0.5));
    CHECK(direct_edge_prob_bound(4.0, 1.0, 0.5) < direct_edge_prob_bound(2.0, 1.0, 0.5));
    CHECK(direct_edge_prob_bound(1e6, 1.0, 0.5) < 1e-12);
  }
  SUBCASE("domain violations") {
    CHECK_THROWS_AS(direct_edge_prob_bound(0.0, 1.0, 0.5), ParameterError);
    CHECK_THROWS_AS(direct_edge_prob_bound(1.0, 0.0, 0.5), ParameterError);
    CHECK_THROWS_AS(direct_edge_prob_bound(1.0, 1.0, 1.0), ParameterError);
  }
}

TEST_CASE("empirical direct-edge frequency sits under the closed-form bound") {
  const Params params = Params::with_p(0.5);
  const Region region = Region::torus(10.0);
  const double l = 1.0, band = 0.025;
  const double lo_sq = (l - band) * (l - band), hi_sq = (l + band) * (l + band);
  std::uint64_t pairs = 0, edges = 0;
  for (int seed = 0; seed < 40; ++seed) {
    PointSet ps = poisson_points(region, 5.0, 3300 + seed);
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, 3300 + seed);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        const double d2 = g.dist_sq(g.node_at(i), g.node_at(j));
        if (d2 < lo_sq || d2 > hi_sq) continue;
        ++pairs;
        if (g.has_edge(g.node_at(i).id, g.node_at(j).id)) ++edges;
      }
    }
  }
  REQUIRE(pairs > 1000);
  const double p_hat = static_cast<double>(edges) / static_cast<double>(pairs);
  const double sigma = std::sqrt(p_hat * (1 - p_hat) / static_cast<double>(pairs));
  CHECK(p_hat <= direct_edge_prob_bound(l, 5.0, 0.5) + 2 * sigma);
}

TEST_CASE("is_connected basics") {
  const Params params = Params::with_p(0.5);
  PointSet empty;
  empty.region = Region::square(1.0);
  CHECK(is_connected(build_graph(empty, WeightAssignment::unit(0), params, 1)));

  PointSet two = make_points(Region::square(10.0), {{0.0, 0.0}, {5.0, 0.0}});
  HnGraph g = build_radius_bounded_with_levels(two, WeightAssignment::unit(2), params, {0, 0},
                                               {0, 1}, {4.0, 4.0});
  CHECK_FALSE(is_connected(g));
  // Every unbounded build is connected.
  for (int seed = 0; seed < 6; ++seed) {
    PointSet ps = poisson_points(Region::square(8.0), 2.0, 660 + seed);
    if (ps.size() == 0) continue;
    CHECK(is_connected(build_graph(ps, WeightAssignment::unit(ps.size()), params, 660 + seed)));
  }
}

TEST_CASE("find_lambda_min with a radius covering the region") {
  // r above the diameter: the radius never suppresses anything, so the
  // threshold is just the smallest density whose trials all have points.
  const Region region = Region::square(2.0);
  const ThresholdResult t = find_lambda_min(3.0, 0.5, region, 0.2, 10, 97);
  CHECK(t.r == 3.0);
  CHECK(t.lambda_min >= 0.2);
  CHECK(t.lambda_min <= 3.0);
  CHECK(t.step == 0.2);
  CHECK(t.increments_checked >= 11);
  // Deterministic.
  const ThresholdResult t2 = find_lambda_min(3.0, 0.5, region, 0.2, 10, 97);
  CHECK(t.lambda_min == t2.lambda_min);

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(find_lambda_min(0.0, 0.5, region, 0.1, 5, 1), ParameterError);
    CHECK_THROWS_AS(find_lambda_min(1.0, 0.5, region, 0.0, 5, 1), ParameterError);
  }

  SUBCASE("an impossible sweep reports no result") {
    // Cap the sweep immediately below any plausible threshold.
    CHECK_THROWS_AS(find_lambda_min(0.05, 0.5, Region::square(10.0), 0.1, 5, 1, 0.3),
                    NoResultError);
  }
}

TEST_CASE("hop_stats") {
  const Params params = Params::with_p(0.5);

  SUBCASE("two nodes: adjacent pairs cost one hop, self pairs none") {
    // The pair sits far enough apart that its distance bucket is distinct
    // from the zero bucket.
    PointSet two = make_points(Region::square(10.0), {{1.0, 1.0}, {9.0, 7.0}});
    HnGraph g = build_with_levels(two, WeightAssignment::unit(2), params, {0, 0}, {0, 1});
    HopStats hs = hop_stats(g, 400, 5);
    CHECK(hs.unreachable == 0);
    const std::size_t self_bin = hs.by_distance.bin_of(0.0);
    const std::size_t pair_bin = hs.by_distance.bin_of(10.0);
    REQUIRE(self_bin != pair_bin);
    CHECK(hs.by_distance.bucket_mean(self_bin) == doctest::Approx(0.0));
    CHECK(hs.by_distance.bucket_mean(pair_bin) == doctest::Approx(1.0));
  }

  SUBCASE("mean hops grow sublinearly with distance") {
    PointSet ps = poisson_points(Region::torus(8.0), 20.0, 31415);
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, 31415);
    HopStats hs = hop_stats(g, 4000, 31415);
    CHECK(hs.unreachable == 0);
    const Histogram& h = hs.by_distance;
    // Compare means at d and 2d for a mid-range bucket pair.
    const std::size_t b1 = h.bin_of(1.4);
    const std::size_t b2 = h.bin_of(2.8);
    REQUIRE(h.counts[b1] > 100);
    REQUIRE(h.counts[b2] > 100);
    CHECK(h.bucket_mean(b2) / h.bucket_mean(b1) < 2.0);
    // Populated buckets are (weakly) monotone in distance.
    double prev = 0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      if (h.counts[b] < 200) continue;
      CHECK(h.bucket_mean(b) >= prev - 0.15);
      prev = std::max(prev, h.bucket_mean(b));
    }
  }

  SUBCASE("unreachable pairs are reported separately") {
    PointSet two = make_points(Region::square(20.0), {{0.0, 0.0}, {15.0, 0.0}});
    HnGraph g = build_radius_bounded_with_levels(two, WeightAssignment::unit(2), params, {0, 0},
                                                 {0, 1}, {3.0, 3.0});
    HopStats hs = hop_stats(g, 100, 5);
    CHECK(hs.unreachable > 0);
  }
}

TEST_CASE("stretch_distribution") {
  const Params params = Params::with_p(0.5);

  SUBCASE("requires a torus and a sane band") {
    PointSet sq = make_points(Region::square(10.0), {{1, 1}, {2, 2}});
    HnGraph g = build_with_levels(sq, WeightAssignment::unit(2), params, {0, 0}, {0, 1});
    CHECK_THROWS_AS(stretch_distribution(g, 0.1, 0.01, 1), ParameterError);
  }

  SUBCASE("stretch is always at least one; a direct pair hits exactly one") {
    PointSet ps = make_points(Region::torus(1.0), {{0.2, 0.2}, {0.3, 0.2}});
    HnGraph g = build_with_levels(ps, WeightAssignment::unit(2), params, {0, 0}, {0, 1});
    Histogram h = stretch_distribution(g, 0.1, 0.01, 1);
    CHECK(h.n == 1);
    CHECK(h.mean() == doctest::Approx(1.0));
    CHECK_THROWS_AS(stretch_distribution(g, 0.5, 0.01, 1), NoResultError);
  }

  SUBCASE("random torus instance: all sampled stretches >= 1") {
    PointSet ps = poisson_points(Region::torus(1.0), 300.0, 2024);
    HnGraph g = build_graph(ps, WeightAssignment::unit(ps.size()), params, 2024);
    Histogram h = stretch_distribution(g, 0.1, 0.005, 2024);
    REQUIRE(h.n > 50);
    CHECK(h.counts[0] >= 0);
    CHECK(h.mean() >= 1.0);
  }
}

TEST_CASE("height tails") {
  SUBCASE("k = 0 has tail one; single node follows the geometric tail") {
    const std::vector<double> tail = height_tail(30000, 1, 0.5, 11);
    CHECK(tail[0] == 1.0);
    for (std::size_t k = 1; k < std::min<std::size_t>(tail.size(), 7); ++k) {
      const double expected = std::pow(0.5, static_cast<double>(k));
      const double sigma = std::sqrt(expected * (1 - expected) / 30000.0);
      CHECK(std::fabs(tail[k] - expected) <= 4 * sigma);
    }
  }

  SUBCASE("union bound holds for n = 100") {
    const std::size_t trials = 4000;
    const std::vector<double> tail = height_tail(trials, 100, 0.5, 12);
    CHECK(tail[0] == 1.0);
    for (std::size_t k = 0; k < tail.size(); ++k) {
      if (tail[k] <= 0) continue;
      const double bound = std::min(1.0, 100.0 * std::pow(0.5, static_cast<double>(k)));
      const double sigma = std::sqrt(tail[k] * (1 - tail[k]) / static_cast<double>(trials));
      CHECK(tail[k] <= bound + 3 * sigma);
    }
  }

  SUBCASE("poisson-count variant obeys lambda * area * p^k") {
    const std::size_t trials = 2000;
    const Region region = Region::square(5.0);
    const double lambda = 2.0;
    const std::vector<double> tail = height_tail_poisson(trials, lambda, region, 0.5, 13);
    for (std::size_t k = 0; k < tail.size(); ++k) {
      if (tail[k] <= 0) continue;
      const double bound =
          std::min(1.0, lambda * region.area() * std::pow(0.5, static_cast<double>(k)));
      const double sigma = std::sqrt(tail[k] * (1 - tail[k]) / static_cast<double>(trials));
      CHECK(tail[k] <= bound + 3 * sigma);
    }
  }

  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(height_tail(10, 0, 0.5, 1), ParameterError);
    CHECK_THROWS_AS(height_tail(0, 5, 0.5, 1), ParameterError);
  }
}

TEST_CASE("log-linear fit recovers a synthetic exponential") {
  Histogram h = Histogram::uniform(1.0, 5.0, 8);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    h.counts[b] = static_cast<std::uint64_t>(std::llround(1e6 * std::exp(-1.7 * h.bucket_center(b))));
  }
  const LinFit fit = fit_log_linear(h);
  CHECK(fit.slope == doctest::Approx(-1.7).epsilon(0.01));
  CHECK(fit.r2 > 0.999);
}
