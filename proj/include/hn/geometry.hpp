#pragma once

#include <cstdint>
#include <vector>

#include "hn/rng.hpp"

namespace hn {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

// Bounded planar region with either the plain Euclidean metric (square) or
// the wraparound metric (torus).
struct Region {
  enum class Kind { square, torus };

  Kind kind = Kind::square;
  double side = 1.0;

  static Region square(double side);
  static Region torus(double side);

  double area() const { return side * side; }
  bool contains(double x, double y) const { return x >= 0 && x < side && y >= 0 && y < side; }
  // Largest possible distance between two points of the region.
  double diameter() const;
};

struct Point {
  NodeId id = 0;
  double x = 0;
  double y = 0;
};

// Immutable set of generated node positions. Ids are dense 0..n-1 in
// generation order; all tie-breaks downstream use ids.
struct PointSet {
  Region region;
  std::uint64_t seed = 0;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
};

// Squared distance under the region metric (torus: minimum over the nine
// wrap images). No containment checks: callers on the hot path guarantee
// membership.
double distance_sq(double ax, double ay, double bx, double by, const Region& region);

// Distance with containment validation; throws ParameterError if either
// point lies outside the region.
double distance(const Point& a, const Point& b, const Region& region);

// Count ~ Poisson(lambda * area), positions i.i.d. uniform. lambda > 0.
PointSet poisson_points(const Region& region, double lambda, std::uint64_t seed);

// Exactly n i.i.d. uniform points.
PointSet uniform_points(const Region& region, std::size_t n, std::uint64_t seed);

}  // namespace hn
