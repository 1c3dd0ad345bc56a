#include "hn/geometry.hpp"

#include <cmath>
#include <limits>

#include "hn/error.hpp"

namespace hn {

static void check_side(double side) {
  if (!(side > 0) || !std::isfinite(side)) {
    throw ParameterError("region side must be positive and finite");
  }
}

Region Region::square(double side) {
  check_side(side);
  return Region{Kind::square, side};
}

Region Region::torus(double side) {
  check_side(side);
  return Region{Kind::torus, side};
}

double Region::diameter() const {
  const double d = side * std::sqrt(2.0);
  return kind == Kind::torus ? d / 2.0 : d;
}

double distance_sq(double ax, double ay, double bx, double by, const Region& region) {
  double dx = ax - bx;
  double dy = ay - by;
  if (region.kind == Region::Kind::torus) {
    dx = std::fabs(dx);
    dy = std::fabs(dy);
    if (region.side - dx < dx) dx = region.side - dx;
    if (region.side - dy < dy) dy = region.side - dy;
  }
  return dx * dx + dy * dy;
}

double distance(const Point& a, const Point& b, const Region& region) {
  if (!region.contains(a.x, a.y) || !region.contains(b.x, b.y)) {
    throw ParameterError("distance: point outside region");
  }
  return std::sqrt(distance_sq(a.x, a.y, b.x, b.y, region));
}

static PointSet fill_uniform(const Region& region, std::size_t n, std::uint64_t seed) {
  PointSet ps;
  ps.region = region;
  ps.seed = seed;
  ps.points.reserve(n);
  RngStream pos = derive_stream(seed, "points");
  for (std::size_t i = 0; i < n; ++i) {
    Point p;
    p.id = static_cast<NodeId>(i);
    p.x = pos.next_unit() * region.side;
    p.y = pos.next_unit() * region.side;
    ps.points.push_back(p);
  }
  return ps;
}

PointSet poisson_points(const Region& region, double lambda, std::uint64_t seed) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    throw ParameterError("poisson_points: lambda must be positive");
  }
  RngStream count_stream = derive_stream(seed, "poisson-count");
  const std::uint64_t n = count_stream.poisson(lambda * region.area());
  return fill_uniform(region, static_cast<std::size_t>(n), seed);
}

PointSet uniform_points(const Region& region, std::size_t n, std::uint64_t seed) {
  return fill_uniform(region, n, seed);
}

}  // namespace hn
