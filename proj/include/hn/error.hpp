#pragma once

#include <stdexcept>
#include <string>

namespace hn {

// Invalid argument values (non-positive densities, weights < 1, points
// outside the region, malformed configs, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Lookup of a node id (or other key) that is not present.
class NotFoundError : public std::out_of_range {
 public:
  explicit NotFoundError(const std::string& what) : std::out_of_range(what) {}
};

// A route or ancestor query that cannot be satisfied (possible in
// radius-bounded graphs).
class UnreachableError : public std::runtime_error {
 public:
  explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

// The level cap bound during a geometric promotion draw.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// A sweep or sampling operation that produced no usable result.
class NoResultError : public std::runtime_error {
 public:
  explicit NoResultError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hn
