#pragma once

#include <cmath>

namespace bcsim {

/// A point on the 2-D simulation plane, in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Circular region an application wants sensed.
struct SensingArea {
  Position center;
  double radius = 0.0;  // meters, > 0

  bool contains(const Position& p) const;
};

/// Euclidean distance between two points; non-negative and symmetric.
double distance(const Position& a, const Position& b);

}  // namespace bcsim
