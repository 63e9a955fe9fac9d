#include "core/geometry.hpp"

namespace bcsim {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool SensingArea::contains(const Position& p) const {
  return distance(p, center) <= radius;
}

}  // namespace bcsim
