#include "chainrec/geometry.hpp"

#include <cmath>

namespace chainrec {

Point chord_rotate(const CircleSpec& c, Point z, double chord, Direction dir) {
  const double tol = kOnCircleTol * std::max(1.0, c.radius);
  const Point off = z - c.center;
  const double d = norm(off);
  if (std::abs(d - c.radius) > tol)
    throw NotOnCircle("chord_rotate: point is off the circle by " +
                      std::to_string(std::abs(d - c.radius)));
  if (chord > 2.0 * c.radius * (1.0 + 1e-15))
    throw ChordTooLong("chord_rotate: chord exceeds the diameter");
  if (chord <= 0.0) {
    // identity step, still re-project
    const double inv = c.radius / d;
    return c.center + inv * off;
  }
  const double theta = 2.0 * std::asin(std::min(1.0, chord / (2.0 * c.radius)));
  const double phi0 = std::atan2(off.s, off.r);
  const double phi = phi0 + (dir == Direction::ccw ? theta : -theta);
  return c.center + Point{c.radius * std::cos(phi), c.radius * std::sin(phi)};
}

BoxR box_dilate(const BoxR& b, double pad) {
  return {{b.lo.r - pad, b.lo.s - pad}, {b.hi.r + pad, b.hi.s + pad}};
}

}  // namespace chainrec
