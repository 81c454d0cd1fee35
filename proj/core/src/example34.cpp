#include "chainrec/example34.hpp"

#include <cmath>
#include <limits>

namespace chainrec {

namespace {

double step_chord(Point z) {
  return 0.5 * std::min(dist(z, kAnchorX), dist(z, kAnchorY));
}

}  // namespace

PencilGeometry pencil_parameter(Point z) {
  if (!finite(z)) throw BadParameter("pencil_parameter: point must be finite");
  if (std::abs(z.s) < kSlitMin)
    throw OffDomain("pencil_parameter: point on the removed axis");
  PencilGeometry g;
  g.t = (z.r * z.r + z.s * z.s - 1.0) / (2.0 * z.s);
  g.center = {0.0, g.t};
  g.radius = std::hypot(g.t, 1.0);
  return g;
}

// Every arc flows counterclockwise: the upper arcs run from y around the top
// toward x, the lower arcs from x around the bottom toward y. The step chord
// d(z,{x,y})/2 is strictly shorter than the straight-line distance to either
// anchor, so the image never reaches the arc boundary.
Point eval34(Point z) {
  const PencilGeometry g = pencil_parameter(z);
  Point out = chord_rotate(g.circle(), z, step_chord(z), Direction::ccw);
  if (!((out.s > 0.0) == (z.s > 0.0)))
    throw NoConvergence("eval34: step crossed an anchor (geometry bug)");
  return out;
}

Point eval34_inverse(Point z) {
  const PencilGeometry g = pencil_parameter(z);
  const double R = g.radius;
  const Point off = z - g.center;
  const double phi_z = std::atan2(off.s, off.r);

  const auto pos = [&](double phi) {
    return g.center + Point{R * std::cos(phi), R * std::sin(phi)};
  };
  // Lifted angle of the anchor sitting clockwise-behind z on its open arc
  // (y for upper arcs, x for lower arcs).
  const Point behind = z.s > 0.0 ? kAnchorY : kAnchorX;
  const Point boff = behind - g.center;
  const double phi_b_raw = std::atan2(boff.s, boff.r);
  double delta = phi_z - phi_b_raw;
  delta -= 2.0 * M_PI * std::floor(delta / (2.0 * M_PI));
  const double phi_behind = phi_z - delta;  // <= phi_z, same circle point as the anchor

  // F(phi0) = phi0 + step(phi0) - phi_z is strictly increasing (the step's
  // angular derivative is < 1), with F < 0 at the clipped lower end.
  const auto F = [&](double phi0) {
    const Point w = pos(phi0);
    const double chord = step_chord(w);
    const double theta = 2.0 * std::asin(std::min(1.0, chord / (2.0 * R)));
    return phi0 + theta - phi_z;
  };
  const double kappa = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(phi_z));
  double lo = std::max(phi_z - M_PI / 3.0 - 0.05, phi_behind + kappa);
  double hi = phi_z;
  if (!(F(lo) <= 0.0 && F(hi) >= 0.0))
    throw NoConvergence("eval34_inverse: failed to bracket the pre-image");
  const double phi0 = bisect_increasing(F, lo, hi, 200);
  Point out = pos(phi0);
  if (std::abs(out.s) < kSlitMin)
    throw OffDomain("eval34_inverse: pre-image underflows the slit guard");
  return out;
}

MapHandle example34_handle() {
  MapHandle m;
  m.forward = [](Point z) { return eval34(z); };
  m.backward = [](Point z) { return eval34_inverse(z); };
  m.domain = [](Point z) { return std::abs(z.s) >= kSlitMin; };
  m.label = "example34";
  return m;
}

}  // namespace chainrec
