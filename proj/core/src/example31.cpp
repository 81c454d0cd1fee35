#include "chainrec/example31.hpp"

#include <cmath>

namespace chainrec {

const char* to_string(LeafSegment seg) {
  switch (seg) {
    case LeafSegment::J1: return "J1";
    case LeafSegment::A1: return "A1";
    case LeafSegment::A0: return "A0";
    case LeafSegment::A2: return "A2";
    case LeafSegment::J2: return "J2";
  }
  return "?";
}

LeafGeometry leaf_geometry(double t) {
  if (!std::isfinite(t) || t <= 0.0)
    throw BadParameter("leaf_geometry: t must be finite and > 0");
  LeafGeometry g;
  g.t = t;
  if (t >= 1.0) {
    g.center = {0.0, 0.0};
    g.radius = std::sqrt(2.0 * t);
    g.w1 = {std::sqrt(t), std::sqrt(t)};
  } else {
    const double t6 = t * t * t * t * t * t;
    g.center = {(1.0 - t6) / t, 0.0};
    g.radius = t * t * std::sqrt(1.0 + t6);
    g.w1 = {1.0 / t, t * t};
  }
  const double pv = g.w1.r - 0.5 * g.w1.s;
  const double off = pv - g.center.r;
  g.v1 = {pv, std::sqrt(std::max(0.0, g.radius * g.radius - off * off))};
  g.w2 = reflect(g.w1);
  g.v2 = reflect(g.v1);
  g.chord = dist(g.v1, g.w1);
  return g;
}

namespace {

constexpr double kTMin = 1e-6;
constexpr double kTMax = 1e8;

// Signed side of the leaf boundary for a point in the upper half plane:
// negative when the leaf is too small to enclose zz (t too small), positive
// when zz is strictly inside the region the leaf bounds. Monotone increasing
// in t because the leaves are nested and partition the plane.
double leaf_side(const LeafGeometry& g, Point zz) {
  const double leftmost = g.center.r - g.radius;
  if (zz.r < leftmost) return zz.r - leftmost;
  if (zz.r <= g.w1.r) {
    const double off = zz.r - g.center.r;
    const double height =
        std::sqrt(std::max(0.0, g.radius * g.radius - off * off));
    return height - zz.s;
  }
  return g.t / zz.r - zz.s;
}

struct LeafPoint {
  double t;
  LeafSegment seg;
  LeafGeometry geo;
};

LeafPoint leaf_locate(Point z) {
  if (!finite(z)) throw BadParameter("leaf_parameter: point must be finite");
  const Point zz = z.s >= 0.0 ? z : reflect(z);
  const auto side_at = [&](double t) { return leaf_side(leaf_geometry(t), zz); };
  if (side_at(kTMin) > 0.0 || side_at(kTMax) < 0.0)
    throw NotCovered("leaf_parameter: no bracket in [1e-6, 1e8]");
  // Bisect in log t: 72 halvings of the ~32 nat bracket reach full precision.
  const double lt = bisect_increasing(
      [&](double u) { return side_at(std::exp(u)); }, std::log(kTMin),
      std::log(kTMax), 72);
  LeafPoint out;
  out.t = std::exp(lt);
  out.geo = leaf_geometry(out.t);
  const LeafGeometry& g = out.geo;

  const double scale = std::max(1.0, norm(zz));
  const double tol = 1e-9 * scale;
  const double d_arc = std::abs(dist(zz, g.center) - g.radius);
  const bool arc_col = zz.r <= g.w1.r + tol;
  const bool hyp_col = zz.r >= g.w1.r - tol && zz.r > 0.0;
  const double d_hyp = hyp_col ? std::abs(zz.s - g.t / zz.r) : 1e300;

  LeafSegment seg;
  if (arc_col && (!hyp_col || d_arc <= d_hyp + tol)) {
    seg = zz.r < g.v1.r ? LeafSegment::A0
                        : (z.s >= 0.0 ? LeafSegment::A1 : LeafSegment::A2);
  } else {
    seg = z.s >= 0.0 ? LeafSegment::J1 : LeafSegment::J2;
  }
  out.seg = seg;
  return out;
}

// Rule (b) forward step for a point on the upper branch J1: the abscissa
// drops by q(z)/2; the image stays on the leaf with positive ordinate, on the
// branch when the new abscissa is still right of w1 and on the arc otherwise.
Point rule_b_forward(Point z, const LeafGeometry& g) {
  const double p1 = z.r - 0.5 * z.s;
  if (p1 >= g.w1.r) return {p1, g.t / p1};
  const double off = p1 - g.center.r;
  return {p1, std::sqrt(std::max(0.0, g.radius * g.radius - off * off))};
}

// Inverse of rule (b): the unique branch point p with p - t/(2p) = z.r.
Point rule_b_inverse(Point z, const LeafGeometry& g) {
  const double p = 0.5 * (z.r + std::sqrt(z.r * z.r + 2.0 * g.t));
  return {p, g.t / p};
}

Point snap_to_circle(Point z, const LeafGeometry& g) {
  const Point off = z - g.center;
  const double d = norm(off);
  if (d == 0.0) return z;
  return g.center + (g.radius / d) * off;
}

}  // namespace

std::pair<double, LeafSegment> leaf_parameter(Point z) {
  const LeafPoint lp = leaf_locate(z);
  return {lp.t, lp.seg};
}

Point eval31(Point z) {
  const LeafPoint lp = leaf_locate(z);
  const LeafGeometry& g = lp.geo;
  switch (lp.seg) {
    case LeafSegment::J1:
      return rule_b_forward(z, g);
    case LeafSegment::A1:
    case LeafSegment::A0:
      return chord_rotate(g.circle(), snap_to_circle(z, g), g.chord,
                          Direction::ccw);
    case LeafSegment::A2:
    case LeafSegment::J2:
      // rule (c): f = reflect . f^-1 . reflect; the reflected point lies on
      // A1 or J1 whose inverse is the closed-form branch solve.
      return reflect(rule_b_inverse(reflect(z), g));
  }
  throw Error("eval31: unreachable");
}

Point eval31_inverse(Point z) {
  const LeafPoint lp = leaf_locate(z);
  const LeafGeometry& g = lp.geo;
  switch (lp.seg) {
    case LeafSegment::J1:
    case LeafSegment::A1:
      return rule_b_inverse(z, g);
    case LeafSegment::A0:
    case LeafSegment::A2:
      return chord_rotate(g.circle(), snap_to_circle(z, g), g.chord,
                          Direction::cw);
    case LeafSegment::J2:
      return reflect(rule_b_forward(reflect(z), g));
  }
  throw Error("eval31_inverse: unreachable");
}

MapHandle example31_handle() {
  MapHandle m;
  m.forward = [](Point z) { return eval31(z); };
  m.backward = [](Point z) { return eval31_inverse(z); };
  m.label = "example31";
  return m;
}

}  // namespace chainrec
