#pragma once

#include <algorithm>
#include <cmath>

#include "chainrec/errors.hpp"

namespace chainrec {

struct Point {
  double r = 0.0;  // abscissa
  double s = 0.0;  // ordinate

  friend Point operator+(Point a, Point b) { return {a.r + b.r, a.s + b.s}; }
  friend Point operator-(Point a, Point b) { return {a.r - b.r, a.s - b.s}; }
  friend Point operator*(double k, Point a) { return {k * a.r, k * a.s}; }
  friend bool operator==(Point a, Point b) { return a.r == b.r && a.s == b.s; }
};

inline bool finite(Point z) { return std::isfinite(z.r) && std::isfinite(z.s); }
inline double norm(Point z) { return std::hypot(z.r, z.s); }
inline double dist(Point a, Point b) { return std::hypot(a.r - b.r, a.s - b.s); }

/// Axis-aligned box, lo component-wise <= hi.
struct BoxR {
  Point lo, hi;

  double width() const { return hi.r - lo.r; }
  double height() const { return hi.s - lo.s; }
  double half_diag() const { return 0.5 * std::hypot(width(), height()); }
  Point center() const { return {0.5 * (lo.r + hi.r), 0.5 * (lo.s + hi.s)}; }
  bool valid() const { return finite(lo) && finite(hi) && lo.r <= hi.r && lo.s <= hi.s; }
  bool contains(Point z) const {
    return z.r >= lo.r && z.r <= hi.r && z.s >= lo.s && z.s <= hi.s;
  }
  bool intersects(const BoxR& o) const {
    return lo.r <= o.hi.r && o.lo.r <= hi.r && lo.s <= o.hi.s && o.lo.s <= hi.s;
  }
  /// Nearest point of the (closed) box to z.
  Point clamp(Point z) const {
    return {std::clamp(z.r, lo.r, hi.r), std::clamp(z.s, lo.s, hi.s)};
  }
  /// Smallest box containing both.
  BoxR hull(const BoxR& o) const {
    return {{std::min(lo.r, o.lo.r), std::min(lo.s, o.lo.s)},
            {std::max(hi.r, o.hi.r), std::max(hi.s, o.hi.s)}};
  }
};

struct CircleSpec {
  Point center;
  double radius = 1.0;  // > 0
};

enum class Direction { ccw, cw };

/// Absolute on-circle tolerance at desk scale; membership checks scale it by
/// max(1, radius) so pencil circles with huge radii do not trip false alarms.
inline constexpr double kOnCircleTol = 1e-9;

inline Point reflect(Point z) { return {z.r, -z.s}; }

/// Moves z along the circle by a straight-line step of length `chord`.
/// The result is re-projected onto the circle (radius used exactly), so
/// repeated steps do not accumulate radial drift.
Point chord_rotate(const CircleSpec& c, Point z, double chord, Direction dir);

BoxR box_dilate(const BoxR& b, double pad);

/// Bisection for a monotone increasing predicate value g on [lo, hi] with
/// g(lo) <= 0 <= g(hi). Returns the located root abscissa.
template <typename F>
double bisect_increasing(F&& g, double lo, double hi, int iters) {
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace chainrec
