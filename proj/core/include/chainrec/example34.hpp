#pragma once

#include "chainrec/geometry.hpp"
#include "chainrec/maps.hpp"

namespace chainrec {

/// Anchors of the circle pencil on the slit plane.
inline constexpr Point kAnchorX{-1.0, 0.0};
inline constexpr Point kAnchorY{1.0, 0.0};

/// Computable domain boundary: the removed axis plus a floating-point guard.
inline constexpr double kSlitMin = 1e-12;

/// The pencil circle through z and both anchors.
struct PencilGeometry {
  double t = 0.0;      // center ordinate
  Point center;        // (0, t)
  double radius = 1.0; // sqrt(t^2 + 1)

  CircleSpec circle() const { return {center, radius}; }
};

PencilGeometry pencil_parameter(Point z);

Point eval34(Point z);
Point eval34_inverse(Point z);

MapHandle example34_handle();

}  // namespace chainrec
