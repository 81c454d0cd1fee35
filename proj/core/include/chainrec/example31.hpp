#pragma once

#include <utility>

#include "chainrec/geometry.hpp"
#include "chainrec/maps.hpp"

namespace chainrec {

/// One leaf L_t of the hyperbola-plus-arc foliation of the plane.
/// The leaf is the union of an incoming hyperbola branch (upper half), a
/// circular arc through the leftmost point, and the mirrored outgoing branch.
struct LeafGeometry {
  double t = 1.0;       // leaf parameter, > 0
  Point center;         // circle center, on the real axis
  double radius = 0.0;
  Point w1, w2;         // hyperbola/circle tangency points (upper, lower)
  Point v1, v2;         // arc split points (upper, lower)
  double chord = 0.0;   // d(v1, w1): the step length on the arcs

  CircleSpec circle() const { return {center, radius}; }
};

enum class LeafSegment { J1, A1, A0, A2, J2 };

const char* to_string(LeafSegment seg);

LeafGeometry leaf_geometry(double t);

/// Locates the unique leaf through z and classifies the segment.
/// Bisection on t in [1e-6, 1e8]; NotCovered if no bracket exists there.
std::pair<double, LeafSegment> leaf_parameter(Point z);

Point eval31(Point z);
Point eval31_inverse(Point z);

MapHandle example31_handle();

}  // namespace chainrec
