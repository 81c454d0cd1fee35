#pragma once

#include <cstdint>
#include <vector>

#include "chainrec/chaindyn.hpp"
#include "chainrec/geometry.hpp"
#include "chainrec/maps.hpp"

namespace chainrec {

/// Closed polygonal loop (last vertex joins back to the first).
struct LoopPath {
  std::vector<Point> vertices;  // >= 3
};

LoopPath box_boundary_loop(const BoxR& b, int per_side = 8);

/// Total turning of the displacement field z -> f(z) - z along the loop,
/// divided by 2*pi. Samples adaptively until consecutive angle steps stay
/// below pi/2 (cap 2^20 samples). Nonzero winding implies a fixed point
/// inside the loop when f is defined on the enclosed region.
int displacement_winding(const MapHandle& f, const LoopPath& loop);

struct FixedPointHit {
  Point location;
  double residual = 0.0;  // d(f(z), z)
  int winding = 0;
};

struct PeriodicOrbit {
  int period = 1;
  std::vector<Point> orbit;
  double residual = 0.0;  // closure defect of f^period
};

struct FixReport {
  std::vector<FixedPointHit> fixed_points;
  std::vector<PeriodicOrbit> periodic;
  BoxR window;
  double tol = 0.0;
};

/// Quadtree search for zeros of the displacement field. Boxes are pruned by
/// a sampled residual bound (Lipschitz argument) and, at coarse scales, by a
/// zero boundary winding. Completeness claim: any fixed point admitting an
/// isolating nonzero-winding box of side >= tol is found. When f is close to
/// the identity on a whole box, representatives on a 3x3 sub-grid are
/// reported instead of subdividing.
FixReport locate_fixed_points(const MapHandle& f, const BoxR& window,
                              double tol);

/// n-fold composition with itself.
MapHandle iterate_handle(const MapHandle& f, int n);

/// locate_fixed_points applied to f^n for n = 1..max_period, with
/// lower-period hits filtered via divisors and orbits deduplicated.
FixReport find_periodic_orbit(const MapHandle& f, const BoxR& window,
                              int max_period, double tol);

enum class Hypothesis { periodic, nonwandering, bp_chain_recurrent };

struct ImplicationParams {
  double h = 0.05;
  double eps = 0.2;
  PerturbationWindow w;  // used by bp_chain_recurrent
  int depth_cap = 32;    // K, used by nonwandering
  int max_period = 6;    // used by periodic
  double tol = 1e-9;
  int max_window_doublings = 10;
};

struct ImplicationResult {
  bool hypothesis_found = false;
  bool fixed_point_found = false;
  /// False when the map is not a self-map of the plane (domain holes found
  /// by sampling); such inputs are out of the theorems' hypotheses and are
  /// never counted as counterexamples.
  bool plane_homeomorphism = true;
  bool counterexample = false;
  BoxR window_used;
  FixReport report;
};

/// Checks "hypothesis holds => Fix(f) nonempty" for orientation-preserving
/// plane homeomorphisms. Throws OrientationReversing when the sampled
/// Jacobian determinant is negative somewhere in the window. When the
/// hypothesis fires but the window holds no fixed point, the window is
/// doubled (up to 2^max_window_doublings) before reporting failure.
ImplicationResult check_implication(const MapHandle& f, Hypothesis hyp,
                                    const BoxR& window,
                                    const ImplicationParams& params);

}  // namespace chainrec
