#pragma once

#include <functional>
#include <string>
#include <utility>

#include "chainrec/geometry.hpp"

namespace chainrec {

/// Immutable evaluable plane homeomorphism. Handles are value types and safe
/// to share between threads.
struct MapHandle {
  std::function<Point(Point)> forward;
  std::function<Point(Point)> backward;
  std::function<bool(Point)> domain = [](Point) { return true; };
  /// Upper bound on the local Lipschitz constant of forward over the box.
  /// Empty means "use the generic sampled bound".
  std::function<double(const BoxR&)> expansion;
  std::string label;

  Point eval(Point z) const {
    if (!domain(z)) throw DomainError(label + ": point outside domain");
    return forward(z);
  }
  Point eval_inverse(Point z) const {
    if (!domain(z)) throw DomainError(label + ": point outside domain");
    return backward(z);
  }
  bool domain_contains(Point z) const { return domain(z); }
  double expansion_bound(const BoxR& b) const;
};

/// Finite-difference Jacobian sup norm over a sample grid, times a 1.5 safety
/// factor. Off-domain samples are skipped.
double sampled_expansion_bound(const MapHandle& f, const BoxR& b);

MapHandle translation(double dx, double dy);
MapHandle rotation(double cx, double cy, double theta);
MapHandle compose(MapHandle a, MapHandle b);   // a after b
MapHandle conjugate(MapHandle a, MapHandle h); // h . a . h^-1
MapHandle inverse_of(MapHandle a);

/// Same map restricted to a smaller domain (used for slit windows).
MapHandle with_domain(MapHandle a, std::function<bool(Point)> pred,
                      std::string label = {});

}  // namespace chainrec
