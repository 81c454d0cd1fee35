#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "chainrec/errors.hpp"
#include "chainrec/example34.hpp"
#include "chainrec/fixedpoint.hpp"

using namespace chainrec;

namespace {

constexpr double kPi = 3.14159265358979323846;

// An invertible affine map z -> A z + b with |det A| kept away from zero.
struct Affine {
  double a11, a12, a21, a22, b1, b2;

  Point apply(Point z) const {
    return {a11 * z.r + a12 * z.s + b1, a21 * z.r + a22 * z.s + b2};
  }
  MapHandle handle() const {
    Affine self = *this;
    double det = a11 * a22 - a12 * a21;
    MapHandle m;
    m.label = "affine";
    m.forward = [self](Point z) { return self.apply(z); };
    m.backward = [self, det](Point z) {
      double x = z.r - self.b1, y = z.s - self.b2;
      return Point{(self.a22 * x - self.a12 * y) / det,
                   (-self.a21 * x + self.a11 * y) / det};
    };
    return m;
  }
  // Zero of the displacement field (A - I) z + b, if any.
  bool displacement_zero(Point& out) const {
    double d11 = a11 - 1.0, d22 = a22 - 1.0;
    double det = d11 * d22 - a12 * a21;
    if (std::abs(det) < 1e-9) return false;
    out = {(-b1 * d22 + b2 * a12) / det, (b1 * a21 - b2 * d11) / det};
    return true;
  }
};

Affine random_affine(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Affine a{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    double det = a.a11 * a.a22 - a.a12 * a.a21;
    double ddet = (a.a11 - 1.0) * (a.a22 - 1.0) - a.a12 * a.a21;
    if (std::abs(det) > 0.1 && std::abs(ddet) > 0.1) return a;
  }
}

}  // namespace

TEST_CASE("displacement winding on the documented loops") {
  LoopPath sq = box_boundary_loop({{-1, -1}, {1, 1}});
  CHECK(displacement_winding(rotation(0.0, 0.0, kPi), sq) == 1);
  CHECK(displacement_winding(translation(1.0, 0.0), sq) == 0);

  LoopPath circ;
  for (int k = 0; k < 32; ++k) {
    double a = 2.0 * kPi * k / 32.0;
    circ.vertices.push_back({3.0 + std::cos(a), 4.0 + std::sin(a)});
  }
  CHECK(displacement_winding(rotation(3.0, 4.0, 2.0 * kPi / 5.0), circ) == 1);
}

TEST_CASE("winding refuses loops through a vanishing displacement") {
  LoopPath sq = box_boundary_loop({{-1, -1}, {1, 1}});
  // The identity map has zero displacement everywhere on the loop.
  CHECK_THROWS_AS(displacement_winding(rotation(0.0, 0.0, 0.0), sq),
                  VanishingOnLoop);
}

TEST_CASE("winding additivity over a box split, random affine maps") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int done = 0;
  while (done < 100) {
    Affine a = random_affine(rng);
    Point zero;
    REQUIRE(a.displacement_zero(zero));
    BoxR parent{{u(rng), u(rng)}, {0, 0}};
    parent.hi = parent.lo + Point{1.0 + u(rng) * 0.1 + 0.5, 1.5};
    // Keep the displacement zero well clear of all five boundaries.
    Point c = parent.center();
    bool near = false;
    for (double x : {parent.lo.r, c.r, parent.hi.r})
      if (std::abs(zero.r - x) < 1e-2) near = true;
    for (double y : {parent.lo.s, c.s, parent.hi.s})
      if (std::abs(zero.s - y) < 1e-2) near = true;
    if (near) continue;
    MapHandle f = a.handle();
    int total = displacement_winding(f, box_boundary_loop(parent));
    int sum = 0;
    std::array<BoxR, 4> kids = {
        BoxR{parent.lo, c}, BoxR{{c.r, parent.lo.s}, {parent.hi.r, c.s}},
        BoxR{{parent.lo.r, c.s}, {c.r, parent.hi.s}}, BoxR{c, parent.hi}};
    for (const BoxR& kid : kids)
      sum += displacement_winding(f, box_boundary_loop(kid));
    CHECK(total == sum);
    ++done;
  }
}

TEST_CASE("winding is invariant under loop refinement") {
  std::mt19937_64 rng(89);
  int done = 0;
  while (done < 100) {
    Affine a = random_affine(rng);
    Point zero;
    REQUIRE(a.displacement_zero(zero));
    BoxR b{zero - Point{1.0, 0.8}, zero + Point{1.2, 0.9}};
    MapHandle f = a.handle();
    int w8 = displacement_winding(f, box_boundary_loop(b, 8));
    int w16 = displacement_winding(f, box_boundary_loop(b, 16));
    int w64 = displacement_winding(f, box_boundary_loop(b, 64));
    CHECK(w8 == w16);
    CHECK(w16 == w64);
    CHECK(w8 != 0);  // the displacement zero is strictly inside
    ++done;
  }
}

TEST_CASE("locate_fixed_points on the documented fixtures") {
  FixReport rot = locate_fixed_points(rotation(3.0, 4.0, 2.0 * kPi / 5.0),
                                      {{0, 0}, {8, 8}}, 1e-9);
  REQUIRE(rot.fixed_points.size() == 1);
  CHECK(dist(rot.fixed_points[0].location, {3.0, 4.0}) < 1e-9);
  CHECK(rot.fixed_points[0].residual < 1e-9);

  FixReport none = locate_fixed_points(translation(1.0, 0.0), {{-5, -5}, {5, 5}},
                                       1e-9);
  CHECK(none.fixed_points.empty());
}

TEST_CASE("fixed points of a conjugate are the conjugacy images") {
  MapHandle a = rotation(1.0, -1.0, 1.0);
  for (MapHandle h : {translation(2.0, 3.0),
                      compose(rotation(0.0, 0.0, 0.7), translation(2.0, 3.0))}) {
    MapHandle g = conjugate(a, h);
    Point expected = h.eval({1.0, -1.0});
    FixReport r = locate_fixed_points(
        g, {expected - Point{3.0, 3.0}, expected + Point{3.0, 3.0}}, 1e-9);
    REQUIRE(r.fixed_points.size() == 1);
    CHECK(dist(r.fixed_points[0].location, expected) < 1e-8);
  }
}

TEST_CASE("find_periodic_orbit on rotations and translations") {
  FixReport r3 = find_periodic_orbit(rotation(0.0, 0.0, 2.0 * kPi / 3.0),
                                     {{-2, -2}, {2, 2}}, 3, 1e-9);
  bool center = false;
  for (const auto& fp : r3.fixed_points)
    if (dist(fp.location, {0, 0}) < 1e-8) center = true;
  CHECK(center);
  REQUIRE_FALSE(r3.periodic.empty());
  for (const auto& orb : r3.periodic) {
    CHECK(orb.period == 3);
    CHECK(orb.residual < 1e-8);
    // Spot-check minimality: the points of the orbit are distinct.
    REQUIRE(orb.orbit.size() == 3);
    CHECK(dist(orb.orbit[0], orb.orbit[1]) > 1e-6);
  }

  FixReport r2 = find_periodic_orbit(rotation(0.0, 0.0, kPi), {{-2, -2}, {2, 2}},
                                     3, 1e-9);
  bool p2 = false;
  for (const auto& orb : r2.periodic) p2 = p2 || orb.period == 2;
  CHECK(p2);

  FixReport rt = find_periodic_orbit(translation(1.0, 0.0), {{-2, -2}, {2, 2}},
                                     4, 1e-9);
  CHECK(rt.fixed_points.empty());
  CHECK(rt.periodic.empty());
}

TEST_CASE("iterate_handle composes the map with itself") {
  MapHandle f5 = iterate_handle(rotation(0.0, 0.0, 2.0 * kPi / 5.0), 5);
  CHECK(dist(f5.eval({1.3, -0.4}), {1.3, -0.4}) < 1e-12);
}

TEST_CASE("implication harness on the documented fixtures") {
  ImplicationParams p;
  SUBCASE("periodic rotation implies its fixed center") {
    ImplicationResult r = check_implication(rotation(3.0, 4.0, 2.0 * kPi / 5.0),
                                            Hypothesis::periodic, {{0, 0}, {8, 8}},
                                            p);
    CHECK(r.hypothesis_found);
    CHECK(r.fixed_point_found);
    CHECK_FALSE(r.counterexample);
    REQUIRE_FALSE(r.report.fixed_points.empty());
    CHECK(dist(r.report.fixed_points[0].location, {3.0, 4.0}) < 1e-9);
  }
  SUBCASE("translation has no bp-recurrence and no fixed point") {
    ImplicationParams pw = p;
    pw.w.regions = {{{-1, -1}, {1, 1}}};
    ImplicationResult r =
        check_implication(translation(1.0, 0.0), Hypothesis::bp_chain_recurrent,
                          {{-2, -2}, {2, 2}}, pw);
    CHECK_FALSE(r.hypothesis_found);
    CHECK_FALSE(r.fixed_point_found);
    CHECK_FALSE(r.counterexample);
  }
  SUBCASE("orientation-reversing maps are refused") {
    MapHandle flip;
    flip.label = "flip";
    flip.forward = [](Point z) { return Point{z.r + 0.5, -z.s}; };
    flip.backward = [](Point z) { return Point{z.r - 0.5, -z.s}; };
    CHECK_THROWS_AS(check_implication(flip, Hypothesis::periodic,
                                      {{-2, -2}, {2, 2}}, p),
                    OrientationReversing);
  }
  SUBCASE("slit-plane maps are classified, never counterexamples") {
    MapHandle f = with_domain(
        example34_handle(), [](Point z) { return std::abs(z.s) >= 0.05; },
        "example34|slit");
    ImplicationParams ps = p;
    ps.h = 0.05;
    ps.depth_cap = 32;
    ps.tol = 1e-6;
    ps.max_window_doublings = 0;
    ImplicationResult r = check_implication(f, Hypothesis::nonwandering,
                                            {{-3, -3}, {3, 3}}, ps);
    CHECK_FALSE(r.plane_homeomorphism);
    CHECK_FALSE(r.counterexample);
    CHECK_FALSE(r.fixed_point_found);
  }
}

TEST_CASE("window doubling finds a fixed point outside the probe window") {
  // The rotation center (3,4) sits outside the initial window; the periodic
  // hypothesis fires inside it, so the harness must widen and find (3,4).
  ImplicationParams p;
  p.max_period = 5;
  ImplicationResult r = check_implication(rotation(3.0, 4.0, 2.0 * kPi / 5.0),
                                          Hypothesis::periodic,
                                          {{5.5, 6.5}, {8.5, 9.5}}, p);
  CHECK(r.hypothesis_found);
  CHECK(r.fixed_point_found);
  CHECK(r.window_used.contains({3.0, 4.0}));
}
