#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chainrec/errors.hpp"
#include "chainrec/example31.hpp"
#include "chainrec/geometry.hpp"

using namespace chainrec;

namespace {

const std::vector<double> kLeafSet = {0.25, 0.5, 1.0, 2.0, 4.0, 16.0};

// A point on the incoming branch J1 of leaf t at abscissa p >= p(w1).
Point j1_point(double t, double p) { return {p, t / p}; }

// A point on the arc of leaf t at angle a (measured about the circle
// center), valid when its abscissa is <= p(w1).
Point arc_point(const LeafGeometry& g, double a) {
  return {g.center.r + g.radius * std::cos(a),
          g.center.s + g.radius * std::sin(a)};
}

double angle_of(const LeafGeometry& g, Point z) {
  return std::atan2(z.s - g.center.s, z.r - g.center.r);
}

}  // namespace

TEST_CASE("leaf_geometry satisfies the published formulas") {
  SUBCASE("t = 1") {
    LeafGeometry g = leaf_geometry(1.0);
    CHECK(dist(g.center, {0.0, 0.0}) < 1e-12);
    CHECK(g.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(dist(g.w1, {1.0, 1.0}) < 1e-9);
    CHECK(dist(g.v1, {0.5, std::sqrt(7.0) / 2.0}) < 1e-9);
  }
  SUBCASE("t = 4") {
    LeafGeometry g = leaf_geometry(4.0);
    CHECK(dist(g.w1, {2.0, 2.0}) < 1e-9);
    CHECK(g.radius == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    CHECK(dist(g.v1, {1.0, std::sqrt(7.0)}) < 1e-9);
  }
  SUBCASE("t = 0.5") {
    LeafGeometry g = leaf_geometry(0.5);
    CHECK(g.center.r == doctest::Approx(1.96875).epsilon(1e-12));
    CHECK(g.center.s == 0.0);
    CHECK(g.radius ==
          doctest::Approx(0.25 * std::sqrt(1.015625)).epsilon(1e-12));
    CHECK(dist(g.w1, {2.0, 0.25}) < 1e-9);
    // w1 really sits on the circle.
    CHECK(std::abs(dist(g.w1, g.center) - g.radius) < 1e-12);
  }
}

TEST_CASE("leaf geometry invariants across the t range") {
  for (double t : kLeafSet) {
    LeafGeometry g = leaf_geometry(t);
    // w1 on the hyperbola and on the circle.
    CHECK(std::abs(g.w1.r * g.w1.s - t) < 1e-9);
    CHECK(std::abs(dist(g.w1, g.center) - g.radius) < 1e-9);
    // v1 in the upper half plane at the published abscissa.
    CHECK(g.v1.s > 0.0);
    CHECK(g.v1.r == doctest::Approx(g.w1.r - g.w1.s / 2.0).epsilon(1e-12));
    // Mirror symmetry of the lower labels.
    CHECK(dist(g.w2, reflect(g.w1)) < 1e-12);
    CHECK(dist(g.v2, reflect(g.v1)) < 1e-12);
    CHECK(g.chord == doctest::Approx(dist(g.v1, g.w1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(leaf_geometry(0.0), BadParameter);
  CHECK_THROWS_AS(leaf_geometry(-1.0), BadParameter);
}

TEST_CASE("tangency of circle and hyperbola at w1 is first order") {
  for (double t : {0.5, 1.0, 4.0}) {
    LeafGeometry g = leaf_geometry(t);
    auto dist_to_circle = [&](double dp) {
      Point z{g.w1.r + dp, t / (g.w1.r + dp)};
      return std::abs(dist(z, g.center) - g.radius);
    };
    // O(h^2) contact: shrinking h by 10 shrinks the gap by about 100.
    double d2 = dist_to_circle(1e-2), d3 = dist_to_circle(1e-3);
    CHECK(d2 / d3 > 50.0);
    CHECK(d2 / d3 < 200.0);
  }
}

TEST_CASE("leaf_parameter classifies the documented points") {
  auto [t1, s1] = leaf_parameter({2.0, 0.5});
  CHECK(t1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s1 == LeafSegment::J1);

  auto [t2, s2] = leaf_parameter({-std::sqrt(2.0), 0.0});
  CHECK(t2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s2 == LeafSegment::A0);

  auto [t3, s3] = leaf_parameter({2.0, -0.5});
  CHECK(t3 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s3 == LeafSegment::J2);
}

TEST_CASE("eval31 documented values") {
  Point a = eval31({2.0, 0.5});
  CHECK(a.r == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(a.s == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

  LeafGeometry g = leaf_geometry(1.0);
  CHECK(dist(eval31(g.w1), g.v1) < 1e-9);  // f(w_t1) = v_t1
  CHECK(dist(eval31(g.v2), g.w2) < 1e-9);  // f(v_t2) = w_t2

  Point b = eval31_inverse({1.75, 4.0 / 7.0});
  CHECK(dist(b, {2.0, 0.5}) < 1e-9);
  CHECK(dist(eval31_inverse(g.v1), g.w1) < 1e-9);
}

TEST_CASE("round trips: inverse after forward is the identity") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  CHECK(dist(eval31_inverse(eval31({-3.0, 0.2})), {-3.0, 0.2}) < 1e-9);
  for (int k = 0; k < 2000; ++k) {
    Point z{u(rng), u(rng)};
    CHECK(dist(eval31_inverse(eval31(z)), z) < 1e-9);
    CHECK(dist(eval31(eval31_inverse(z)), z) < 1e-9);
  }
}

TEST_CASE("leaf invariance under the dynamics") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 10000; ++k) {
    Point z{u(rng), u(rng)};
    double t = leaf_parameter(z).first;
    double ti = leaf_parameter(eval31(z)).first;
    CHECK(std::abs(ti - t) < 1e-7 * std::max(1.0, t));
  }
}

TEST_CASE("rule (b): abscissa drops by half the ordinate on J1") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (double t : kLeafSet) {
    LeafGeometry g = leaf_geometry(t);
    for (int k = 0; k < 1000; ++k) {
      double p = g.w1.r * (1.0 + 20.0 * u01(rng));
      Point z = j1_point(t, p);
      Point w = eval31(z);
      CHECK(std::abs((z.r - w.r) - z.s / 2.0) < 1e-9);
    }
  }
}

TEST_CASE("rule (d): arc steps advance by the leaf chord") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (double t : kLeafSet) {
    LeafGeometry g = leaf_geometry(t);
    double a_w1 = angle_of(g, g.w1);
    double a_v2 = 2.0 * 3.14159265358979323846 + angle_of(g, g.v2);
    for (int k = 0; k < 1000; ++k) {
      // Sample A1 union A0: angles strictly between w1 and v2 (ccw).
      double span = a_v2 - a_w1;
      double a = a_w1 + (0.01 + 0.98 * u01(rng)) * span;
      Point z = arc_point(g, a);
      auto seg = leaf_parameter(z).second;
      if (seg != LeafSegment::A1 && seg != LeafSegment::A0) continue;
      Point w = eval31(z);
      CHECK(std::abs(dist(w, z) - g.chord) < 1e-7);
    }
  }
}

TEST_CASE("rule (c): lower half is the reflected inverse of the upper half") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (double t : kLeafSet) {
    LeafGeometry g = leaf_geometry(t);
    for (int k = 0; k < 1000; ++k) {
      Point z;
      if (k % 2 == 0) {
        // J2: reflected incoming branch.
        double p = g.w1.r * (1.0 + 20.0 * u01(rng));
        z = reflect(j1_point(t, p));
      } else {
        // A2: lower arc between v2 and w2.
        double a_v2 = angle_of(g, g.v2);
        double a_w2 = angle_of(g, g.w2);
        z = arc_point(g, a_v2 + u01(rng) * (a_w2 - a_v2));
      }
      Point lhs = eval31(z);
      Point rhs = reflect(eval31_inverse(reflect(z)));
      CHECK(dist(lhs, rhs) < 1e-8);
    }
  }
}

TEST_CASE("orientation: finite-difference Jacobian determinant is positive") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const double h = 1e-6;
  int checked = 0;
  for (int k = 0; k < 20000 && checked < 10000; ++k) {
    Point z{u(rng), u(rng)};
    // Skip the 1e-4 neighborhoods of segment junctions where the map is
    // only piecewise smooth.
    auto [t, seg] = leaf_parameter(z);
    LeafGeometry g = leaf_geometry(t);
    bool near_junction = false;
    for (Point j : {g.w1, g.w2, g.v1, g.v2})
      if (dist(z, j) < 1e-4) near_junction = true;
    if (near_junction) continue;
    Point fr = eval31({z.r + h, z.s}), fl = eval31({z.r - h, z.s});
    Point fu = eval31({z.r, z.s + h}), fd = eval31({z.r, z.s - h});
    double det = ((fr.r - fl.r) * (fu.s - fd.s) -
                  (fu.r - fd.r) * (fr.s - fl.s)) /
                 (4.0 * h * h);
    CHECK(det > 0.0);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("handle wraps the map over the whole plane") {
  MapHandle f = example31_handle();
  CHECK(f.label == "example31");
  CHECK(f.domain_contains({0.0, -5.0}));
  Point w = f.eval({2.0, 0.5});
  CHECK(dist(w, {1.75, 4.0 / 7.0}) < 1e-12);
  CHECK(dist(f.eval_inverse(w), {2.0, 0.5}) < 1e-9);
}
