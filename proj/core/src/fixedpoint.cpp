#include "chainrec/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "chainrec/errors.hpp"

namespace chainrec {

namespace {

constexpr double kVanishTol = 1e-12;
constexpr int64_t kWindingSampleCap = 1 << 20;
constexpr int64_t kNodeBudget = 1'000'000;
constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

struct WindingCtx {
  const MapHandle* f;
  int64_t samples = 0;
};

double displacement_angle(WindingCtx& ctx, Point z) {
  const Point d = ctx.f->eval(z) - z;
  if (norm(d) < kVanishTol)
    throw VanishingOnLoop("displacement vanishes on the loop");
  ++ctx.samples;
  if (ctx.samples > kWindingSampleCap)
    throw RefinementCapExceeded("winding sample cap exceeded");
  return std::atan2(d.s, d.r);
}

double turning(WindingCtx& ctx, Point pa, double aa, Point pb, double ab,
               int depth) {
  const double delta = wrap_angle(ab - aa);
  if (std::abs(delta) < kPi / 2.0) return delta;
  if (depth > 48 || dist(pa, pb) < 1e-14)
    throw RefinementCapExceeded("loop segment refinement stalled");
  const Point pm = 0.5 * (pa + pb);
  const double am = displacement_angle(ctx, pm);
  return turning(ctx, pa, aa, pm, am, depth + 1) +
         turning(ctx, pm, am, pb, ab, depth + 1);
}

}  // namespace

LoopPath box_boundary_loop(const BoxR& b, int per_side) {
  LoopPath loop;
  per_side = std::max(per_side, 1);
  const Point c00 = b.lo, c11 = b.hi;
  const Point c10{b.hi.r, b.lo.s}, c01{b.lo.r, b.hi.s};
  const Point corner[5] = {c00, c10, c11, c01, c00};
  for (int side = 0; side < 4; ++side)
    for (int k = 0; k < per_side; ++k) {
      const double u = (double)k / per_side;
      loop.vertices.push_back((1.0 - u) * corner[side] + u * corner[side + 1]);
    }
  return loop;
}

int displacement_winding(const MapHandle& f, const LoopPath& loop) {
  if (loop.vertices.size() < 3) throw BadParameter("loop needs >= 3 vertices");
  WindingCtx ctx{&f};
  const size_t n = loop.vertices.size();
  std::vector<double> ang(n);
  for (size_t i = 0; i < n; ++i)
    ang[i] = displacement_angle(ctx, loop.vertices[i]);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (i + 1) % n;
    total += turning(ctx, loop.vertices[i], ang[i], loop.vertices[j], ang[j],
                     0);
  }
  return (int)std::llround(total / (2.0 * kPi));
}

namespace {

struct BoxProbe {
  double min_residual = std::numeric_limits<double>::infinity();
  Point best{};
  int in_domain = 0;
  int total = 0;
  bool all_small = true;  // every in-domain sample has residual < tol
};

BoxProbe probe_box(const MapHandle& f, const BoxR& b, double tol) {
  BoxProbe pr;
  const double w = b.width(), h = b.height();
  auto consider = [&](Point z) {
    ++pr.total;
    Point img;
    try {
      img = f.eval(z);
    } catch (const Error&) {
      return;
    }
    if (!finite(img)) return;
    ++pr.in_domain;
    const double res = dist(img, z);
    if (res >= tol) pr.all_small = false;
    if (res < pr.min_residual) {
      pr.min_residual = res;
      pr.best = z;
    }
  };
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      consider({b.lo.r + w * a / 3.0, b.lo.s + h * c / 3.0});
  consider(b.center());
  return pr;
}

int winding_or_zero(const MapHandle& f, Point z, double halfside) {
  const BoxR b{{z.r - halfside, z.s - halfside},
               {z.r + halfside, z.s + halfside}};
  try {
    return displacement_winding(f, box_boundary_loop(b, 8));
  } catch (const Error&) {
    return 0;
  }
}

}  // namespace

FixReport locate_fixed_points(const MapHandle& f, const BoxR& window,
                              double tol) {
  if (!(tol >= 1e-12)) throw BadParameter("tol below 1e-12");
  if (!window.valid() || window.width() <= 0.0 || window.height() <= 0.0)
    throw BadParameter("degenerate window");

  FixReport rep;
  rep.window = window;
  rep.tol = tol;

  std::vector<Point> candidates;
  std::deque<BoxR> work{window};
  int64_t nodes = 0;
  while (!work.empty()) {
    if (++nodes > kNodeBudget)
      throw BudgetExceeded("fixed-point subdivision node budget");
    const BoxR b = work.front();
    work.pop_front();
    const double side = std::max(b.width(), b.height());
    const BoxProbe pr = probe_box(f, b, tol);
    if (pr.in_domain == 0) continue;  // no sampled domain point in the box

    if (side <= tol / 4.0) {
      if (pr.min_residual < tol) candidates.push_back(pr.best);
      continue;
    }

    // The whole box is numerically fixed: report representatives rather
    // than subdividing into a continuum of hits.
    if (pr.all_small && pr.in_domain == pr.total) {
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c)
          candidates.push_back({b.lo.r + b.width() * (2 * a + 1) / 6.0,
                                b.lo.s + b.height() * (2 * c + 1) / 6.0});
      continue;
    }

    // Lipschitz residual bound: a zero inside the box would contradict the
    // sampled residual floor.
    const double diag = std::hypot(b.width(), b.height());
    const double lip = f.expansion_bound(b);
    if (pr.min_residual - (lip + 1.0) * diag > 0.0) continue;

    // Coarse boxes with a well-defined boundary winding of zero cannot hold
    // a fixed point that is isolable at scale tol.
    if (side >= 32.0 * tol && pr.in_domain == pr.total) {
      try {
        if (displacement_winding(f, box_boundary_loop(b, 8)) == 0) continue;
      } catch (const Error&) {
        // vanishing or wild boundary: fall through to subdivision
      }
    }

    const Point c = b.center();
    work.push_back({b.lo, c});
    work.push_back({{c.r, b.lo.s}, {b.hi.r, c.s}});
    work.push_back({{b.lo.r, c.s}, {c.r, b.hi.s}});
    work.push_back({c, b.hi});
  }

  // Cluster near-duplicates (a zero on a shared cell edge shows up in
  // several leaves).
  std::sort(candidates.begin(), candidates.end(), [](Point a, Point b) {
    return a.r < b.r || (a.r == b.r && a.s < b.s);
  });
  std::vector<char> used(candidates.size(), 0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (used[i]) continue;
    Point bestp = candidates[i];
    double bestr = dist(f.eval(bestp), bestp);
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (used[j]) continue;
      if (dist(candidates[i], candidates[j]) <= 4.0 * tol) {
        used[j] = 1;
        const double rj = dist(f.eval(candidates[j]), candidates[j]);
        if (rj < bestr) {
          bestr = rj;
          bestp = candidates[j];
        }
      }
    }
    rep.fixed_points.push_back(
        {bestp, bestr, winding_or_zero(f, bestp, 8.0 * tol)});
  }
  return rep;
}

MapHandle iterate_handle(const MapHandle& f, int n) {
  if (n < 1) throw BadParameter("iterate count must be >= 1");
  MapHandle g;
  g.label = f.label + "^" + std::to_string(n);
  g.domain = f.domain;
  g.forward = [f, n](Point z) {
    for (int i = 0; i < n; ++i) z = f.eval(z);
    return z;
  };
  g.backward = [f, n](Point z) {
    for (int i = 0; i < n; ++i) z = f.eval_inverse(z);
    return z;
  };
  g.expansion = [f, n](const BoxR& b) {
    // Product of per-step bounds over boxes tracking the sampled image.
    double out = 1.0;
    BoxR cur = b;
    for (int i = 0; i < n; ++i) {
      const double lb = f.expansion_bound(cur);
      out *= lb;
      Point corners[4] = {cur.lo, {cur.hi.r, cur.lo.s}, cur.hi,
                          {cur.lo.r, cur.hi.s}};
      BoxR img{};
      bool first = true;
      for (Point p : corners) {
        Point q;
        try {
          q = f.eval(p);
        } catch (const Error&) {
          continue;
        }
        img = first ? BoxR{q, q} : img.hull(BoxR{q, q});
        first = false;
      }
      if (first) break;
      cur = box_dilate(img, lb * cur.half_diag());
    }
    return out;
  };
  return g;
}

FixReport find_periodic_orbit(const MapHandle& f, const BoxR& window,
                              int max_period, double tol) {
  if (max_period < 1 || max_period > 64)
    throw BadParameter("max_period out of range");
  FixReport rep;
  rep.window = window;
  rep.tol = tol;
  for (int n = 1; n <= max_period; ++n) {
    const MapHandle fn = n == 1 ? f : iterate_handle(f, n);
    FixReport sub = locate_fixed_points(fn, window, tol);
    for (const FixedPointHit& hit : sub.fixed_points) {
      // Skip points that already close at a proper divisor period.
      bool lower = false;
      for (int d = 1; d < n && !lower; ++d) {
        if (n % d != 0) continue;
        try {
          if (dist(iterate_handle(f, d).eval(hit.location), hit.location) <
              16.0 * tol)
            lower = true;
        } catch (const Error&) {
        }
      }
      if (lower) continue;
      std::vector<Point> orbit{hit.location};
      bool ok = true;
      for (int k = 1; k < n; ++k) {
        try {
          orbit.push_back(f.eval(orbit.back()));
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      bool dup = false;
      for (const PeriodicOrbit& po : rep.periodic) {
        if (po.period != n) continue;
        for (Point q : po.orbit)
          if (dist(q, hit.location) <= 16.0 * tol) {
            dup = true;
            break;
          }
        if (dup) break;
      }
      if (dup) continue;
      if (n == 1)
        rep.fixed_points.push_back(hit);
      else
        rep.periodic.push_back({n, std::move(orbit), hit.residual});
    }
  }
  return rep;
}

namespace {

// Sampled Jacobian determinant sign check over the window.
void orientation_guard(const MapHandle& f, const BoxR& window) {
  const int n = 12;
  const double step =
      1e-5 * std::max({1.0, std::abs(window.lo.r), std::abs(window.hi.r),
                       std::abs(window.lo.s), std::abs(window.hi.s)});
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const Point z{window.lo.r + window.width() * i / n,
                    window.lo.s + window.height() * j / n};
      Point fx1, fx0, fy1, fy0;
      try {
        fx1 = f.eval({z.r + step, z.s});
        fx0 = f.eval({z.r - step, z.s});
        fy1 = f.eval({z.r, z.s + step});
        fy0 = f.eval({z.r, z.s - step});
      } catch (const Error&) {
        continue;
      }
      const double a = (fx1.r - fx0.r) / (2 * step);
      const double c = (fx1.s - fx0.s) / (2 * step);
      const double b = (fy1.r - fy0.r) / (2 * step);
      const double d = (fy1.s - fy0.s) / (2 * step);
      if (a * d - b * c < 0.0)
        throw OrientationReversing(f.label +
                                   ": sampled Jacobian determinant < 0");
    }
}

bool covers_plane_samples(const MapHandle& f, const BoxR& window) {
  const BoxR probe = box_dilate(window, std::max(window.width(),
                                                 window.height()));
  const int n = 24;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const Point z{probe.lo.r + probe.width() * i / n,
                    probe.lo.s + probe.height() * j / n};
      if (!f.domain_contains(z)) return false;
    }
  return true;
}

}  // namespace

ImplicationResult check_implication(const MapHandle& f, Hypothesis hyp,
                                    const BoxR& window,
                                    const ImplicationParams& params) {
  orientation_guard(f, window);

  ImplicationResult res;
  res.window_used = window;
  res.plane_homeomorphism = covers_plane_samples(f, window);

  switch (hyp) {
    case Hypothesis::periodic: {
      res.report =
          find_periodic_orbit(f, window, params.max_period, params.tol);
      res.hypothesis_found =
          !res.report.fixed_points.empty() || !res.report.periodic.empty();
      break;
    }
    case Hypothesis::nonwandering: {
      res.hypothesis_found =
          !omega_candidate_cells(f, window, params.h, params.depth_cap)
               .empty();
      break;
    }
    case Hypothesis::bp_chain_recurrent: {
      const BoxGraph g = build_box_graph(f, window, params.h, params.eps);
      res.hypothesis_found =
          !chain_recurrent_cells(bp_filter(g, params.w)).empty();
      break;
    }
  }

  BoxR win = window;
  FixReport fix = hyp == Hypothesis::periodic
                      ? res.report
                      : locate_fixed_points(f, win, params.tol);
  res.fixed_point_found = !fix.fixed_points.empty();
  int doublings = 0;
  while (res.hypothesis_found && !res.fixed_point_found &&
         res.plane_homeomorphism && doublings < params.max_window_doublings) {
    const Point c = win.center();
    win = BoxR{{c.r - win.width(), c.s - win.height()},
               {c.r + win.width(), c.s + win.height()}};
    ++doublings;
    fix = locate_fixed_points(f, win, params.tol);
    res.fixed_point_found = !fix.fixed_points.empty();
  }
  res.window_used = win;
  if (hyp != Hypothesis::periodic || doublings > 0) res.report = fix;
  res.counterexample = res.plane_homeomorphism && res.hypothesis_found &&
                       !res.fixed_point_found;
  return res;
}

}  // namespace chainrec
