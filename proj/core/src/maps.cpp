#include "chainrec/maps.hpp"

#include <cmath>

namespace chainrec {

double MapHandle::expansion_bound(const BoxR& b) const {
  if (expansion) return expansion(b);
  return sampled_expansion_bound(*this, b);
}

namespace {

// Spectral norm of a 2x2 matrix [[a,b],[c,d]].
double spectral_norm(double a, double b, double c, double d) {
  const double q = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, q * q - 4.0 * det * det));
  return std::sqrt(0.5 * (q + disc));
}

}  // namespace

double sampled_expansion_bound(const MapHandle& f, const BoxR& b) {
  const int n = 4;
  double best = 0.0;
  bool any = false;
  const double scale = std::max({1.0, std::abs(b.lo.r), std::abs(b.lo.s),
                                 std::abs(b.hi.r), std::abs(b.hi.s)});
  const double step = 1e-5 * scale;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Point z{b.lo.r + b.width() * i / (n - 1.0), b.lo.s + b.height() * j / (n - 1.0)};
      try {
        Point xr = f.eval({z.r + step, z.s}), xl = f.eval({z.r - step, z.s});
        Point yu = f.eval({z.r, z.s + step}), yd = f.eval({z.r, z.s - step});
        const double inv = 1.0 / (2.0 * step);
        best = std::max(best, spectral_norm((xr.r - xl.r) * inv, (yu.r - yd.r) * inv,
                                            (xr.s - xl.s) * inv, (yu.s - yd.s) * inv));
        any = true;
      } catch (const Error&) {
        // sample straddles the domain boundary, skip
      }
    }
  }
  return any ? 1.5 * best : 1.0;
}

MapHandle translation(double dx, double dy) {
  if (!std::isfinite(dx) || !std::isfinite(dy))
    throw BadParameter("translation: offsets must be finite");
  MapHandle m;
  m.forward = [dx, dy](Point z) { return Point{z.r + dx, z.s + dy}; };
  m.backward = [dx, dy](Point z) { return Point{z.r - dx, z.s - dy}; };
  m.expansion = [](const BoxR&) { return 1.0; };
  m.label = "trans:" + std::to_string(dx) + "," + std::to_string(dy);
  return m;
}

MapHandle rotation(double cx, double cy, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  MapHandle m;
  m.forward = [cx, cy, c, s](Point z) {
    const double r = z.r - cx, t = z.s - cy;
    return Point{cx + c * r - s * t, cy + s * r + c * t};
  };
  m.backward = [cx, cy, c, s](Point z) {
    const double r = z.r - cx, t = z.s - cy;
    return Point{cx + c * r + s * t, cy - s * r + c * t};
  };
  m.expansion = [](const BoxR&) { return 1.0; };
  m.label = "rot:" + std::to_string(cx) + "," + std::to_string(cy) + "," +
            std::to_string(theta);
  return m;
}

MapHandle compose(MapHandle a, MapHandle b) {
  MapHandle m;
  m.forward = [a, b](Point z) { return a.eval(b.eval(z)); };
  m.backward = [a, b](Point z) { return b.eval_inverse(a.eval_inverse(z)); };
  m.domain = [b](Point z) { return b.domain_contains(z); };
  m.expansion = [a, b](const BoxR& box) {
    const double lb = b.expansion_bound(box);
    // Outer image box of b over `box`, then bound a over it.
    BoxR img{b.eval(box.lo), b.eval(box.lo)};
    const int n = 4;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Point z{box.lo.r + box.width() * i / (n - 1.0),
                box.lo.s + box.height() * j / (n - 1.0)};
        Point w = b.eval(z);
        img = img.hull({w, w});
      }
    const double cover = 0.5 * std::hypot(box.width() / (n - 1.0), box.height() / (n - 1.0));
    return a.expansion_bound(box_dilate(img, lb * cover)) * lb;
  };
  m.label = "comp(" + a.label + ";" + b.label + ")";
  return m;
}

MapHandle inverse_of(MapHandle a) {
  MapHandle m;
  m.forward = [a](Point z) { return a.eval_inverse(z); };
  m.backward = [a](Point z) { return a.eval(z); };
  m.domain = a.domain;
  m.label = "inv(" + a.label + ")";
  return m;
}

MapHandle conjugate(MapHandle a, MapHandle h) {
  MapHandle m = compose(compose(h, a), inverse_of(h));
  m.label = "conj(" + a.label + ";" + h.label + ")";
  return m;
}

MapHandle with_domain(MapHandle a, std::function<bool(Point)> pred, std::string label) {
  MapHandle m = a;
  auto inner = a.domain;
  m.domain = [inner, pred](Point z) { return inner(z) && pred(z); };
  if (!label.empty()) m.label = std::move(label);
  return m;
}

}  // namespace chainrec
