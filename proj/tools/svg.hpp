#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "chainrec/geometry.hpp"
#include "chainrec/report.hpp"

namespace chainrec {

/// Minimal SVG 1.1 writer. The viewBox equals the query window with the
/// y-axis flipped (plane coordinates point up, SVG points down), and stroke
/// widths are 0.2% of the window width so plots are resolution independent.
class SvgCanvas {
 public:
  SvgCanvas(const BoxR& window) : window_(window) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
          << "viewBox=\"" << render_real(window.lo.r) << " "
          << render_real(-window.hi.s) << " " << render_real(window.width())
          << " " << render_real(window.height()) << "\">\n";
  }

  double stroke_width() const { return 0.002 * window_.width(); }

  void polyline(const std::vector<Point>& pts, const std::string& color) {
    if (pts.size() < 2) return;
    body_ << "<path fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"" << render_real(stroke_width())
          << "\" d=\"";
    for (size_t i = 0; i < pts.size(); ++i)
      body_ << (i == 0 ? "M" : " L") << render_real(pts[i].r) << " "
            << render_real(-pts[i].s);
    body_ << "\"/>\n";
  }

  void dot(Point z, const std::string& color) {
    body_ << "<circle cx=\"" << render_real(z.r) << "\" cy=\""
          << render_real(-z.s) << "\" r=\""
          << render_real(2.5 * stroke_width()) << "\" fill=\"" << color
          << "\"/>\n";
  }

  void rect(const BoxR& b, const std::string& color) {
    body_ << "<rect x=\"" << render_real(b.lo.r) << "\" y=\""
          << render_real(-b.hi.s) << "\" width=\"" << render_real(b.width())
          << "\" height=\"" << render_real(b.height()) << "\" fill=\""
          << color << "\" fill-opacity=\"0.5\"/>\n";
  }

  std::string finish() {
    body_ << "</svg>\n";
    return body_.str();
  }

 private:
  BoxR window_;
  std::ostringstream body_;
};

}  // namespace chainrec
