#include "chainrec/report.hpp"

#include <cstdio>
#include <sstream>

namespace chainrec {

std::string render_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void put_point(std::ostringstream& os, Point z) {
  os << "[" << render_real(z.r) << "," << render_real(z.s) << "]";
}

void put_box(std::ostringstream& os, const BoxR& b) {
  os << "{\"lo\":";
  put_point(os, b.lo);
  os << ",\"hi\":";
  put_point(os, b.hi);
  os << "}";
}

void put_escaped(std::ostringstream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

void put_witness(std::ostringstream& os, const EpsChain& chain) {
  os << "{\"points\":[";
  for (size_t i = 0; i < chain.points.size(); ++i) {
    if (i) os << ",";
    put_point(os, chain.points[i]);
  }
  os << "],\"perturbations\":[";
  for (size_t i = 0; i < chain.steps.size(); ++i) {
    if (i) os << ",";
    os << render_real(chain.steps[i].perturbation);
  }
  os << "],\"in_W\":[";
  for (size_t i = 0; i < chain.steps.size(); ++i) {
    if (i) os << ",";
    os << (chain.steps[i].in_w ? "true" : "false");
  }
  os << "]}";
}

}  // namespace

std::string render_recurrence_report(const RecurrenceReport& rep,
                                     const std::string& note) {
  std::ostringstream os;
  os << "{\"map\":";
  put_escaped(os, rep.map_label);
  os << ",\"window\":";
  put_box(os, rep.window);
  os << ",\"h\":" << render_real(rep.h);
  os << ",\"eps\":" << render_real(rep.eps);
  os << ",\"kind\":";
  put_escaped(os, rep.kind);
  os << ",\"W\":";
  if (rep.w_regions.empty()) {
    os << "null";
  } else {
    os << "[";
    for (size_t i = 0; i < rep.w_regions.size(); ++i) {
      if (i) os << ",";
      put_box(os, rep.w_regions[i]);
    }
    os << "]";
  }
  os << ",\"cells\":[";
  for (size_t i = 0; i < rep.cells.size(); ++i) {
    if (i) os << ",";
    os << "[" << rep.cells[i].first << "," << rep.cells[i].second << "]";
  }
  os << "],\"witness\":";
  if (rep.witness)
    put_witness(os, *rep.witness);
  else
    os << "null";
  os << ",\"elapsed_ms\":" << render_real(rep.elapsed_ms);
  os << ",\"engine_version\":\"" << kEngineVersion << "\"";
  os << ",\"note\":";
  put_escaped(os, note);
  os << "}\n";
  return os.str();
}

std::string render_fix_report(const std::string& map_label,
                              const FixReport& rep, double elapsed_ms,
                              const std::string& note) {
  std::ostringstream os;
  os << "{\"map\":";
  put_escaped(os, map_label);
  os << ",\"window\":";
  put_box(os, rep.window);
  os << ",\"tol\":" << render_real(rep.tol);
  os << ",\"kind\":\"fix\"";
  os << ",\"fixed_points\":[";
  for (size_t i = 0; i < rep.fixed_points.size(); ++i) {
    const FixedPointHit& h = rep.fixed_points[i];
    if (i) os << ",";
    os << "{\"location\":";
    put_point(os, h.location);
    os << ",\"residual\":" << render_real(h.residual);
    os << ",\"winding\":" << h.winding << "}";
  }
  os << "],\"periodic\":[";
  for (size_t i = 0; i < rep.periodic.size(); ++i) {
    const PeriodicOrbit& p = rep.periodic[i];
    if (i) os << ",";
    os << "{\"period\":" << p.period << ",\"orbit\":[";
    for (size_t k = 0; k < p.orbit.size(); ++k) {
      if (k) os << ",";
      put_point(os, p.orbit[k]);
    }
    os << "],\"residual\":" << render_real(p.residual) << "}";
  }
  os << "],\"elapsed_ms\":" << render_real(elapsed_ms);
  os << ",\"engine_version\":\"" << kEngineVersion << "\"";
  os << ",\"note\":";
  put_escaped(os, note);
  os << "}\n";
  return os.str();
}

}  // namespace chainrec
