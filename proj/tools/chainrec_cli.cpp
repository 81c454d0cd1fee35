#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chainrec/chaindyn.hpp"
#include "chainrec/errors.hpp"
#include "chainrec/example31.hpp"
#include "chainrec/example34.hpp"
#include "chainrec/fixedpoint.hpp"
#include "chainrec/mapspec.hpp"
#include "chainrec/report.hpp"
#include "svg.hpp"

namespace {

using namespace chainrec;

constexpr const char* kWindowNote =
    "window-relative evidence: results describe chains confined to the "
    "window; empty cell sets certify absence only of such chains with "
    "effective perturbation above the enclosure padding; perturbations "
    "below 1e-12 are treated as zero";

struct CommonOpts {
  std::string map_spec;
  std::vector<double> window;  // a,b,c,d -> [a,c]x[b,d]
  double h = 0.1;
  double eps = 0.1;
  std::vector<std::vector<double>> w_regions;
  int depth = 64;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
};

BoxR parse_window(const std::vector<double>& v) {
  if (v.size() != 4) throw BadParameter("--window takes a,b,c,d");
  BoxR b{{v[0], v[1]}, {v[2], v[3]}};
  if (!b.valid()) throw BadParameter("window is not well-ordered");
  return b;
}

PerturbationWindow parse_w(const std::vector<std::vector<double>>& rs) {
  PerturbationWindow w;
  for (const auto& v : rs) {
    if (v.size() != 4) throw BadParameter("--w-region takes a,b,c,d");
    BoxR b{{v[0], v[1]}, {v[2], v[3]}};
    if (!b.valid()) throw BadParameter("w-region is not well-ordered");
    w.regions.push_back(b);
  }
  return w;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw BadParameter("cannot open output file: " + path);
  os << text;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_map = true) {
  // The cell-side flag is spelled --h, so help must not claim -h.
  cmd->set_help_flag("--help", "print usage");
  if (needs_map) cmd->add_option("--map", o.map_spec, "map spec")->required();
  cmd->add_option("--window", o.window, "window a,b,c,d")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--h", o.h, "cell side");
  cmd->add_option("--eps", o.eps, "chain perturbation bound");
  cmd->add_option("--w-region", o.w_regions,
                  "perturbation region a,b,c,d (repeatable, union)")
      ->delimiter(',');
  cmd->add_option("--depth", o.depth, "cycle length cap K");
  cmd->add_option("--tol", o.tol, "tolerance");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "json|svg")
      ->check(CLI::IsMember({"json", "svg"}));
}

std::vector<std::pair<int32_t, int32_t>> cell_pairs(const BoxGraph& g,
                                                    const std::vector<int32_t>&
                                                        cells) {
  std::vector<std::pair<int32_t, int32_t>> out;
  out.reserve(cells.size());
  for (int32_t c : cells) out.push_back({c % g.nx, c / g.nx});
  return out;
}

int run_cell_query(const CommonOpts& o, const std::string& kind) {
  const auto t0 = std::chrono::steady_clock::now();
  const MapHandle f = build_handle(*parse_map_spec(o.map_spec));
  const BoxR window = parse_window(o.window);
  RecurrenceReport rep;
  rep.map_label = pretty_print(*parse_map_spec(o.map_spec));
  rep.window = window;
  rep.h = o.h;
  rep.kind = kind;

  if (kind == "omega") {
    rep.eps = 0.0;
    const BoxGraph g = build_box_graph(f, window, o.h, 0.0);
    rep.cells = cell_pairs(g, omega_cells_from_graph(g, o.depth));
  } else {
    rep.eps = o.eps;
    BoxGraph g = build_box_graph(f, window, o.h, o.eps);
    if (kind == "crbp") {
      if (o.w_regions.empty())
        throw BadParameter("crbp needs at least one --w-region");
      const PerturbationWindow w = parse_w(o.w_regions);
      rep.w_regions = w.regions;
      g = bp_filter(g, w);
    }
    rep.cells = cell_pairs(g, chain_recurrent_cells(g));
  }
  rep.elapsed_ms = ms_since(t0);

  if (o.format == "svg") {
    SvgCanvas svg(window);
    const BoxGraph g = build_box_graph(f, window, o.h, rep.eps);
    for (auto [i, j] : rep.cells) svg.rect(g.cell_box(g.cell_index(i, j)),
                                           "#2060c0");
    write_out(o.out, svg.finish());
  } else {
    write_out(o.out, render_recurrence_report(rep, kWindowNote));
  }
  return 0;
}

int run_fix(const CommonOpts& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const MapHandle f = build_handle(*parse_map_spec(o.map_spec));
  const BoxR window = parse_window(o.window);
  const FixReport rep = locate_fixed_points(f, window, o.tol);
  write_out(o.out,
            render_fix_report(pretty_print(*parse_map_spec(o.map_spec)), rep,
                              ms_since(t0), kWindowNote));
  return 0;
}

int run_chain_witness(const CommonOpts& o, const std::vector<double>& start_v,
                      int max_doublings) {
  if (start_v.size() != 2) throw BadParameter("--start takes x,y");
  const auto t0 = std::chrono::steady_clock::now();
  const MapHandle f = build_handle(*parse_map_spec(o.map_spec));
  const BoxR window = parse_window(o.window);
  const Point start{start_v[0], start_v[1]};

  std::optional<PerturbationWindow> w;
  if (!o.w_regions.empty()) w = parse_w(o.w_regions);
  const PerturbationWindow* wp = w ? &*w : nullptr;

  EpsChain chain;
  BoxR used = window;
  if (max_doublings > 0) {
    const WitnessSearchResult r = adaptive_witness_search(
        f, start, o.eps, o.h, window, max_doublings, wp);
    if (!r.found) throw RealizationFailed("no witness chain found");
    chain = r.chain;
    used = r.window;
  } else {
    BoxGraph g = build_box_graph(f, window, o.h, o.eps);
    if (wp) g = bp_filter(g, *wp);
    chain = extract_witness_chain(g, f, start, wp);
  }
  const ChainValidation v = validate_chain(f, chain, wp);

  RecurrenceReport rep;
  rep.map_label = pretty_print(*parse_map_spec(o.map_spec));
  rep.window = used;
  rep.h = o.h;
  rep.eps = o.eps;
  rep.kind = "chain-witness";
  if (w) rep.w_regions = w->regions;
  rep.witness = chain;
  rep.elapsed_ms = ms_since(t0);

  std::string note = kWindowNote;
  note += v.valid_eps ? "; chain validated: valid_eps"
                      : "; WARNING: chain failed eps validation";
  if (wp) note += v.valid_bp ? ", valid_bp" : ", NOT valid_bp";

  if (o.format == "svg") {
    SvgCanvas svg(used);
    svg.polyline(chain.points, "#c03020");
    for (const Point& p : chain.points) svg.dot(p, "#202020");
    write_out(o.out, svg.finish());
  } else {
    write_out(o.out, render_recurrence_report(rep, note));
  }
  return 0;
}

std::vector<Point> leaf31_polyline(const LeafGeometry& geo, double rmax) {
  std::vector<Point> pts;
  const int n = 160;
  // incoming branch, from far right down to the tangency w1
  for (int k = 0; k <= n; ++k) {
    const double u = (double)k / n;
    const double r = rmax * std::pow(geo.w1.r / rmax, u);
    pts.push_back({r, geo.t / r});
  }
  // arc from w1 around the leftmost point to w2
  const double a1 = std::atan2(geo.w1.s - geo.center.s, geo.w1.r - geo.center.r);
  for (int k = 1; k <= 2 * n; ++k) {
    const double a = a1 + (2.0 * std::numbers::pi - 2.0 * a1) * k / (2.0 * n);
    pts.push_back({geo.center.r + geo.radius * std::cos(a),
                   geo.center.s + geo.radius * std::sin(a)});
  }
  // outgoing branch, mirror image of the incoming one
  for (int k = n; k >= 0; --k) {
    const double u = (double)k / n;
    const double r = rmax * std::pow(geo.w1.r / rmax, u);
    pts.push_back({r, -geo.t / r});
  }
  return pts;
}

int run_portrait(const CommonOpts& o, const std::vector<double>& leaves) {
  const MapHandle f = build_handle(*parse_map_spec(o.map_spec));
  const BoxR window = parse_window(o.window);
  SvgCanvas svg(window);
  const double rmax = 2.0 * std::max(std::abs(window.hi.r),
                                     std::abs(window.lo.r)) + 1.0;
  const bool is31 = f.label == "example31";
  for (double t : leaves) {
    if (is31) {
      const LeafGeometry geo = leaf_geometry(t);
      svg.polyline(leaf31_polyline(geo, rmax), "#2060c0");
      svg.dot(geo.w1, "#c03020");
      svg.dot(geo.v1, "#208040");
    } else {
      // pencil circle of parameter t through the two anchors
      const double radius = std::hypot(t, 1.0);
      std::vector<Point> pts;
      for (int k = 0; k <= 256; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 256;
        pts.push_back({radius * std::cos(a), t + radius * std::sin(a)});
      }
      svg.polyline(pts, "#2060c0");
    }
  }
  if (!is31) {
    svg.dot({-1.0, 0.0}, "#c03020");
    svg.dot({1.0, 0.0}, "#c03020");
  }
  write_out(o.out, svg.finish());
  return 0;
}

int run_verify() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::fprintf(stderr, "%s %s\n", ok ? "ok  " : "FAIL", name);
    if (!ok) ++failures;
  };
  const double two_pi_5 = 2.0 * std::numbers::pi / 5.0;
  try {
    const Point z = chord_rotate({{0, 0}, 1.0}, {1, 0}, std::sqrt(2.0),
                                 Direction::ccw);
    check("chord_rotate quarter turn", dist(z, {0, 1}) < 1e-9);
  } catch (const Error&) {
    check("chord_rotate quarter turn", false);
  }
  try {
    const MapHandle r = rotation(0, 0, two_pi_5);
    check("prop33 rotation fixture",
          inclusion_check_prop33(r, {{-2, -2}, {2, 2}}, 0.1, 0.2, 16));
    check("prop33 translation fixture",
          inclusion_check_prop33(translation(1, 0), {{-2, -2}, {2, 2}}, 0.1,
                                 0.2, 16));
  } catch (const Error&) {
    check("prop33 fixtures", false);
  }
  try {
    const auto ast = parse_map_spec("comp(trans:1,0;inv(trans:1,0))");
    check("parse round trip",
          pretty_print(*parse_map_spec(pretty_print(*ast))) ==
              pretty_print(*ast));
  } catch (const Error&) {
    check("parse round trip", false);
  }
  try {
    const Point z{2.0, 0.5};
    check("example31 round trip",
          dist(eval31_inverse(eval31(z)), z) < 1e-9);
    check("example34 round trip",
          dist(eval34_inverse(eval34({0.0, 1.0})), {0.0, 1.0}) < 1e-9);
  } catch (const Error&) {
    check("example round trips", false);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recurrence hierarchy queries for plane homeomorphisms"};
  app.require_subcommand(1);

  CommonOpts o;
  std::vector<double> start_v;
  std::vector<double> leaves;
  int max_doublings = 0;

  CLI::App* cr = app.add_subcommand("cr", "chain-recurrent cells");
  add_common(cr, o);
  CLI::App* crbp = app.add_subcommand("crbp", "BP-chain-recurrent cells");
  add_common(crbp, o);
  CLI::App* omega = app.add_subcommand("omega", "non-wandering candidates");
  add_common(omega, o);
  CLI::App* fix = app.add_subcommand("fix", "fixed points");
  add_common(fix, o);
  CLI::App* cw = app.add_subcommand("chain-witness", "extract an eps-chain");
  add_common(cw, o);
  cw->add_option("--start", start_v, "chain base point x,y")
      ->delimiter(',')
      ->expected(2)
      ->required();
  cw->add_option("--max-doublings", max_doublings,
                 "grow the window up to 2^n when extraction fails");
  CLI::App* portrait = app.add_subcommand("portrait", "SVG phase portrait");
  add_common(portrait, o);
  portrait->add_option("--leaves", leaves, "leaf parameters t")
      ->delimiter(',')
      ->required();
  CLI::App* verify = app.add_subcommand("verify", "quick self-checks");
  (void)verify;

  CLI11_PARSE(app, argc, argv);

  try {
    if (cr->parsed()) return run_cell_query(o, "cr");
    if (crbp->parsed()) return run_cell_query(o, "crbp");
    if (omega->parsed()) return run_cell_query(o, "omega");
    if (fix->parsed()) return run_fix(o);
    if (cw->parsed()) return run_chain_witness(o, start_v, max_doublings);
    if (portrait->parsed()) return run_portrait(o, leaves);
    if (verify->parsed()) return run_verify();
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const BadParameter& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const OffDomain& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
