#include "chainrec/chaindyn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <utility>

#include "chainrec/errors.hpp"
#include "chainrec/scc.hpp"

namespace chainrec {

namespace {

constexpr int64_t kCellGuard = 10'000'000;
constexpr int kWalkCap = 200'000;
constexpr int kBackwardOrbitCap = 4000;
constexpr int kHopCap = 64;

// Index range of grid cells meeting a box (empty when disjoint from window).
struct CellRange {
  int32_t i0, i1, j0, j1;  // half-open in neither sense: inclusive
  bool empty;
};

CellRange cells_meeting(const BoxGraph& g, const BoxR& b) {
  CellRange r{0, -1, 0, -1, true};
  if (!b.intersects(g.window)) return r;
  const double x0 = (b.lo.r - g.window.lo.r) / g.h;
  const double x1 = (b.hi.r - g.window.lo.r) / g.h;
  const double y0 = (b.lo.s - g.window.lo.s) / g.h;
  const double y1 = (b.hi.s - g.window.lo.s) / g.h;
  r.i0 = std::max<int32_t>(0, (int32_t)std::floor(x0));
  r.i1 = std::min<int32_t>(g.nx - 1, (int32_t)std::floor(x1));
  r.j0 = std::max<int32_t>(0, (int32_t)std::floor(y0));
  r.j1 = std::min<int32_t>(g.ny - 1, (int32_t)std::floor(y1));
  r.empty = r.i0 > r.i1 || r.j0 > r.j1;
  return r;
}

// Sample points of a cell: 5x5 lattice spanning the closed box. Any cell
// point is then within half a lattice-spacing diagonal of some sample.
void cell_samples(const BoxR& cell, std::vector<Point>& out) {
  out.clear();
  const double w = cell.width(), h = cell.height();
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      out.push_back({cell.lo.r + w * a / 4.0, cell.lo.s + h * b / 4.0});
}

std::vector<std::vector<int32_t>> reverse_adjacency(const BoxGraph& g) {
  std::vector<std::vector<int32_t>> radj(g.cell_count());
  for (int32_t u = 0; u < g.cell_count(); ++u)
    for (int32_t e = g.eoff[u]; e < g.eoff[u + 1]; ++e)
      radj[g.eto[e]].push_back(u);
  return radj;
}

}  // namespace

int32_t BoxGraph::cell_of(Point z) const {
  if (!window.contains(z)) return -1;
  int32_t i = (int32_t)std::floor((z.r - window.lo.r) / h);
  int32_t j = (int32_t)std::floor((z.s - window.lo.s) / h);
  i = std::clamp(i, (int32_t)0, nx - 1);
  j = std::clamp(j, (int32_t)0, ny - 1);
  return cell_index(i, j);
}

BoxGraph build_box_graph(const MapHandle& f, const BoxR& window, double h,
                         double eps) {
  if (!(h > 0.0) || !window.valid()) throw BadParameter("bad grid parameters");
  BoxGraph g;
  g.window = window;
  g.h = h;
  g.eps = eps;
  g.nx = std::max<int32_t>(1, (int32_t)std::ceil(window.width() / h - 1e-9));
  g.ny = std::max<int32_t>(1, (int32_t)std::ceil(window.height() / h - 1e-9));
  const int64_t n = (int64_t)g.nx * g.ny;
  if (n > kCellGuard) throw TooManyCells("grid exceeds cell budget");

  g.excluded.assign(n, 0);
  g.enclosure.assign(n, BoxR{});
  g.pad.assign(n, 0.0);

  std::vector<Point> samples;
  // Covering radius of the 4x4 sample lattice: any cell point lies within
  // half the sample-spacing diagonal of some sample.
  for (int32_t c = 0; c < (int32_t)n; ++c) {
    const BoxR cell = g.cell_box(c);
    cell_samples(cell, samples);
    BoxR hullbox{};
    bool first = true;
    bool bad = false;
    for (const Point& p : samples) {
      Point q;
      try {
        q = f.eval(p);
      } catch (const Error&) {
        bad = true;
        break;
      }
      if (!finite(q)) {
        bad = true;
        break;
      }
      if (first) {
        hullbox = BoxR{q, q};
        first = false;
      } else {
        hullbox = hullbox.hull(BoxR{q, q});
      }
    }
    if (bad) {
      g.excluded[c] = 1;
      continue;
    }
    const double cover =
        0.5 * std::hypot(cell.width() / 4.0, cell.height() / 4.0);
    const double lip = f.expansion_bound(cell);
    g.pad[c] = lip * cover + 1e-9;
    g.enclosure[c] = box_dilate(hullbox, g.pad[c]);
  }

  g.eoff.assign(n + 1, 0);
  std::vector<int32_t> to;
  std::vector<uint8_t> kind;
  std::vector<uint8_t> mark(n, 0);
  std::vector<int32_t> marked;
  for (int32_t c = 0; c < (int32_t)n; ++c) {
    g.eoff[c] = (int32_t)to.size();
    if (g.excluded[c]) continue;
    const CellRange ex = cells_meeting(g, g.enclosure[c]);
    if (!ex.empty) {
      for (int32_t j = ex.j0; j <= ex.j1; ++j)
        for (int32_t i = ex.i0; i <= ex.i1; ++i) {
          const int32_t d = g.cell_index(i, j);
          if (g.excluded[d]) continue;
          to.push_back(d);
          kind.push_back((uint8_t)EdgeKind::exact);
          mark[d] = 1;
          marked.push_back(d);
        }
    }
    if (eps > 0.0) {
      const CellRange pe = cells_meeting(g, box_dilate(g.enclosure[c], eps));
      if (!pe.empty) {
        for (int32_t j = pe.j0; j <= pe.j1; ++j)
          for (int32_t i = pe.i0; i <= pe.i1; ++i) {
            const int32_t d = g.cell_index(i, j);
            if (g.excluded[d] || mark[d]) continue;
            to.push_back(d);
            kind.push_back((uint8_t)EdgeKind::perturbed);
          }
      }
    }
    for (int32_t d : marked) mark[d] = 0;
    marked.clear();
  }
  g.eoff[n] = (int32_t)to.size();
  g.eto = std::move(to);
  g.ekind = std::move(kind);
  return g;
}

std::vector<int32_t> chain_recurrent_cells(const BoxGraph& g) {
  const auto scc = tarjan_scc(g.cell_count(), g.eoff, g.eto,
                              [](int32_t) { return true; });
  std::vector<int32_t> out;
  for (int32_t c = 0; c < g.cell_count(); ++c) {
    if (g.excluded[c]) continue;
    if (scc.comp_size[scc.comp[c]] > 1) {
      out.push_back(c);
      continue;
    }
    for (int32_t e = g.eoff[c]; e < g.eoff[c + 1]; ++e)
      if (g.eto[e] == c) {
        out.push_back(c);
        break;
      }
  }
  return out;
}

BoxGraph bp_filter(const BoxGraph& g, const PerturbationWindow& w) {
  BoxGraph out = g;
  const PerturbationWindow wd = w.dilated(g.eps);
  std::vector<int32_t> to;
  std::vector<uint8_t> kind;
  out.eoff.assign(g.cell_count() + 1, 0);
  for (int32_t c = 0; c < g.cell_count(); ++c) {
    out.eoff[c] = (int32_t)to.size();
    const bool can_perturb = !g.excluded[c] && wd.intersects(g.enclosure[c]);
    for (int32_t e = g.eoff[c]; e < g.eoff[c + 1]; ++e) {
      if (g.ekind[e] == (uint8_t)EdgeKind::exact || can_perturb) {
        to.push_back(g.eto[e]);
        kind.push_back(g.ekind[e]);
      }
    }
  }
  out.eoff[g.cell_count()] = (int32_t)to.size();
  out.eto = std::move(to);
  out.ekind = std::move(kind);
  return out;
}

std::vector<int32_t> omega_cells_from_graph(const BoxGraph& g, int depth_cap) {
  const int32_t n = g.cell_count();
  const auto scc = tarjan_scc(n, g.eoff, g.eto, [&](int32_t e) {
    return g.ekind[e] == (uint8_t)EdgeKind::exact;
  });
  // Group nodes by component; only nontrivial SCCs (or exact self-loops)
  // can carry cycles.
  std::vector<int32_t> out;
  std::vector<int32_t> dist(n, -1);
  std::vector<int32_t> touched;
  for (int32_t u = 0; u < n; ++u) {
    if (g.excluded[u]) continue;
    bool self = false;
    for (int32_t e = g.eoff[u]; e < g.eoff[u + 1]; ++e)
      if (g.ekind[e] == (uint8_t)EdgeKind::exact && g.eto[e] == u) {
        self = true;
        break;
      }
    if (self) {
      out.push_back(u);
      continue;
    }
    if (scc.comp_size[scc.comp[u]] <= 1 || depth_cap < 2) continue;
    // BFS inside the SCC from u's exact successors back to u.
    std::deque<int32_t> q;
    bool hit = false;
    for (int32_t e = g.eoff[u]; e < g.eoff[u + 1] && !hit; ++e) {
      if (g.ekind[e] != (uint8_t)EdgeKind::exact) continue;
      const int32_t v = g.eto[e];
      if (scc.comp[v] != scc.comp[u] || dist[v] >= 0) continue;
      dist[v] = 1;
      touched.push_back(v);
      q.push_back(v);
    }
    while (!q.empty() && !hit) {
      const int32_t x = q.front();
      q.pop_front();
      if (dist[x] >= depth_cap) break;
      for (int32_t e = g.eoff[x]; e < g.eoff[x + 1]; ++e) {
        if (g.ekind[e] != (uint8_t)EdgeKind::exact) continue;
        const int32_t v = g.eto[e];
        if (v == u) {
          hit = true;
          break;
        }
        if (scc.comp[v] != scc.comp[u] || dist[v] >= 0) continue;
        dist[v] = dist[x] + 1;
        touched.push_back(v);
        q.push_back(v);
      }
    }
    for (int32_t v : touched) dist[v] = -1;
    touched.clear();
    if (hit) out.push_back(u);
  }
  return out;
}

std::vector<int32_t> omega_candidate_cells(const MapHandle& f,
                                           const BoxR& window, double h,
                                           int depth_cap) {
  const BoxGraph g = build_box_graph(f, window, h, 0.0);
  return omega_cells_from_graph(g, depth_cap);
}

namespace {

// Breadth-first distance (in edges) from every cell to the target cell,
// along the graph's edge direction.
std::vector<int32_t> distance_to(const BoxGraph& g, int32_t target) {
  std::vector<int32_t> dist(g.cell_count(), -1);
  if (target < 0) return dist;
  const auto radj = reverse_adjacency(g);
  std::deque<int32_t> q;
  dist[target] = 0;
  q.push_back(target);
  while (!q.empty()) {
    const int32_t c = q.front();
    q.pop_front();
    for (int32_t p : radj[c])
      if (dist[p] < 0) {
        dist[p] = dist[c] + 1;
        q.push_back(p);
      }
  }
  return dist;
}

}  // namespace

EpsChain extract_witness_chain(const BoxGraph& g, const MapHandle& f,
                               Point start, const PerturbationWindow* w) {
  const double eps = g.eps;
  if (!(eps > 0.0)) throw BadParameter("witness extraction needs eps > 0");
  const int32_t home = g.cell_of(start);
  if (home < 0 || g.excluded[home]) throw NoCycle("start cell not in graph");

  const auto dist_home = distance_to(g, home);
  if (dist_home[home] < 0) throw NoCycle("start cell unreachable");
  // Quick reachability sanity: home must lie on some cycle of the graph.
  {
    bool on_cycle = false;
    for (int32_t e = g.eoff[home]; e < g.eoff[home + 1]; ++e)
      if (dist_home[g.eto[e]] >= 0) {
        on_cycle = true;
        break;
      }
    if (!on_cycle) throw NoCycle("no cycle through start cell");
  }

  // Backward orbit of the start point: landing within eps of f^{-j}(start)
  // lets the chain ride exact steps home.
  std::vector<Point> back;
  back.push_back(start);
  const BoxR roam = box_dilate(g.window, eps);
  for (int j = 1; j <= kBackwardOrbitCap; ++j) {
    Point p;
    try {
      p = f.eval_inverse(back.back());
    } catch (const Error&) {
      break;
    }
    if (!finite(p) || !roam.contains(p)) break;
    back.push_back(p);
  }

  auto in_w = [&](Point z) { return w == nullptr || w->contains(z); };

  EpsChain chain;
  chain.eps = eps;
  chain.points.push_back(start);
  Point x = start;
  int hops = 0;
  for (int step = 0; step < kWalkCap; ++step) {
    Point y;
    try {
      y = f.eval(x);
    } catch (const Error&) {
      throw RealizationFailed("orbit left the map domain");
    }
    const bool y_in_w = in_w(y);

    // Close the chain directly when possible.
    const double dhome = dist(y, start);
    if (dhome <= eps && (y_in_w || dhome <= kPerturbationBand)) {
      chain.steps.push_back({y, dhome, y_in_w});
      chain.points.push_back(start);
      return chain;
    }

    // Jump onto the backward orbit within reach, then walk the exact tail
    // home; the shallowest reachable point gives the shortest tail.
    int best_j = -1;
    double best_d = eps;
    for (int j = 1; j < (int)back.size(); ++j) {
      const double d = dist(y, back[j]);
      if (d <= best_d) {
        best_j = j;
        best_d = d;
        break;
      }
    }
    if (best_j >= 1 && (y_in_w || best_d <= kPerturbationBand)) {
      chain.steps.push_back({y, best_d, y_in_w});
      chain.points.push_back(back[best_j]);
      Point z = back[best_j];
      for (int j = best_j - 1; j >= 0; --j) {
        Point fz;
        try {
          fz = f.eval(z);
        } catch (const Error&) {
          throw RealizationFailed("exact tail left the map domain");
        }
        const double d = dist(fz, back[j]);
        if (d > eps) throw RealizationFailed("backward orbit tail drifted");
        chain.steps.push_back({fz, d, in_w(fz)});
        chain.points.push_back(back[j]);
        z = back[j];
      }
      return chain;
    }

    // Graph-guided perturbed hop toward the start cell. A hop is a last
    // resort: it is allowed only where the image sits inside W (or no W
    // constrains us) and the exact dynamics has stalled at grid scale,
    // i.e. the orbit is creeping toward an in-window limit point. Hopping
    // mid-arc lets the cell-distance heuristic fight the flow and can
    // oscillate, so it is suppressed there.
    const int32_t cy = g.cell_of(y);
    int32_t cur_d = std::numeric_limits<int32_t>::max();
    if (cy >= 0 && dist_home[cy] >= 0) cur_d = dist_home[cy];
    if (y_in_w && dist(y, x) < g.h && hops < kHopCap) {
      const CellRange cr =
          cells_meeting(g, box_dilate(BoxR{y, y}, eps * 0.98));
      int32_t best_cell = -1;
      int32_t best_dist = cur_d;
      Point best_pt{};
      if (!cr.empty) {
        for (int32_t j = cr.j0; j <= cr.j1; ++j)
          for (int32_t i = cr.i0; i <= cr.i1; ++i) {
            const int32_t d = g.cell_index(i, j);
            if (g.excluded[d] || dist_home[d] < 0 || dist_home[d] >= best_dist)
              continue;
            const Point cand = g.cell_box(d).clamp(y);
            if (dist(cand, y) > eps) continue;
            best_cell = d;
            best_dist = dist_home[d];
            best_pt = cand;
          }
      }
      if (best_cell >= 0) {
        chain.steps.push_back({y, dist(best_pt, y), true});
        chain.points.push_back(best_pt);
        x = best_pt;
        ++hops;
        continue;
      }
    }

    // Fall back to an exact step.
    if (!roam.contains(y))
      throw RealizationFailed("exact orbit escaped the window");
    chain.steps.push_back({y, 0.0, y_in_w});
    chain.points.push_back(y);
    x = y;
  }
  throw RealizationFailed("step budget exhausted");
}

ChainValidation validate_chain(const MapHandle& f, const EpsChain& chain,
                               const PerturbationWindow* w) {
  ChainValidation v;
  if (chain.points.size() < 2) return v;
  v.valid_eps = true;
  v.valid_bp = true;
  for (size_t k = 1; k < chain.points.size(); ++k) {
    Point img;
    try {
      img = f.eval(chain.points[k - 1]);
    } catch (const Error&) {
      v.valid_eps = v.valid_bp = false;
      v.records_consistent = false;
      return v;
    }
    const double pert = dist(img, chain.points[k]);
    v.max_perturbation = std::max(v.max_perturbation, pert);
    if (pert > chain.eps * (1.0 + 1e-12) + 1e-15) v.valid_eps = false;
    if (w != nullptr && pert > kPerturbationBand && !w->contains(img))
      v.valid_bp = false;
    if (k - 1 < chain.steps.size()) {
      const ChainStep& st = chain.steps[k - 1];
      if (dist(st.image, img) > 1e-9 * std::max(1.0, norm(img)) ||
          std::abs(st.perturbation - pert) >
              1e-9 * std::max(1.0, pert))
        v.records_consistent = false;
    }
  }
  if (w == nullptr) v.valid_bp = v.valid_eps;
  v.valid_bp = v.valid_bp && v.valid_eps;
  return v;
}

bool inclusion_check_prop33(const MapHandle& f, const BoxR& window, double h,
                            double eps, int depth_cap) {
  const BoxGraph g = build_box_graph(f, window, h, eps);
  const auto omega = omega_cells_from_graph(g, depth_cap);
  PerturbationWindow w;
  w.regions.push_back(box_dilate(window, eps));
  const BoxGraph filtered = bp_filter(g, w);
  const auto crbp = chain_recurrent_cells(filtered);
  std::vector<uint8_t> in_crbp(g.cell_count(), 0);
  for (int32_t c : crbp) in_crbp[c] = 1;
  for (int32_t c : omega)
    if (!in_crbp[c]) return false;
  return true;
}

WitnessSearchResult adaptive_witness_search(const MapHandle& f, Point start,
                                            double eps, double h,
                                            BoxR base_window,
                                            int max_doublings,
                                            const PerturbationWindow* w) {
  WitnessSearchResult res;
  BoxR win = base_window;
  for (int d = 0; d <= max_doublings; ++d) {
    try {
      const BoxGraph g = build_box_graph(f, win, h, eps);
      res.chain = extract_witness_chain(g, f, start, w);
      res.found = true;
      res.window = win;
      res.doublings_used = d;
      return res;
    } catch (const NoCycle&) {
    } catch (const RealizationFailed&) {
    } catch (const TooManyCells&) {
      break;
    }
    const Point c = win.center();
    const double hw = win.width(), hh = win.height();
    win = BoxR{{c.r - hw, c.s - hh}, {c.r + hw, c.s + hh}};
  }
  res.window = win;
  return res;
}

}  // namespace chainrec
