#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainrec/geometry.hpp"
#include "chainrec/maps.hpp"

namespace chainrec {

/// Perturbations below this are floating-point noise and count as zero.
inline constexpr double kPerturbationBand = 1e-12;

/// Bounded region where nonzero chain perturbations may occur.
/// A union of boxes: the natural W for the pencil example is two disjoint
/// anchor neighborhoods, and the CLI's repeated --w-region flag unions.
struct PerturbationWindow {
  std::vector<BoxR> regions;

  bool contains(Point z) const {
    for (const auto& b : regions)
      if (b.contains(z)) return true;
    return false;
  }
  bool intersects(const BoxR& box) const {
    for (const auto& b : regions)
      if (b.intersects(box)) return true;
    return false;
  }
  PerturbationWindow dilated(double pad) const {
    PerturbationWindow w;
    for (const auto& b : regions) w.regions.push_back(box_dilate(b, pad));
    return w;
  }
};

struct ChainStep {
  Point image;          // f(x_{k-1})
  double perturbation;  // d(image, x_k)
  bool in_w;            // image inside W (false when no W was supplied)
};

/// A finite eps-chain with per-step perturbation records.
struct EpsChain {
  std::vector<Point> points;  // x_0 .. x_n, n >= 1
  double eps = 0.0;
  std::vector<ChainStep> steps;  // size points.size() - 1
};

enum class EdgeKind : uint8_t { exact, perturbed };

/// Directed graph over a grid of boxes; edges over-approximate the one-step
/// eps-perturbed reachability of the map.
struct BoxGraph {
  BoxR window;
  double h = 0.0;
  double eps = 0.0;
  int32_t nx = 0, ny = 0;
  std::vector<uint8_t> excluded;   // cell meets the complement of the domain
  std::vector<BoxR> enclosure;     // outer enclosure of f(cell)
  std::vector<double> pad;         // Lipschitz padding used per cell
  // CSR edges
  std::vector<int32_t> eoff;
  std::vector<int32_t> eto;
  std::vector<uint8_t> ekind;

  int32_t cell_count() const { return nx * ny; }
  int32_t cell_index(int32_t i, int32_t j) const { return j * nx + i; }
  BoxR cell_box(int32_t idx) const {
    const int32_t i = idx % nx, j = idx / nx;
    return {{window.lo.r + i * h, window.lo.s + j * h},
            {window.lo.r + (i + 1) * h, window.lo.s + (j + 1) * h}};
  }
  /// Cell containing z, or -1 outside the window.
  int32_t cell_of(Point z) const;
};

BoxGraph build_box_graph(const MapHandle& f, const BoxR& window, double h,
                         double eps);

/// Cells lying on a directed cycle (SCC of size > 1 or with a self-loop),
/// using edges of both kinds. Sorted ascending.
std::vector<int32_t> chain_recurrent_cells(const BoxGraph& g);

/// Keeps exact edges; keeps a perturbed edge only when the source cell's
/// image enclosure meets the eps-dilated W.
BoxGraph bp_filter(const BoxGraph& g, const PerturbationWindow& w);

/// Cells on an exact-edge cycle (eps = 0 relation, padding only) of length
/// <= depth_cap.
std::vector<int32_t> omega_candidate_cells(const MapHandle& f,
                                           const BoxR& window, double h,
                                           int depth_cap);
/// Same search over the exact edges of an already-built graph.
std::vector<int32_t> omega_cells_from_graph(const BoxGraph& g, int depth_cap);

EpsChain extract_witness_chain(const BoxGraph& g, const MapHandle& f,
                               Point start, const PerturbationWindow* w);

struct ChainValidation {
  bool valid_eps = false;
  bool valid_bp = false;  // vacuously equal to valid_eps when no W is given
  double max_perturbation = 0.0;
  bool records_consistent = true;  // stored images match recomputation
};

ChainValidation validate_chain(const MapHandle& f, const EpsChain& chain,
                               const PerturbationWindow* w);

/// Graph-level analogue of the inclusion of non-wandering points into
/// BP-chain-recurrent points: omega candidates must sit inside the
/// bp-filtered recurrent cell set (W := window dilated by eps). A failure
/// indicates an engine bug, since every exact cycle survives the filter.
bool inclusion_check_prop33(const MapHandle& f, const BoxR& window, double h,
                            double eps, int depth_cap);

struct WitnessSearchResult {
  bool found = false;
  BoxR window;
  EpsChain chain;
  int doublings_used = 0;
};

/// Grows the window by factors of 2 until a witness chain from start to
/// start realizes, or the doubling budget runs out.
WitnessSearchResult adaptive_witness_search(const MapHandle& f, Point start,
                                            double eps, double h,
                                            BoxR base_window,
                                            int max_doublings,
                                            const PerturbationWindow* w);

struct RecurrenceReport {
  std::string map_label;
  BoxR window;
  double h = 0.0;
  double eps = 0.0;
  std::string kind;  // cr | crbp | omega | fix | chain-witness
  std::vector<BoxR> w_regions;
  std::vector<std::pair<int32_t, int32_t>> cells;  // [i, j] indices
  std::optional<EpsChain> witness;
  double elapsed_ms = 0.0;
};

}  // namespace chainrec
