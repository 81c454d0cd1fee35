#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "chainrec/chaindyn.hpp"
#include "chainrec/example31.hpp"
#include "chainrec/example34.hpp"
#include "chainrec/fixedpoint.hpp"
#include "chainrec/scc.hpp"

using namespace chainrec;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Point> sample_points(double lo, double hi, double slit, int n) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> pts;
  pts.reserve(n);
  while ((int)pts.size() < n) {
    Point z{u(rng), u(rng)};
    if (std::abs(z.s) >= slit) pts.push_back(z);
  }
  return pts;
}

void BM_eval31(benchmark::State& state) {
  auto pts = sample_points(-20.0, 20.0, 0.0, 4096);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval31(pts[k++ & 4095]));
  }
}
BENCHMARK(BM_eval31);

void BM_eval31_inverse(benchmark::State& state) {
  auto pts = sample_points(-20.0, 20.0, 0.0, 4096);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval31_inverse(pts[k++ & 4095]));
  }
}
BENCHMARK(BM_eval31_inverse);

void BM_eval34(benchmark::State& state) {
  auto pts = sample_points(-4.0, 4.0, 1e-3, 4096);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval34(pts[k++ & 4095]));
  }
}
BENCHMARK(BM_eval34);

void BM_build_box_graph(benchmark::State& state) {
  const MapHandle f = rotation(0.0, 0.0, 2.0 * kPi / 5.0);
  const double h = 4.0 / state.range(0);  // range = cells per side
  for (auto _ : state) {
    BoxGraph g = build_box_graph(f, {{-2, -2}, {2, 2}}, h, 0.1);
    benchmark::DoNotOptimize(g.eto.data());
  }
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_build_box_graph)->Arg(40)->Arg(80)->Arg(160)->Complexity();

void BM_chain_recurrent_cells(benchmark::State& state) {
  const MapHandle f = rotation(0.0, 0.0, 2.0 * kPi / 5.0);
  const double h = 4.0 / state.range(0);
  const BoxGraph g = build_box_graph(f, {{-2, -2}, {2, 2}}, h, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_recurrent_cells(g).data());
  }
}
BENCHMARK(BM_chain_recurrent_cells)->Arg(80)->Arg(160);

void BM_tarjan_scc_random(benchmark::State& state) {
  const int32_t n = (int32_t)state.range(0);
  std::mt19937_64 rng(7);
  std::vector<std::vector<int32_t>> adj(n);
  for (int32_t a = 0; a < n; ++a)
    for (int k = 0; k < 4; ++k) adj[a].push_back((int32_t)(rng() % n));
  std::vector<int32_t> off(n + 1, 0), to;
  for (int32_t a = 0; a < n; ++a) off[a + 1] = off[a] + (int32_t)adj[a].size();
  for (int32_t a = 0; a < n; ++a)
    for (int32_t b : adj[a]) to.push_back(b);
  for (auto _ : state) {
    auto res = tarjan_scc(n, off, to, [](int32_t) { return true; });
    benchmark::DoNotOptimize(res.count);
  }
}
BENCHMARK(BM_tarjan_scc_random)->Arg(10000)->Arg(100000);

void BM_locate_fixed_points(benchmark::State& state) {
  const MapHandle f = rotation(3.0, 4.0, 2.0 * kPi / 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        locate_fixed_points(f, {{0, 0}, {8, 8}}, 1e-9).fixed_points.size());
  }
}
BENCHMARK(BM_locate_fixed_points);

}  // namespace

BENCHMARK_MAIN();
