// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "terramap/kernels.hpp"

namespace {

using namespace terramap;
using namespace terramap::kernels;

struct Points {
  std::vector<double> lon, lat, sx, sy;
};

const Points& points() {
  static const Points p = [] {
    Points p;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> lon(10.5, 1.0), lat(56.0, 0.6);
    const std::size_t n = 1000000;
    p.lon.resize(n);
    p.lat.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      p.lon[i] = lon(rng);
      p.lat[i] = lat(rng);
    }
    p.sx.resize(n);
    p.sy.resize(n);
    serial::project(p.lon, p.lat, 7, 16960, 9940, p.sx, p.sy);
    return p;
  }();
  return p;
}

template <auto Fn>
void BM_project(benchmark::State& state) {
  const Points& p = points();
  std::vector<double> sx(p.lon.size()), sy(p.lon.size());
  for (auto _ : state) {
    Fn(p.lon, p.lat, 7, 16960, 9940, sx, sy);
    benchmark::DoNotOptimize(sx.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.lon.size()));
}

template <auto Fn>
void BM_bin(benchmark::State& state) {
  const Points& p = points();
  const GridShape grid{0, 0, 8, 160, 96};
  std::vector<double> counts(static_cast<std::size_t>(grid.width) * grid.height);
  for (auto _ : state) {
    std::fill(counts.begin(), counts.end(), 0.0);
    Fn(p.sx, p.sy, grid, counts);
    benchmark::DoNotOptimize(counts.data());
  }
}

template <auto Rows, auto Cols>
void BM_convolve(benchmark::State& state) {
  const int w = 640, h = 384, k = 31;
  std::vector<double> kernel(k, 1.0 / k);
  std::vector<double> in(static_cast<std::size_t>(w + k - 1) * (h + k - 1), 1.0);
  std::vector<double> mid(static_cast<std::size_t>(w) * (h + k - 1));
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (auto _ : state) {
    Rows(in, w + k - 1, h + k - 1, kernel, mid, w);
    Cols(mid, w, kernel, out, h);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Fn>
void BM_points(benchmark::State& state) {
  const Points& p = points();
  std::vector<PointPrim> prims;
  prims.reserve(p.sx.size());
  for (std::size_t i = 0; i < p.sx.size(); ++i) prims.push_back({p.sx[i], p.sy[i], 2, {255, 0, 0, 255}});
  Image target(1280, 768, {255, 255, 255, 255});
  for (auto _ : state) {
    Fn(target, prims);
    benchmark::ClobberMemory();
  }
}

template <auto Fn>
void BM_lines(benchmark::State& state) {
  const Points& p = points();
  std::vector<LinePrim> prims;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    prims.push_back({p.sx[i], p.sy[i], p.sx[i + 1], p.sy[i + 1], 1, {0, 0, 255, 64}});
  }
  Image target(1280, 768, {255, 255, 255, 255});
  for (auto _ : state) {
    Fn(target, prims);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_project<serial::project>)->Name("project/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_project<parallel::project>)->Name("project/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bin<serial::bin_counts>)->Name("bin_counts/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bin<parallel::bin_counts>)->Name("bin_counts/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve<serial::convolve_rows, serial::convolve_cols>)
    ->Name("convolve/serial")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve<parallel::convolve_rows, parallel::convolve_cols>)
    ->Name("convolve/parallel")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_points<serial::draw_points>)->Name("draw_points/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_points<parallel::draw_points>)->Name("draw_points/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lines<serial::draw_lines>)->Name("draw_lines/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lines<parallel::draw_lines>)->Name("draw_lines/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
