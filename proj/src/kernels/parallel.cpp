#include <cmath>
#include <vector>

#include "terramap/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace terramap::kernels::parallel {

namespace {

constexpr std::ptrdiff_t kMinParallelItems = 1 << 14;

template <typename Prim, typename Fn>
void banded(Image& target, std::span<const Prim> prims, Fn raster) {
  const int h = target.height();
  const int bands = std::max(1, std::min(max_threads(), h));
  if (bands == 1 || prims.empty()) {
    raster(target, prims, 0, h);
    return;
  }
#pragma omp parallel for schedule(static, 1)
  for (int b = 0; b < bands; ++b) {
    const int r0 = static_cast<int>(static_cast<long long>(b) * h / bands);
    const int r1 = static_cast<int>(static_cast<long long>(b + 1) * h / bands);
    raster(target, prims, r0, r1);
  }
}

}  // namespace

void project(std::span<const double> lon, std::span<const double> lat, int zoom, double origin_wx,
             double origin_wy, std::span<double> sx, std::span<double> sy) {
  const double size = std::ldexp(256.0, zoom);
  const auto n = static_cast<std::ptrdiff_t>(lon.size());
#pragma omp parallel for schedule(static) if (n >= kMinParallelItems)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double wx, wy;
    detail::mercator(lon[i], lat[i], size, wx, wy);
    sx[i] = wx - origin_wx;
    sy[i] = wy - origin_wy;
  }
}

void bin_counts(std::span<const double> sx, std::span<const double> sy, const GridShape& grid,
                std::span<double> counts) {
  const auto n = static_cast<std::ptrdiff_t>(sx.size());
  const int threads = max_threads();
  auto bin_range = [&](std::ptrdiff_t begin, std::ptrdiff_t end, double* out) {
    const double inv = 1.0 / grid.cell;
    const bool exact_inv = grid.cell == 1.0 || grid.cell == 2.0 || grid.cell == 4.0 ||
                           grid.cell == 8.0 || grid.cell == 16.0;
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      // Division must match the reference exactly; multiply only by exact inverses.
      double fx = exact_inv ? std::floor((sx[i] - grid.origin_x) * inv)
                            : std::floor((sx[i] - grid.origin_x) / grid.cell);
      double fy = exact_inv ? std::floor((sy[i] - grid.origin_y) * inv)
                            : std::floor((sy[i] - grid.origin_y) / grid.cell);
      if (!(fx >= 0 && fx < grid.width && fy >= 0 && fy < grid.height)) continue;
      out[static_cast<std::size_t>(fy) * grid.width + static_cast<std::size_t>(fx)] += 1.0;
    }
  };
  if (threads == 1 || n < kMinParallelItems) {
    bin_range(0, n, counts.data());
    return;
  }
  // Counts are small integers, so summing per-thread grids is exact and
  // independent of the partition.
  const std::size_t cells = counts.size();
  std::vector<std::vector<double>> local(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
#ifdef _OPENMP
    const int t = omp_get_thread_num();
#else
    const int t = 0;
#endif
    auto& mine = local[static_cast<std::size_t>(t)];
    mine.assign(cells, 0.0);
    const std::ptrdiff_t begin = n * t / threads;
    const std::ptrdiff_t end = n * (t + 1) / threads;
    bin_range(begin, end, mine.data());
  }
  const auto ncells = static_cast<std::ptrdiff_t>(cells);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < ncells; ++c) {
    double acc = counts[c];
    for (const auto& mine : local) acc += mine.empty() ? 0.0 : mine[c];
    counts[c] = acc;
  }
}

void convolve_rows(std::span<const double> in, int in_w, int rows, std::span<const double> kernel,
                   std::span<double> out, int out_w) {
  const std::size_t k = kernel.size();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    const double* src = in.data() + static_cast<std::size_t>(r) * in_w;
    double* dst = out.data() + static_cast<std::size_t>(r) * out_w;
    for (int c = 0; c < out_w; ++c) {
      double acc = 0;
      for (std::size_t t = 0; t < k; ++t) acc += kernel[t] * src[c + t];
      dst[c] = acc;
    }
  }
}

void convolve_cols(std::span<const double> in, int w, std::span<const double> kernel,
                   std::span<double> out, int out_rows) {
  const std::size_t k = kernel.size();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < out_rows; ++r) {
    double* dst = out.data() + static_cast<std::size_t>(r) * w;
    for (int c = 0; c < w; ++c) dst[c] = 0.0;
    // Row-major sweep; each cell still accumulates taps in ascending order.
    for (std::size_t t = 0; t < k; ++t) {
      const double kt = kernel[t];
      const double* src = in.data() + (r + t) * static_cast<std::size_t>(w);
      for (int c = 0; c < w; ++c) dst[c] += kt * src[c];
    }
  }
}

void draw_points(Image& target, std::span<const PointPrim> prims) {
  banded(target, prims, detail::raster_points);
}
void draw_lines(Image& target, std::span<const LinePrim> prims) {
  banded(target, prims, detail::raster_lines);
}
void draw_triangles(Image& target, std::span<const TrianglePrim> prims) {
  banded(target, prims, detail::raster_triangles);
}
void draw_sprites(Image& target, std::span<const SpritePrim> prims) {
  banded(target, prims, detail::raster_sprites);
}

}  // namespace terramap::kernels::parallel
