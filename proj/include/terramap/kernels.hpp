#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// straightforward reference kept for testing, `parallel` is the OpenMP
// version used by the library. Both produce bit-identical results for any
// thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>

#include "terramap/image.hpp"

namespace terramap::kernels {

// Uniform grid over screen space; cell (0, 0) starts at (origin_x, origin_y).
struct GridShape {
  double origin_x = 0;
  double origin_y = 0;
  double cell = 1;
  int width = 0;
  int height = 0;
};

struct PointPrim {
  double x, y;
  float size;
  Rgba color;
};

struct LinePrim {
  double x0, y0, x1, y1;
  float width;
  Rgba color;
};

struct TrianglePrim {
  double x0, y0, x1, y1, x2, y2;
  Rgba color;
};

struct SpritePrim {
  const Image* image;
  double x, y;  // top-left corner in screen pixels
  double scale;
  std::uint8_t alpha;
};

int max_threads();

namespace serial {

void project(std::span<const double> lon, std::span<const double> lat, int zoom, double origin_wx,
             double origin_wy, std::span<double> sx, std::span<double> sy);

// Adds one count per finite in-grid point. `counts` has width*height cells.
void bin_counts(std::span<const double> sx, std::span<const double> sy, const GridShape& grid,
                std::span<double> counts);

// out[r*out_w + c] = sum_k kernel[k] * in[r*in_w + c + k]; in_w = out_w + len(kernel) - 1.
void convolve_rows(std::span<const double> in, int in_w, int rows, std::span<const double> kernel,
                   std::span<double> out, int out_w);
// out[r*w + c] = sum_k kernel[k] * in[(r + k)*w + c]; out has out_rows rows.
void convolve_cols(std::span<const double> in, int w, std::span<const double> kernel,
                   std::span<double> out, int out_rows);

void draw_points(Image& target, std::span<const PointPrim> prims);
void draw_lines(Image& target, std::span<const LinePrim> prims);
void draw_triangles(Image& target, std::span<const TrianglePrim> prims);
void draw_sprites(Image& target, std::span<const SpritePrim> prims);

}  // namespace serial

namespace parallel {

void project(std::span<const double> lon, std::span<const double> lat, int zoom, double origin_wx,
             double origin_wy, std::span<double> sx, std::span<double> sy);
void bin_counts(std::span<const double> sx, std::span<const double> sy, const GridShape& grid,
                std::span<double> counts);
void convolve_rows(std::span<const double> in, int in_w, int rows, std::span<const double> kernel,
                   std::span<double> out, int out_w);
void convolve_cols(std::span<const double> in, int w, std::span<const double> kernel,
                   std::span<double> out, int out_rows);

// Rasterizers split the target into horizontal bands, one per thread; each
// band walks the primitives in order so blending order is unchanged.
void draw_points(Image& target, std::span<const PointPrim> prims);
void draw_lines(Image& target, std::span<const LinePrim> prims);
void draw_triangles(Image& target, std::span<const TrianglePrim> prims);
void draw_sprites(Image& target, std::span<const SpritePrim> prims);

}  // namespace parallel

namespace detail {

// Slippy-map Web Mercator for one point; `size` is the world width in pixels.
// Latitude is clamped to the Mercator cutoff and the result to [0, size].
inline void mercator(double lon, double lat, double size, double& wx, double& wy) {
  constexpr double kCutoff = 85.05112878;
  if (std::isnan(lon) || std::isnan(lat)) {
    wx = wy = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double phi = std::clamp(lat, -kCutoff, kCutoff) * (std::numbers::pi / 180.0);
  wx = size * (lon + 180.0) / 360.0;
  wy = size * (1.0 - std::asinh(std::tan(phi)) / std::numbers::pi) / 2.0;
  wy = std::clamp(wy, 0.0, size);
}

// Rasterize only rows in [row_begin, row_end).
void raster_points(Image& target, std::span<const PointPrim> prims, int row_begin, int row_end);
void raster_lines(Image& target, std::span<const LinePrim> prims, int row_begin, int row_end);
void raster_triangles(Image& target, std::span<const TrianglePrim> prims, int row_begin,
                      int row_end);
void raster_sprites(Image& target, std::span<const SpritePrim> prims, int row_begin, int row_end);

}  // namespace detail

}  // namespace terramap::kernels
