#include <cmath>

#include "terramap/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace terramap::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {

namespace {

// Pixel index range [lo, hi) whose centers satisfy a <= i + 0.5 < b,
// clipped to [0, limit).
inline void center_span(double a, double b, int limit, int& lo, int& hi) {
  double l = std::ceil(a - 0.5);
  double h = std::ceil(b - 0.5);
  l = std::clamp(l, 0.0, static_cast<double>(limit));
  h = std::clamp(h, 0.0, static_cast<double>(limit));
  lo = static_cast<int>(l);
  hi = static_cast<int>(std::max(h, l));
}

struct Vertex {
  double x, y;
};

// Scanline fill of a convex polygon. Each edge is evaluated from its lower
// endpoint, so an edge shared by two primitives yields the same crossing
// and pixel centers on it are owned by exactly one side.
void fill_convex(Image& target, const Vertex* v, int n, Rgba color, int row_begin, int row_end) {
  double ymin = v[0].y, ymax = v[0].y, xmin = v[0].x, xmax = v[0].x;
  for (int i = 1; i < n; ++i) {
    ymin = std::min(ymin, v[i].y);
    ymax = std::max(ymax, v[i].y);
    xmin = std::min(xmin, v[i].x);
    xmax = std::max(xmax, v[i].x);
  }
  if (!(xmax >= -1.0 && xmin <= target.width() + 1.0)) return;
  int j0, j1;
  center_span(ymin, ymax, target.height(), j0, j1);
  j0 = std::max(j0, row_begin);
  j1 = std::min(j1, row_end);
  for (int j = j0; j < j1; ++j) {
    const double yc = j + 0.5;
    double xl = INFINITY, xr = -INFINITY;
    for (int e = 0; e < n; ++e) {
      Vertex p = v[e], q = v[(e + 1) % n];
      if (p.y > q.y || (p.y == q.y && p.x > q.x)) std::swap(p, q);
      if (p.y == q.y || yc < p.y || yc >= q.y) continue;
      double x = p.x + (yc - p.y) * (q.x - p.x) / (q.y - p.y);
      xl = std::min(xl, x);
      xr = std::max(xr, x);
    }
    if (!(xr > xl)) continue;
    int i0, i1;
    center_span(xl, xr, target.width(), i0, i1);
    std::uint8_t* row = target.row(j);
    for (int i = i0; i < i1; ++i) blend_pixel(row + i * 4, color);
  }
}

inline bool finite(double a, double b) { return std::isfinite(a) && std::isfinite(b); }

}  // namespace

void raster_points(Image& target, std::span<const PointPrim> prims, int row_begin, int row_end) {
  const int w = target.width();
  for (const PointPrim& p : prims) {
    if (!finite(p.x, p.y)) continue;
    const double half = p.size * 0.5;
    if (p.y + half < row_begin - 1 || p.y - half > row_end + 1) continue;
    int i0, i1, j0, j1;
    center_span(p.x - half, p.x + half, w, i0, i1);
    center_span(p.y - half, p.y + half, target.height(), j0, j1);
    // Sub-pixel points still cover the pixel they fall in.
    if (i0 == i1 && p.x >= 0 && p.x < w) {
      i0 = static_cast<int>(p.x);
      i1 = i0 + 1;
    }
    if (j0 == j1 && p.y >= 0 && p.y < target.height()) {
      j0 = static_cast<int>(p.y);
      j1 = j0 + 1;
    }
    j0 = std::max(j0, row_begin);
    j1 = std::min(j1, row_end);
    for (int j = j0; j < j1; ++j) {
      std::uint8_t* row = target.row(j);
      for (int i = i0; i < i1; ++i) blend_pixel(row + i * 4, p.color);
    }
  }
}

void raster_lines(Image& target, std::span<const LinePrim> prims, int row_begin, int row_end) {
  for (const LinePrim& l : prims) {
    if (!finite(l.x0, l.y0) || !finite(l.x1, l.y1)) continue;
    const double dx = l.x1 - l.x0, dy = l.y1 - l.y0;
    const double len = std::hypot(dx, dy);
    const double half = std::max(l.width, 1.0f) * 0.5;
    if (len == 0) {
      PointPrim dot{l.x0, l.y0, static_cast<float>(2 * half), l.color};
      raster_points(target, {&dot, 1}, row_begin, row_end);
      continue;
    }
    if (std::max(l.y0, l.y1) + half < row_begin || std::min(l.y0, l.y1) - half > row_end) continue;
    const double nx = -dy / len * half, ny = dx / len * half;
    Vertex quad[4] = {{l.x0 + nx, l.y0 + ny},
                      {l.x1 + nx, l.y1 + ny},
                      {l.x1 - nx, l.y1 - ny},
                      {l.x0 - nx, l.y0 - ny}};
    fill_convex(target, quad, 4, l.color, row_begin, row_end);
  }
}

void raster_triangles(Image& target, std::span<const TrianglePrim> prims, int row_begin,
                      int row_end) {
  for (const TrianglePrim& t : prims) {
    if (!finite(t.x0, t.y0) || !finite(t.x1, t.y1) || !finite(t.x2, t.y2)) continue;
    Vertex tri[3] = {{t.x0, t.y0}, {t.x1, t.y1}, {t.x2, t.y2}};
    fill_convex(target, tri, 3, t.color, row_begin, row_end);
  }
}

void raster_sprites(Image& target, std::span<const SpritePrim> prims, int row_begin, int row_end) {
  for (const SpritePrim& s : prims) {
    if (!s.image || s.image->empty() || !finite(s.x, s.y) || !(s.scale > 0)) continue;
    const Image& img = *s.image;
    int i0, i1, j0, j1;
    center_span(s.x, s.x + img.width() * s.scale, target.width(), i0, i1);
    center_span(s.y, s.y + img.height() * s.scale, target.height(), j0, j1);
    j0 = std::max(j0, row_begin);
    j1 = std::min(j1, row_end);
    for (int j = j0; j < j1; ++j) {
      int v = std::clamp(static_cast<int>((j + 0.5 - s.y) / s.scale), 0, img.height() - 1);
      const std::uint8_t* src = img.row(v);
      std::uint8_t* row = target.row(j);
      for (int i = i0; i < i1; ++i) {
        int u = std::clamp(static_cast<int>((i + 0.5 - s.x) / s.scale), 0, img.width() - 1);
        const std::uint8_t* px = src + u * 4;
        Rgba c{px[0], px[1], px[2],
               static_cast<std::uint8_t>((px[3] * static_cast<unsigned>(s.alpha) + 127) / 255)};
        blend_pixel(row + i * 4, c);
      }
    }
  }
}

}  // namespace detail

namespace serial {

void project(std::span<const double> lon, std::span<const double> lat, int zoom, double origin_wx,
             double origin_wy, std::span<double> sx, std::span<double> sy) {
  const double size = std::ldexp(256.0, zoom);
  for (std::size_t i = 0; i < lon.size(); ++i) {
    double wx, wy;
    detail::mercator(lon[i], lat[i], size, wx, wy);
    sx[i] = wx - origin_wx;
    sy[i] = wy - origin_wy;
  }
}

void bin_counts(std::span<const double> sx, std::span<const double> sy, const GridShape& grid,
                std::span<double> counts) {
  for (std::size_t i = 0; i < sx.size(); ++i) {
    double fx = std::floor((sx[i] - grid.origin_x) / grid.cell);
    double fy = std::floor((sy[i] - grid.origin_y) / grid.cell);
    // NaN fails both comparisons.
    if (!(fx >= 0 && fx < grid.width && fy >= 0 && fy < grid.height)) continue;
    counts[static_cast<std::size_t>(fy) * grid.width + static_cast<std::size_t>(fx)] += 1.0;
  }
}

void convolve_rows(std::span<const double> in, int in_w, int rows, std::span<const double> kernel,
                   std::span<double> out, int out_w) {
  const std::size_t k = kernel.size();
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
  for (int r = 0; r < out_rows; ++r) {
    double* dst = out.data() + static_cast<std::size_t>(r) * w;
    for (int c = 0; c < w; ++c) {
      double acc = 0;
      for (std::size_t t = 0; t < k; ++t) acc += kernel[t] * in[(r + t) * static_cast<std::size_t>(w) + c];
      dst[c] = acc;
    }
  }
}

void draw_points(Image& target, std::span<const PointPrim> prims) {
  detail::raster_points(target, prims, 0, target.height());
}
void draw_lines(Image& target, std::span<const LinePrim> prims) {
  detail::raster_lines(target, prims, 0, target.height());
}
void draw_triangles(Image& target, std::span<const TrianglePrim> prims) {
  detail::raster_triangles(target, prims, 0, target.height());
}
void draw_sprites(Image& target, std::span<const SpritePrim> prims) {
  detail::raster_sprites(target, prims, 0, target.height());
}

}  // namespace serial

}  // namespace terramap::kernels
