#include "terramap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "terramap/error.hpp"
#include "terramap/kernels.hpp"

namespace terramap {

double Grid2D::max_value() const {
  double m = 0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double Grid2D::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

namespace {

int cells_for(double extent, double cell) {
  return std::max(0, static_cast<int>(std::ceil(extent / cell)));
}

}  // namespace

Grid2D bin2d(std::span<const double> sx, std::span<const double> sy, double cell_px,
             const Viewport& viewport) {
  if (sx.size() != sy.size()) throw DataError("x/y arrays differ in length");
  if (!(cell_px >= 1)) throw DataError("bin size must be at least 1 pixel");
  Grid2D grid;
  grid.origin_sx = viewport.x;
  grid.origin_sy = viewport.y;
  grid.cell_px = cell_px;
  grid.width = cells_for(viewport.w, cell_px);
  grid.height = cells_for(viewport.h, cell_px);
  grid.values.assign(static_cast<std::size_t>(grid.width) * grid.height, 0.0);
  kernels::GridShape shape{viewport.x, viewport.y, cell_px, grid.width, grid.height};
  kernels::parallel::bin_counts(sx, sy, shape, grid.values);
  return grid;
}

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw DataError("kernel bandwidth must be positive");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
  double total = 0;
  for (int i = -r; i <= r; ++i) {
    double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(i + r)] = w;
    total += w;
  }
  for (double& w : taps) w /= total;
  return taps;
}

Grid2D kde_grid(std::span<const double> sx, std::span<const double> sy, const KdeParams& params,
                const Viewport& viewport) {
  if (sx.size() != sy.size()) throw DataError("x/y arrays differ in length");
  if (!(params.bw_x > 0) || !(params.bw_y > 0)) throw DataError("kernel bandwidth must be positive");
  if (!(params.cell_px > 0)) throw DataError("KDE cell size must be positive");
  if (params.cut_below && !(*params.cut_below >= 0)) throw DataError("cut_below must be >= 0");
  if (params.clip_above && !(*params.clip_above > 0)) throw DataError("clip_above must be > 0");
  if (params.cut_below && params.clip_above && !(*params.clip_above > *params.cut_below)) {
    throw DataError("clip_above must exceed cut_below");
  }

  const double cell = params.cell_px;
  const auto kx = gaussian_taps(params.bw_x / cell);
  const auto ky = gaussian_taps(params.bw_y / cell);
  const int rx = static_cast<int>(kx.size() / 2);
  const int ry = static_cast<int>(ky.size() / 2);

  Grid2D grid;
  grid.origin_sx = viewport.x;
  grid.origin_sy = viewport.y;
  grid.cell_px = cell;
  grid.width = cells_for(viewport.w, cell);
  grid.height = cells_for(viewport.h, cell);

  // Bin with a margin of one kernel radius so points just outside the
  // viewport still contribute.
  const int pw = grid.width + 2 * rx;
  const int ph = grid.height + 2 * ry;
  std::vector<double> counts(static_cast<std::size_t>(pw) * ph, 0.0);
  kernels::GridShape padded{viewport.x - rx * cell, viewport.y - ry * cell, cell, pw, ph};
  kernels::parallel::bin_counts(sx, sy, padded, counts);

  std::vector<double> rows(static_cast<std::size_t>(grid.width) * ph);
  kernels::parallel::convolve_rows(counts, pw, ph, kx, rows, grid.width);
  grid.values.resize(static_cast<std::size_t>(grid.width) * grid.height);
  kernels::parallel::convolve_cols(rows, grid.width, ky, grid.values, grid.height);

  for (double& v : grid.values) {
    if (params.cut_below && v < *params.cut_below) v = 0.0;
    if (params.clip_above && v > *params.clip_above) v = *params.clip_above;
  }
  return grid;
}

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const long double l = static_cast<long double>(b.x - a.x) * static_cast<long double>(c.y - a.y);
  const long double r = static_cast<long double>(b.y - a.y) * static_cast<long double>(c.x - a.x);
  const long double det = l - r;
  const long double tol = 1e-12L * (std::fabs(l) + std::fabs(r));
  if (det > tol) return 1;
  if (det < -tol) return -1;
  return 0;
}

int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  using LD = long double;
  const LD adx = static_cast<LD>(a.x) - d.x, ady = static_cast<LD>(a.y) - d.y;
  const LD bdx = static_cast<LD>(b.x) - d.x, bdy = static_cast<LD>(b.y) - d.y;
  const LD cdx = static_cast<LD>(c.x) - d.x, cdy = static_cast<LD>(c.y) - d.y;
  const LD alift = adx * adx + ady * ady;
  const LD blift = bdx * bdx + bdy * bdy;
  const LD clift = cdx * cdx + cdy * cdy;
  const LD bc = bdx * cdy - cdx * bdy;
  const LD ca = cdx * ady - adx * cdy;
  const LD ab = adx * bdy - bdx * ady;
  const LD det = alift * bc + blift * ca + clift * ab;
  const LD perm = (std::fabs(bdx * cdy) + std::fabs(cdx * bdy)) * alift +
                  (std::fabs(cdx * ady) + std::fabs(adx * cdy)) * blift +
                  (std::fabs(adx * bdy) + std::fabs(bdx * ady)) * clift;
  const LD tol = 1e-12L * perm;
  if (det > tol) return 1;
  if (det < -tol) return -1;
  return 0;
}

Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c) {
  using LD = long double;
  const LD bx = static_cast<LD>(b.x) - a.x, by = static_cast<LD>(b.y) - a.y;
  const LD cx = static_cast<LD>(c.x) - a.x, cy = static_cast<LD>(c.y) - a.y;
  const LD d = 2 * (bx * cy - by * cx);
  const LD b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const LD ux = (cy * b2 - by * c2) / d;
  const LD uy = (bx * c2 - cx * b2) / d;
  return {static_cast<double>(a.x + ux), static_cast<double>(a.y + uy)};
}

std::vector<Point2> convex_hull(std::span<const Point2> input) {
  std::vector<Point2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Point2& p, const Point2& q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw GeometryError("convex hull needs at least 3 distinct points");

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = pts[i];
    while (k >= lower && orient2d(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw GeometryError("convex hull of collinear points is degenerate");
  return hull;
}

double polygon_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0;
  double twice = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = ring[i];
    const Point2& q = ring[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return twice / 2.0;
}

}  // namespace terramap
