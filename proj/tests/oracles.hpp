#pragma once

// Brute-force reference implementations shared by the unit and acceptance
// tests. Deliberately naive; none of them call into the library kernels.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "terramap/geometry.hpp"

namespace terramap::oracle {

inline std::vector<Point2> random_points(std::size_t n, std::uint64_t seed, double lo = 0, double hi = 1000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

inline double cross(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Per-point loop with the floor rule; points outside the grid are dropped.
inline std::vector<double> bin2d(const std::vector<double>& sx, const std::vector<double>& sy, double ox,
                                 double oy, double cell, int w, int h) {
  std::vector<double> out(static_cast<std::size_t>(w) * h, 0.0);
  for (std::size_t i = 0; i < sx.size(); ++i) {
    if (!std::isfinite(sx[i]) || !std::isfinite(sy[i])) continue;
    const double cx = std::floor((sx[i] - ox) / cell), cy = std::floor((sy[i] - oy) / cell);
    if (cx < 0 || cy < 0 || cx >= w || cy >= h) continue;
    out[static_cast<std::size_t>(cy) * w + static_cast<std::size_t>(cx)] += 1;
  }
  return out;
}

// Direct 2D summation of a truncated, unit-mass Gaussian over binned counts.
// Counts are binned on a grid padded by the kernel radius on every side.
inline std::vector<double> kde_direct(const std::vector<double>& sx, const std::vector<double>& sy, double ox,
                                      double oy, double cell, int w, int h, double sigma_x_px,
                                      double sigma_y_px) {
  auto taps = [](double sigma) {
    const int r = static_cast<int>(std::ceil(3 * sigma));
    std::vector<double> t;
    double total = 0;
    for (int i = -r; i <= r; ++i) {
      t.push_back(std::exp(-0.5 * (i / sigma) * (i / sigma)));
      total += t.back();
    }
    for (auto& v : t) v /= total;
    return t;
  };
  const auto tx = taps(sigma_x_px / cell), ty = taps(sigma_y_px / cell);
  const int rx = static_cast<int>(tx.size() / 2), ry = static_cast<int>(ty.size() / 2);
  const int pw = w + 2 * rx, ph = h + 2 * ry;
  const auto counts = bin2d(sx, sy, ox - rx * cell, oy - ry * cell, cell, pw, ph);
  std::vector<double> out(static_cast<std::size_t>(w) * h, 0.0);
  for (int cy = 0; cy < h; ++cy) {
    for (int cx = 0; cx < w; ++cx) {
      double acc = 0;
      for (int by = 0; by < ph; ++by) {
        for (int bx = 0; bx < pw; ++bx) {
          const double c = counts[static_cast<std::size_t>(by) * pw + bx];
          if (c == 0) continue;
          const int dx = bx - (cx + rx), dy = by - (cy + ry);
          if (std::abs(dx) > rx || std::abs(dy) > ry) continue;
          acc += c * tx[static_cast<std::size_t>(dx + rx)] * ty[static_cast<std::size_t>(dy + ry)];
        }
      }
      out[static_cast<std::size_t>(cy) * w + cx] = acc;
    }
  }
  return out;
}

// Number of (point, triangle) pairs where the point lies strictly inside the
// circumcircle by more than `tol` relative to the radius.
inline std::size_t circumcircle_violations(const std::vector<Point2>& pts,
                                           const std::vector<std::array<int, 3>>& tris, double tol) {
  std::size_t bad = 0;
  for (const auto& t : tris) {
    const Point2 &a = pts[t[0]], &b = pts[t[1]], &c = pts[t[2]];
    const long double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
    const long double d = 2 * (bx * cy - by * cx);
    const long double ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / d;
    const long double uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / d;
    const long double r = std::sqrt(ux * ux + uy * uy);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (static_cast<int>(i) == t[0] || static_cast<int>(i) == t[1] || static_cast<int>(i) == t[2]) continue;
      const long double px = pts[i].x - a.x - ux, py = pts[i].y - a.y - uy;
      if (std::sqrt(px * px + py * py) < r * (1 - tol)) ++bad;
    }
  }
  return bad;
}

// Hull vertices: endpoints of every ordered pair (i, j) with all other points
// strictly to the left of i -> j. Assumes no three points collinear.
inline std::set<std::pair<double, double>> hull_vertices(const std::vector<Point2>& pts) {
  std::set<std::pair<double, double>> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool edge = true;
      for (std::size_t k = 0; k < n && edge; ++k) {
        if (k != i && k != j && cross(pts[i], pts[j], pts[k]) <= 0) edge = false;
      }
      if (edge) {
        out.insert({pts[i].x, pts[i].y});
        out.insert({pts[j].x, pts[j].y});
      }
    }
  }
  return out;
}

// Point on hull iff not strictly inside any triangle of the other points.
// O(n^4); only for small inputs.
inline std::set<std::pair<double, double>> hull_vertices_by_triangles(const std::vector<Point2>& pts) {
  std::set<std::pair<double, double>> out;
  const std::size_t n = pts.size();
  for (std::size_t p = 0; p < n; ++p) {
    bool inside = false;
    for (std::size_t a = 0; a < n && !inside; ++a) {
      for (std::size_t b = a + 1; b < n && !inside; ++b) {
        for (std::size_t c = b + 1; c < n && !inside; ++c) {
          if (p == a || p == b || p == c) continue;
          const double d1 = cross(pts[a], pts[b], pts[p]), d2 = cross(pts[b], pts[c], pts[p]),
                       d3 = cross(pts[c], pts[a], pts[p]);
          inside = (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
        }
      }
    }
    if (!inside) out.insert({pts[p].x, pts[p].y});
  }
  return out;
}

inline bool in_convex_ccw(const std::vector<Point2>& ring, const Point2& q, double eps) {
  if (ring.size() < 3) return false;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % ring.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0) continue;
    if (cross(a, b, q) / len < -eps) return false;
  }
  return true;
}

// Samples that are not inside the cell of their linear-scan nearest seed.
// Samples within `eps` of a tie between two seeds are skipped.
inline std::size_t voronoi_violations(const std::vector<Point2>& seeds,
                                      const std::vector<std::vector<Point2>>& cells, const Viewport& rect,
                                      std::size_t samples, std::uint64_t seed, double eps = 1e-7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(rect.x, rect.x + rect.w), uy(rect.y, rect.y + rect.h);
  std::size_t bad = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point2 q{ux(rng), uy(rng)};
    double best = INFINITY, second = INFINITY;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const double d = std::hypot(seeds[i].x - q.x, seeds[i].y - q.y);
      if (d < best) {
        second = best;
        best = d;
        arg = i;
      } else if (d < second) {
        second = d;
      }
    }
    if (second - best < eps) continue;
    if (!in_convex_ccw(cells[arg], q, 1e-9)) ++bad;
  }
  return bad;
}

}  // namespace terramap::oracle
