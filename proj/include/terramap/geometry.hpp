#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "terramap/colormap.hpp"
#include "terramap/projection.hpp"

namespace terramap {

// Axis-aligned screen rectangle [x, x + w) x [y, y + h).
struct Viewport {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
};

struct Grid2D {
  double origin_sx = 0;
  double origin_sy = 0;
  double cell_px = 1;
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, width * height

  double at(int cx, int cy) const { return values[static_cast<std::size_t>(cy) * width + cx]; }
  double max_value() const;
  double sum() const;
};

// Counts finite points per cell. The grid covers the viewport expanded to
// whole cells; cell index is floor((s - origin) / cell_px).
Grid2D bin2d(std::span<const double> sx, std::span<const double> sy, double cell_px,
             const Viewport& viewport);

struct KdeParams {
  double bw_x = 5;  // Gaussian sigma, screen px
  double bw_y = 5;
  std::optional<double> cut_below;   // values below are zeroed
  std::optional<double> clip_above;  // values above are clamped
  double cell_px = 2;
  Scale scaling = Scale::Sqrt;  // used by the layer when colouring
};

// Points binned at cell_px, then convolved with a separable Gaussian
// truncated at 3 sigma and normalized to unit discrete mass. Each point
// contributes total mass 1. Throws DataError for invalid parameters.
Grid2D kde_grid(std::span<const double> sx, std::span<const double> sy, const KdeParams& params,
                const Viewport& viewport);

// Discrete truncated Gaussian used by kde_grid: 2 * ceil(3 sigma) + 1 taps
// summing to 1. `sigma` is in cells.
std::vector<double> gaussian_taps(double sigma);

struct Point2 {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Orientation of (a, b, c): > 0 counterclockwise, < 0 clockwise. Evaluated
// in extended precision; results within a relative 1e-12 of zero are 0.
int orient2d(const Point2& a, const Point2& b, const Point2& c);
// > 0 when d lies strictly inside the circle through a, b, c (CCW).
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

struct Triangulation {
  enum class Status { Ok, Collinear };

  std::vector<Point2> points;               // deduplicated input
  std::vector<std::array<int, 3>> triangles;  // CCW index triples into points
  std::vector<int> input_to_point;          // input index -> points index
  Status status = Status::Ok;

  // Unique undirected edges (i < j).
  std::vector<std::pair<int, int>> edges() const;
};

// Bowyer-Watson insertion in spatially sorted order. Exact duplicates are
// merged first. Throws GeometryError for fewer than 3 distinct points;
// all-collinear input gives an empty triangulation with Status::Collinear.
Triangulation delaunay(std::span<const Point2> points);

Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c);

struct VoronoiDiagram {
  std::vector<Point2> seeds;
  std::vector<std::vector<Point2>> cells;  // per input seed, CCW, clipped; may be empty
  std::vector<int> owner;                  // first input seed sharing each cell, -1 if non-finite
  Viewport clip_rect;
  // Unclipped Voronoi vertices: circumcenters of the Delaunay triangles.
  std::vector<Point2> vertices;
};

// Each cell is clip_rect intersected with the bisector half-planes of the
// seed's Delaunay neighbours. Duplicate seeds share a cell.
VoronoiDiagram voronoi(std::span<const Point2> seeds, const Viewport& clip_rect);

// Andrew's monotone chain; CCW, strict turns only. Throws GeometryError when
// fewer than 3 distinct points or all collinear.
std::vector<Point2> convex_hull(std::span<const Point2> points);

double polygon_area(std::span<const Point2> ring);  // signed, CCW positive (y up)

}  // namespace terramap
