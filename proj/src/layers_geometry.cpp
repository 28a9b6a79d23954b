#include <algorithm>
#include <cmath>

#include "terramap/error.hpp"
#include "terramap/layers.hpp"

namespace terramap {

namespace {

std::vector<Point2> finite_points(const ScreenCoords& xy) {
  std::vector<Point2> pts;
  pts.reserve(xy.x.size());
  for (std::size_t i = 0; i < xy.x.size(); ++i) {
    if (std::isfinite(xy.x[i]) && std::isfinite(xy.y[i])) pts.push_back({xy.x[i], xy.y[i]});
  }
  return pts;
}

void check_rows(const DataTable& data, const std::string& lat, const std::string& lon) {
  if (data.nrows() > 0) data.require_geographic(lat, lon);
}

}  // namespace

VoronoiLayer::VoronoiLayer(DataTable data, VoronoiOptions options)
    : data_(std::move(data)), opt_(std::move(options)), cmap_(opt_.cmap, opt_.alpha) {
  check_rows(data_, opt_.lat, opt_.lon);
  if (!(opt_.max_area > 0)) throw DataError("voronoi max_area must be positive");
}

void VoronoiLayer::invalidate(const Projection& proj) {
  painter_.clear();
  diagram_ = {};
  const auto seeds = finite_points(project_rows(data_, proj, opt_.lat, opt_.lon));
  if (seeds.empty()) return;
  const ViewState& v = proj.view();
  diagram_ = voronoi(seeds, {0, 0, static_cast<double>(v.screen_w), static_cast<double>(v.screen_h)});
  // Duplicate seeds share a cell; draw each distinct cell once.
  std::vector<const std::vector<Point2>*> cells;
  cells.reserve(diagram_.cells.size());
  for (std::size_t i = 0; i < diagram_.cells.size(); ++i) {
    if (diagram_.cells[i].size() < 3 || diagram_.owner[i] != static_cast<int>(i)) continue;
    cells.push_back(&diagram_.cells[i]);
  }
  if (opt_.fill) {
    for (const auto* cell : cells) {
      const double area = std::fabs(polygon_area(*cell));
      painter_.set_color(cmap_.to_color(opt_.max_area - std::min(area, opt_.max_area), opt_.max_area, Scale::Log));
      painter_.poly_fill(*cell);
    }
  }
  if (opt_.line_color) {
    painter_.set_color(*opt_.line_color);
    std::size_t edges = 0;
    for (const auto* cell : cells) edges += cell->size();
    painter_.reserve_lines(edges);
    for (const auto* cell : cells) painter_.poly_outline(*cell, opt_.line_width);
  }
}

std::optional<BoundingBox> VoronoiLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

DelaunayLayer::DelaunayLayer(DataTable data, DelaunayOptions options)
    : data_(std::move(data)), opt_(std::move(options)) {
  check_rows(data_, opt_.lat, opt_.lon);
  if (opt_.cmap) ColorMap check(*opt_.cmap, opt_.alpha);
}

void DelaunayLayer::invalidate(const Projection& proj) {
  painter_.clear();
  tri_ = {};
  const auto pts = finite_points(project_rows(data_, proj, opt_.lat, opt_.lon));
  try {
    tri_ = delaunay(pts);
  } catch (const GeometryError&) {
    return;  // fewer than 3 distinct points: nothing to draw
  }
  const auto edges = tri_.edges();
  std::vector<double> length(edges.size());
  double max_len = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Point2& a = tri_.points[edges[i].first];
    const Point2& b = tri_.points[edges[i].second];
    length[i] = std::hypot(b.x - a.x, b.y - a.y);
    max_len = std::max(max_len, length[i]);
  }
  std::optional<ColorMap> cmap;
  if (opt_.cmap) cmap.emplace(*opt_.cmap, opt_.alpha);
  painter_.set_color(opt_.color);
  painter_.reserve_lines(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (cmap) painter_.set_color(max_len > 0 ? cmap->to_color(length[i], max_len, Scale::Lin) : cmap->at(0));
    const Point2& a = tri_.points[edges[i].first];
    const Point2& b = tri_.points[edges[i].second];
    painter_.line(a.x, a.y, b.x, b.y, opt_.line_width);
  }
}

std::optional<BoundingBox> DelaunayLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

ConvexHullLayer::ConvexHullLayer(DataTable data, HullOptions options)
    : data_(std::move(data)), opt_(std::move(options)) {
  check_rows(data_, opt_.lat, opt_.lon);
}

void ConvexHullLayer::invalidate(const Projection& proj) {
  painter_.clear();
  hull_.clear();
  const auto pts = finite_points(project_rows(data_, proj, opt_.lat, opt_.lon));
  try {
    hull_ = convex_hull(pts);
  } catch (const GeometryError&) {
    return;
  }
  if (opt_.fill) {
    painter_.set_color(opt_.color);
    painter_.poly_fill(hull_);
  }
  Rgba outline = opt_.color;
  outline.a = 255;
  painter_.set_color(outline);
  painter_.poly_outline(hull_, opt_.line_width);
}

std::optional<BoundingBox> ConvexHullLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

}  // namespace terramap
