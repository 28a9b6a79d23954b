#include <algorithm>
#include <cmath>
#include <limits>

#include "terramap/error.hpp"
#include "terramap/layers.hpp"

namespace terramap {

namespace {

constexpr float kVectorPointSize = 4;

std::vector<Point2> project_ring(const Ring& ring, const Projection& proj) {
  std::vector<Point2> out;
  out.reserve(ring.size());
  for (const LonLat& ll : ring) {
    const ScreenPoint p = proj.lonlat_to_screen(ll.lon, ll.lat);
    if (std::isfinite(p.x) && std::isfinite(p.y)) out.push_back({p.x, p.y});
  }
  return out;
}

struct Extent {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(const Point2& p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  bool valid() const { return x0 <= x1 && y0 <= y1; }
  // Degenerate extents (points, axis-aligned lines) still get a hit area.
  Rect rect(double min_size = 6) const {
    const double w = std::max(x1 - x0, min_size), h = std::max(y1 - y0, min_size);
    return {(x0 + x1 - w) / 2, (y0 + y1 - h) / 2, w, h};
  }
};

// Draws one feature with the painter's current color and returns its
// screen extent.
Extent paint_feature(BatchPainter& painter, const VectorFeature& feature, const Projection& proj, bool fill,
                     float line_width) {
  Extent ext;
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, PointGeometry>) {
          const ScreenPoint p = proj.lonlat_to_screen(g.position.lon, g.position.lat);
          if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
          painter.point(p.x, p.y, kVectorPointSize);
          ext.add({p.x, p.y});
        } else if constexpr (std::is_same_v<G, PolyLineGeometry>) {
          for (const Ring& part : g.parts) {
            const auto pts = project_ring(part, proj);
            painter.linestrip(pts, line_width);
            for (const auto& p : pts) ext.add(p);
          }
        } else {
          for (const auto& polygon : g.polygons) {
            for (std::size_t r = 0; r < polygon.size(); ++r) {
              const auto pts = project_ring(polygon[r], proj);
              if (fill && r == 0) {
                painter.poly_fill(pts);
              } else if (!fill) {
                painter.poly_outline(pts, line_width);
              }
              for (const auto& p : pts) ext.add(p);
            }
          }
        }
      },
      feature.geometry);
  return ext;
}

std::optional<BoundingBox> features_bbox(const std::vector<VectorFeature>& features) {
  std::vector<double> lons, lats;
  auto add = [&](const LonLat& ll) {
    lons.push_back(ll.lon);
    lats.push_back(ll.lat);
  };
  for (const auto& f : features) {
    std::visit(
        [&](const auto& g) {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, PointGeometry>) {
            add(g.position);
          } else if constexpr (std::is_same_v<G, PolyLineGeometry>) {
            for (const auto& part : g.parts) std::for_each(part.begin(), part.end(), add);
          } else {
            for (const auto& polygon : g.polygons) {
              for (const auto& ring : polygon) std::for_each(ring.begin(), ring.end(), add);
            }
          }
        },
        f.geometry);
  }
  if (lons.empty()) return std::nullopt;
  try {
    return BoundingBox::from_points(lons, lats);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

}  // namespace

ShapefileLayer::ShapefileLayer(const std::filesystem::path& basepath, ShapeOptions options)
    : features_(read_shapefile(basepath)), opt_(std::move(options)) {}

void ShapefileLayer::invalidate(const Projection& proj) {
  painter_.clear();
  hotspots_.clear();
  painter_.set_color(opt_.color);
  for (const auto& f : features_) {
    const Extent ext = paint_feature(painter_, f, proj, false, opt_.line_width);
    if (opt_.f_tooltip && ext.valid()) hotspots_.add(ext.rect(), opt_.f_tooltip(f.attributes));
  }
}

std::optional<BoundingBox> ShapefileLayer::bbox() const { return features_bbox(features_); }

GeoJsonLayer::GeoJsonLayer(const std::filesystem::path& path, GeoJsonOptions options)
    : GeoJsonLayer(read_geojson(path), std::move(options)) {}

GeoJsonLayer::GeoJsonLayer(std::vector<VectorFeature> features, GeoJsonOptions options)
    : features_(std::move(features)), opt_(std::move(options)) {
  colors_.reserve(features_.size());
  for (const auto& f : features_) {
    if (const auto* fixed = std::get_if<Rgba>(&opt_.color)) {
      colors_.push_back(*fixed);
    } else {
      const auto& fn = std::get<AttributeColor>(opt_.color);
      colors_.push_back(fn ? fn(f.attributes) : Rgba{0, 0, 255, 255});
    }
  }
}

void GeoJsonLayer::invalidate(const Projection& proj) {
  painter_.clear();
  hotspots_.clear();
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (colors_[i].a == 0) continue;
    painter_.set_color(colors_[i]);
    const Extent ext = paint_feature(painter_, features_[i], proj, opt_.fill, opt_.line_width);
    if (opt_.f_tooltip && ext.valid()) hotspots_.add(ext.rect(), opt_.f_tooltip(features_[i].attributes));
  }
}

std::optional<BoundingBox> GeoJsonLayer::bbox() const { return features_bbox(features_); }

}  // namespace terramap
