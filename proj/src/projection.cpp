#include "terramap/projection.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "terramap/error.hpp"
#include "terramap/kernels.hpp"

namespace terramap {

WorldPoint lonlat_to_world(double lon, double lat, int zoom) {
  WorldPoint p;
  kernels::detail::mercator(lon, lat, world_size(zoom), p.x, p.y);
  return p;
}

LonLat world_to_lonlat(double wx, double wy, int zoom) {
  const double size = world_size(zoom);
  LonLat ll;
  ll.lon = wx / size * 360.0 - 180.0;
  ll.lat = std::atan(std::sinh(std::numbers::pi * (1.0 - 2.0 * wy / size))) * (180.0 / std::numbers::pi);
  return ll;
}

BoundingBox::BoundingBox(double north, double west, double south, double east)
    : north_(std::clamp(north, -kMaxLatitude, kMaxLatitude)),
      south_(std::clamp(south, -kMaxLatitude, kMaxLatitude)),
      east_(east),
      west_(west) {
  if (!(std::isfinite(north) && std::isfinite(south) && std::isfinite(east) && std::isfinite(west))) {
    throw DataError("bounding box coordinates must be finite");
  }
  if (!(north_ > south_)) throw DataError("bounding box requires north > south");
  if (east_ == west_) throw DataError("bounding box requires east != west");
}

BoundingBox BoundingBox::world() { return BoundingBox(kMaxLatitude, -180.0, -kMaxLatitude, 180.0); }

BoundingBox BoundingBox::from_points(std::span<const double> lons, std::span<const double> lats) {
  if (lons.size() != lats.size()) throw DataError("lon/lat arrays differ in length");
  double lon_min = std::numeric_limits<double>::infinity(), lon_max = -lon_min;
  double lat_min = lon_min, lat_max = -lon_min;
  for (std::size_t i = 0; i < lons.size(); ++i) {
    if (!std::isfinite(lons[i]) || !std::isfinite(lats[i])) continue;
    lon_min = std::min(lon_min, lons[i]);
    lon_max = std::max(lon_max, lons[i]);
    lat_min = std::min(lat_min, lats[i]);
    lat_max = std::max(lat_max, lats[i]);
  }
  if (!(lon_min <= lon_max)) throw DataError("no finite coordinates to fit a bounding box");

  auto pad = [](double& lo, double& hi) {
    if (hi == lo) {
      lo -= 0.005;
      hi += 0.005;
    } else {
      const double p = 0.02 * (hi - lo);
      lo -= p;
      hi += p;
    }
  };
  pad(lon_min, lon_max);
  pad(lat_min, lat_max);
  return BoundingBox(lat_max, std::max(lon_min, -180.0), lat_min, std::min(lon_max, 180.0));
}

BoundingBox BoundingBox::united(const BoundingBox& other) const {
  return BoundingBox(std::max(north_, other.north_), std::min(west_, other.west_),
                     std::min(south_, other.south_), std::max(east_, other.east_));
}

LonLat ViewState::center() const {
  WorldPoint c = center_world();
  return world_to_lonlat(c.x, c.y, zoom);
}

ViewState clamp_view(ViewState view) {
  view.zoom = std::clamp(view.zoom, kMinZoom, kMaxZoom);
  const double size = world_size(view.zoom);
  const double half_w = view.screen_w / 2.0, half_h = view.screen_h / 2.0;
  view.origin_wx = std::clamp(view.origin_wx, -half_w, size - half_w);
  view.origin_wy = std::clamp(view.origin_wy, -half_h, size - half_h);
  return view;
}

ViewState view_centered(LonLat center, int zoom, int screen_w, int screen_h) {
  zoom = std::clamp(zoom, kMinZoom, kMaxZoom);
  WorldPoint c = lonlat_to_world(center.lon, center.lat, zoom);
  ViewState v{zoom, c.x - screen_w / 2.0, c.y - screen_h / 2.0, screen_w, screen_h};
  return clamp_view(v);
}

namespace {

// World-pixel extent of the box; boxes with west > east wrap the antimeridian.
void bbox_world_extent(const BoundingBox& bbox, int zoom, double& width, double& height,
                       WorldPoint& center) {
  const double size = world_size(zoom);
  WorldPoint nw = lonlat_to_world(bbox.west(), bbox.north(), zoom);
  WorldPoint se = lonlat_to_world(bbox.east(), bbox.south(), zoom);
  width = se.x - nw.x;
  if (width < 0) width += size;
  height = se.y - nw.y;
  center = {nw.x + width / 2.0, nw.y + height / 2.0};
  if (center.x > size) center.x -= size;
}

}  // namespace

bool bbox_fits(const BoundingBox& bbox, int zoom, int screen_w, int screen_h) {
  double w, h;
  WorldPoint c;
  bbox_world_extent(bbox, zoom, w, h, c);
  return w <= screen_w && h <= screen_h;
}

ViewState fit_view(const BoundingBox& bbox, int screen_w, int screen_h) {
  int zoom = kMinZoom;
  for (int z = kMaxZoom; z >= kMinZoom; --z) {
    if (bbox_fits(bbox, z, screen_w, screen_h)) {
      zoom = z;
      break;
    }
  }
  double w, h;
  WorldPoint c;
  bbox_world_extent(bbox, zoom, w, h, c);
  return clamp_view(ViewState{zoom, c.x - screen_w / 2.0, c.y - screen_h / 2.0, screen_w, screen_h});
}

ScreenCoords lonlat_to_screen(std::span<const double> lon, std::span<const double> lat,
                              const ViewState& view) {
  if (lon.size() != lat.size()) throw DataError("lon/lat arrays differ in length");
  ScreenCoords out;
  out.x.resize(lon.size());
  out.y.resize(lon.size());
  kernels::parallel::project(lon, lat, view.zoom, view.origin_wx, view.origin_wy, out.x, out.y);
  return out;
}

ScreenPoint Projection::lonlat_to_screen(double lon, double lat) const {
  WorldPoint w = lonlat_to_world(lon, lat, view_.zoom);
  return {w.x - view_.origin_wx, w.y - view_.origin_wy};
}

LonLat Projection::screen_to_lonlat(double sx, double sy) const {
  return world_to_lonlat(sx + view_.origin_wx, sy + view_.origin_wy, view_.zoom);
}

}  // namespace terramap
