#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace terramap {

inline constexpr double kMaxLatitude = 85.05112878;
inline constexpr int kTileSize = 256;
inline constexpr int kMinZoom = 2;
inline constexpr int kMaxZoom = 20;

struct LonLat {
  double lon = 0;
  double lat = 0;
};

struct WorldPoint {
  double x = 0;
  double y = 0;
};

struct ScreenPoint {
  double x = 0;
  double y = 0;
};

// Width (and height) of the world in pixels at `zoom`: 256 * 2^zoom.
inline double world_size(int zoom) { return std::ldexp(static_cast<double>(kTileSize), zoom); }

WorldPoint lonlat_to_world(double lon, double lat, int zoom);
LonLat world_to_lonlat(double wx, double wy, int zoom);

class BoundingBox {
 public:
  BoundingBox(double north, double west, double south, double east);

  // Min/max over the finite coordinates with 2% padding on every side. A
  // zero span on an axis becomes a 0.01 degree span centered on the points.
  // Throws DataError when there is no finite coordinate pair.
  static BoundingBox from_points(std::span<const double> lons, std::span<const double> lats);
  static BoundingBox world();

  double north() const noexcept { return north_; }
  double south() const noexcept { return south_; }
  double east() const noexcept { return east_; }
  double west() const noexcept { return west_; }

  BoundingBox united(const BoundingBox& other) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double north_, south_, east_, west_;
};

struct ViewState {
  int zoom = kMinZoom;
  double origin_wx = 0;
  double origin_wy = 0;
  int screen_w = 0;
  int screen_h = 0;

  LonLat center() const;
  // World-pixel coordinates of the screen center.
  WorldPoint center_world() const {
    return {origin_wx + screen_w / 2.0, origin_wy + screen_h / 2.0};
  }

  friend bool operator==(const ViewState&, const ViewState&) = default;
};

// Keeps the screen center inside the world so the viewport always
// intersects it; clamps zoom to [kMinZoom, kMaxZoom].
ViewState clamp_view(ViewState view);

// View centered on `center` at `zoom`.
ViewState view_centered(LonLat center, int zoom, int screen_w, int screen_h);

// True when the box's world-pixel extent at `zoom` fits in the screen.
bool bbox_fits(const BoundingBox& bbox, int zoom, int screen_w, int screen_h);

// Largest zoom in [kMinZoom, kMaxZoom] at which the box fits, centered.
ViewState fit_view(const BoundingBox& bbox, int screen_w, int screen_h);

struct ScreenCoords {
  std::vector<double> x;
  std::vector<double> y;
};

// Vectorized lon/lat -> screen. NaN inputs give NaN outputs.
ScreenCoords lonlat_to_screen(std::span<const double> lon, std::span<const double> lat,
                              const ViewState& view);

// The object layers receive on invalidate.
class Projection {
 public:
  explicit Projection(const ViewState& view) : view_(view) {}

  const ViewState& view() const noexcept { return view_; }
  int zoom() const noexcept { return view_.zoom; }

  ScreenCoords lonlat_to_screen(std::span<const double> lon, std::span<const double> lat) const {
    return terramap::lonlat_to_screen(lon, lat, view_);
  }
  ScreenPoint lonlat_to_screen(double lon, double lat) const;
  LonLat screen_to_lonlat(double sx, double sy) const;

 private:
  ViewState view_;
};

}  // namespace terramap
