#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "terramap/colormap.hpp"
#include "terramap/data_table.hpp"
#include "terramap/formats.hpp"
#include "terramap/geometry.hpp"
#include "terramap/hotspots.hpp"
#include "terramap/projection.hpp"
#include "terramap/render.hpp"

namespace terramap {

// Key codes: printable keys use their lowercase ASCII value.
namespace keys {
inline constexpr int kLeft = 0x10001;
inline constexpr int kRight = 0x10002;
inline constexpr int kUp = 0x10003;
inline constexpr int kDown = 0x10004;
inline constexpr int kEscape = 0x10005;
}  // namespace keys

// invalidate() runs before the first draw and after every view change;
// draw() runs every frame.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual void invalidate(const Projection& proj) = 0;
  virtual void draw(const Projection& proj, RenderTarget& target, const MouseState& mouse,
                    UiManager& ui) = 0;
  // Receives keys the viewer does not reserve.
  virtual void on_key_release(int /*key*/, const Projection& /*proj*/) {}
  // Geographic extent used to fit the initial view.
  virtual std::optional<BoundingBox> bbox() const { return std::nullopt; }
};

using RowColor = std::function<Rgba(const RowView&)>;
using AttributeColor = std::function<Rgba(const Attributes&)>;
using AttributeTooltip = std::function<std::string(const Attributes&)>;

// Screen positions of the table's rows; NaN for non-finite rows.
ScreenCoords project_rows(const DataTable& table, const Projection& proj, const std::string& lat = "lat",
                          const std::string& lon = "lon");

std::optional<BoundingBox> rows_bbox(const DataTable& table, const std::string& lat = "lat",
                                     const std::string& lon = "lon");

// Shared behaviour of layers that draw one prepared batch and answer
// tooltips from a hotspot index.
class BatchLayer : public Layer {
 public:
  void draw(const Projection& proj, RenderTarget& target, const MouseState& mouse, UiManager& ui) override;

  const BatchPainter& painter() const noexcept { return painter_; }
  const HotspotIndex& hotspots() const noexcept { return hotspots_; }

 protected:
  BatchPainter painter_;
  HotspotIndex hotspots_;
};

struct DotOptions {
  float point_size = 2;
  Rgba color{255, 0, 0, 255};
  RowColor f_color;  // overrides color per row
  RowTooltip f_tooltip;
  std::string lat = "lat";
  std::string lon = "lon";
};

class DotLayer : public BatchLayer {
 public:
  explicit DotLayer(DataTable data, DotOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

 private:
  DataTable data_;
  DotOptions opt_;
};

struct HistOptions {
  double binsize = 16;
  std::string cmap = "hot";
  int alpha = 220;
  Scale colorscale = Scale::Sqrt;
  bool show_zero = false;
  std::string lat = "lat";
  std::string lon = "lon";
};

class HistLayer : public BatchLayer {
 public:
  explicit HistLayer(DataTable data, HistOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const Grid2D& grid() const noexcept { return grid_; }

 private:
  DataTable data_;
  HistOptions opt_;
  ColorMap cmap_;
  Grid2D grid_;
};

struct KdeOptions {
  KdeParams params;
  std::string cmap = "hot";
  int alpha = 220;
  std::string lat = "lat";
  std::string lon = "lon";
};

class KdeLayer : public BatchLayer {
 public:
  explicit KdeLayer(DataTable data, KdeOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const Grid2D& grid() const noexcept { return grid_; }

 private:
  DataTable data_;
  KdeOptions opt_;
  ColorMap cmap_;
  Grid2D grid_;
};

struct MarkerOptions {
  double scale = 1;
  RowTooltip f_tooltip;
  std::string lat = "lat";
  std::string lon = "lon";
};

class MarkersLayer : public BatchLayer {
 public:
  // Loads the marker image immediately; throws ImageError if unreadable.
  MarkersLayer(DataTable data, const std::filesystem::path& image_path, MarkerOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

 private:
  DataTable data_;
  std::shared_ptr<const Image> image_;
  MarkerOptions opt_;
};

struct GraphSpec {
  std::string src_lat = "lat_departure";
  std::string src_lon = "lon_departure";
  std::string dest_lat = "lat_arrival";
  std::string dest_lon = "lon_arrival";
  std::string cmap = "hot";
  int alpha = 220;
  float linewidth = 1;
};

class GraphLayer : public BatchLayer {
 public:
  GraphLayer(DataTable data, GraphSpec spec = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

 private:
  DataTable data_;
  GraphSpec spec_;
  ColorMap cmap_;
};

struct VoronoiOptions {
  std::optional<Rgba> line_color = Rgba{0, 0, 255, 255};
  float line_width = 1;
  bool fill = false;
  std::string cmap = "hot";  // fill shading, smaller cells hotter
  int alpha = 100;
  double max_area = 1e4;  // px^2
  std::string lat = "lat";
  std::string lon = "lon";
};

class VoronoiLayer : public BatchLayer {
 public:
  explicit VoronoiLayer(DataTable data, VoronoiOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const VoronoiDiagram& diagram() const noexcept { return diagram_; }

 private:
  DataTable data_;
  VoronoiOptions opt_;
  ColorMap cmap_;
  VoronoiDiagram diagram_;
};

struct DelaunayOptions {
  std::optional<std::string> cmap = "hot_r";  // colors by screen length; fixed color when unset
  Rgba color{0, 0, 255, 255};
  int alpha = 220;
  float line_width = 1;
  std::string lat = "lat";
  std::string lon = "lon";
};

class DelaunayLayer : public BatchLayer {
 public:
  explicit DelaunayLayer(DataTable data, DelaunayOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const Triangulation& triangulation() const noexcept { return tri_; }

 private:
  DataTable data_;
  DelaunayOptions opt_;
  Triangulation tri_;
};

struct HullOptions {
  Rgba color{0, 0, 255, 100};
  bool fill = true;
  float line_width = 2;
  std::string lat = "lat";
  std::string lon = "lon";
};

class ConvexHullLayer : public BatchLayer {
 public:
  explicit ConvexHullLayer(DataTable data, HullOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const std::vector<Point2>& hull() const noexcept { return hull_; }

 private:
  DataTable data_;
  HullOptions opt_;
  std::vector<Point2> hull_;
};

struct ShapeOptions {
  Rgba color{0, 0, 255, 255};
  float line_width = 1;
  AttributeTooltip f_tooltip;
};

class ShapefileLayer : public BatchLayer {
 public:
  explicit ShapefileLayer(const std::filesystem::path& basepath, ShapeOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const std::vector<VectorFeature>& features() const noexcept { return features_; }

 private:
  std::vector<VectorFeature> features_;
  ShapeOptions opt_;
};

struct GeoJsonOptions {
  bool fill = false;
  std::variant<Rgba, AttributeColor> color = Rgba{0, 0, 255, 255};
  float line_width = 1;
  AttributeTooltip f_tooltip;
};

class GeoJsonLayer : public BatchLayer {
 public:
  GeoJsonLayer(const std::filesystem::path& path, GeoJsonOptions options = {});
  GeoJsonLayer(std::vector<VectorFeature> features, GeoJsonOptions options = {});
  void invalidate(const Projection& proj) override;
  std::optional<BoundingBox> bbox() const override;

  const std::vector<VectorFeature>& features() const noexcept { return features_; }
  // Per-feature color; alpha 0 means the feature is not drawn.
  const std::vector<Rgba>& colors() const noexcept { return colors_; }

 private:
  std::vector<VectorFeature> features_;
  GeoJsonOptions opt_;
  std::vector<Rgba> colors_;
};

struct TrailOptions {
  Rgba color{255, 0, 0, 255};
  float point_size = 8;
  int trail = 10;  // fading previous positions
  std::string lat = "lat";
  std::string lon = "lon";
};

// Animation: each draw shows the sample at the frame counter, then
// advances it by one, wrapping at the end of the data.
class TrailLayer : public Layer {
 public:
  explicit TrailLayer(DataTable data, TrailOptions options = {});
  void invalidate(const Projection& proj) override;
  void draw(const Projection& proj, RenderTarget& target, const MouseState& mouse, UiManager& ui) override;
  std::optional<BoundingBox> bbox() const override;

  std::size_t frame_counter() const noexcept { return frame_counter_; }

 private:
  DataTable data_;
  TrailOptions opt_;
  ScreenCoords xy_;
  std::size_t frame_counter_ = 0;
};

}  // namespace terramap
