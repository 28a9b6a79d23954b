#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "terramap/layers.hpp"
#include "terramap/tiles.hpp"
#include "terramap/viewer.hpp"

namespace terramap {

inline constexpr int kDefaultWidth = 1280;
inline constexpr int kDefaultHeight = 768;

// Accumulates layers like a plotting script; show() and savefig() consume
// them and reset the layer list and bounding box.
class Engine {
 public:
  Engine();
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void add_layer(std::shared_ptr<Layer> layer);
  const std::vector<std::shared_ptr<Layer>>& layers() const noexcept { return layers_; }

  DotLayer& dot(DataTable data, DotOptions options = {});
  HistLayer& hist(DataTable data, HistOptions options = {});
  KdeLayer& kde(DataTable data, KdeOptions options = {});
  MarkersLayer& markers(DataTable data, const std::filesystem::path& image, MarkerOptions options = {});
  GraphLayer& graph(DataTable data, GraphSpec spec = {});
  VoronoiLayer& voronoi(DataTable data, VoronoiOptions options = {});
  DelaunayLayer& delaunay(DataTable data, DelaunayOptions options = {});
  ConvexHullLayer& convexhull(DataTable data, HullOptions options = {});
  ShapefileLayer& shapefiles(const std::filesystem::path& basepath, ShapeOptions options = {});
  GeoJsonLayer& geojson(const std::filesystem::path& path, GeoJsonOptions options = {});

  void set_bbox(const BoundingBox& bbox) { bbox_ = bbox; }
  const std::optional<BoundingBox>& bbox() const noexcept { return bbox_; }

  // Preset name or URL template; "none" disables the base map. The default
  // comes from TERRAMAP_TILES, else "osm".
  void tile_provider(const std::string& name_or_template);
  const std::optional<TileProvider>& provider() const noexcept { return provider_; }
  void set_tile_cache_root(std::filesystem::path root);
  // Replaces the network fetcher, mainly for tests.
  void set_tile_fetcher(std::shared_ptr<TileFetcher> fetcher);
  // How long savefig waits for missing tiles before drawing placeholders.
  void set_tile_timeout(std::chrono::milliseconds timeout) { tile_timeout_ = timeout; }

  // The explicit bbox if set, else the union of the layers' extents, else
  // the whole world, fitted to the screen size.
  ViewState resolve_view(int width, int height) const;

  // One invalidate + draw on an offscreen target. Does not reset.
  Image render(int width = kDefaultWidth, int height = kDefaultHeight);
  void savefig(const std::filesystem::path& path, int width = kDefaultWidth, int height = kDefaultHeight);
  // Opens an X11 window and runs the viewer until it is closed.
  void show(int width = kDefaultWidth, int height = kDefaultHeight);
  // Runs the viewer on the given window.
  void show(Window& window);

  void reset();

 private:
  template <class L, class... Args>
  L& emplace(Args&&... args) {
    auto layer = std::make_shared<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }
  TileCache* tile_cache();
  Viewer make_viewer(int width, int height);

  std::vector<std::shared_ptr<Layer>> layers_;
  std::optional<BoundingBox> bbox_;
  std::optional<TileProvider> provider_;
  std::filesystem::path cache_root_;
  std::shared_ptr<TileFetcher> fetcher_;
  std::chrono::milliseconds tile_timeout_{30000};
  std::unique_ptr<TileCache> cache_;
};

// Process-wide engine behind the free functions below.
Engine& default_engine();

DotLayer& dot(DataTable data, DotOptions options = {});
HistLayer& hist(DataTable data, HistOptions options = {});
KdeLayer& kde(DataTable data, KdeOptions options = {});
MarkersLayer& markers(DataTable data, const std::filesystem::path& image, MarkerOptions options = {});
GraphLayer& graph(DataTable data, GraphSpec spec = {});
VoronoiLayer& voronoi(DataTable data, VoronoiOptions options = {});
DelaunayLayer& delaunay(DataTable data, DelaunayOptions options = {});
ConvexHullLayer& convexhull(DataTable data, HullOptions options = {});
ShapefileLayer& shapefiles(const std::filesystem::path& basepath, ShapeOptions options = {});
GeoJsonLayer& geojson(const std::filesystem::path& path, GeoJsonOptions options = {});
void add_layer(std::shared_ptr<Layer> layer);
void set_bbox(const BoundingBox& bbox);
void tile_provider(const std::string& name_or_template);
void show(int width = kDefaultWidth, int height = kDefaultHeight);
void savefig(const std::filesystem::path& path, int width = kDefaultWidth, int height = kDefaultHeight);

}  // namespace terramap
