#include "terramap/engine.hpp"

#include <cstdlib>

#include "terramap/error.hpp"

namespace terramap {

Engine::Engine() {
  const char* env = std::getenv("TERRAMAP_TILES");
  tile_provider(env && *env ? env : "osm");
}

Engine::~Engine() = default;

void Engine::add_layer(std::shared_ptr<Layer> layer) {
  if (!layer) throw DataError("add_layer: null layer");
  layers_.push_back(std::move(layer));
}

DotLayer& Engine::dot(DataTable data, DotOptions options) { return emplace<DotLayer>(std::move(data), std::move(options)); }
HistLayer& Engine::hist(DataTable data, HistOptions options) {
  return emplace<HistLayer>(std::move(data), std::move(options));
}
KdeLayer& Engine::kde(DataTable data, KdeOptions options) { return emplace<KdeLayer>(std::move(data), std::move(options)); }
MarkersLayer& Engine::markers(DataTable data, const std::filesystem::path& image, MarkerOptions options) {
  return emplace<MarkersLayer>(std::move(data), image, std::move(options));
}
GraphLayer& Engine::graph(DataTable data, GraphSpec spec) { return emplace<GraphLayer>(std::move(data), std::move(spec)); }
VoronoiLayer& Engine::voronoi(DataTable data, VoronoiOptions options) {
  return emplace<VoronoiLayer>(std::move(data), std::move(options));
}
DelaunayLayer& Engine::delaunay(DataTable data, DelaunayOptions options) {
  return emplace<DelaunayLayer>(std::move(data), std::move(options));
}
ConvexHullLayer& Engine::convexhull(DataTable data, HullOptions options) {
  return emplace<ConvexHullLayer>(std::move(data), std::move(options));
}
ShapefileLayer& Engine::shapefiles(const std::filesystem::path& basepath, ShapeOptions options) {
  return emplace<ShapefileLayer>(basepath, std::move(options));
}
GeoJsonLayer& Engine::geojson(const std::filesystem::path& path, GeoJsonOptions options) {
  return emplace<GeoJsonLayer>(path, std::move(options));
}

void Engine::tile_provider(const std::string& name_or_template) {
  if (name_or_template == "none") {
    provider_.reset();
  } else {
    provider_ = TileProvider::resolve(name_or_template);
  }
}

void Engine::set_tile_cache_root(std::filesystem::path root) {
  cache_root_ = std::move(root);
  cache_.reset();
}

void Engine::set_tile_fetcher(std::shared_ptr<TileFetcher> fetcher) {
  fetcher_ = std::move(fetcher);
  cache_.reset();
}

TileCache* Engine::tile_cache() {
  if (!cache_) {
    TileCacheOptions opt;
    if (!cache_root_.empty()) opt.root = cache_root_;
    opt.fetcher = fetcher_;
    cache_ = std::make_unique<TileCache>(std::move(opt));
  }
  return cache_.get();
}

ViewState Engine::resolve_view(int width, int height) const {
  if (width <= 0 || height <= 0) throw DataError("image size must be positive");
  std::optional<BoundingBox> box = bbox_;
  if (!box) {
    for (const auto& layer : layers_) {
      if (auto b = layer->bbox()) box = box ? box->united(*b) : *b;
    }
  }
  if (!box) return view_centered({0, 0}, kMinZoom, width, height);
  return fit_view(*box, width, height);
}

Viewer Engine::make_viewer(int width, int height) {
  ViewerOptions opt;
  if (provider_) {
    opt.provider = provider_;
    opt.tiles = tile_cache();
  }
  return Viewer(layers_, resolve_view(width, height), std::move(opt));
}

Image Engine::render(int width, int height) {
  Viewer viewer = make_viewer(width, height);
  if (provider_) {
    TileCache* cache = tile_cache();
    for (const TileCoord& t : tiles_for_view(viewer.view())) cache->request(*provider_, t);
    cache->wait_idle(tile_timeout_);
  }
  RenderTarget target(width, height, TargetKind::Offscreen);
  viewer.render_frame(target);
  return target.read_pixels();
}

void Engine::savefig(const std::filesystem::path& path, int width, int height) {
  const Image img = render(width, height);
  reset();
  write_png(img, path);
}

void Engine::show(int width, int height) {
  auto window = open_x11_window(width, height, "terramap");
  show(*window);
}

void Engine::show(Window& window) {
  Viewer viewer = make_viewer(window.width(), window.height());
  reset();
  viewer.run(window);
}

void Engine::reset() {
  layers_.clear();
  bbox_.reset();
}

Engine& default_engine() {
  static Engine engine;
  return engine;
}

DotLayer& dot(DataTable data, DotOptions options) { return default_engine().dot(std::move(data), std::move(options)); }
HistLayer& hist(DataTable data, HistOptions options) {
  return default_engine().hist(std::move(data), std::move(options));
}
KdeLayer& kde(DataTable data, KdeOptions options) { return default_engine().kde(std::move(data), std::move(options)); }
MarkersLayer& markers(DataTable data, const std::filesystem::path& image, MarkerOptions options) {
  return default_engine().markers(std::move(data), image, std::move(options));
}
GraphLayer& graph(DataTable data, GraphSpec spec) { return default_engine().graph(std::move(data), std::move(spec)); }
VoronoiLayer& voronoi(DataTable data, VoronoiOptions options) {
  return default_engine().voronoi(std::move(data), std::move(options));
}
DelaunayLayer& delaunay(DataTable data, DelaunayOptions options) {
  return default_engine().delaunay(std::move(data), std::move(options));
}
ConvexHullLayer& convexhull(DataTable data, HullOptions options) {
  return default_engine().convexhull(std::move(data), std::move(options));
}
ShapefileLayer& shapefiles(const std::filesystem::path& basepath, ShapeOptions options) {
  return default_engine().shapefiles(basepath, std::move(options));
}
GeoJsonLayer& geojson(const std::filesystem::path& path, GeoJsonOptions options) {
  return default_engine().geojson(path, std::move(options));
}
void add_layer(std::shared_ptr<Layer> layer) { default_engine().add_layer(std::move(layer)); }
void set_bbox(const BoundingBox& bbox) { default_engine().set_bbox(bbox); }
void tile_provider(const std::string& name_or_template) { default_engine().tile_provider(name_or_template); }
void show(int width, int height) { default_engine().show(width, height); }
void savefig(const std::filesystem::path& path, int width, int height) {
  default_engine().savefig(path, width, height);
}

}  // namespace terramap
