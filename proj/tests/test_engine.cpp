#include <gtest/gtest.h>

#include <atomic>

#include "terramap/engine.hpp"
#include "terramap/error.hpp"
#include "test_support.hpp"

namespace terramap {
namespace {

using testing::fixture;
using testing::TempDir;
using namespace std::chrono_literals;

constexpr Rgba kWhite{255, 255, 255, 255};

class FillLayer : public Layer {
 public:
  explicit FillLayer(Rgba c) : color_(c) {}
  void invalidate(const Projection&) override {}
  void draw(const Projection&, RenderTarget& target, const MouseState&, UiManager&) override { target.clear(color_); }

 private:
  Rgba color_;
};

class NoFetch : public TileFetcher {
 public:
  FetchResult fetch(const std::string&) override {
    ++calls;
    return {503, "", "offline"};
  }
  std::atomic<int> calls{0};
};

std::size_t changed(const Image& img) {
  std::size_t n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) n += !(img.pixel(x, y) == kWhite);
  }
  return n;
}

TEST(Engine, ViewFitsLayerExtents) {
  Engine e;
  e.tile_provider("none");
  EXPECT_EQ(e.resolve_view(640, 480).zoom, kMinZoom);
  DataTable bus = read_csv(fixture("bus.csv"));
  e.dot(bus);
  const ViewState v = e.resolve_view(640, 480);
  EXPECT_EQ(v, fit_view(BoundingBox::from_points(bus.numeric("lon"), bus.numeric("lat")), 640, 480));
  const BoundingBox box(56, 11, 55, 13);
  e.set_bbox(box);
  EXPECT_EQ(e.resolve_view(640, 480), fit_view(box, 640, 480));
  EXPECT_THROW(e.resolve_view(0, 10), DataError);
}

TEST(Engine, SavefigResetsLayersAndBbox) {
  TempDir dir("engine");
  Engine e;
  e.tile_provider("none");
  e.dot(read_csv(fixture("bus.csv")));
  e.set_bbox(BoundingBox(56, 11, 55, 13));
  e.savefig(dir / "a.png", 320, 200);
  EXPECT_TRUE(e.layers().empty());
  EXPECT_FALSE(e.bbox());
  const Image img = read_image(dir / "a.png");
  EXPECT_EQ(img.width(), 320);
  EXPECT_EQ(img.height(), 200);
  EXPECT_GT(changed(img), 50u);
}

TEST(Engine, SavefigWithNoLayersIsBaseMapOnly) {
  TempDir dir("engine");
  Engine e;
  e.tile_provider("none");
  e.savefig(dir / "blank.png", 64, 64);
  EXPECT_EQ(changed(read_image(dir / "blank.png")), 0u);

  // With a base map and no network the placeholders fill the frame.
  auto fetcher = std::make_shared<NoFetch>();
  Engine tiles;
  tiles.tile_provider("http://127.0.0.1:1/{z}/{x}/{y}.png");
  tiles.set_tile_cache_root(dir / "cache");
  tiles.set_tile_fetcher(fetcher);
  tiles.set_tile_timeout(200ms);
  const Image img = tiles.render(64, 64);
  EXPECT_EQ(img.pixel(30, 30), (Rgba{224, 224, 224, 255}));
  EXPECT_GT(fetcher->calls, 0);
}

TEST(Engine, CustomLayerRendersLast) {
  Engine e;
  e.tile_provider("none");
  e.dot(read_csv(fixture("bus.csv")));
  e.add_layer(std::make_shared<FillLayer>(Rgba{7, 8, 9, 255}));
  const Image img = e.render(100, 80);
  EXPECT_EQ(changed(img), 100u * 80u);
  EXPECT_EQ(img.pixel(50, 40), (Rgba{7, 8, 9, 255}));
  EXPECT_THROW(e.add_layer(nullptr), DataError);
  // render() keeps the layers.
  EXPECT_EQ(e.layers().size(), 2u);
}

TEST(Engine, PreseededCacheNeedsNoFetch) {
  TempDir dir("engine");
  auto fetcher = std::make_shared<NoFetch>();
  Engine e;
  e.tile_provider("http://127.0.0.1:1/{z}/{x}/{y}.png");
  e.set_tile_cache_root(dir.path());
  e.set_tile_fetcher(fetcher);
  e.dot(read_csv(fixture("bus.csv")));
  const ViewState v = e.resolve_view(320, 240);
  for (const TileCoord& c : tiles_for_view(v)) {
    const auto p = tile_path(dir.path(), "custom", c);
    std::filesystem::create_directories(p.parent_path());
    write_png(Image(256, 256, {200, 220, 240, 255}), p);
  }
  const Image a = e.render(320, 240);
  const Image b = e.render(320, 240);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(fetcher->calls, 0);
}

TEST(Engine, ProviderSelection) {
  Engine e;
  e.tile_provider("positron");
  EXPECT_EQ(e.provider()->name(), "positron");
  e.tile_provider("none");
  EXPECT_FALSE(e.provider());
  EXPECT_THROW(e.tile_provider("not-a-preset"), TileError);
}

TEST(Engine, FreeFunctionsUseDefaultEngine) {
  TempDir dir("engine");
  tile_provider("none");
  dot(read_csv(fixture("bus.csv")));
  EXPECT_EQ(default_engine().layers().size(), 1u);
  savefig(dir / "f.png", 200, 150);
  EXPECT_TRUE(default_engine().layers().empty());
  EXPECT_TRUE(std::filesystem::exists(dir / "f.png"));
}

TEST(Engine, ShowRunsScriptedWindow) {
  Engine e;
  e.tile_provider("none");
  e.dot(read_csv(fixture("bus.csv")));
  ScriptedWindow w(200, 100, {{}, {InputEvent::scroll(10, 10, 1)}});
  e.show(w);
  EXPECT_EQ(w.frames_presented(), 2u);
  EXPECT_GT(changed(w.last_frame()), 0u);
  EXPECT_TRUE(e.layers().empty());
}

}  // namespace
}  // namespace terramap
