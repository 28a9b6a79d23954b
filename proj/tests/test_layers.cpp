#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"
#include "terramap/error.hpp"
#include "terramap/layers.hpp"
#include "test_support.hpp"

namespace terramap {
namespace {

using testing::fixture;
using testing::latlon_table;

constexpr Rgba kWhite{255, 255, 255, 255};

struct Rendered {
  ViewState view;
  Image image;
  DrawStats stats;
  UiManager ui;
};

Rendered render(Layer& layer, int w = 400, int h = 300, MouseState mouse = {}) {
  Rendered r;
  const auto box = layer.bbox();
  r.view = box ? fit_view(*box, w, h) : view_centered({0, 0}, kMinZoom, w, h);
  const Projection proj(r.view);
  layer.invalidate(proj);
  RenderTarget t(w, h);
  t.clear(kWhite);
  r.ui.begin_frame();
  layer.draw(proj, t, mouse, r.ui);
  r.image = t.read_pixels();
  r.stats = t.stats();
  return r;
}

std::size_t changed(const Image& img) {
  std::size_t n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) n += !(img.pixel(x, y) == kWhite);
  }
  return n;
}

TEST(DotLayer, OnePointCallPerFrame) {
  DotLayer layer(read_csv(fixture("bus.csv")));
  const Rendered r = render(layer);
  EXPECT_EQ(r.stats.calls, 1u);
  EXPECT_EQ(r.stats.points, 1u);
  EXPECT_EQ(layer.painter().point_count(), 10000u);
  EXPECT_GT(changed(r.image), 100u);
}

TEST(DotLayer, MissingColumnsRejected) {
  DataTable t = DataTable::from_columns({{"x", NumericColumn{1}}});
  EXPECT_THROW(DotLayer{t}, DataError);
  DotOptions o;
  o.lat = "nope";
  EXPECT_THROW(DotLayer(latlon_table({1}, {2}), o), DataError);
}

TEST(DotLayer, TooltipMatchesLinearScan) {
  DataTable data = read_csv(fixture("metro.csv"));
  DotOptions o;
  o.f_tooltip = [](const RowView& r) { return r["name"]; };
  DotLayer layer(data, o);
  const Rendered base = render(layer);
  const Projection proj(base.view);
  const ScreenCoords xy = project_rows(data, proj);
  // Query around every station; the oracle picks the last row whose
  // 6x6 box contains the cursor.
  for (std::size_t i = 0; i < data.nrows(); ++i) {
    for (double d : {-2.9, 0.0, 2.9}) {
      const double qx = xy.x[i] + d, qy = xy.y[i] - d;
      std::optional<std::string> want;
      for (std::size_t k = data.nrows(); k-- > 0;) {
        if (qx >= xy.x[k] - 3 && qx < xy.x[k] + 3 && qy >= xy.y[k] - 3 && qy < xy.y[k] + 3) {
          want = data.strings("name")[k];
          break;
        }
      }
      const Rendered r = render(layer, 400, 300, {qx, qy, true});
      EXPECT_EQ(r.ui.current_tooltip(), want);
    }
  }
  const Rendered outside = render(layer, 400, 300, {-100, -100, false});
  EXPECT_FALSE(outside.ui.current_tooltip());
}

TEST(DotLayer, PerRowColor) {
  DotOptions o;
  o.point_size = 6;
  o.f_color = [](const RowView& r) { return r.number("lat") > 0 ? Rgba{0, 0, 255, 255} : Rgba{0, 255, 0, 255}; };
  DotLayer layer(latlon_table({10, -10}, {0, 0}), o);
  const Rendered r = render(layer);
  const Projection proj(r.view);
  const ScreenPoint n = proj.lonlat_to_screen(0, 10), s = proj.lonlat_to_screen(0, -10);
  EXPECT_EQ(r.image.pixel(static_cast<int>(n.x), static_cast<int>(n.y)), (Rgba{0, 0, 255, 255}));
  EXPECT_EQ(r.image.pixel(static_cast<int>(s.x), static_cast<int>(s.y)), (Rgba{0, 255, 0, 255}));
}

TEST(HistLayer, GridMatchesBin2dAndHottestCell) {
  HistOptions o;
  o.binsize = 10;
  HistLayer layer(read_csv(fixture("bus.csv")), o);
  const Rendered r = render(layer);
  EXPECT_EQ(r.stats.sprites, 1u);
  const Grid2D& g = layer.grid();
  EXPECT_EQ(g.sum(), 10000);
  int hx = 0, hy = 0;
  for (int cy = 0; cy < g.height; ++cy) {
    for (int cx = 0; cx < g.width; ++cx) {
      if (g.at(cx, cy) > g.at(hx, hy)) {
        hx = cx;
        hy = cy;
      }
    }
  }
  Image over(1, 1, kWhite);
  blend_pixel(over.row(0), ColorMap("hot", 220).at(1));
  EXPECT_EQ(r.image.pixel(hx * 10 + 5, hy * 10 + 5), over.pixel(0, 0));
}

TEST(HistLayer, ScaleChangesColorsNotArgmax) {
  DataTable data = read_csv(fixture("bus.csv"));
  HistOptions lin, sq;
  lin.colorscale = Scale::Lin;
  sq.colorscale = Scale::Sqrt;
  HistLayer a(data, lin), b(data, sq);
  const Rendered ra = render(a), rb = render(b);
  EXPECT_FALSE(ra.image == rb.image);
  EXPECT_EQ(a.grid().values, b.grid().values);
}

TEST(KdeLayer, SeveralParameterizationsRender) {
  DataTable data = read_csv(fixture("bus.csv"));
  std::vector<KdeOptions> variants(3);
  variants[0].params.bw_x = variants[0].params.bw_y = 5;
  variants[1].params.bw_x = variants[1].params.bw_y = 20;
  variants[1].cmap = "coolwarm";
  variants[2].params.bw_x = variants[2].params.bw_y = 5;
  variants[2].params.cut_below = 1e-6;
  variants[2].params.clip_above = 1;
  variants[2].params.scaling = Scale::Lin;
  for (auto& o : variants) {
    KdeLayer layer(data, o);
    const Rendered r = render(layer);
    EXPECT_GT(changed(r.image), 1000u);
    EXPECT_EQ(r.stats.sprites, 1u);
  }
  KdeOptions bad;
  bad.params.bw_x = 0;
  EXPECT_THROW(KdeLayer(data, bad), DataError);
}

TEST(KdeLayer, ZeroCellsTransparent) {
  KdeLayer layer(latlon_table({55.6, 55.7}, {12.5, 12.6}));
  const Rendered r = render(layer);
  EXPECT_EQ(r.image.pixel(0, 0), kWhite);
  EXPECT_EQ(r.image.pixel(399, 299), kWhite);
}

TEST(MarkersLayer, SpriteCenteredAndTooltip) {
  DataTable data = DataTable::from_columns(
      {{"name", StringColumn{"here"}}, {"lat", NumericColumn{55.0}}, {"lon", NumericColumn{12.0}}});
  MarkerOptions o;
  o.f_tooltip = [](const RowView& r) { return r["name"]; };
  MarkersLayer layer(data, fixture("m.png"), o);
  const Rendered r = render(layer);
  EXPECT_EQ(r.stats.sprites, 1u);
  const ScreenPoint c = Projection(r.view).lonlat_to_screen(12.0, 55.0);
  EXPECT_EQ(r.image.pixel(static_cast<int>(c.x), static_cast<int>(c.y)),
            read_image(fixture("m.png")).pixel(read_image(fixture("m.png")).width() / 2,
                                               read_image(fixture("m.png")).height() / 2));
  EXPECT_EQ(render(layer, 400, 300, {c.x, c.y, true}).ui.current_tooltip(), "here");
  EXPECT_THROW(MarkersLayer(data, fixture("missing.png")), ImageError);
}

TEST(GraphLayer, LongestEdgeGetsHottestColor) {
  DataTable data = read_csv(fixture("flights.csv"));
  GraphSpec spec;
  spec.cmap = "jet";
  spec.alpha = 255;
  spec.linewidth = 1;
  GraphLayer layer(data, spec);
  const Rendered r = render(layer, 800, 500);
  EXPECT_EQ(r.stats.lines, 1u);
  EXPECT_EQ(layer.painter().line_count(), data.nrows());
  std::set<std::tuple<int, int, int>> colors;
  const Rgba hottest = ColorMap("jet").at(1);
  bool found = false;
  for (int y = 0; y < r.image.height(); ++y) {
    for (int x = 0; x < r.image.width(); ++x) {
      const Rgba c = r.image.pixel(x, y);
      if (!(c == kWhite)) colors.insert({c.r, c.g, c.b});
      found |= c == hottest;
    }
  }
  EXPECT_GT(colors.size(), 3u);
  EXPECT_TRUE(found);
  EXPECT_THROW(GraphLayer(latlon_table({1}, {1})), DataError);
}

TEST(VoronoiLayer, CellsDrawnOncePerDistinctSeed) {
  DataTable data = latlon_table({55.60, 55.65, 55.70, 55.60, 55.68}, {12.50, 12.60, 12.55, 12.50, 12.45});
  VoronoiOptions o;
  o.fill = true;
  VoronoiLayer layer(data, o);
  const Rendered r = render(layer);
  const auto& v = layer.diagram();
  EXPECT_EQ(v.owner[3], 0);
  EXPECT_GT(r.stats.fills, 0u);
  EXPECT_GT(changed(r.image), 1000u);
}

TEST(DelaunayLayer, EdgesDrawnAsLines) {
  DataTable data = read_csv(fixture("metro.csv"));
  DelaunayLayer layer(data);
  const Rendered r = render(layer);
  EXPECT_EQ(layer.painter().line_count(), layer.triangulation().edges().size());
  EXPECT_EQ(r.stats.lines, 1u);
}

TEST(ConvexHullLayer, OneHullPerGroup) {
  // Six groups of points around six centers, one hull layer each.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 0.01);
  StringColumn group;
  NumericColumn lat, lon;
  for (int g = 0; g < 6; ++g) {
    for (int i = 0; i < 40; ++i) {
      group.push_back("line" + std::to_string(g));
      lat.push_back(55.6 + 0.05 * g + n(rng));
      lon.push_back(12.4 + 0.04 * (g % 3) + n(rng));
    }
  }
  DataTable data = DataTable::from_columns({{"group", group}, {"lat", lat}, {"lon", lon}});
  const auto groups = data.group_by("group");
  ASSERT_EQ(groups.size(), 6u);
  std::size_t hulls = 0;
  for (const auto& [name, rows] : groups) {
    ConvexHullLayer layer(rows);
    const Rendered r = render(layer);
    EXPECT_GE(layer.hull().size(), 3u);
    EXPECT_EQ(r.stats.fills, 1u);
    EXPECT_EQ(r.stats.lines, 1u);
    ++hulls;
  }
  EXPECT_EQ(hulls, 6u);
}

TEST(GeoJsonLayer, ChoroplethWithTransparentFallback) {
  std::ifstream in(fixture("unemployment.json"));
  const auto rates = nlohmann::json::parse(in);
  double vmax = 0;
  for (const auto& [k, v] : rates.items()) vmax = std::max(vmax, v.get<double>());
  const ColorMap blues("Blues", 255, 10);
  GeoJsonOptions o;
  o.fill = true;
  o.color = [&](const Attributes& a) -> Rgba {
    const std::string key = std::to_string(std::stoi(std::get<std::string>(a.at("STATE")))) +
                            std::get<std::string>(a.at("COUNTY"));
    if (!rates.contains(key)) return kTransparent;
    return blues.to_color(rates[key].get<double>(), vmax, Scale::Lin);
  };
  GeoJsonLayer layer(fixture("counties.geojson"), o);
  ASSERT_EQ(layer.features().size(), 24u);
  std::size_t unmapped = 0;
  std::set<std::tuple<int, int, int>> distinct;
  for (std::size_t i = 0; i < layer.features().size(); ++i) {
    const Rgba c = layer.colors()[i];
    if (c.a == 0) {
      ++unmapped;
    } else {
      distinct.insert({c.r, c.g, c.b});
    }
  }
  EXPECT_GT(unmapped, 0u);
  EXPECT_LE(distinct.size(), 10u);

  const Rendered r = render(layer, 600, 400);
  const Projection proj(r.view);
  for (std::size_t i = 0; i < layer.features().size(); ++i) {
    const auto& ring = std::get<PolygonGeometry>(layer.features()[i].geometry).polygons[0][0];
    double lon = 0, lat = 0;
    for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
      lon += ring[k].lon / (ring.size() - 1);
      lat += ring[k].lat / (ring.size() - 1);
    }
    const ScreenPoint c = proj.lonlat_to_screen(lon, lat);
    const Rgba got = r.image.pixel(static_cast<int>(c.x), static_cast<int>(c.y));
    const Rgba want = layer.colors()[i].a == 0 ? kWhite : layer.colors()[i];
    EXPECT_EQ(got, want) << i;
  }
}

TEST(ShapefileLayer, DrawsOutlinesAndTooltips) {
  ShapeOptions o;
  o.f_tooltip = [](const Attributes& a) { return attribute_text(a.at("NAME")); };
  ShapefileLayer layer(fixture("polygons"), o);
  const Rendered r = render(layer);
  EXPECT_EQ(layer.features().size(), 3u);
  EXPECT_GT(r.stats.lines, 0u);
  EXPECT_GT(layer.hotspots().size(), 0u);
  EXPECT_THROW(ShapefileLayer(fixture("missing")), FormatError);
}

TEST(TrailLayer, CounterAdvancesAndWraps) {
  const std::size_t n = 7;
  NumericColumn lat, lon;
  for (std::size_t i = 0; i < n; ++i) {
    lat.push_back(55.6 + 0.01 * static_cast<double>(i));
    lon.push_back(12.5 + 0.02 * static_cast<double>(i));
  }
  TrailLayer layer(latlon_table(lat, lon));
  const ViewState view = fit_view(*layer.bbox(), 300, 200);
  const Projection proj(view);
  layer.invalidate(proj);
  UiManager ui;
  std::vector<Image> frames;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    EXPECT_EQ(layer.frame_counter(), k % n);
    RenderTarget t(300, 200);
    t.clear(kWhite);
    layer.draw(proj, t, {}, ui);
    frames.push_back(t.read_pixels());
  }
  EXPECT_EQ(layer.frame_counter(), 0u);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) EXPECT_FALSE(frames[a] == frames[b]) << a << " " << b;
  }
  // The trail wraps too, so the second lap repeats the first.
  EXPECT_TRUE(frames[n] == frames[0]);
}

TEST(TrailLayer, DistinctPngFrames) {
  TrailLayer layer(latlon_table({55.6, 55.61, 55.62, 55.63, 55.64}, {12.5, 12.52, 12.54, 12.56, 12.58}));
  const Projection proj(fit_view(*layer.bbox(), 200, 200));
  layer.invalidate(proj);
  UiManager ui;
  std::set<std::vector<std::uint8_t>> files;
  for (int k = 0; k < 5; ++k) {
    RenderTarget t(200, 200);
    t.clear(kWhite);
    layer.draw(proj, t, {}, ui);
    files.insert(encode_png(t.read_pixels()));
  }
  EXPECT_EQ(files.size(), 5u);
}

}  // namespace
}  // namespace terramap
