#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "terramap/bench.hpp"
#include "terramap/engine.hpp"
#include "terramap/error.hpp"

namespace {

using namespace terramap;

constexpr int kInputError = 2;

struct Options {
  std::string input;
  std::string out;
  std::string bbox;
  std::string cmap;
  std::string bw;
  double binsize = 16;
  std::string tiles;
  std::string tile_cache;
  std::string size = "1280x768";
  std::string lat = "lat";
  std::string lon = "lon";
  std::string color;
  std::string scale;
  std::string tooltip;
  int alpha = -1;
  bool fill = false;
  std::optional<double> cut_below;
  std::optional<double> clip_above;
  GraphSpec graph;
};

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(sep, start);
    const std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw DataError("invalid " + what + " '" + text + "'");
    }
    out.push_back(v);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

Rgba parse_color(const std::string& text) {
  if (text.size() == 1) return named_color(text[0]);
  const auto v = split_numbers(text, ',', "color");
  if (v.size() != 3 && v.size() != 4) throw DataError("color must be a letter or R,G,B[,A]");
  for (double c : v) {
    if (c < 0 || c > 255) throw DataError("color components must be in 0..255");
  }
  return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2]),
          static_cast<std::uint8_t>(v.size() == 4 ? v[3] : 255)};
}

RowTooltip column_tooltip(const Options& o, const DataTable& data) {
  if (o.tooltip.empty()) return {};
  if (!data.has_column(o.tooltip)) throw DataError("missing tooltip column '" + o.tooltip + "'");
  const std::string col = o.tooltip;
  return [col](const RowView& r) { return r[col]; };
}

AttributeTooltip attribute_tooltip(const Options& o) {
  if (o.tooltip.empty()) return {};
  const std::string key = o.tooltip;
  return [key](const Attributes& a) {
    const auto it = a.find(key);
    return it == a.end() ? std::string() : attribute_text(it->second);
  };
}

void add_layer(Engine& engine, const std::string& kind, const Options& o) {
  if (kind == "shapefile") {
    ShapeOptions opt;
    if (!o.color.empty()) opt.color = parse_color(o.color);
    opt.f_tooltip = attribute_tooltip(o);
    engine.shapefiles(o.input, std::move(opt));
    return;
  }
  if (kind == "geojson") {
    GeoJsonOptions opt;
    opt.fill = o.fill;
    if (!o.color.empty()) opt.color = parse_color(o.color);
    opt.f_tooltip = attribute_tooltip(o);
    engine.geojson(o.input, std::move(opt));
    return;
  }

  DataTable data = read_csv(o.input);
  if (kind == "dot") {
    DotOptions opt;
    opt.lat = o.lat;
    opt.lon = o.lon;
    if (!o.color.empty()) opt.color = parse_color(o.color);
    opt.f_tooltip = column_tooltip(o, data);
    engine.dot(std::move(data), std::move(opt));
  } else if (kind == "hist") {
    HistOptions opt;
    opt.lat = o.lat;
    opt.lon = o.lon;
    opt.binsize = o.binsize;
    if (!o.cmap.empty()) opt.cmap = o.cmap;
    if (o.alpha >= 0) opt.alpha = o.alpha;
    if (!o.scale.empty()) opt.colorscale = parse_scale(o.scale);
    engine.hist(std::move(data), std::move(opt));
  } else if (kind == "kde") {
    KdeOptions opt;
    opt.lat = o.lat;
    opt.lon = o.lon;
    if (!o.bw.empty()) {
      const auto bw = split_numbers(o.bw, ',', "bandwidth");
      if (bw.size() != 1 && bw.size() != 2) throw DataError("--bw takes SX,SY");
      opt.params.bw_x = bw[0];
      opt.params.bw_y = bw.back();
    }
    opt.params.cut_below = o.cut_below;
    opt.params.clip_above = o.clip_above;
    if (!o.scale.empty()) opt.params.scaling = parse_scale(o.scale);
    if (!o.cmap.empty()) opt.cmap = o.cmap;
    if (o.alpha >= 0) opt.alpha = o.alpha;
    engine.kde(std::move(data), std::move(opt));
  } else if (kind == "graph") {
    GraphSpec spec = o.graph;
    if (!o.cmap.empty()) spec.cmap = o.cmap;
    if (o.alpha >= 0) spec.alpha = o.alpha;
    engine.graph(std::move(data), std::move(spec));
  } else if (kind == "voronoi") {
    VoronoiOptions opt;
    opt.lat = o.lat;
    opt.lon = o.lon;
    opt.fill = o.fill;
    if (!o.color.empty()) opt.line_color = parse_color(o.color);
    if (!o.cmap.empty()) opt.cmap = o.cmap;
    if (o.alpha >= 0) opt.alpha = o.alpha;
    engine.voronoi(std::move(data), std::move(opt));
  } else if (kind == "delaunay") {
    DelaunayOptions opt;
    opt.lat = o.lat;
    opt.lon = o.lon;
    if (!o.cmap.empty()) opt.cmap = o.cmap;
    if (!o.color.empty()) {
      opt.color = parse_color(o.color);
      if (o.cmap.empty()) opt.cmap.reset();
    }
    if (o.alpha >= 0) opt.alpha = o.alpha;
    engine.delaunay(std::move(data), std::move(opt));
  } else if (kind == "convexhull") {
    HullOptions opt;
    opt.lat = o.lat;
    opt.lon = o.lon;
    opt.fill = o.fill;
    if (!o.color.empty()) opt.color = parse_color(o.color);
    engine.convexhull(std::move(data), std::move(opt));
  }
}

int run_map(const std::string& kind, const Options& o) {
  const auto size = split_numbers(o.size, 'x', "size");
  if (size.size() != 2 || size[0] < 1 || size[1] < 1) throw DataError("--size takes WxH");
  const int w = static_cast<int>(size[0]), h = static_cast<int>(size[1]);

  Engine engine;
  if (!o.tiles.empty()) engine.tile_provider(o.tiles);
  if (!o.tile_cache.empty()) engine.set_tile_cache_root(o.tile_cache);
  if (!o.bbox.empty()) {
    const auto b = split_numbers(o.bbox, ',', "bbox");
    if (b.size() != 4) throw DataError("--bbox takes N,W,S,E");
    engine.set_bbox(BoundingBox(b[0], b[1], b[2], b[3]));
  }
  add_layer(engine, kind, o);
  if (o.out.empty()) {
    engine.show(w, h);
  } else {
    engine.savefig(o.out, w, h);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geographic data visualization on slippy map tiles"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> kinds{
      {"dot", "one dot per row"},
      {"hist", "2D histogram in screen space"},
      {"kde", "kernel density heatmap"},
      {"graph", "edges between two coordinate pairs per row"},
      {"voronoi", "Voronoi tessellation"},
      {"delaunay", "Delaunay triangulation"},
      {"convexhull", "convex hull"},
      {"shapefile", "ESRI shapefile outlines"},
      {"geojson", "GeoJSON features"},
  };
  for (const auto& [name, help] : kinds) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", o.input, name == "shapefile" ? "shapefile base path" : "input file")->required();
    sub->add_option("--out", o.out, "write a PNG instead of opening a window");
    sub->add_option("--bbox", o.bbox, "view bounds N,W,S,E (default: fit the data)");
    sub->add_option("--size", o.size, "image or window size WxH")->capture_default_str();
    sub->add_option("--tiles", o.tiles, "tile provider preset or URL template, or none");
    sub->add_option("--tile-cache", o.tile_cache, "tile cache directory");
    sub->add_option("--cmap", o.cmap, "colormap name");
    sub->add_option("--alpha", o.alpha, "layer alpha 0-255")->check(CLI::Range(0, 255));
    sub->add_option("--color", o.color, "color letter (b g r c m y k w) or R,G,B[,A]");
    if (name == "shapefile" || name == "geojson") {
      sub->add_option("--tooltip", o.tooltip, "attribute shown as tooltip");
      if (name == "geojson") sub->add_flag("--fill", o.fill, "fill polygons");
      continue;
    }
    if (name == "graph") {
      sub->add_option("--src-lat", o.graph.src_lat)->capture_default_str();
      sub->add_option("--src-lon", o.graph.src_lon)->capture_default_str();
      sub->add_option("--dest-lat", o.graph.dest_lat)->capture_default_str();
      sub->add_option("--dest-lon", o.graph.dest_lon)->capture_default_str();
      sub->add_option("--linewidth", o.graph.linewidth)->capture_default_str();
      continue;
    }
    sub->add_option("--lat", o.lat, "latitude column")->capture_default_str();
    sub->add_option("--lon", o.lon, "longitude column")->capture_default_str();
    if (name == "dot") sub->add_option("--tooltip", o.tooltip, "column shown as tooltip");
    if (name == "hist") {
      sub->add_option("--binsize", o.binsize, "bin size in pixels")->capture_default_str();
      sub->add_option("--scale", o.scale, "color scale: lin, log or sqrt");
    }
    if (name == "kde") {
      sub->add_option("--bw", o.bw, "bandwidth SX,SY in pixels");
      sub->add_option("--cut-below", o.cut_below, "hide cells below this density");
      sub->add_option("--clip-above", o.clip_above, "clamp densities above this value");
      sub->add_option("--scale", o.scale, "color scale: lin, log or sqrt");
    }
    if (name == "voronoi" || name == "convexhull") sub->add_flag("--fill", o.fill, "fill cells");
  }

  std::size_t bench_n = 1000000;
  int bench_reps = 10;
  std::string bench_csv;
  std::vector<std::string> bench_only;
  auto* bench_cmd = app.add_subcommand("bench", "time invalidate + first draw for a million samples");
  bench_cmd->add_option("-n,--samples", bench_n, "number of samples")->capture_default_str();
  bench_cmd->add_option("-r,--reps", bench_reps, "repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", bench_csv, "also write the report as CSV");
  bench_cmd->add_option("--only", bench_only, "subset of dot, graph, hist, kde, voronoi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (bench_cmd->parsed()) {
      const BenchReport report = bench(bench_n, bench_reps, bench_only, [](const std::string& name, int rep) {
        std::fprintf(stderr, "\r%-8s rep %d", name.c_str(), rep + 1);
      });
      std::fprintf(stderr, "\n");
      std::cout << report.table();
      if (!bench_csv.empty()) {
        std::ofstream(bench_csv) << report.csv();
      }
      return 0;
    }
    for (const auto& [name, help] : kinds) {
      if (app.got_subcommand(name)) return run_map(name, o);
    }
  } catch (const terramap::Error& e) {
    std::cerr << "terramap: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "terramap: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
