#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "terramap/data_table.hpp"
#include "terramap/error.hpp"
#include "terramap/formats.hpp"

namespace terramap {

using nlohmann::json;

namespace {

double ring_area(const Ring& ring) {
  double twice = 0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
  }
  return twice / 2;
}

LonLat read_position(const json& j) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("GeoJSON position must be an array of at least two numbers");
  }
  LonLat p{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) throw FormatError("non-finite GeoJSON coordinate");
  return p;
}

Ring read_ring(const json& j) {
  if (!j.is_array()) throw FormatError("GeoJSON coordinate list must be an array");
  Ring ring;
  ring.reserve(j.size());
  for (const auto& p : j) ring.push_back(read_position(p));
  return ring;
}

std::vector<Ring> read_rings(const json& j) {
  if (!j.is_array()) throw FormatError("GeoJSON coordinate list must be an array");
  std::vector<Ring> rings;
  for (const auto& r : j) rings.push_back(read_ring(r));
  return rings;
}

AttributeValue to_attribute(const json& v) {
  switch (v.type()) {
    case json::value_t::null:
      return nullptr;
    case json::value_t::boolean:
      return v.get<bool>();
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
    case json::value_t::number_float:
      return v.get<double>();
    case json::value_t::string:
      return v.get<std::string>();
    default:
      return RawJson{v.dump()};
  }
}

json from_attribute(const AttributeValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::nearbyint(x) == x && std::fabs(x) < 9007199254740992.0) {
            return static_cast<std::int64_t>(x);
          }
          return x;
        } else if constexpr (std::is_same_v<T, RawJson>) {
          return json::parse(x.text);
        } else {
          return x;
        }
      },
      v);
}

json position_json(const LonLat& p) { return json::array({p.lon, p.lat}); }

json ring_json(const Ring& ring) {
  json a = json::array();
  for (const auto& p : ring) a.push_back(position_json(p));
  return a;
}

json rings_json(const std::vector<Ring>& rings) {
  json a = json::array();
  for (const auto& r : rings) a.push_back(ring_json(r));
  return a;
}

class Parser {
 public:
  explicit Parser(ReadStats& stats) : stats_(stats) {}

  void object(const json& j, std::vector<VectorFeature>& out) {
    const std::string type = j.value("type", "");
    if (type == "FeatureCollection") {
      const auto it = j.find("features");
      if (it == j.end() || !it->is_array()) throw FormatError("FeatureCollection without a features array");
      for (const auto& f : *it) object(f, out);
    } else if (type == "Feature") {
      VectorFeature feature;
      if (auto props = j.find("properties"); props != j.end() && props->is_object()) {
        for (const auto& [k, v] : props->items()) feature.attributes[k] = to_attribute(v);
      }
      const auto geom = j.find("geometry");
      if (geom == j.end() || geom->is_null()) {
        skip("feature without geometry");
        return;
      }
      if (geometry(*geom, feature.geometry)) out.push_back(std::move(feature));
    } else {
      VectorFeature feature;
      if (geometry(j, feature.geometry)) out.push_back(std::move(feature));
    }
  }

 private:
  bool geometry(const json& g, Geometry& out) {
    if (!g.is_object()) throw FormatError("GeoJSON geometry must be an object");
    const std::string type = g.value("type", "");
    const auto coords = g.find("coordinates");
    auto need_coords = [&]() -> const json& {
      if (coords == g.end()) throw FormatError(type + " geometry without coordinates");
      return *coords;
    };
    if (type == "Point") {
      out = PointGeometry{read_position(need_coords())};
    } else if (type == "LineString") {
      out = PolyLineGeometry{{read_ring(need_coords())}, false};
    } else if (type == "MultiLineString") {
      out = PolyLineGeometry{read_rings(need_coords()), true};
    } else if (type == "Polygon") {
      PolygonGeometry poly;
      poly.polygons.push_back(read_rings(need_coords()));
      normalize(poly);
      out = std::move(poly);
    } else if (type == "MultiPolygon") {
      PolygonGeometry poly;
      poly.multi = true;
      const json& c = need_coords();
      if (!c.is_array()) throw FormatError("MultiPolygon coordinates must be an array");
      for (const auto& p : c) poly.polygons.push_back(read_rings(p));
      normalize(poly);
      out = std::move(poly);
    } else {
      skip("unsupported geometry type '" + type + "'");
      return false;
    }
    return true;
  }

  void skip(std::string message) {
    ++stats_.skipped;
    stats_.warnings.push_back(std::move(message));
  }

  ReadStats& stats_;
};

}  // namespace

std::string attribute_text(const AttributeValue& value) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          return {};
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, RawJson>) {
          return x.text;
        } else {
          return x;
        }
      },
      value);
}

void normalize(PolygonGeometry& polygon) {
  for (auto& rings : polygon.polygons) {
    for (std::size_t i = 0; i < rings.size(); ++i) {
      Ring& ring = rings[i];
      if (ring.empty()) continue;
      if (!(ring.front().lon == ring.back().lon && ring.front().lat == ring.back().lat)) {
        ring.push_back(ring.front());
      }
      const double area = ring_area(ring);
      if ((i == 0 && area < 0) || (i > 0 && area > 0)) std::reverse(ring.begin(), ring.end());
    }
  }
}

std::vector<VectorFeature> parse_geojson(const std::string& text, ReadStats* stats) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed GeoJSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("GeoJSON root must be an object");
  ReadStats local;
  std::vector<VectorFeature> out;
  try {
    Parser(stats ? *stats : local).object(doc, out);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid GeoJSON: ") + e.what());
  }
  return out;
}

std::vector<VectorFeature> read_geojson(const std::filesystem::path& path, ReadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_geojson(buf.str(), stats);
}

std::string write_geojson(const std::vector<VectorFeature>& features) {
  json fc = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (const auto& f : features) {
    json geom = std::visit(
        [](const auto& g) -> json {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, PointGeometry>) {
            return {{"type", "Point"}, {"coordinates", position_json(g.position)}};
          } else if constexpr (std::is_same_v<T, PolyLineGeometry>) {
            if (g.multi || g.parts.size() != 1) {
              return {{"type", "MultiLineString"}, {"coordinates", rings_json(g.parts)}};
            }
            return {{"type", "LineString"}, {"coordinates", ring_json(g.parts.front())}};
          } else {
            if (g.multi || g.polygons.size() != 1) {
              json c = json::array();
              for (const auto& p : g.polygons) c.push_back(rings_json(p));
              return {{"type", "MultiPolygon"}, {"coordinates", c}};
            }
            return {{"type", "Polygon"}, {"coordinates", rings_json(g.polygons.front())}};
          }
        },
        f.geometry);
    json props = json::object();
    for (const auto& [k, v] : f.attributes) props[k] = from_attribute(v);
    fc["features"].push_back({{"type", "Feature"}, {"properties", props}, {"geometry", geom}});
  }
  return fc.dump();
}

void write_geojson(const std::vector<VectorFeature>& features, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << write_geojson(features);
}

}  // namespace terramap
