#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "terramap/projection.hpp"

namespace terramap {

// Closed ring or open part of lon/lat vertices.
using Ring = std::vector<LonLat>;

struct PointGeometry {
  LonLat position;
};

struct PolyLineGeometry {
  std::vector<Ring> parts;
  bool multi = false;  // MultiLineString in GeoJSON
};

// Each polygon is an outer ring followed by its holes. Rings are closed,
// outer rings counterclockwise and holes clockwise.
struct PolygonGeometry {
  std::vector<std::vector<Ring>> polygons;
  bool multi = false;  // MultiPolygon in GeoJSON
};

using Geometry = std::variant<PointGeometry, PolyLineGeometry, PolygonGeometry>;

// Nested JSON values (objects, arrays) kept as serialized text.
struct RawJson {
  std::string text;
  friend bool operator==(const RawJson&, const RawJson&) = default;
};

using AttributeValue = std::variant<std::nullptr_t, bool, double, std::string, RawJson>;
using Attributes = std::map<std::string, AttributeValue>;

struct VectorFeature {
  Geometry geometry;
  Attributes attributes;
};

// Display text: strings verbatim, numbers in shortest round-trip form,
// null as "".
std::string attribute_text(const AttributeValue& value);

struct ReadStats {
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

// Reads `basepath`.shp (and `basepath`.dbf when present). Shape types
// Point, PolyLine and Polygon are supported; Null records are dropped and
// other types are skipped with a warning. Throws FormatError.
std::vector<VectorFeature> read_shapefile(const std::filesystem::path& basepath,
                                          ReadStats* stats = nullptr);

struct DbfField {
  std::string name;
  char type = 'C';
  int length = 0;
  int decimals = 0;
};

struct DbfTable {
  std::vector<DbfField> fields;
  std::vector<Attributes> records;
};

DbfTable read_dbf(const std::filesystem::path& path);

// FeatureCollection, Feature or a bare geometry. Throws FormatError for
// malformed JSON; unsupported geometry types are skipped with a warning.
std::vector<VectorFeature> read_geojson(const std::filesystem::path& path, ReadStats* stats = nullptr);
std::vector<VectorFeature> parse_geojson(const std::string& text, ReadStats* stats = nullptr);

std::string write_geojson(const std::vector<VectorFeature>& features);
void write_geojson(const std::vector<VectorFeature>& features, const std::filesystem::path& path);

// Closes every ring and orients outer rings CCW, holes CW.
void normalize(PolygonGeometry& polygon);

}  // namespace terramap
