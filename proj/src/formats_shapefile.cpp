#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "terramap/error.hpp"
#include "terramap/formats.hpp"

namespace terramap {

using namespace std::string_view_literals;

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& bytes, std::size_t begin, std::size_t end, std::string what)
      : bytes_(bytes), pos_(begin), end_(end), what_(std::move(what)) {}

  std::int32_t be32() { return static_cast<std::int32_t>(__builtin_bswap32(raw<std::uint32_t>())); }
  std::int32_t le32() { return static_cast<std::int32_t>(raw<std::uint32_t>()); }
  double le_double() { return raw<double>(); }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::size_t pos() const { return pos_; }

 private:
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");

  void need(std::size_t n) const {
    if (end_ - pos_ < n) throw FormatError(what_ + ": truncated data at byte " + std::to_string(pos_));
  }
  template <class T>
  T raw() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
  std::size_t end_;
  std::string what_;
};

double signed_area(const Ring& ring) {
  double twice = 0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
  }
  return twice / 2;
}

std::vector<Ring> read_parts(Reader& r, const std::string& what) {
  r.skip(32);  // bounding box
  const std::int32_t num_parts = r.le32();
  const std::int32_t num_points = r.le32();
  if (num_parts < 0 || num_points < 0) throw FormatError(what + ": negative part or point count");
  std::vector<std::int32_t> starts(static_cast<std::size_t>(num_parts));
  for (auto& s : starts) s = r.le32();
  std::vector<LonLat> points(static_cast<std::size_t>(num_points));
  for (auto& p : points) {
    p.lon = r.le_double();
    p.lat = r.le_double();
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) throw FormatError(what + ": non-finite coordinate");
  }
  std::vector<Ring> parts;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::int32_t b = starts[i];
    const std::int32_t e = i + 1 < starts.size() ? starts[i + 1] : num_points;
    if (b < 0 || e > num_points || b > e) throw FormatError(what + ": part index out of range");
    parts.emplace_back(points.begin() + b, points.begin() + e);
  }
  return parts;
}

// Shapefile polygons list outer rings clockwise, each followed by its holes.
PolygonGeometry group_rings(std::vector<Ring> rings) {
  PolygonGeometry poly;
  for (Ring& ring : rings) {
    if (ring.empty()) continue;
    if (!(ring.front().lon == ring.back().lon && ring.front().lat == ring.back().lat)) {
      ring.push_back(ring.front());
    }
    const bool outer = signed_area(ring) <= 0 || poly.polygons.empty();
    if (outer) {
      poly.polygons.push_back({std::move(ring)});
    } else {
      poly.polygons.back().push_back(std::move(ring));
    }
  }
  normalize(poly);
  return poly;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\0"sv);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\0"sv);
  return std::string(s.substr(b, e - b + 1));
}

bool valid_utf8(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (n == 0 || i + n > s.size()) return false;
    for (std::size_t k = 1; k < n; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    }
    i += n;
  }
  return true;
}

// dBase text is usually a single-byte code page; Latin-1 is assumed when
// the bytes are not already UTF-8.
std::string to_utf8(std::string s) {
  if (valid_utf8(s)) return s;
  std::string out;
  for (unsigned char c : s) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

}  // namespace

DbfTable read_dbf(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string what = path.filename().string();
  if (bytes.size() < 32) throw FormatError(what + ": truncated dBase header");
  auto le16 = [&](std::size_t at) { return static_cast<std::size_t>(bytes[at] | (bytes[at + 1] << 8)); };
  const std::size_t nrecords = bytes[4] | (bytes[5] << 8) | (bytes[6] << 16) | (static_cast<std::size_t>(bytes[7]) << 24);
  const std::size_t header_len = le16(8);
  const std::size_t record_len = le16(10);
  if (header_len > bytes.size()) throw FormatError(what + ": truncated dBase header");

  DbfTable table;
  std::size_t record_width = 1;  // deletion flag
  for (std::size_t at = 32; at + 32 <= header_len && bytes[at] != 0x0D; at += 32) {
    DbfField f;
    const char* name = reinterpret_cast<const char*>(&bytes[at]);
    f.name = std::string(name, strnlen(name, 11));
    f.type = static_cast<char>(bytes[at + 11]);
    f.length = bytes[at + 16];
    f.decimals = bytes[at + 17];
    record_width += static_cast<std::size_t>(f.length);
    table.fields.push_back(std::move(f));
  }
  if (record_width > record_len) throw FormatError(what + ": field widths exceed record length");
  if (header_len + nrecords * record_len > bytes.size()) throw FormatError(what + ": truncated records");

  table.records.reserve(nrecords);
  for (std::size_t r = 0; r < nrecords; ++r) {
    std::size_t at = header_len + r * record_len + 1;
    Attributes attrs;
    for (const DbfField& f : table.fields) {
      std::string_view cell(reinterpret_cast<const char*>(&bytes[at]), static_cast<std::size_t>(f.length));
      at += static_cast<std::size_t>(f.length);
      std::string text = trim(cell);
      if (f.type == 'N' || f.type == 'F') {
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
          attrs[f.name] = nullptr;
        } else {
          attrs[f.name] = v;
        }
      } else {
        attrs[f.name] = to_utf8(std::move(text));
      }
    }
    table.records.push_back(std::move(attrs));
  }
  return table;
}

std::vector<VectorFeature> read_shapefile(const std::filesystem::path& basepath, ReadStats* stats) {
  std::filesystem::path base = basepath;
  if (base.extension() == ".shp" || base.extension() == ".dbf") base.replace_extension();
  auto shp_path = base;
  shp_path += ".shp";
  auto dbf_path = base;
  dbf_path += ".dbf";

  const auto bytes = slurp(shp_path);
  const std::string what = shp_path.filename().string();
  if (bytes.size() < 100) throw FormatError(what + ": truncated header");
  Reader header(bytes, 0, 100, what);
  if (header.be32() != 9994) throw FormatError(what + ": not a shapefile (bad file code)");
  header.skip(20);
  const std::size_t declared = static_cast<std::size_t>(header.be32()) * 2;
  if (header.le32() != 1000) throw FormatError(what + ": unsupported shapefile version");
  if (declared > bytes.size()) throw FormatError(what + ": truncated file (header declares " +
                                                 std::to_string(declared) + " bytes)");

  std::vector<Attributes> attrs;
  std::error_code ec;
  if (std::filesystem::exists(dbf_path, ec)) attrs = read_dbf(dbf_path).records;

  ReadStats local;
  ReadStats& st = stats ? *stats : local;
  std::vector<VectorFeature> features;
  std::size_t pos = 100;
  for (std::size_t index = 0; pos < declared; ++index) {
    Reader rec_header(bytes, pos, declared, what);
    const std::int32_t number = rec_header.be32();
    const std::int32_t words = rec_header.be32();
    if (words < 2) throw FormatError(what + ": record " + std::to_string(number) + " has invalid length");
    const std::size_t begin = pos + 8;
    const std::size_t end = begin + static_cast<std::size_t>(words) * 2;
    if (end > declared) throw FormatError(what + ": record " + std::to_string(number) + " is truncated");
    pos = end;

    Reader r(bytes, begin, end, what + " record " + std::to_string(number));
    const std::int32_t type = r.le32();
    VectorFeature feature;
    switch (type) {
      case 0:
        continue;
      case 1: {
        PointGeometry p;
        p.position.lon = r.le_double();
        p.position.lat = r.le_double();
        if (!std::isfinite(p.position.lon) || !std::isfinite(p.position.lat)) {
          throw FormatError(what + ": non-finite coordinate");
        }
        feature.geometry = p;
        break;
      }
      case 3: {
        PolyLineGeometry line;
        line.parts = read_parts(r, what);
        feature.geometry = std::move(line);
        break;
      }
      case 5:
        feature.geometry = group_rings(read_parts(r, what));
        break;
      default:
        ++st.skipped;
        st.warnings.push_back(what + ": skipped record " + std::to_string(number) +
                              " with unsupported shape type " + std::to_string(type));
        continue;
    }
    if (index < attrs.size()) feature.attributes = attrs[index];
    features.push_back(std::move(feature));
  }
  return features;
}

}  // namespace terramap
