#include "terramap/colormap.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "terramap/data_table.hpp"
#include "terramap/error.hpp"

namespace terramap {

namespace {

struct Knot {
  double t, v;
};

double eval_channel(const std::vector<Knot>& knots, double t) {
  if (t <= knots.front().t) return knots.front().v;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (t <= knots[i].t) {
      const Knot& a = knots[i - 1];
      const Knot& b = knots[i];
      if (b.t == a.t) return b.v;
      return a.v + (b.v - a.v) * (t - a.t) / (b.t - a.t);
    }
  }
  return knots.back().v;
}

// Per-channel segment data merged into a single control table.
std::vector<ControlPoint> from_segments(const std::vector<Knot>& r, const std::vector<Knot>& g,
                                        const std::vector<Knot>& b) {
  std::set<double> ts;
  for (const auto* ch : {&r, &g, &b}) {
    for (const Knot& k : *ch) ts.insert(k.t);
  }
  std::vector<ControlPoint> table;
  for (double t : ts) table.push_back({t, {eval_channel(r, t), eval_channel(g, t), eval_channel(b, t)}});
  return table;
}

std::vector<ControlPoint> from_hex(std::initializer_list<std::uint32_t> colors) {
  std::vector<ControlPoint> table;
  const std::size_t n = colors.size();
  std::size_t i = 0;
  for (std::uint32_t c : colors) {
    table.push_back({static_cast<double>(i) / static_cast<double>(n - 1),
                     {((c >> 16) & 0xFF) / 255.0, ((c >> 8) & 0xFF) / 255.0, (c & 0xFF) / 255.0}});
    ++i;
  }
  return table;
}

std::vector<ControlPoint> builtin_table(std::string_view name) {
  if (name == "hot") {
    return from_segments({{0, 0.0416}, {0.365079, 1}, {1, 1}},
                         {{0, 0}, {0.365079, 0}, {0.746032, 1}, {1, 1}},
                         {{0, 0}, {0.746032, 0}, {1, 1}});
  }
  if (name == "jet") {
    return from_segments({{0, 0}, {0.35, 0}, {0.66, 1}, {0.89, 1}, {1, 0.5}},
                         {{0, 0}, {0.125, 0}, {0.375, 1}, {0.64, 1}, {0.91, 0}, {1, 0}},
                         {{0, 0.5}, {0.11, 1}, {0.34, 1}, {0.65, 0}, {1, 0}});
  }
  if (name == "hsv") {
    return from_segments(
        {{0, 1}, {0.158730, 1}, {0.174603, 0.968750}, {0.333333, 0.031250}, {0.349206, 0},
         {0.666667, 0}, {0.682540, 0.031250}, {0.841270, 0.968750}, {0.857143, 1}, {1, 1}},
        {{0, 0}, {0.158730, 0.937500}, {0.174603, 1}, {0.507937, 1}, {0.666667, 0.062500},
         {0.682540, 0}, {1, 0}},
        {{0, 0}, {0.333333, 0}, {0.349206, 0.062500}, {0.507937, 1}, {0.841270, 1},
         {0.857143, 0.937500}, {1, 0.09375}});
  }
  if (name == "coolwarm") {
    return {{0.0, {0.2298, 0.2987, 0.7537}},
            {0.25, {0.5525, 0.6900, 0.9955}},
            {0.5, {0.8654, 0.8654, 0.8654}},
            {0.75, {0.9580, 0.6025, 0.4803}},
            {1.0, {0.7057, 0.0156, 0.1502}}};
  }
  if (name == "Blues") {
    return from_hex({0xf7fbff, 0xdeebf7, 0xc6dbef, 0x9ecae1, 0x6baed6, 0x4292c6, 0x2171b5, 0x08519c,
                     0x08306b});
  }
  if (name == "Reds") {
    return from_hex({0xfff5f0, 0xfee0d2, 0xfcbba1, 0xfc9272, 0xfb6a4a, 0xef3b2c, 0xcb181d, 0xa50f15,
                     0x67000d});
  }
  if (name == "viridis") {
    return from_hex({0x440154, 0x472c7a, 0x3b518b, 0x2c718e, 0x21908d, 0x27ad81, 0x5cc863, 0xaadc32,
                     0xfde725});
  }
  throw DataError("unknown colormap '" + std::string(name) + "'");
}

constexpr std::string_view kBuiltinNames[] = {"hot", "jet", "hsv", "coolwarm", "Blues", "Reds", "viridis"};

std::uint8_t to_byte(double x) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
}

std::uint8_t check_alpha(int alpha) {
  if (alpha < 0 || alpha > 255) throw DataError("alpha must be in [0, 255]");
  return static_cast<std::uint8_t>(alpha);
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::string> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<std::string> keys;
  for (double d : v) keys.push_back(format_number(d));
  return keys;
}

CategoricalColorMap assign_palette(const std::vector<std::string>& keys, int alpha) {
  static constexpr std::uint32_t kPaired[12] = {0xa6cee3, 0x1f78b4, 0xb2df8a, 0x33a02c,
                                                0xfb9a99, 0xe31a1c, 0xfdbf6f, 0xff7f00,
                                                0xcab2d6, 0x6a3d9a, 0xffff99, 0xb15928};
  if (keys.size() > 12) {
    throw DataError("colorbrewer supports at most 12 categories, got " + std::to_string(keys.size()));
  }
  const std::uint8_t a = check_alpha(alpha);
  std::map<std::string, Rgba> colors;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::uint32_t c = kPaired[i];
    colors[keys[i]] = Rgba{static_cast<std::uint8_t>(c >> 16), static_cast<std::uint8_t>(c >> 8),
                           static_cast<std::uint8_t>(c), a};
  }
  return CategoricalColorMap(std::move(colors));
}

CategoricalColorMap sample_map(std::string_view name, const std::vector<std::string>& keys, int alpha) {
  ColorMap cmap(name, alpha);
  std::map<std::string, Rgba> colors;
  const std::size_t k = keys.size();
  for (std::size_t i = 0; i < k; ++i) {
    double t = k > 1 ? static_cast<double>(i) / static_cast<double>(k - 1) : 0.0;
    colors[keys[i]] = cmap.at(t);
  }
  return CategoricalColorMap(std::move(colors));
}

}  // namespace

Scale parse_scale(std::string_view name) {
  if (name == "lin") return Scale::Lin;
  if (name == "log") return Scale::Log;
  if (name == "sqrt") return Scale::Sqrt;
  throw DataError("unknown scale '" + std::string(name) + "' (expected lin, log or sqrt)");
}

std::string_view to_string(Scale s) {
  switch (s) {
    case Scale::Lin:
      return "lin";
    case Scale::Log:
      return "log";
    case Scale::Sqrt:
      return "sqrt";
  }
  return "lin";
}

ColorMap::ColorMap(std::string_view name, int alpha, std::optional<int> levels)
    : name_(name), alpha_(alpha), levels_(levels) {
  check_alpha(alpha);
  if (levels && *levels < 1) throw DataError("levels must be positive");
  bool reversed = name.size() > 2 && name.substr(name.size() - 2) == "_r";
  table_ = builtin_table(reversed ? name.substr(0, name.size() - 2) : name);
  if (reversed) {
    std::reverse(table_.begin(), table_.end());
    for (auto& cp : table_) cp.t = 1.0 - cp.t;
  }
}

ColorMap::ColorMap(std::string name, std::vector<ControlPoint> table, int alpha, std::optional<int> levels)
    : name_(std::move(name)), table_(std::move(table)), alpha_(alpha), levels_(levels) {
  check_alpha(alpha);
  if (table_.size() < 2) throw DataError("a colormap needs at least two control points");
  if (levels && *levels < 1) throw DataError("levels must be positive");
}

double ColorMap::scaled(double value, double max_value, Scale scale) {
  if (!(max_value > 0) || !std::isfinite(max_value)) {
    throw std::invalid_argument("max_value must be finite and positive");
  }
  if (!std::isfinite(value)) throw std::invalid_argument("value must be finite");
  const double v = std::clamp(value, 0.0, max_value);
  switch (scale) {
    case Scale::Lin:
      return v / max_value;
    case Scale::Log:
      return std::log1p(v) / std::log1p(max_value);
    case Scale::Sqrt:
      return std::sqrt(v / max_value);
  }
  return 0.0;
}

Rgba ColorMap::at(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  if (levels_) {
    const int k = *levels_;
    t = std::clamp(std::floor(t * k) / std::max(k - 1, 1), 0.0, 1.0);
  }
  Rgb c = table_.back().color;
  if (t <= table_.front().t) {
    c = table_.front().color;
  } else {
    for (std::size_t i = 1; i < table_.size(); ++i) {
      if (t <= table_[i].t) {
        const ControlPoint& a = table_[i - 1];
        const ControlPoint& b = table_[i];
        const double f = b.t > a.t ? (t - a.t) / (b.t - a.t) : 1.0;
        c = {a.color.r + (b.color.r - a.color.r) * f, a.color.g + (b.color.g - a.color.g) * f,
             a.color.b + (b.color.b - a.color.b) * f};
        break;
      }
    }
  }
  return {to_byte(c.r), to_byte(c.g), to_byte(c.b), static_cast<std::uint8_t>(alpha_)};
}

Rgba ColorMap::to_color(double value, double max_value, Scale scale) const {
  return at(scaled(value, max_value, scale));
}

std::vector<std::string> ColorMap::names() {
  std::vector<std::string> out;
  for (auto n : kBuiltinNames) {
    out.emplace_back(n);
    out.push_back(std::string(n) + "_r");
  }
  return out;
}

Rgba CategoricalColorMap::operator()(const std::string& category) const {
  auto it = colors_.find(category);
  if (it == colors_.end()) throw DataError("unknown category '" + category + "'");
  return it->second;
}

CategoricalColorMap colorbrewer(std::vector<std::string> categories, int alpha) {
  return assign_palette(sorted_unique(std::move(categories)), alpha);
}

CategoricalColorMap colorbrewer(std::vector<double> categories, int alpha) {
  return assign_palette(sorted_unique(std::move(categories)), alpha);
}

CategoricalColorMap create_set_cmap(std::string_view cmap_name, std::vector<std::string> categories,
                                    int alpha) {
  return sample_map(cmap_name, sorted_unique(std::move(categories)), alpha);
}

CategoricalColorMap create_set_cmap(std::string_view cmap_name, std::vector<double> categories,
                                    int alpha) {
  return sample_map(cmap_name, sorted_unique(std::move(categories)), alpha);
}

Rgba named_color(char letter, int alpha) {
  const std::uint8_t a = check_alpha(alpha);
  switch (letter) {
    case 'b':
      return {0, 0, 255, a};
    case 'g':
      return {0, 128, 0, a};
    case 'r':
      return {255, 0, 0, a};
    case 'c':
      return {0, 191, 191, a};
    case 'm':
      return {191, 0, 191, a};
    case 'y':
      return {191, 191, 0, a};
    case 'k':
      return {0, 0, 0, a};
    case 'w':
      return {255, 255, 255, a};
    default:
      throw DataError(std::string("unknown color letter '") + letter + "'");
  }
}

}  // namespace terramap
