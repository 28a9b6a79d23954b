#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "terramap/image.hpp"

namespace terramap {

enum class Scale { Lin, Log, Sqrt };

Scale parse_scale(std::string_view name);
std::string_view to_string(Scale s);

struct Rgb {
  double r, g, b;  // [0, 1]
};

struct ControlPoint {
  double t;  // position in [0, 1], nondecreasing along the table
  Rgb color;
};

// Continuous value -> RGBA map, piecewise linear over a control table.
class ColorMap {
 public:
  // Throws DataError for an unknown name. Appending "_r" reverses a map.
  explicit ColorMap(std::string_view name, int alpha = 255, std::optional<int> levels = std::nullopt);
  ColorMap(std::string name, std::vector<ControlPoint> table, int alpha = 255,
           std::optional<int> levels = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  int alpha() const noexcept { return alpha_; }
  std::optional<int> levels() const noexcept { return levels_; }
  const std::vector<ControlPoint>& table() const noexcept { return table_; }

  // Throws std::invalid_argument when max_value <= 0 or value is not finite.
  Rgba to_color(double value, double max_value, Scale scale) const;

  // Normalized position before quantization.
  static double scaled(double value, double max_value, Scale scale);
  // Color at t in [0, 1], quantized if levels are set.
  Rgba at(double t) const;

  static std::vector<std::string> names();

 private:
  std::string name_;
  std::vector<ControlPoint> table_;
  int alpha_;
  std::optional<int> levels_;
};

// Category key -> color. Keys are the categories' text form.
class CategoricalColorMap {
 public:
  CategoricalColorMap() = default;
  explicit CategoricalColorMap(std::map<std::string, Rgba> colors) : colors_(std::move(colors)) {}

  // Throws DataError for an unknown category.
  Rgba operator()(const std::string& category) const;
  bool contains(const std::string& category) const { return colors_.count(category) != 0; }
  std::size_t size() const noexcept { return colors_.size(); }
  const std::map<std::string, Rgba>& colors() const noexcept { return colors_; }

 private:
  std::map<std::string, Rgba> colors_;
};

// Fixed 12-entry qualitative palette assigned in category sort order.
// Throws DataError for more than 12 distinct categories.
CategoricalColorMap colorbrewer(std::vector<std::string> categories, int alpha = 255);
CategoricalColorMap colorbrewer(std::vector<double> categories, int alpha = 255);

// Samples the continuous map at k evenly spaced positions, t = i / (k - 1).
CategoricalColorMap create_set_cmap(std::string_view cmap_name, std::vector<std::string> categories,
                                    int alpha = 255);
CategoricalColorMap create_set_cmap(std::string_view cmap_name, std::vector<double> categories,
                                    int alpha = 255);

// Single-letter matplotlib-style colors: b g r c m y k w.
Rgba named_color(char letter, int alpha = 255);

}  // namespace terramap
