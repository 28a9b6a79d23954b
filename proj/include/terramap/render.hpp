#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "terramap/geometry.hpp"
#include "terramap/image.hpp"
#include "terramap/kernels.hpp"

namespace terramap {

enum class TargetKind { Window, Offscreen };

enum class PrimitiveClass { Fills, Lines, Points, Sprites };

struct DrawStats {
  std::size_t calls = 0;
  std::size_t fills = 0;
  std::size_t lines = 0;
  std::size_t points = 0;
  std::size_t sprites = 0;
};

// Software framebuffer device. Window and offscreen targets share it; the
// window backend presents the framebuffer after each frame.
class RenderTarget {
 public:
  RenderTarget(int width, int height, TargetKind kind = TargetKind::Offscreen);

  int width() const noexcept { return framebuffer_.width(); }
  int height() const noexcept { return framebuffer_.height(); }
  TargetKind kind() const noexcept { return kind_; }

  void clear(Rgba color);
  Image& framebuffer() noexcept { return framebuffer_; }
  const Image& framebuffer() const noexcept { return framebuffer_; }
  Image read_pixels() const { return framebuffer_; }

  void record_call(PrimitiveClass cls);
  const DrawStats& stats() const noexcept { return stats_; }
  void reset_stats() { stats_ = {}; }

  // Use the serial reference rasterizers instead of the parallel ones.
  void set_serial(bool serial) noexcept { serial_ = serial; }
  bool serial() const noexcept { return serial_; }

 private:
  Image framebuffer_;
  TargetKind kind_;
  DrawStats stats_;
  bool serial_ = false;
};

// Accumulates primitives by class. Each primitive keeps the color current
// when it was added. batch_draw flushes fills, lines, points and sprites in
// that order, one draw call per non-empty class, without consuming buffers.
class BatchPainter {
 public:
  void set_color(Rgba color) noexcept { color_ = color; }
  Rgba color() const noexcept { return color_; }

  // NaN coordinates are skipped.
  void points(std::span<const double> x, std::span<const double> y, float size = 2);
  void point(double x, double y, float size = 2);
  void lines(std::span<const double> x0, std::span<const double> y0, std::span<const double> x1,
             std::span<const double> y1, float width = 1);
  void line(double x0, double y0, double x1, double y1, float width = 1);
  void linestrip(std::span<const Point2> vertices, float width = 1, bool closed = false);
  void triangle(const Point2& a, const Point2& b, const Point2& c);

  // Ear-clipping fill of a simple polygon (closing vertex optional). A
  // self-intersecting ring falls back to its outline; returns false then.
  bool poly_fill(std::span<const Point2> ring);
  void poly_outline(std::span<const Point2> ring, float width = 1);

  // Sprites are centered on (x, y); `scale` multiplies the image size.
  void sprites(std::shared_ptr<const Image> image, std::span<const double> x,
               std::span<const double> y, double scale = 1);
  // Textured quad with its top-left corner at (x, y).
  void image(std::shared_ptr<const Image> image, double x, double y, double scale = 1,
             std::uint8_t alpha = 255);

  void batch_draw(RenderTarget& target) const;
  void clear();

  std::size_t point_count() const noexcept { return points_.size(); }
  std::size_t line_count() const noexcept { return lines_.size(); }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }
  std::size_t sprite_count() const noexcept { return sprites_.size(); }
  std::size_t fallback_count() const noexcept { return fallbacks_; }

  void reserve_points(std::size_t n) { points_.reserve(n); }
  void reserve_lines(std::size_t n) { lines_.reserve(n); }

 private:
  Rgba color_{0, 0, 0, 255};
  std::vector<kernels::PointPrim> points_;
  std::vector<kernels::LinePrim> lines_;
  std::vector<kernels::TrianglePrim> triangles_;
  std::vector<kernels::SpritePrim> sprites_;
  std::vector<std::shared_ptr<const Image>> images_;
  std::size_t fallbacks_ = 0;
};

// Ear clipping. Empty when the ring is degenerate or self-intersecting.
std::vector<std::array<Point2, 3>> triangulate_polygon(std::span<const Point2> ring);

bool is_simple_polygon(std::span<const Point2> ring);

}  // namespace terramap
