#include "terramap/render.hpp"

#include <algorithm>
#include <cmath>

#include "terramap/error.hpp"

namespace terramap {

namespace {

bool finite(double x, double y) { return std::isfinite(x) && std::isfinite(y); }

// Drops the closing vertex and consecutive duplicates.
std::vector<Point2> clean_ring(std::span<const Point2> ring) {
  std::vector<Point2> out;
  out.reserve(ring.size());
  for (const Point2& p : ring) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool simple_cleaned(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges share a vertex
      if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool inside_or_on(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
  return orient2d(a, b, p) >= 0 && orient2d(b, c, p) >= 0 && orient2d(c, a, p) >= 0;
}

}  // namespace

RenderTarget::RenderTarget(int width, int height, TargetKind kind)
    : framebuffer_(width, height, Rgba{255, 255, 255, 255}), kind_(kind) {
  if (width <= 0 || height <= 0) throw DataError("render target size must be positive");
}

void RenderTarget::clear(Rgba color) { framebuffer_.fill(color); }

void RenderTarget::record_call(PrimitiveClass cls) {
  ++stats_.calls;
  switch (cls) {
    case PrimitiveClass::Fills:
      ++stats_.fills;
      break;
    case PrimitiveClass::Lines:
      ++stats_.lines;
      break;
    case PrimitiveClass::Points:
      ++stats_.points;
      break;
    case PrimitiveClass::Sprites:
      ++stats_.sprites;
      break;
  }
}

bool is_simple_polygon(std::span<const Point2> ring) { return simple_cleaned(clean_ring(ring)); }

std::vector<std::array<Point2, 3>> triangulate_polygon(std::span<const Point2> ring) {
  std::vector<Point2> v = clean_ring(ring);
  std::vector<std::array<Point2, 3>> out;
  for (const Point2& p : v) {
    if (!finite(p.x, p.y)) return out;
  }
  if (!simple_cleaned(v)) return out;
  if (polygon_area(v) < 0) std::reverse(v.begin(), v.end());

  const std::size_t n = v.size();
  bool convex = true;
  for (std::size_t i = 0; i < n && convex; ++i) {
    convex = orient2d(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0;
  }
  if (convex) {
    for (std::size_t i = 1; i + 1 < n; ++i) out.push_back({v[0], v[i], v[i + 1]});
    return out;
  }

  std::vector<int> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  std::size_t i = 0;
  std::size_t misses = 0;
  while (idx.size() > 3) {
    const std::size_t m = idx.size();
    const Point2& a = v[idx[(i + m - 1) % m]];
    const Point2& b = v[idx[i % m]];
    const Point2& c = v[idx[(i + 1) % m]];
    const int turn = orient2d(a, b, c);
    bool ear = turn > 0;
    for (std::size_t k = 0; ear && k < m; ++k) {
      const Point2& p = v[idx[k]];
      if (p == a || p == b || p == c) continue;
      if (inside_or_on(a, b, c, p)) ear = false;
    }
    if (ear || turn == 0) {
      if (ear) out.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i % m));
      misses = 0;
      if (i >= idx.size()) i = 0;
      continue;
    }
    if (++misses > m) return {};
    i = (i + 1) % m;
  }
  if (orient2d(v[idx[0]], v[idx[1]], v[idx[2]]) > 0) out.push_back({v[idx[0]], v[idx[1]], v[idx[2]]});
  return out;
}

void BatchPainter::points(std::span<const double> x, std::span<const double> y, float size) {
  if (x.size() != y.size()) throw DataError("points: x and y differ in length");
  points_.reserve(points_.size() + x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (finite(x[i], y[i])) points_.push_back({x[i], y[i], size, color_});
  }
}

void BatchPainter::point(double x, double y, float size) {
  if (finite(x, y)) points_.push_back({x, y, size, color_});
}

void BatchPainter::lines(std::span<const double> x0, std::span<const double> y0,
                         std::span<const double> x1, std::span<const double> y1, float width) {
  if (x0.size() != y0.size() || x0.size() != x1.size() || x0.size() != y1.size()) {
    throw DataError("lines: coordinate arrays differ in length");
  }
  lines_.reserve(lines_.size() + x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) line(x0[i], y0[i], x1[i], y1[i], width);
}

void BatchPainter::line(double x0, double y0, double x1, double y1, float width) {
  if (finite(x0, y0) && finite(x1, y1)) lines_.push_back({x0, y0, x1, y1, width, color_});
}

void BatchPainter::linestrip(std::span<const Point2> vertices, float width, bool closed) {
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    line(vertices[i].x, vertices[i].y, vertices[i + 1].x, vertices[i + 1].y, width);
  }
  if (closed && vertices.size() > 2 && !(vertices.front() == vertices.back())) {
    line(vertices.back().x, vertices.back().y, vertices.front().x, vertices.front().y, width);
  }
}

void BatchPainter::triangle(const Point2& a, const Point2& b, const Point2& c) {
  if (finite(a.x, a.y) && finite(b.x, b.y) && finite(c.x, c.y)) {
    triangles_.push_back({a.x, a.y, b.x, b.y, c.x, c.y, color_});
  }
}

bool BatchPainter::poly_fill(std::span<const Point2> ring) {
  auto tris = triangulate_polygon(ring);
  if (tris.empty()) {
    if (clean_ring(ring).size() >= 3) {
      ++fallbacks_;
      poly_outline(ring);
      return false;
    }
    return true;
  }
  for (const auto& t : tris) triangle(t[0], t[1], t[2]);
  return true;
}

void BatchPainter::poly_outline(std::span<const Point2> ring, float width) {
  linestrip(ring, width, true);
}

void BatchPainter::sprites(std::shared_ptr<const Image> image, std::span<const double> x,
                           std::span<const double> y, double scale) {
  if (!image) throw DataError("sprites: no image");
  if (x.size() != y.size()) throw DataError("sprites: x and y differ in length");
  const double hw = image->width() * scale / 2.0, hh = image->height() * scale / 2.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (finite(x[i], y[i])) sprites_.push_back({image.get(), x[i] - hw, y[i] - hh, scale, color_.a});
  }
  images_.push_back(std::move(image));
}

void BatchPainter::image(std::shared_ptr<const Image> image, double x, double y, double scale,
                         std::uint8_t alpha) {
  if (!image) throw DataError("image: no image");
  if (!finite(x, y)) return;
  sprites_.push_back({image.get(), x, y, scale, alpha});
  images_.push_back(std::move(image));
}

void BatchPainter::batch_draw(RenderTarget& target) const {
  Image& fb = target.framebuffer();
  const bool serial = target.serial();
  if (!triangles_.empty()) {
    serial ? kernels::serial::draw_triangles(fb, triangles_) : kernels::parallel::draw_triangles(fb, triangles_);
    target.record_call(PrimitiveClass::Fills);
  }
  if (!lines_.empty()) {
    serial ? kernels::serial::draw_lines(fb, lines_) : kernels::parallel::draw_lines(fb, lines_);
    target.record_call(PrimitiveClass::Lines);
  }
  if (!points_.empty()) {
    serial ? kernels::serial::draw_points(fb, points_) : kernels::parallel::draw_points(fb, points_);
    target.record_call(PrimitiveClass::Points);
  }
  if (!sprites_.empty()) {
    serial ? kernels::serial::draw_sprites(fb, sprites_) : kernels::parallel::draw_sprites(fb, sprites_);
    target.record_call(PrimitiveClass::Sprites);
  }
}

void BatchPainter::clear() {
  points_.clear();
  lines_.clear();
  triangles_.clear();
  sprites_.clear();
  images_.clear();
  fallbacks_ = 0;
}

}  // namespace terramap
