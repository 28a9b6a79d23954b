#include <algorithm>
#include <cmath>

#include "terramap/error.hpp"
#include "terramap/geometry.hpp"

namespace terramap {

namespace {

// Keeps the part of `poly` closer to p than to q (the half-plane bounded by
// their perpendicular bisector).
std::vector<Point2> clip_bisector(const std::vector<Point2>& poly, const Point2& p, const Point2& q) {
  const double nx = q.x - p.x, ny = q.y - p.y;
  const double mx = 0.5 * (p.x + q.x), my = 0.5 * (p.y + q.y);
  auto side = [&](const Point2& v) { return (v.x - mx) * nx + (v.y - my) * ny; };
  std::vector<Point2> out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    const double sa = side(a), sb = side(b);
    if (sa <= 0) out.push_back(a);
    if ((sa < 0 && sb > 0) || (sa > 0 && sb < 0)) {
      const double t = sa / (sa - sb);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

std::vector<Point2> rect_ring(const Viewport& r) {
  return {{r.x, r.y}, {r.x + r.w, r.y}, {r.x + r.w, r.y + r.h}, {r.x, r.y + r.h}};
}

}  // namespace

VoronoiDiagram voronoi(std::span<const Point2> seeds, const Viewport& clip_rect) {
  if (seeds.empty()) throw GeometryError("voronoi needs at least one seed");
  if (!(clip_rect.w > 0) || !(clip_rect.h > 0)) throw GeometryError("voronoi clip rectangle is empty");

  VoronoiDiagram out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.clip_rect = clip_rect;
  out.cells.resize(seeds.size());

  // Deduplicate through the triangulation's mapping so both agree exactly.
  std::vector<Point2> distinct;
  std::vector<int> input_to_point(seeds.size(), -1);
  std::vector<std::vector<int>> neighbours;
  {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
      if (std::isfinite(seeds[i].x) && std::isfinite(seeds[i].y)) idx.push_back(i);
    }
    if (idx.empty()) throw GeometryError("voronoi needs at least one finite seed");
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return seeds[a].x < seeds[b].x || (seeds[a].x == seeds[b].x && seeds[a].y < seeds[b].y);
    });
    for (int i : idx) {
      if (distinct.empty() || !(distinct.back() == seeds[i])) distinct.push_back(seeds[i]);
      input_to_point[i] = static_cast<int>(distinct.size()) - 1;
    }
  }
  const int n = static_cast<int>(distinct.size());
  neighbours.resize(static_cast<std::size_t>(n));

  auto chain = [&]() {
    // Collinear seeds sorted along their line: neighbours are adjacent ones.
    for (int i = 0; i + 1 < n; ++i) {
      neighbours[i].push_back(i + 1);
      neighbours[i + 1].push_back(i);
    }
  };

  if (n >= 3) {
    Triangulation tri = delaunay(distinct);
    if (tri.status == Triangulation::Status::Collinear) {
      chain();
    } else {
      for (auto [a, b] : tri.edges()) {
        neighbours[a].push_back(b);
        neighbours[b].push_back(a);
      }
      out.vertices.reserve(tri.triangles.size());
      for (const auto& t : tri.triangles) {
        out.vertices.push_back(circumcenter(tri.points[t[0]], tri.points[t[1]], tri.points[t[2]]));
      }
    }
  } else {
    chain();
  }

  const std::vector<Point2> rect = rect_ring(clip_rect);
  std::vector<std::vector<Point2>> cells(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Point2> cell = rect;
    for (int j : neighbours[i]) {
      cell = clip_bisector(cell, distinct[i], distinct[j]);
      if (cell.empty()) break;
    }
    cells[i] = std::move(cell);
  }
  std::vector<int> first(static_cast<std::size_t>(n), -1);
  out.owner.assign(seeds.size(), -1);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const int k = input_to_point[i];
    if (k < 0) continue;
    if (first[k] < 0) first[k] = static_cast<int>(i);
    out.owner[i] = first[k];
    out.cells[i] = cells[k];
  }
  return out;
}

}  // namespace terramap
