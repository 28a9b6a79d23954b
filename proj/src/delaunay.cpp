#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "terramap/error.hpp"
#include "terramap/geometry.hpp"

namespace terramap {

namespace {

// The super-triangle is kept symbolic: a single vertex at infinity. A ghost
// triangle (a, b, G) stands for the unbounded region beyond hull edge a-b;
// its "circumcircle" is the open half-plane left of a->b.
constexpr int kGhost = -1;

struct Tri {
  std::array<int, 3> v;  // CCW
  std::array<int, 3> n;  // n[i] is the neighbour across the edge opposite v[i]
  bool alive = true;

  bool ghost() const { return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost; }
};

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

bool strictly_between(const Point2& a, const Point2& b, const Point2& p) {
  return (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y) > 0 &&
         (p.x - b.x) * (a.x - b.x) + (p.y - b.y) * (a.y - b.y) > 0;
}

class Builder {
 public:
  explicit Builder(const std::vector<Point2>& pts) : pts_(pts) {}

  bool start(int a, int b, int c) {
    int o = orient2d(pts_[a], pts_[b], pts_[c]);
    if (o == 0) return false;
    if (o < 0) std::swap(b, c);
    int t0 = alloc({a, b, c});
    int g[3];
    for (int i = 0; i < 3; ++i) {
      const auto& v = tris_[t0].v;
      g[i] = alloc({v[(i + 2) % 3], v[(i + 1) % 3], kGhost});
    }
    // Link the four initial triangles by shared vertex pairs.
    int ids[4] = {t0, g[0], g[1], g[2]};
    for (int x : ids) {
      for (int e = 0; e < 3; ++e) {
        int p = tris_[x].v[(e + 1) % 3], q = tris_[x].v[(e + 2) % 3];
        for (int y : ids) {
          if (y == x) continue;
          for (int f = 0; f < 3; ++f) {
            if (tris_[y].v[(f + 1) % 3] == q && tris_[y].v[(f + 2) % 3] == p) tris_[x].n[e] = y;
          }
        }
      }
    }
    last_ = t0;
    return true;
  }

  void insert(int p) {
    const int seed = locate(pts_[p]);
    build_cavity(seed, p);
    retriangulate(p);
  }

  void collect(std::vector<std::array<int, 3>>& out) const {
    for (const Tri& t : tris_) {
      if (t.alive && !t.ghost()) out.push_back(t.v);
    }
  }

 private:
  struct BoundaryEdge {
    int u, v;      // CCW as seen from inside the cavity
    int inside;    // cavity triangle owning the edge
    int outside;   // neighbour across it
  };

  int alloc(std::array<int, 3> v) {
    Tri t{v, {-1, -1, -1}, true};
    if (!free_.empty()) {
      int id = free_.back();
      free_.pop_back();
      tris_[id] = t;
      return id;
    }
    tris_.push_back(t);
    mark_.push_back(0);
    return static_cast<int>(tris_.size()) - 1;
  }

  bool in_conflict(int t, const Point2& p) const {
    const Tri& tri = tris_[t];
    for (int i = 0; i < 3; ++i) {
      if (tri.v[i] == kGhost) {
        const Point2& a = pts_[tri.v[(i + 1) % 3]];
        const Point2& b = pts_[tri.v[(i + 2) % 3]];
        int o = orient2d(a, b, p);
        return o > 0 || (o == 0 && strictly_between(a, b, p));
      }
    }
    return incircle(pts_[tri.v[0]], pts_[tri.v[1]], pts_[tri.v[2]], p) > 0;
  }

  // Visibility walk from the most recent triangle. Returns a triangle in
  // conflict with p: either the real triangle containing it or a ghost.
  int locate(const Point2& p) {
    int t = last_;
    if (!tris_[t].alive) t = first_alive();
    if (tris_[t].ghost()) {
      for (int i = 0; i < 3; ++i) {
        if (tris_[t].v[i] == kGhost) t = tris_[t].n[i];
      }
    }
    const std::size_t max_steps = 64 + 4 * static_cast<std::size_t>(std::sqrt(static_cast<double>(tris_.size())));
    int previous = -1;
    for (std::size_t step = 0; step < max_steps * 8; ++step) {
      const Tri& tri = tris_[t];
      rng_ = rng_ * 6364136223846793005ULL + 1442695040888963407ULL;
      const int r = static_cast<int>((rng_ >> 33) % 3);
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int i = (r + k) % 3;
        if (tri.n[i] == previous) continue;
        const Point2& a = pts_[tri.v[(i + 1) % 3]];
        const Point2& b = pts_[tri.v[(i + 2) % 3]];
        if (orient2d(a, b, p) < 0) {
          next = tri.n[i];
          break;
        }
      }
      if (next < 0) return t;
      if (tris_[next].ghost()) return next;
      previous = t;
      t = next;
    }
    // Walk did not settle (inconsistent predicates); fall back to a scan.
    int fallback = -1;
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (!tris_[i].alive || !in_conflict(i, p)) continue;
      if (!tris_[i].ghost()) return i;
      if (fallback < 0) fallback = i;
    }
    if (fallback < 0) throw GeometryError("point location failed during triangulation");
    return fallback;
  }

  int first_alive() const {
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (tris_[i].alive) return i;
    }
    throw GeometryError("empty triangulation");
  }

  // Collects the conflict region around `seed`, shrinking it until every
  // boundary edge is strictly visible from p so the new fan is valid.
  void build_cavity(int seed, int p) {
    const Point2& pt = pts_[p];
    excluded_.clear();
    for (int attempt = 0;; ++attempt) {
      ++stamp_;
      cavity_.clear();
      boundary_.clear();
      cavity_.push_back(seed);
      mark_[seed] = stamp_;
      for (std::size_t head = 0; head < cavity_.size(); ++head) {
        const int t = cavity_[head];
        for (int i = 0; i < 3; ++i) {
          const int nb = tris_[t].n[i];
          if (mark_[nb] == stamp_) continue;
          const bool excluded = std::find(excluded_.begin(), excluded_.end(), nb) != excluded_.end();
          if (!excluded && in_conflict(nb, pt)) {
            mark_[nb] = stamp_;
            cavity_.push_back(nb);
          }
        }
      }
      for (int t : cavity_) {
        for (int i = 0; i < 3; ++i) {
          const int nb = tris_[t].n[i];
          if (mark_[nb] == stamp_) continue;
          boundary_.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], t, nb});
        }
      }
      int bad = -1;
      for (const BoundaryEdge& e : boundary_) {
        if (e.u == kGhost || e.v == kGhost || e.inside == seed) continue;
        if (orient2d(pts_[e.u], pts_[e.v], pt) <= 0) {
          bad = e.inside;
          break;
        }
      }
      if (bad < 0 || attempt > 64) return;
      excluded_.push_back(bad);
    }
  }

  void retriangulate(int p) {
    for (int t : cavity_) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    const std::size_t key_space = pts_.size() + 1;
    if (start_of_.size() < key_space) {
      start_of_.assign(key_space, -1);
      end_of_.assign(key_space, -1);
    }
    created_.clear();
    for (const BoundaryEdge& e : boundary_) {
      const int t = alloc({e.u, e.v, p});
      tris_[t].n[2] = e.outside;
      Tri& out = tris_[e.outside];
      for (int j = 0; j < 3; ++j) {
        const int a = out.v[(j + 1) % 3], b = out.v[(j + 2) % 3];
        if (a == e.v && b == e.u) out.n[j] = t;
      }
      start_of_[static_cast<std::size_t>(e.u + 1)] = t;
      end_of_[static_cast<std::size_t>(e.v + 1)] = t;
      created_.push_back(t);
    }
    for (int t : created_) {
      Tri& tri = tris_[t];
      // Opposite u: edge (v, p), owned by the fan triangle starting at v.
      tri.n[0] = start_of_[static_cast<std::size_t>(tri.v[1] + 1)];
      // Opposite v: edge (p, u), owned by the fan triangle ending at u.
      tri.n[1] = end_of_[static_cast<std::size_t>(tri.v[0] + 1)];
    }
    for (int t : created_) {
      start_of_[static_cast<std::size_t>(tris_[t].v[0] + 1)] = -1;
      end_of_[static_cast<std::size_t>(tris_[t].v[1] + 1)] = -1;
      if (!tris_[t].ghost()) last_ = t;
    }
    if (tris_[last_].ghost() || !tris_[last_].alive) last_ = created_.front();
  }

  const std::vector<Point2>& pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
  std::uint64_t rng_ = 0x853c49e6748fea9bULL;
  std::vector<int> cavity_;
  std::vector<int> excluded_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<int> start_of_, end_of_, created_;
};

}  // namespace

std::vector<std::pair<int, int>> Triangulation::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(triangles.size() * 3);
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      int a = t[i], b = t[(i + 1) % 3];
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Triangulation delaunay(std::span<const Point2> input) {
  Triangulation result;
  result.input_to_point.assign(input.size(), -1);

  std::vector<int> idx;
  idx.reserve(input.size());
  for (int i = 0; i < static_cast<int>(input.size()); ++i) {
    if (std::isfinite(input[i].x) && std::isfinite(input[i].y)) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return input[a].x < input[b].x || (input[a].x == input[b].x && input[a].y < input[b].y);
  });
  for (int i : idx) {
    if (result.points.empty() || !(result.points.back() == input[i])) result.points.push_back(input[i]);
    result.input_to_point[i] = static_cast<int>(result.points.size()) - 1;
  }
  const auto& pts = result.points;
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw GeometryError("triangulation needs at least 3 distinct points");

  // Hilbert order keeps consecutive insertions close, so walks stay short.
  double xmin = pts[0].x, xmax = xmin, ymin = pts[0].y, ymax = ymin;
  for (const Point2& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double scale = span > 0 ? 65535.0 / span : 0.0;
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto hx = static_cast<std::uint32_t>((pts[i].x - xmin) * scale);
    auto hy = static_cast<std::uint32_t>((pts[i].y - ymin) * scale);
    keys[static_cast<std::size_t>(i)] = hilbert_index(hx, hy, 16);
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });

  int third = -1;
  for (int k = 2; k < n; ++k) {
    if (orient2d(pts[order[0]], pts[order[1]], pts[order[k]]) != 0) {
      third = k;
      break;
    }
  }
  if (third < 0) {
    result.status = Triangulation::Status::Collinear;
    return result;
  }

  Builder builder(pts);
  builder.start(order[0], order[1], order[third]);
  for (int k = 2; k < n; ++k) {
    if (k != third) builder.insert(order[k]);
  }
  builder.collect(result.triangles);
  return result;
}

}  // namespace terramap
