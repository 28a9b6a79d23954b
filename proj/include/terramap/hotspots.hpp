#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "terramap/render.hpp"

namespace terramap {

struct Rect {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  bool contains(double px, double py) const { return px >= x && px < x + w && py >= y && py < y + h; }
};

// Screen rectangles with tooltips, bucketed on a square grid. A query
// returns the last-registered rectangle containing the point.
class HotspotIndex {
 public:
  explicit HotspotIndex(double bucket_px = 64);

  void add(const Rect& rect, std::string tooltip);
  std::optional<std::string> query(double x, double y) const;
  void clear();

  std::size_t size() const noexcept { return rects_.size(); }
  double bucket_px() const noexcept { return bucket_px_; }

 private:
  static std::int64_t key(std::int64_t bx, std::int64_t by) { return (bx << 32) ^ (by & 0xffffffff); }

  double bucket_px_;
  std::vector<Rect> rects_;
  std::vector<std::string> tooltips_;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint32_t> large_;  // rectangles spanning many buckets
};

struct MouseState {
  double x = -1;
  double y = -1;
  bool inside = false;
};

// On-screen text drawn above all layers: status lines (top left), the
// tooltip near the cursor and the attribution (bottom right).
class UiManager {
 public:
  void begin_frame();

  void info(std::string line) { status_.push_back(std::move(line)); }
  void tooltip(std::string text) { tooltip_ = std::move(text); }
  void set_attribution(std::string text) { attribution_ = std::move(text); }

  const std::vector<std::string>& status() const noexcept { return status_; }
  const std::optional<std::string>& current_tooltip() const noexcept { return tooltip_; }
  const std::string& attribution() const noexcept { return attribution_; }

  void draw(RenderTarget& target, const MouseState& mouse) const;

 private:
  std::vector<std::string> status_;
  std::optional<std::string> tooltip_;
  std::string attribution_;
};

}  // namespace terramap
