#include "terramap/hotspots.hpp"

#include <algorithm>
#include <cmath>

#include "terramap/error.hpp"
#include "terramap/font.hpp"

namespace terramap {

namespace {

constexpr std::int64_t kMaxBucketsPerRect = 64;

void fill_rect(Image& img, int x, int y, int w, int h, Rgba c) {
  const int x0 = std::max(x, 0), x1 = std::min(x + w, img.width());
  const int y0 = std::max(y, 0), y1 = std::min(y + h, img.height());
  for (int j = y0; j < y1; ++j) {
    std::uint8_t* row = img.row(j);
    for (int i = x0; i < x1; ++i) blend_pixel(row + static_cast<std::size_t>(i) * 4, c);
  }
}

// Text box with a translucent dark background.
void text_box(Image& img, int x, int y, const std::string& text) {
  const int pad = 3;
  fill_rect(img, x, y, text_width(text) + 2 * pad, kGlyphSize + 2 * pad, Rgba{0, 0, 0, 170});
  draw_text(img, x + pad, y + pad, text, Rgba{255, 255, 255, 255});
}

}  // namespace

HotspotIndex::HotspotIndex(double bucket_px) : bucket_px_(bucket_px) {
  if (!(bucket_px > 0)) throw DataError("hotspot bucket size must be positive");
}

void HotspotIndex::add(const Rect& rect, std::string tooltip) {
  if (!std::isfinite(rect.x) || !std::isfinite(rect.y) || !(rect.w > 0) || !(rect.h > 0)) return;
  const auto id = static_cast<std::uint32_t>(rects_.size());
  rects_.push_back(rect);
  tooltips_.push_back(std::move(tooltip));
  const auto bx0 = static_cast<std::int64_t>(std::floor(rect.x / bucket_px_));
  const auto by0 = static_cast<std::int64_t>(std::floor(rect.y / bucket_px_));
  const auto bx1 = static_cast<std::int64_t>(std::floor((rect.x + rect.w) / bucket_px_));
  const auto by1 = static_cast<std::int64_t>(std::floor((rect.y + rect.h) / bucket_px_));
  if ((bx1 - bx0 + 1) * (by1 - by0 + 1) > kMaxBucketsPerRect) {
    large_.push_back(id);
    return;
  }
  for (auto by = by0; by <= by1; ++by) {
    for (auto bx = bx0; bx <= bx1; ++bx) buckets_[key(bx, by)].push_back(id);
  }
}

std::optional<std::string> HotspotIndex::query(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  std::int64_t best = -1;
  const auto bx = static_cast<std::int64_t>(std::floor(x / bucket_px_));
  const auto by = static_cast<std::int64_t>(std::floor(y / bucket_px_));
  if (auto it = buckets_.find(key(bx, by)); it != buckets_.end()) {
    const auto& ids = it->second;
    for (auto i = ids.rbegin(); i != ids.rend(); ++i) {
      if (rects_[*i].contains(x, y)) {
        best = *i;
        break;
      }
    }
  }
  for (auto i = large_.rbegin(); i != large_.rend() && static_cast<std::int64_t>(*i) > best; ++i) {
    if (rects_[*i].contains(x, y)) {
      best = *i;
      break;
    }
  }
  if (best < 0) return std::nullopt;
  return tooltips_[static_cast<std::size_t>(best)];
}

void HotspotIndex::clear() {
  rects_.clear();
  tooltips_.clear();
  buckets_.clear();
  large_.clear();
}

void UiManager::begin_frame() {
  status_.clear();
  tooltip_.reset();
}

void UiManager::draw(RenderTarget& target, const MouseState& mouse) const {
  Image& img = target.framebuffer();
  const int line_h = kGlyphSize + 8;
  int y = 4;
  for (const auto& line : status_) {
    text_box(img, 4, y, line);
    y += line_h;
  }
  if (!attribution_.empty()) {
    const int w = text_width(attribution_) + 6;
    text_box(img, img.width() - w - 2, img.height() - (kGlyphSize + 6) - 2, attribution_);
  }
  if (tooltip_ && mouse.inside) {
    const int w = text_width(*tooltip_) + 6, h = kGlyphSize + 6;
    int tx = static_cast<int>(mouse.x) + 8;
    int ty = static_cast<int>(mouse.y) - 8 - h;
    tx = std::clamp(tx, 0, std::max(0, img.width() - w));
    ty = std::clamp(ty, 0, std::max(0, img.height() - h));
    text_box(img, tx, ty, *tooltip_);
  }
}

}  // namespace terramap
