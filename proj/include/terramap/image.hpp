#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace terramap {

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

inline constexpr Rgba kTransparent{0, 0, 0, 0};

// 8-bit RGBA raster, row-major, top-left origin.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgba fill = kTransparent);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  Rgba pixel(int x, int y) const {
    const std::uint8_t* p = &data_[(static_cast<std::size_t>(y) * width_ + x) * 4];
    return {p[0], p[1], p[2], p[3]};
  }
  void set_pixel(int x, int y, Rgba c) {
    std::uint8_t* p = &data_[(static_cast<std::size_t>(y) * width_ + x) * 4];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
    p[3] = c.a;
  }
  std::uint8_t* row(int y) { return &data_[static_cast<std::size_t>(y) * width_ * 4]; }
  const std::uint8_t* row(int y) const { return &data_[static_cast<std::size_t>(y) * width_ * 4]; }

  void fill(Rgba c);

  std::span<const std::uint8_t> bytes() const noexcept { return data_; }
  std::span<std::uint8_t> bytes() noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Source-over blend of `src` onto the pixel at `dst` (4 bytes).
inline void blend_pixel(std::uint8_t* dst, Rgba src) {
  const unsigned a = src.a;
  if (a == 255) {
    dst[0] = src.r;
    dst[1] = src.g;
    dst[2] = src.b;
    dst[3] = 255;
    return;
  }
  if (a == 0) return;
  const unsigned ia = 255 - a;
  dst[0] = static_cast<std::uint8_t>((src.r * a + dst[0] * ia + 127) / 255);
  dst[1] = static_cast<std::uint8_t>((src.g * a + dst[1] * ia + 127) / 255);
  dst[2] = static_cast<std::uint8_t>((src.b * a + dst[2] * ia + 127) / 255);
  dst[3] = static_cast<std::uint8_t>(a + (dst[3] * ia + 127) / 255);
}

// PNG or JPEG, chosen by magic bytes. Throws ImageError.
Image decode_image(std::span<const std::uint8_t> bytes);
Image read_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Image& image);
void write_png(const Image& image, const std::filesystem::path& path);

// Nearest-neighbour resample.
Image resize_nearest(const Image& image, int width, int height);

}  // namespace terramap
