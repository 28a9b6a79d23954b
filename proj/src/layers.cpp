#include "terramap/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "terramap/error.hpp"

namespace terramap {

namespace {

Viewport screen_viewport(const Projection& proj) {
  return {0, 0, static_cast<double>(proj.view().screen_w), static_cast<double>(proj.view().screen_h)};
}

void check_rows(const DataTable& data, const std::string& lat, const std::string& lon) {
  if (data.nrows() > 0) data.require_geographic(lat, lon);
}

void add_row_hotspots(HotspotIndex& index, const DataTable& data, const ScreenCoords& xy, double size,
                      const RowTooltip& tooltip) {
  if (!tooltip) return;
  const double half = size / 2;
  for (std::size_t i = 0; i < xy.x.size(); ++i) {
    if (!std::isfinite(xy.x[i]) || !std::isfinite(xy.y[i])) continue;
    index.add({xy.x[i] - half, xy.y[i] - half, size, size}, tooltip(data.row(i)));
  }
}

}  // namespace

ScreenCoords project_rows(const DataTable& table, const Projection& proj, const std::string& lat,
                          const std::string& lon) {
  if (table.nrows() == 0) return {};
  return proj.lonlat_to_screen(table.numeric(lon), table.numeric(lat));
}

std::optional<BoundingBox> rows_bbox(const DataTable& table, const std::string& lat, const std::string& lon) {
  if (table.nrows() == 0) return std::nullopt;
  try {
    return BoundingBox::from_points(table.numeric(lon), table.numeric(lat));
  } catch (const DataError&) {
    return std::nullopt;
  }
}

void BatchLayer::draw(const Projection&, RenderTarget& target, const MouseState& mouse, UiManager& ui) {
  painter_.batch_draw(target);
  if (mouse.inside && hotspots_.size() > 0) {
    if (auto text = hotspots_.query(mouse.x, mouse.y)) ui.tooltip(std::move(*text));
  }
}

DotLayer::DotLayer(DataTable data, DotOptions options) : data_(std::move(data)), opt_(std::move(options)) {
  check_rows(data_, opt_.lat, opt_.lon);
}

void DotLayer::invalidate(const Projection& proj) {
  painter_.clear();
  hotspots_.clear();
  const ScreenCoords xy = project_rows(data_, proj, opt_.lat, opt_.lon);
  if (opt_.f_color) {
    painter_.reserve_points(xy.x.size());
    for (std::size_t i = 0; i < xy.x.size(); ++i) {
      painter_.set_color(opt_.f_color(data_.row(i)));
      painter_.point(xy.x[i], xy.y[i], opt_.point_size);
    }
  } else {
    painter_.set_color(opt_.color);
    painter_.points(xy.x, xy.y, opt_.point_size);
  }
  add_row_hotspots(hotspots_, data_, xy, std::max(6.0, static_cast<double>(opt_.point_size)), opt_.f_tooltip);
}

std::optional<BoundingBox> DotLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

HistLayer::HistLayer(DataTable data, HistOptions options)
    : data_(std::move(data)), opt_(std::move(options)), cmap_(opt_.cmap, opt_.alpha) {
  check_rows(data_, opt_.lat, opt_.lon);
  if (!(opt_.binsize >= 1)) throw DataError("binsize must be at least 1 pixel");
}

void HistLayer::invalidate(const Projection& proj) {
  painter_.clear();
  const ScreenCoords xy = project_rows(data_, proj, opt_.lat, opt_.lon);
  grid_ = bin2d(xy.x, xy.y, opt_.binsize, screen_viewport(proj));
  const double vmax = grid_.max_value();
  if (grid_.width == 0 || grid_.height == 0) return;
  auto tex = std::make_shared<Image>(grid_.width, grid_.height);
  for (int cy = 0; cy < grid_.height; ++cy) {
    for (int cx = 0; cx < grid_.width; ++cx) {
      const double v = grid_.at(cx, cy);
      if (v > 0) {
        tex->set_pixel(cx, cy, cmap_.to_color(v, vmax, opt_.colorscale));
      } else if (opt_.show_zero) {
        tex->set_pixel(cx, cy, cmap_.at(0));
      }
    }
  }
  painter_.image(std::move(tex), grid_.origin_sx, grid_.origin_sy, opt_.binsize);
}

std::optional<BoundingBox> HistLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

KdeLayer::KdeLayer(DataTable data, KdeOptions options)
    : data_(std::move(data)), opt_(std::move(options)), cmap_(opt_.cmap, opt_.alpha) {
  check_rows(data_, opt_.lat, opt_.lon);
  // Validates the parameters up front.
  kde_grid({}, {}, opt_.params, {0, 0, 1, 1});
}

void KdeLayer::invalidate(const Projection& proj) {
  painter_.clear();
  const ScreenCoords xy = project_rows(data_, proj, opt_.lat, opt_.lon);
  grid_ = kde_grid(xy.x, xy.y, opt_.params, screen_viewport(proj));
  const double vmax = opt_.params.clip_above ? *opt_.params.clip_above : grid_.max_value();
  if (!(vmax > 0) || grid_.width == 0 || grid_.height == 0) return;
  auto tex = std::make_shared<Image>(grid_.width, grid_.height);
  for (int cy = 0; cy < grid_.height; ++cy) {
    for (int cx = 0; cx < grid_.width; ++cx) {
      const double v = grid_.at(cx, cy);
      if (v > 0) tex->set_pixel(cx, cy, cmap_.to_color(v, vmax, opt_.params.scaling));
    }
  }
  painter_.image(std::move(tex), grid_.origin_sx, grid_.origin_sy, opt_.params.cell_px);
}

std::optional<BoundingBox> KdeLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

MarkersLayer::MarkersLayer(DataTable data, const std::filesystem::path& image_path, MarkerOptions options)
    : data_(std::move(data)),
      image_(std::make_shared<const Image>(read_image(image_path))),
      opt_(std::move(options)) {
  check_rows(data_, opt_.lat, opt_.lon);
  if (!(opt_.scale > 0)) throw DataError("marker scale must be positive");
}

void MarkersLayer::invalidate(const Projection& proj) {
  painter_.clear();
  hotspots_.clear();
  const ScreenCoords xy = project_rows(data_, proj, opt_.lat, opt_.lon);
  painter_.sprites(image_, xy.x, xy.y, opt_.scale);
  if (opt_.f_tooltip) {
    const double w = image_->width() * opt_.scale, h = image_->height() * opt_.scale;
    for (std::size_t i = 0; i < xy.x.size(); ++i) {
      if (!std::isfinite(xy.x[i]) || !std::isfinite(xy.y[i])) continue;
      hotspots_.add({xy.x[i] - w / 2, xy.y[i] - h / 2, w, h}, opt_.f_tooltip(data_.row(i)));
    }
  }
}

std::optional<BoundingBox> MarkersLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

GraphLayer::GraphLayer(DataTable data, GraphSpec spec)
    : data_(std::move(data)), spec_(std::move(spec)), cmap_(spec_.cmap, spec_.alpha) {
  for (const auto* col : {&spec_.src_lat, &spec_.src_lon, &spec_.dest_lat, &spec_.dest_lon}) {
    if (!data_.has_column(*col)) throw DataError("graph: missing column '" + *col + "'");
    if (!data_.is_numeric(*col)) throw DataError("graph: column '" + *col + "' is not numeric");
  }
}

void GraphLayer::invalidate(const Projection& proj) {
  painter_.clear();
  if (data_.nrows() == 0) return;
  const ScreenCoords a = proj.lonlat_to_screen(data_.numeric(spec_.src_lon), data_.numeric(spec_.src_lat));
  const ScreenCoords b = proj.lonlat_to_screen(data_.numeric(spec_.dest_lon), data_.numeric(spec_.dest_lat));
  const std::size_t n = a.x.size();
  std::vector<double> length(n, std::numeric_limits<double>::quiet_NaN());
  double max_len = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::hypot(b.x[i] - a.x[i], b.y[i] - a.y[i]);
    if (std::isfinite(d)) {
      length[i] = d;
      max_len = std::max(max_len, d);
    }
  }
  painter_.reserve_lines(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(length[i])) continue;
    painter_.set_color(max_len > 0 ? cmap_.to_color(length[i], max_len, Scale::Lin) : cmap_.at(0));
    painter_.line(a.x[i], a.y[i], b.x[i], b.y[i], spec_.linewidth);
  }
}

std::optional<BoundingBox> GraphLayer::bbox() const {
  auto src = rows_bbox(data_, spec_.src_lat, spec_.src_lon);
  auto dst = rows_bbox(data_, spec_.dest_lat, spec_.dest_lon);
  if (src && dst) return src->united(*dst);
  return src ? src : dst;
}

TrailLayer::TrailLayer(DataTable data, TrailOptions options) : data_(std::move(data)), opt_(std::move(options)) {
  check_rows(data_, opt_.lat, opt_.lon);
}

void TrailLayer::invalidate(const Projection& proj) { xy_ = project_rows(data_, proj, opt_.lat, opt_.lon); }

void TrailLayer::draw(const Projection&, RenderTarget& target, const MouseState&, UiManager&) {
  const std::size_t n = xy_.x.size();
  if (n == 0) return;
  BatchPainter painter;
  const int trail = std::max(0, opt_.trail);
  for (int k = std::min<int>(trail, static_cast<int>(n) - 1); k >= 1; --k) {
    const std::size_t i = (frame_counter_ + n - static_cast<std::size_t>(k)) % n;
    Rgba c = opt_.color;
    c.a = static_cast<std::uint8_t>(c.a * (trail + 1 - k) / (2 * (trail + 1)));
    painter.set_color(c);
    painter.point(xy_.x[i], xy_.y[i], opt_.point_size / 2);
  }
  painter.set_color(opt_.color);
  painter.point(xy_.x[frame_counter_], xy_.y[frame_counter_], opt_.point_size);
  painter.batch_draw(target);
  frame_counter_ = (frame_counter_ + 1) % n;
}

std::optional<BoundingBox> TrailLayer::bbox() const { return rows_bbox(data_, opt_.lat, opt_.lon); }

}  // namespace terramap
