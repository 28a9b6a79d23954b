#include "terramap/viewer.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

#include "terramap/error.hpp"

namespace terramap {

ScriptedWindow::ScriptedWindow(int width, int height, std::vector<std::vector<InputEvent>> frames)
    : width_(width), height_(height), frames_(frames.begin(), frames.end()) {}

void ScriptedWindow::poll(std::vector<InputEvent>& events) {
  if (frames_.empty()) {
    events.push_back(InputEvent::close());
    return;
  }
  for (const auto& e : frames_.front()) {
    if (e.type == EventType::Resize) {
      width_ = e.width;
      height_ = e.height;
    }
    events.push_back(e);
  }
  frames_.pop_front();
}

void ScriptedWindow::present(const Image& frame) {
  last_ = frame;
  ++presented_;
}

ViewState zoom_view(const ViewState& view, int steps) {
  const int zoom = std::clamp(view.zoom + steps, kMinZoom, kMaxZoom);
  if (zoom == view.zoom) return view;
  const WorldPoint c = view.center_world();
  const double f = std::ldexp(1.0, zoom - view.zoom);
  ViewState out = view;
  out.zoom = zoom;
  out.origin_wx = c.x * f - view.screen_w / 2.0;
  out.origin_wy = c.y * f - view.screen_h / 2.0;
  return clamp_view(out);
}

ViewState pan_view(const ViewState& view, double dx, double dy) {
  ViewState out = view;
  out.origin_wx -= dx;
  out.origin_wy -= dy;
  return clamp_view(out);
}

ViewState resize_view(const ViewState& view, int width, int height) {
  if (width <= 0 || height <= 0) throw DataError("window size must be positive");
  const WorldPoint c = view.center_world();
  ViewState out = view;
  out.screen_w = width;
  out.screen_h = height;
  out.origin_wx = c.x - width / 2.0;
  out.origin_wy = c.y - height / 2.0;
  return clamp_view(out);
}

Viewer::Viewer(std::vector<std::shared_ptr<Layer>> layers, ViewState view, ViewerOptions options)
    : layers_(std::move(layers)), view_(clamp_view(view)), opt_(std::move(options)),
      invalidations_(layers_.size(), 0) {
  if (opt_.provider && !opt_.tiles) throw TileError("a tile provider needs a tile cache");
  if (opt_.provider) ui_.set_attribution(opt_.provider->attribution());
}

void Viewer::set_view(const ViewState& view) { view_ = clamp_view(view); }

bool Viewer::handle_events(const std::vector<InputEvent>& events) {
  for (const InputEvent& e : events) {
    switch (e.type) {
      case EventType::MouseMove:
        mouse_ = {e.x, e.y, true};
        break;
      case EventType::Drag:
        mouse_ = {e.x, e.y, true};
        view_ = pan_view(view_, e.dx, e.dy);
        break;
      case EventType::Scroll:
        mouse_ = {e.x, e.y, true};
        view_ = zoom_view(view_, e.steps);
        break;
      case EventType::Leave:
        mouse_.inside = false;
        break;
      case EventType::Resize:
        view_ = resize_view(view_, e.width, e.height);
        break;
      case EventType::Close:
        return false;
      case EventType::KeyRelease:
        switch (e.key) {
          case keys::kEscape:
          case 'q':
            return false;
          case '+':
          case '=':
            view_ = zoom_view(view_, 1);
            break;
          case '-':
            view_ = zoom_view(view_, -1);
            break;
          case keys::kLeft:
            view_ = pan_view(view_, view_.screen_w * 0.25, 0);
            break;
          case keys::kRight:
            view_ = pan_view(view_, -view_.screen_w * 0.25, 0);
            break;
          case keys::kUp:
            view_ = pan_view(view_, 0, view_.screen_h * 0.25);
            break;
          case keys::kDown:
            view_ = pan_view(view_, 0, -view_.screen_h * 0.25);
            break;
          case 'p':
            want_screenshot_ = true;
            break;
          default: {
            const Projection proj(view_);
            for (auto& layer : layers_) layer->on_key_release(e.key, proj);
          }
        }
        break;
    }
  }
  return true;
}

void Viewer::draw_tiles(RenderTarget& target) {
  if (!opt_.provider) return;
  BatchPainter painter;
  for (const TileCoord& t : tiles_for_view(view_)) {
    const double x = t.x * static_cast<double>(kTileSize) - view_.origin_wx;
    const double y = t.y * static_cast<double>(kTileSize) - view_.origin_wy;
    const TileHandle h = opt_.tiles->request(*opt_.provider, t);
    if (h.state == TileState::Ready && h.image) {
      painter.image(h.image, x, y, static_cast<double>(kTileSize) / h.image->width());
    } else {
      painter.set_color(opt_.missing_tile);
      const double s = kTileSize;
      painter.triangle({x, y}, {x + s, y}, {x + s, y + s});
      painter.triangle({x, y}, {x + s, y + s}, {x, y + s});
    }
  }
  painter.batch_draw(target);
}

void Viewer::render_frame(RenderTarget& target) {
  if (target.width() != view_.screen_w || target.height() != view_.screen_h) {
    view_ = resize_view(view_, target.width(), target.height());
  }
  const Projection proj(view_);
  if (!valid_for_ || !(*valid_for_ == view_)) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      layers_[i]->invalidate(proj);
      ++invalidations_[i];
    }
    valid_for_ = view_;
  }
  ui_.begin_frame();
  target.clear(opt_.background);
  draw_tiles(target);
  for (auto& layer : layers_) layer->draw(proj, target, mouse_, ui_);
  ui_.draw(target, mouse_);
  last_frame_ = target.read_pixels();
  if (want_screenshot_) {
    want_screenshot_ = false;
    screenshot();
  }
  ++frame_;
}

std::filesystem::path Viewer::screenshot(std::optional<std::filesystem::path> path) {
  if (last_frame_.empty()) throw ImageError("no frame has been rendered yet");
  if (!path) {
    char name[32];
    std::snprintf(name, sizeof name, "terramap_%06zu.png", frame_);
    path = opt_.screenshot_dir / name;
  }
  write_png(last_frame_, *path);
  screenshots_.push_back(*path);
  return *path;
}

void Viewer::run(Window& window) {
  RenderTarget target(window.width(), window.height(), TargetKind::Window);
  const auto period = std::chrono::duration<double>(1.0 / std::max(opt_.target_fps, 1.0));
  std::vector<InputEvent> events;
  for (;;) {
    const auto start = std::chrono::steady_clock::now();
    events.clear();
    window.poll(events);
    if (!handle_events(events)) break;
    if (window.width() != target.width() || window.height() != target.height()) {
      target = RenderTarget(window.width(), window.height(), TargetKind::Window);
    }
    render_frame(target);
    window.present(target.framebuffer());
    if (window.realtime()) std::this_thread::sleep_until(start + period);
  }
}

}  // namespace terramap
