#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "terramap/hotspots.hpp"
#include "terramap/layers.hpp"
#include "terramap/projection.hpp"
#include "terramap/render.hpp"
#include "terramap/tiles.hpp"

namespace terramap {

enum class EventType {
  MouseMove,  // x, y
  Drag,       // x, y and the motion dx, dy since the previous drag event
  Scroll,     // x, y, steps (positive zooms in)
  KeyRelease, // key
  Leave,      // cursor left the window
  Resize,     // width, height
  Close,
};

struct InputEvent {
  EventType type = EventType::MouseMove;
  double x = 0;
  double y = 0;
  double dx = 0;
  double dy = 0;
  int steps = 0;
  int key = 0;
  int width = 0;
  int height = 0;

  static InputEvent move(double x, double y) { return {EventType::MouseMove, x, y}; }
  static InputEvent drag(double x, double y, double dx, double dy) { return {EventType::Drag, x, y, dx, dy}; }
  static InputEvent scroll(double x, double y, int steps) { return {EventType::Scroll, x, y, 0, 0, steps}; }
  static InputEvent key_release(int key) { return {EventType::KeyRelease, 0, 0, 0, 0, 0, key}; }
  static InputEvent leave() { return {EventType::Leave}; }
  static InputEvent resize(int w, int h) { return {EventType::Resize, 0, 0, 0, 0, 0, 0, w, h}; }
  static InputEvent close() { return {EventType::Close}; }
};

class Window {
 public:
  virtual ~Window() = default;

  virtual int width() const = 0;
  virtual int height() const = 0;
  // Appends the events that arrived since the last call.
  virtual void poll(std::vector<InputEvent>& events) = 0;
  virtual void present(const Image& frame) = 0;
  // Real windows are paced to the target frame rate; scripted ones are not.
  virtual bool realtime() const { return true; }
};

// Replays a fixed event script, one batch per frame. After the last batch
// it reports Close.
class ScriptedWindow : public Window {
 public:
  ScriptedWindow(int width, int height, std::vector<std::vector<InputEvent>> frames);

  int width() const override { return width_; }
  int height() const override { return height_; }
  void poll(std::vector<InputEvent>& events) override;
  void present(const Image& frame) override;
  bool realtime() const override { return false; }

  std::size_t frames_presented() const noexcept { return presented_; }
  const Image& last_frame() const noexcept { return last_; }

 private:
  int width_, height_;
  std::deque<std::vector<InputEvent>> frames_;
  std::size_t presented_ = 0;
  Image last_;
};

// Opens an X11 window. Throws std::runtime_error when no display is
// available or the backend was not built.
std::unique_ptr<Window> open_x11_window(int width, int height, const std::string& title);

// Zoom by `steps` levels keeping the world point under the screen center.
ViewState zoom_view(const ViewState& view, int steps);
// Moves the map with the cursor: the origin shifts by (-dx, -dy).
ViewState pan_view(const ViewState& view, double dx, double dy);
// Keeps the screen center on the same lon/lat.
ViewState resize_view(const ViewState& view, int width, int height);

struct ViewerOptions {
  std::optional<TileProvider> provider;  // no base map when unset
  TileCache* tiles = nullptr;            // required when provider is set
  Rgba background{255, 255, 255, 255};
  Rgba missing_tile{224, 224, 224, 255};
  std::filesystem::path screenshot_dir = ".";
  double target_fps = 60;
};

// Frame loop shared by the window and headless export. Each frame: input,
// invalidate all layers when the view changed, tiles, layers in order, UI.
class Viewer {
 public:
  Viewer(std::vector<std::shared_ptr<Layer>> layers, ViewState view, ViewerOptions options = {});

  // Runs until the window closes or Escape/Q is released.
  void run(Window& window);

  // Applies one batch of input. Returns false when the viewer should quit.
  bool handle_events(const std::vector<InputEvent>& events);
  // Renders one frame into `target`, resizing the view to the target first.
  void render_frame(RenderTarget& target);

  // Writes the last rendered frame as PNG. Without a path the file is named
  // after the frame index inside screenshot_dir.
  std::filesystem::path screenshot(std::optional<std::filesystem::path> path = std::nullopt);

  const ViewState& view() const noexcept { return view_; }
  void set_view(const ViewState& view);
  const MouseState& mouse() const noexcept { return mouse_; }
  UiManager& ui() noexcept { return ui_; }

  std::size_t frame_index() const noexcept { return frame_; }
  // Total invalidate calls issued to each layer, in add order.
  const std::vector<std::size_t>& invalidate_counts() const noexcept { return invalidations_; }
  const std::vector<std::filesystem::path>& screenshots() const noexcept { return screenshots_; }

 private:
  void draw_tiles(RenderTarget& target);

  std::vector<std::shared_ptr<Layer>> layers_;
  ViewState view_;
  ViewerOptions opt_;
  std::optional<ViewState> valid_for_;  // view the layers were last invalidated for
  MouseState mouse_;
  UiManager ui_;
  std::vector<std::size_t> invalidations_;
  std::size_t frame_ = 0;
  bool want_screenshot_ = false;
  Image last_frame_;
  std::vector<std::filesystem::path> screenshots_;
};

}  // namespace terramap
