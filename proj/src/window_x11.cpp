#include <stdexcept>

#include "terramap/viewer.hpp"

#ifdef TERRAMAP_HAVE_X11

#include <X11/Xlib.h>
#include <X11/Xutil.h>
#include <X11/keysym.h>

#include <cctype>
#include <cstdlib>
#include <cstring>

namespace terramap {

namespace {

int translate_key(KeySym sym) {
  switch (sym) {
    case XK_Left:
      return keys::kLeft;
    case XK_Right:
      return keys::kRight;
    case XK_Up:
      return keys::kUp;
    case XK_Down:
      return keys::kDown;
    case XK_Escape:
      return keys::kEscape;
    case XK_KP_Add:
      return '+';
    case XK_KP_Subtract:
      return '-';
    default:
      break;
  }
  if (sym >= 0x20 && sym < 0x7f) return std::tolower(static_cast<int>(sym));
  return 0;
}

class X11Window : public Window {
 public:
  X11Window(int width, int height, const std::string& title) : width_(width), height_(height) {
    display_ = XOpenDisplay(nullptr);
    if (!display_) throw std::runtime_error("cannot open X display");
    const int screen = DefaultScreen(display_);
    visual_ = DefaultVisual(display_, screen);
    depth_ = DefaultDepth(display_, screen);
    if (depth_ != 24 && depth_ != 32) {
      XCloseDisplay(display_);
      throw std::runtime_error("unsupported X visual depth");
    }
    window_ = XCreateSimpleWindow(display_, RootWindow(display_, screen), 0, 0, width, height, 0,
                                  BlackPixel(display_, screen), WhitePixel(display_, screen));
    XStoreName(display_, window_, title.c_str());
    XSelectInput(display_, window_,
                 ExposureMask | KeyPressMask | KeyReleaseMask | ButtonPressMask | ButtonReleaseMask |
                     PointerMotionMask | LeaveWindowMask | StructureNotifyMask);
    wm_delete_ = XInternAtom(display_, "WM_DELETE_WINDOW", False);
    XSetWMProtocols(display_, window_, &wm_delete_, 1);
    gc_ = XCreateGC(display_, window_, 0, nullptr);
    XMapWindow(display_, window_);
    XFlush(display_);
  }

  ~X11Window() override {
    if (image_) destroy_image();
    XFreeGC(display_, gc_);
    XDestroyWindow(display_, window_);
    XCloseDisplay(display_);
  }

  int width() const override { return width_; }
  int height() const override { return height_; }

  void poll(std::vector<InputEvent>& events) override {
    while (XPending(display_)) {
      XEvent ev;
      XNextEvent(display_, &ev);
      switch (ev.type) {
        case MotionNotify:
          if (dragging_) {
            events.push_back(InputEvent::drag(ev.xmotion.x, ev.xmotion.y, ev.xmotion.x - last_x_,
                                              ev.xmotion.y - last_y_));
            last_x_ = ev.xmotion.x;
            last_y_ = ev.xmotion.y;
          } else {
            events.push_back(InputEvent::move(ev.xmotion.x, ev.xmotion.y));
          }
          break;
        case ButtonPress:
          if (ev.xbutton.button == Button1) {
            dragging_ = true;
            last_x_ = ev.xbutton.x;
            last_y_ = ev.xbutton.y;
          } else if (ev.xbutton.button == Button4) {
            events.push_back(InputEvent::scroll(ev.xbutton.x, ev.xbutton.y, 1));
          } else if (ev.xbutton.button == Button5) {
            events.push_back(InputEvent::scroll(ev.xbutton.x, ev.xbutton.y, -1));
          }
          break;
        case ButtonRelease:
          if (ev.xbutton.button == Button1) dragging_ = false;
          break;
        case KeyRelease: {
          // Auto-repeat sends release/press pairs; report only the final release.
          if (XEventsQueued(display_, QueuedAfterReading)) {
            XEvent next;
            XPeekEvent(display_, &next);
            if (next.type == KeyPress && next.xkey.time == ev.xkey.time &&
                next.xkey.keycode == ev.xkey.keycode) {
              break;
            }
          }
          const int key = translate_key(XLookupKeysym(&ev.xkey, ev.xkey.state & ShiftMask ? 1 : 0));
          if (key) events.push_back(InputEvent::key_release(key));
          break;
        }
        case LeaveNotify:
          dragging_ = false;
          events.push_back(InputEvent::leave());
          break;
        case ConfigureNotify:
          if (ev.xconfigure.width != width_ || ev.xconfigure.height != height_) {
            width_ = ev.xconfigure.width;
            height_ = ev.xconfigure.height;
            events.push_back(InputEvent::resize(width_, height_));
          }
          break;
        case ClientMessage:
          if (static_cast<Atom>(ev.xclient.data.l[0]) == wm_delete_) events.push_back(InputEvent::close());
          break;
        default:
          break;
      }
    }
  }

  void present(const Image& frame) override {
    if (!image_ || image_->width != frame.width() || image_->height != frame.height()) {
      if (image_) destroy_image();
      char* data = static_cast<char*>(std::malloc(static_cast<std::size_t>(frame.width()) * frame.height() * 4));
      image_ = XCreateImage(display_, visual_, depth_, ZPixmap, 0, data, frame.width(), frame.height(), 32, 0);
    }
    // The default TrueColor visual on little-endian hosts is BGRX.
    auto* dst = reinterpret_cast<std::uint8_t*>(image_->data);
    const auto src = frame.bytes();
    for (std::size_t i = 0; i < src.size(); i += 4) {
      dst[i] = src[i + 2];
      dst[i + 1] = src[i + 1];
      dst[i + 2] = src[i];
      dst[i + 3] = 255;
    }
    XPutImage(display_, window_, gc_, image_, 0, 0, 0, 0, frame.width(), frame.height());
    XFlush(display_);
  }

 private:
  void destroy_image() {
    XDestroyImage(image_);  // frees the pixel buffer too
    image_ = nullptr;
  }

  Display* display_ = nullptr;
  Visual* visual_ = nullptr;
  int depth_ = 24;
  ::Window window_ = 0;
  GC gc_{};
  Atom wm_delete_{};
  XImage* image_ = nullptr;
  int width_, height_;
  bool dragging_ = false;
  int last_x_ = 0, last_y_ = 0;
};

}  // namespace

std::unique_ptr<Window> open_x11_window(int width, int height, const std::string& title) {
  return std::make_unique<X11Window>(width, height, title);
}

}  // namespace terramap

#else

namespace terramap {

std::unique_ptr<Window> open_x11_window(int, int, const std::string&) {
  throw std::runtime_error("terramap was built without X11 support");
}

}  // namespace terramap

#endif
