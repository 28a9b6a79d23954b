#include "terramap/tiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "terramap/error.hpp"

namespace terramap {

namespace {

const char* const kOsmTemplate = "https://tile.openstreetmap.org/{z}/{x}/{y}.png";
const char* const kOsmAttribution = "(c) OpenStreetMap contributors";

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

bool valid_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::filesystem::path presets_path() {
  if (const char* env = std::getenv("TERRAMAP_PROVIDERS"); env && *env) return env;
  return TERRAMAP_DEFAULT_PROVIDERS;
}

std::vector<TileProvider> available_presets() {
  std::vector<TileProvider> out{TileProvider("osm", kOsmTemplate, kOsmAttribution)};
  std::error_code ec;
  const auto path = presets_path();
  if (!std::filesystem::exists(path, ec)) return out;
  for (auto& p : TileProvider::load_presets(path)) {
    auto same = [&](const TileProvider& q) { return q.name() == p.name(); };
    auto it = std::find_if(out.begin(), out.end(), same);
    if (it != out.end()) {
      *it = p;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

TileProvider::TileProvider(std::string name, std::string url_template, std::string attribution)
    : name_(std::move(name)), template_(std::move(url_template)), attribution_(std::move(attribution)) {
  if (!valid_name(name_)) throw TileError("invalid tile provider name '" + name_ + "'");
  for (const char* ph : {"{z}", "{x}", "{y}"}) {
    if (count_of(template_, ph) != 1) {
      throw TileError("tile URL template must contain " + std::string(ph) + " exactly once: " + template_);
    }
  }
}

std::vector<TileProvider> TileProvider::load_presets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TileError("cannot open provider file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw TileError("malformed provider file " + path.string() + ": " + e.what());
  }
  std::vector<TileProvider> out;
  for (const auto& entry : doc.value("providers", nlohmann::json::array())) {
    out.emplace_back(entry.at("name").get<std::string>(), entry.at("url").get<std::string>(),
                     entry.value("attribution", std::string()));
  }
  return out;
}

TileProvider TileProvider::preset(const std::string& name) {
  for (auto& p : available_presets()) {
    if (p.name() == name) return p;
  }
  throw TileError("unknown tile provider '" + name + "'");
}

std::vector<std::string> TileProvider::preset_names() {
  std::vector<std::string> out;
  for (auto& p : available_presets()) out.push_back(p.name());
  return out;
}

TileProvider TileProvider::resolve(const std::string& name_or_template) {
  if (name_or_template.find('{') != std::string::npos) {
    return TileProvider("custom", name_or_template, "");
  }
  return preset(name_or_template);
}

bool TileCoord::valid() const {
  if (z < 0 || z > kMaxZoom) return false;
  const int n = 1 << z;
  return x >= 0 && x < n && y >= 0 && y < n;
}

std::string tile_url(const TileProvider& provider, const TileCoord& coord) {
  std::string url = provider.url_template();
  for (auto [ph, v] : {std::pair{"{z}", coord.z}, std::pair{"{x}", coord.x}, std::pair{"{y}", coord.y}}) {
    url.replace(url.find(ph), 3, std::to_string(v));
  }
  return url;
}

std::vector<TileCoord> tiles_for_view(const ViewState& view) {
  const int n = 1 << view.zoom;
  const double t = kTileSize;
  const int x0 = static_cast<int>(std::floor(view.origin_wx / t)) - 1;
  const int y0 = static_cast<int>(std::floor(view.origin_wy / t)) - 1;
  // Last covered tile is ceil(end / t) - 1; one more for the margin.
  const int x1 = static_cast<int>(std::ceil((view.origin_wx + view.screen_w) / t));
  const int y1 = static_cast<int>(std::ceil((view.origin_wy + view.screen_h) / t));
  std::vector<TileCoord> out;
  for (int y = std::max(y0, 0); y <= std::min(y1, n - 1); ++y) {
    for (int x = std::max(x0, 0); x <= std::min(x1, n - 1); ++x) out.push_back({view.zoom, x, y});
  }
  return out;
}

std::filesystem::path tile_path(const std::filesystem::path& root, const std::string& provider,
                                const TileCoord& coord) {
  return root / provider / std::to_string(coord.z) / std::to_string(coord.x) /
         (std::to_string(coord.y) + ".png");
}

std::filesystem::path default_tile_cache_root() {
  if (const char* env = std::getenv("TERRAMAP_TILE_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "terramap" / "tiles";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "terramap" / "tiles";
  }
  return std::filesystem::temp_directory_path() / "terramap-tiles";
}

TileCache::TileCache(TileCacheOptions options) : options_(std::move(options)) {
  if (!options_.fetcher) options_.fetcher = std::make_shared<HttpFetcher>();
  const int n = std::max(1, options_.workers);
  for (int i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
}

TileCache::~TileCache() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (auto& w : workers_) w.join();
}

TileHandle TileCache::request(const TileProvider& provider, const TileCoord& coord) {
  if (!coord.valid()) throw TileError("invalid tile coordinate");
  Key key{provider.name(), coord};
  {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(key); it != memory_.end()) return {TileState::Ready, it->second};
    if (failed_.count(key)) return {TileState::Failed, nullptr};
    if (pending_.count(key)) return {TileState::Pending, nullptr};
  }
  const auto path = tile_path(options_.root, provider.name(), coord);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      auto image = std::make_shared<const Image>(read_image(path));
      std::lock_guard lock(mutex_);
      memory_[key] = image;
      return {TileState::Ready, image};
    } catch (const Error&) {
      // Unreadable cache entry: fetch it again.
    }
  }
  {
    std::lock_guard lock(mutex_);
    if (!pending_.insert(key).second) return {TileState::Pending, nullptr};
    queue_.push_back({key, tile_url(provider, coord)});
  }
  work_cv_.notify_one();
  return {TileState::Pending, nullptr};
}

bool TileCache::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  return idle_cv_.wait_for(lock, timeout, [this] { return queue_.empty() && active_ == 0; });
}

std::size_t TileCache::fetch_count() const {
  std::lock_guard lock(mutex_);
  return fetches_;
}

void TileCache::worker_loop() {
  for (;;) {
    Job job;
    {
      std::unique_lock lock(mutex_);
      work_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = std::move(queue_.front());
      queue_.pop_front();
      ++active_;
    }
    run_job(job);
    {
      std::lock_guard lock(mutex_);
      --active_;
    }
    idle_cv_.notify_all();
  }
}

void TileCache::run_job(const Job& job) {
  const auto path = tile_path(options_.root, job.key.provider, job.key.coord);
  std::shared_ptr<const Image> image;
  for (int attempt = 0; attempt < options_.max_attempts && !image; ++attempt) {
    if (attempt > 0) {
      std::unique_lock lock(mutex_);
      work_cv_.wait_for(lock, options_.backoff_base * (1 << (attempt - 1)), [this] { return stopping_; });
      if (stopping_) break;
    }
    {
      std::lock_guard lock(mutex_);
      ++fetches_;
    }
    FetchResult res = options_.fetcher->fetch(job.url);
    if (res.status < 200 || res.status >= 300) continue;
    try {
      const auto* bytes = reinterpret_cast<const std::uint8_t*>(res.body.data());
      image = std::make_shared<const Image>(decode_image({bytes, res.body.size()}));
    } catch (const Error&) {
      continue;
    }
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ostringstream tmp_name;
    tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id();
    const auto tmp = path.parent_path() / tmp_name.str();
    {
      std::ofstream out(tmp, std::ios::binary);
      out.write(res.body.data(), static_cast<std::streamsize>(res.body.size()));
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }
  std::lock_guard lock(mutex_);
  pending_.erase(job.key);
  if (image) {
    memory_[job.key] = image;
  } else {
    failed_.insert(job.key);
  }
}

}  // namespace terramap
