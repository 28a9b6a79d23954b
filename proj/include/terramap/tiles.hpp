#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "terramap/image.hpp"
#include "terramap/projection.hpp"

namespace terramap {

class TileProvider {
 public:
  // The template must contain {z}, {x} and {y} exactly once each; `name`
  // is the cache namespace and must be a plain path component.
  TileProvider(std::string name, std::string url_template, std::string attribution);

  const std::string& name() const noexcept { return name_; }
  const std::string& url_template() const noexcept { return template_; }
  const std::string& attribution() const noexcept { return attribution_; }

  // Presets come from a JSON provider file ({"providers": [{name, url,
  // attribution}, ...]}); "osm" is always available.
  static TileProvider preset(const std::string& name);
  static std::vector<TileProvider> load_presets(const std::filesystem::path& path);
  static std::vector<std::string> preset_names();

  // Accepts a preset name or a URL template (a custom provider).
  static TileProvider resolve(const std::string& name_or_template);

 private:
  std::string name_;
  std::string template_;
  std::string attribution_;
};

struct TileCoord {
  int z = 0;
  int x = 0;
  int y = 0;

  bool valid() const;
  friend auto operator<=>(const TileCoord&, const TileCoord&) = default;
};

std::string tile_url(const TileProvider& provider, const TileCoord& coord);

// Tiles covering the viewport plus a one-tile margin, clipped to the grid.
std::vector<TileCoord> tiles_for_view(const ViewState& view);

std::filesystem::path tile_path(const std::filesystem::path& root, const std::string& provider,
                                const TileCoord& coord);

// Cache root: TERRAMAP_TILE_CACHE, else $XDG_CACHE_HOME or ~/.cache, + terramap/tiles.
std::filesystem::path default_tile_cache_root();

struct FetchResult {
  int status = 0;  // HTTP status, 0 for network errors
  std::string body;
  std::string error;
};

class TileFetcher {
 public:
  virtual ~TileFetcher() = default;
  virtual FetchResult fetch(const std::string& url) = 0;
};

// HTTP(S) GET with an identifying User-Agent.
class HttpFetcher : public TileFetcher {
 public:
  explicit HttpFetcher(std::string user_agent = "terramap/1.0 (+https://github.com/terramap)",
                       std::chrono::seconds timeout = std::chrono::seconds(10));
  FetchResult fetch(const std::string& url) override;

 private:
  std::string user_agent_;
  std::chrono::seconds timeout_;
};

enum class TileState { Ready, Pending, Failed };

struct TileHandle {
  TileState state = TileState::Pending;
  std::shared_ptr<const Image> image;
};

struct TileCacheOptions {
  std::filesystem::path root = default_tile_cache_root();
  int workers = 4;
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};
  std::shared_ptr<TileFetcher> fetcher;  // HttpFetcher when null
};

// Memory + disk tile cache with a background fetch pool. request() never
// blocks on the network; tiles are never evicted or expired.
class TileCache {
 public:
  explicit TileCache(TileCacheOptions options = {});
  ~TileCache();
  TileCache(const TileCache&) = delete;
  TileCache& operator=(const TileCache&) = delete;

  TileHandle request(const TileProvider& provider, const TileCoord& coord);

  // Blocks until no fetch is queued or running, or the timeout expires.
  bool wait_idle(std::chrono::milliseconds timeout);

  // Number of fetch attempts issued so far.
  std::size_t fetch_count() const;
  const std::filesystem::path& root() const noexcept { return options_.root; }

 private:
  struct Key {
    std::string provider;
    TileCoord coord;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  struct Job {
    Key key;
    std::string url;
  };

  void worker_loop();
  void run_job(const Job& job);

  TileCacheOptions options_;
  mutable std::mutex mutex_;
  std::condition_variable work_cv_;
  std::condition_variable idle_cv_;
  std::map<Key, std::shared_ptr<const Image>> memory_;
  std::set<Key> pending_;
  std::set<Key> failed_;
  std::deque<Job> queue_;
  std::size_t active_ = 0;
  std::size_t fetches_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace terramap
