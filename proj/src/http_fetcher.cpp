#include "httplib.h"
#include "terramap/tiles.hpp"

namespace terramap {

HttpFetcher::HttpFetcher(std::string user_agent, std::chrono::seconds timeout)
    : user_agent_(std::move(user_agent)), timeout_(timeout) {}

FetchResult HttpFetcher::fetch(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return {0, {}, "not an absolute URL: " + url};
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  FetchResult out;
  try {
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    auto res = client.Get(path, {{"User-Agent", user_agent_}});
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = std::move(res->body);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace terramap
